#include "coarselab/cli.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <sstream>

namespace coarselab {

namespace {

[[noreturn]] void schema(const std::string& what) { fail(ErrorKind::Schema, what); }

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) schema(where + ": missing \"" + key + "\"");
  return j[key];
}

Nat nat_of(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) schema(what + " must be a natural number");
  return j.get<Nat>();
}

Mask parse_set(const Universe& u, const json& j) {
  if (!j.is_array()) schema("a set must be a list of labels");
  std::vector<std::string> labels;
  for (const auto& e : j) {
    if (!e.is_string()) schema("set elements must be labels");
    labels.push_back(e.get<std::string>());
  }
  return u.parse(labels);
}

std::vector<Mask> parse_family(const Universe& u, const json& j) {
  if (!j.is_array()) schema("a family must be a list of sets");
  std::vector<Mask> out;
  for (const auto& s : j) out.push_back(parse_set(u, s));
  return out;
}

std::vector<LineSet> parse_line_family(const json& j) {
  if (!j.is_array()) schema("a family must be a list of line sets");
  std::vector<LineSet> out;
  for (const auto& s : j) out.push_back(LineSet::from_json(s));
  return out;
}

FamilyCode code_of_masks(const std::vector<Mask>& f) {
  FamilyCode c = 0;
  for (Mask m : f) c |= code_bit(m);
  return c;
}

std::string line_family_text(const std::vector<LineSet>& f) {
  std::string out = "{";
  for (std::size_t i = 0; i < f.size(); ++i) out += (i ? ", " : "") + f[i].describe();
  return out + "}";
}

ScaleBudget budget_of(const json& src, const Options& o, ScaleBudget b = {}) {
  if (src.is_object() && src.contains("budget")) {
    const json& j = src["budget"];
    if (j.contains("window")) b.window = nat_of(j["window"], "budget.window");
    if (j.contains("max_scale")) b.max_scale = nat_of(j["max_scale"], "budget.max_scale");
  }
  if (o.window) b.window = *o.window;
  if (o.scale) b.max_scale = *o.scale;
  return b;
}

const char* verdict_word(const TriVerdict& v) {
  return v.is_yes() ? "yes" : v.is_no() ? "no" : "unknown";
}

std::string verdict_line(const std::string& label, const TriVerdict& v) {
  std::string s = label + ": " + verdict_word(v);
  if (!v.note.empty()) s += " (" + v.note + ")";
  if (v.is_no() && v.witness.is_object() && !v.witness.empty()) s += " " + v.witness.dump();
  return s;
}

/// A failure beats Unknown, which beats a pass.
int worst(const std::vector<int>& codes) {
  int out = 0;
  for (int c : codes) {
    if (c == 1) return 1;
    if (c != 0) out = c;
  }
  return out;
}

void axiom_lines(CommandResult& r, const std::string& prefix, const AxiomReport& rep) {
  for (const auto& v : rep.verdicts) {
    std::string s = prefix + " " + v.axiom + ": " + to_string(v.status);
    if (!v.witness.empty()) s += " - " + v.witness;
    r.lines.push_back(s);
  }
}

// ---------------------------------------------------------------------------
// Sampled checks on the line backends.

LineSet sample_exact(std::mt19937& rng) {
  std::uniform_int_distribution<Nat> small(0, 40);
  const Nat steps[] = {1, 2, 3, 4, 6};
  std::vector<Nat> fin;
  for (int i = std::uniform_int_distribution<int>(1, 4)(rng); i > 0; --i) fin.push_back(small(rng));
  if (rng() % 3 == 0) return LineSet::finite(fin);
  std::vector<Progression> progs;
  for (int i = std::uniform_int_distribution<int>(1, 2)(rng); i > 0; --i)
    progs.push_back({small(rng), steps[std::uniform_int_distribution<int>(0, 4)(rng)]});
  return LineSet::periodic(fin, progs);
}

std::vector<LineSet> sample_family(std::mt19937& rng) {
  std::vector<LineSet> f;
  for (int i = std::uniform_int_distribution<int>(1, 3)(rng); i > 0; --i) f.push_back(sample_exact(rng));
  return f;
}

std::vector<LineSet> vee(const std::vector<LineSet>& x, const std::vector<LineSet>& y) {
  std::vector<LineSet> out;
  for (const auto& p : x)
    for (const auto& q : y) out.push_back(union_exact(p, q));
  return out;
}

struct Tally {
  std::size_t checked = 0, failed = 0, unknown = 0;
  json first_failure;

  // `expect` is the required verdict; Unknown is counted apart.
  void add(const TriVerdict& v, bool expect, const json& witness) {
    ++checked;
    if (v.is_unknown()) {
      ++unknown;
      return;
    }
    if (v.is_yes() != expect && failed++ == 0) first_failure = witness;
  }
  json to_json() const {
    json j = {{"checked", checked}, {"failed", failed}, {"unknown", unknown}};
    if (failed) j["witness"] = first_failure;
    return j;
  }
};

json fam_json(const std::vector<LineSet>& f) {
  json a = json::array();
  for (const auto& s : f) a.push_back(s.to_json());
  return a;
}

CommandResult check_line(const Document& d, const Options& o) {
  CommandResult r;
  std::mt19937 rng(o.seed);
  const LsrBackend& b = d.backend;
  std::map<std::string, Tally> t;
  for (std::size_t i = 0; i < o.cap; ++i) {
    auto x = sample_family(rng), y = sample_family(rng);
    t["lsr i"].add(member(b, std::vector<LineSet>{x[0]}), true, {{"family", fam_json({x[0]})}});
    TriVerdict mx = member(b, x), my = member(b, y);
    if (mx.is_yes() && x.size() > 1) {
      std::vector<LineSet> sub(x.begin() + 1, x.end());
      t["lsr ii"].add(member(b, sub), true, {{"member", fam_json(x)}, {"subfamily", fam_json(sub)}});
    }
    // iii: a member sharing a set with x
    std::vector<LineSet> z{x[0], sample_exact(rng)};
    if (mx.is_yes() && member(b, z).is_yes()) {
      auto u = x;
      u.push_back(z[1]);
      t["lsr iii"].add(member(b, u), true, {{"a", fam_json(x)}, {"b", fam_json(z)}});
    }
    if (mx.is_yes() && my.is_yes())
      t["lsr iv"].add(member(b, vee(x, y)), true, {{"a", fam_json(x)}, {"b", fam_json(y)}});

    TriVerdict nx = nearness_of(b, x), ny = nearness_of(b, y);
    IntersectionResult in = intersects(x, b.budget().window);
    if (in.outcome == Outcome::Yes) t["near i"].add(nx, true, {{"family", fam_json(x)}});
    if (nx.is_yes()) {
      std::vector<LineSet> bigger;
      for (const auto& s : x) bigger.push_back(union_exact(s, sample_exact(rng)));
      t["near ii"].add(nearness_of(b, bigger), true, {{"near", fam_json(x)}, {"coarser", fam_json(bigger)}});
    }
    auto withempty = x;
    withempty.push_back(LineSet::finite({}));
    t["near iii"].add(nearness_of(b, withempty), false, {{"family", fam_json(withempty)}});
    if (nx.is_no() && ny.is_no())
      t["near iv"].add(nearness_of(b, vee(x, y)), false, {{"a", fam_json(x)}, {"b", fam_json(y)}});
  }
  std::vector<int> codes;
  json summary = json::object();
  for (const auto& [name, tally] : t) {
    r.lines.push_back(name + ": " + std::to_string(tally.checked) + " sampled, " + std::to_string(tally.failed) +
                      " failed, " + std::to_string(tally.unknown) + " unknown");
    summary[name] = tally.to_json();
    codes.push_back(tally.failed ? 1 : tally.unknown ? 4 : 0);
  }
  r.report = {{"command", "check"},
              {"backend", b.name()},
              {"seed", o.seed},
              {"samples", o.cap},
              {"budget", {{"window", b.budget().window}, {"max_scale", b.budget().max_scale}}},
              {"sampled_axioms", summary}};
  r.exit_code = worst(codes);
  r.lines.insert(r.lines.begin(), "backend: " + b.name() + ", " + std::to_string(o.cap) + " sampled families, seed " +
                                      std::to_string(o.seed));
  return r;
}

CommandResult check_explicit(const Document& d) {
  CommandResult r;
  const LsrBackend& b = d.backend;
  const ExplicitLsr& c = b.lsr();
  const Universe& u = c.universe();
  r.lines.push_back("backend: " + b.name() + " on " + u.format(u.full()));
  AxiomReport lsr = check_lsr_axioms(c);
  axiom_lines(r, "LS.R axiom", lsr);
  r.report = {{"command", "check"}, {"backend", b.name()}, {"lsr_axioms", lsr.to_json()}};
  bool ok = lsr.passed();

  if (b.kind() == LsrBackend::Kind::PartitionCoarse) {
    AxiomReport nr = check_nearness_axioms(induced_nearness(b));
    axiom_lines(r, "nearness axiom", nr);
    r.report["nearness_axioms"] = nr.to_json();
    ok = ok && nr.passed();
  }
  json props = json::object();
  if (lsr.passed()) {
    auto w = ls_regularity_witness(c);
    std::string s = std::string("LS-regular: ") + (w ? "false" : "true");
    props["ls_regular"] = !w;
    if (w) {
      s += " - member " + format_code(w->family, u) + ", split A1 = " + u.format(w->a1) + ", A2 = " + u.format(w->a2);
      props["ls_regular_witness"] = {
          {"family", format_code(w->family, u)}, {"a1", u.format(w->a1)}, {"a2", u.format(w->a2)}};
    }
    r.lines.push_back(s);
    props["a_lsr"] = is_a_lsr(c);
    r.lines.push_back(std::string("A-LS.R: ") + (is_a_lsr(c) ? "true" : "false"));
    TriVerdict conn = is_connected(b);
    props["connected"] = conn.to_json();
    r.lines.push_back(verdict_line("connected", conn));
    LambdaResult lam = lambda_of(c);
    if (lam.asr) {
      r.lines.push_back("lambda: defined");
      props["lambda"] = "defined";
    } else {
      r.lines.push_back("lambda: undefined - " + lam.failure);
      props["lambda"] = {{"failure", lam.failure}, {"witness", lam.witness}};
    }
  }
  r.report["properties"] = props;
  r.report["passed"] = ok;
  r.exit_code = ok ? 0 : 1;
  return r;
}

// ---------------------------------------------------------------------------

bool predicate_hit(const std::string& target, const ExplicitLsr& c, json& witness) {
  const Universe& u = c.universe();
  if (!check_lsr_axioms(c).passed()) return false;
  if (target == "non-ls-regular") {
    auto w = ls_regularity_witness(c);
    if (w) witness = {{"family", format_code(w->family, u)}, {"a1", u.format(w->a1)}, {"a2", u.format(w->a2)}};
    return w.has_value();
  }
  if (target == "non-a-lsr") {
    auto w = two_determined_witness(c);
    if (w) witness = {{"pairwise_member_family", format_code(*w, u)}};
    return w.has_value();
  }
  if (target == "nearness-iv") {
    AxiomReport rep = check_nearness_axioms(ExplicitNearness::induced(c));
    if (rep.passed("iv")) return false;
    witness = rep.at("iv").evidence;
    witness["text"] = rep.at("iv").witness;
    return true;
  }
  if (target == "lambda-undefined") {
    LambdaResult l = lambda_of(c);
    if (l.asr) return false;
    witness = {{"failure", l.failure}, {"witness", l.witness}};
    return true;
  }
  schema("unknown mining target '" + target + "'");
}

std::size_t member_count(const ExplicitLsr& c) { return c.members().count(); }

}  // namespace

// ---------------------------------------------------------------------------

Document Document::parse(const json& j) {
  if (!j.is_object()) schema("document must be a JSON object");
  if (nat_of(need(j, "coarselab", "document"), "coarselab version") != kDocumentVersion)
    schema("unsupported document version");
  Document d;
  d.source = j;
  const json& space = need(j, "space", "document");
  const json& lsr = need(j, "lsr", "document");
  const std::string kind = need(lsr, "kind", "lsr").get<std::string>();
  const bool nat_line = space.is_string() && space == "nat-line";
  if (kind == "metric-line" || kind == "topo-trace") {
    if (!nat_line) schema("line structures need \"space\": \"nat-line\"");
    const ScaleBudget bud = budget_of(j, {});
    d.backend = kind == "metric-line" ? LsrBackend::metric_line(bud) : LsrBackend::topo_trace(bud);
  } else {
    if (nat_line) schema("explicit structures need a finite universe");
    std::vector<std::string> labels;
    for (const auto& e : need(space, "universe", "space")) {
      if (!e.is_string()) schema("universe labels must be strings");
      labels.push_back(e.get<std::string>());
    }
    if (labels.size() > kMaxExplicitWidth) fail(ErrorKind::CapExceeded, "explicit universes hold at most 4 points");
    Universe u(labels);
    if (kind == "explicit") {
      std::vector<Family> gens;
      for (const auto& f : need(lsr, "members", "lsr")) gens.emplace_back(u.size(), parse_family(u, f));
      const bool generate = lsr.value("generate", false);
      d.backend = LsrBackend::explicit_lsr(generate ? generate_lsr(u, gens)
                                                    : ExplicitLsr::from_generators(u, gens, false));
    } else if (kind == "partition") {
      std::vector<Mask> blocks = parse_family(u, need(lsr, "blocks", "lsr"));
      d.backend = LsrBackend::partition(ExplicitCoarse::from_partition(u, blocks));
    } else {
      schema("unknown lsr kind '" + kind + "'");
    }
  }
  d.nearness = j.value("nearness", std::string("induced"));
  if (d.nearness != "induced" && d.nearness != "topological") schema("nearness must be induced or topological");
  if (j.contains("covers")) {
    if (!j["covers"].is_array()) schema("covers must be a list");
    for (const auto& c : j["covers"]) d.covers.push_back(c);
  }
  if (j.contains("windows")) {
    if (!j["windows"].is_array()) schema("windows must be a list");
    for (const auto& w : j["windows"]) d.windows.push_back(nat_of(w, "window"));
  }
  if (j.contains("queries")) {
    if (!j["queries"].is_object()) schema("queries must be an object");
    d.queries = j["queries"];
  }
  if (j.contains("map")) d.map = j["map"];
  return d;
}

std::string CommandResult::render(bool as_json) const {
  if (as_json) {
    nlohmann::json sorted = nlohmann::json::parse(report.dump());
    sorted["version"] = kVersion;
    sorted["exit_code"] = exit_code;
    return sorted.dump(2) + "\n";
  }
  std::ostringstream os;
  os << kVersion << "\n";
  for (const auto& l : lines) os << l << "\n";
  return os.str();
}

int exit_code_of(const TriVerdict& v) { return v.is_yes() ? 0 : v.is_no() ? 1 : 4; }

int exit_code_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Precondition: return 1;
    case ErrorKind::CapExceeded: return 3;
    case ErrorKind::Schema:
    case ErrorKind::UniverseMismatch: return 2;
  }
  return 2;
}

CommandResult cmd_check(const Document& d0, const Options& o) {
  Document d = d0;
  if (d.line()) {
    d.backend = d.backend.with_budget(budget_of(d.source, o));
    return check_line(d, o);
  }
  return check_explicit(d);
}

CommandResult cmd_asdim(const Document& d, const Options& o) {
  CommandResult r;
  r.report = {{"command", "asdim"}, {"backend", d.backend.name()}};
  if (!d.line()) {
    AsdimResult a = asdim_explicit(d.backend);
    r.lines.push_back("asdim = " + std::to_string(a.asdim) + " (" + std::to_string(a.ub_covers) +
                      " uniformly bounded covers, " + std::to_string(a.certificates.size()) +
                      " maximal covers certified)");
    r.report["asdim"] = a.to_json(d.backend.universe());
    json covers = json::array();
    for (const auto& cj : d.covers) {
      const auto cover = parse_family(d.backend.universe(), cj);
      TriVerdict ub = is_uniformly_bounded(d.backend, cover);
      const std::size_t m = multiplicity(cover, d.backend.universe().size());
      r.lines.push_back(verdict_line("cover " + cj.dump() + " uniformly bounded", ub) +
                        ", multiplicity " + std::to_string(m));
      covers.push_back({{"cover", cj}, {"uniformly_bounded", ub.to_json()}, {"multiplicity", m}});
    }
    if (!d.covers.empty()) r.report["covers"] = covers;
    r.exit_code = 0;
    return r;
  }
  const LsrBackend b = d.backend.with_budget(budget_of(d.source, o));
  json covers = json::array();
  for (const auto& cj : d.covers) {
    IntervalRule rule = IntervalRule::from_json(cj);
    TriVerdict ub = is_uniformly_bounded(b, rule);
    json row = {{"rule", rule.to_json()}, {"uniformly_bounded", ub.to_json()}};
    r.lines.push_back(verdict_line("cover " + rule.name + " uniformly bounded", ub));
    covers.push_back(row);
  }
  if (!d.covers.empty()) r.report["covers"] = covers;
  if (b.kind() == LsrBackend::Kind::TopoTrace) {
    std::vector<Nat> windows = d.windows;
    if (windows.empty()) windows = {16, 32, 64, 128, 256, 512};
    TopoLineReport rep = asdim_topo_line_report(windows);
    for (const auto& w : rep.windows)
      r.lines.push_back("N = " + std::to_string(w.n) + ": " + std::to_string(w.intervals) +
                        " intervals, multiplicity " + std::to_string(w.multiplicity) +
                        (w.refines ? ", refines" : ", does not refine") +
                        (w.uniformly_bounded ? ", uniformly bounded" : ", not uniformly bounded") +
                        (w.chain_forces_window ? ", multiplicity 1 forces [1,N]" : ""));
    r.lines.push_back(rep.conclusion);
    r.report["report"] = rep.to_json();
    r.exit_code = rep.certified ? 0 : 1;
    return r;
  }
  r.lines.push_back("asdim: no certificate procedure for " + b.name());
  r.report["asdim"] = "unknown";
  r.exit_code = 4;
  return r;
}

CommandResult cmd_near(const Document& d, const Options& o) {
  CommandResult r;
  const json& qs = need(d.queries, "near", "queries");
  if (!qs.is_array()) schema("queries.near must be a list of families");
  const LsrBackend b = d.line() ? d.backend.with_budget(budget_of(d.source, o)) : d.backend;
  std::vector<int> codes;
  json rows = json::array();
  for (const auto& q : qs) {
    TriVerdict v;
    std::string label;
    if (d.line()) {
      auto fam = parse_line_family(q);
      label = line_family_text(fam);
      v = nearness_of(b, fam);
    } else {
      auto fam = parse_family(b.universe(), q);
      label = format_code(code_of_masks(fam), b.universe());
      if (d.nearness == "topological") {
        const bool near = ExplicitNearness::topological(b.universe()).near(code_of_masks(fam));
        v = TriVerdict::of(near, near ? "closures meet" : "closures do not meet");
      } else {
        v = nearness_of(b, fam);
      }
    }
    r.lines.push_back(verdict_line(label + " near", v));
    rows.push_back({{"family", q}, {"verdict", v.to_json()}});
    codes.push_back(exit_code_of(v));
  }
  r.report = {{"command", "near"}, {"backend", b.name()}, {"nearness", d.nearness}, {"queries", rows}};
  r.exit_code = worst(codes);
  return r;
}

CommandResult cmd_bunch(const Document& d, const Options& o) {
  CommandResult r;
  const json& q = need(d.queries, "bunch", "queries");
  r.report = {{"command", "bunch"}, {"backend", d.backend.name()}};
  if (d.line()) {
    if (d.backend.kind() != LsrBackend::Kind::MetricLine) schema("bunch obstructions run on the metric line");
    ObstructionBudget ob;
    const bool declared = d.source.contains("budget");
    if (declared || o.window || o.scale) {
      ScaleBudget sb = budget_of(d.source, o, {ob.window, ob.max_scale});
      ob = {sb.window, sb.max_scale};
    }
    auto fam = parse_line_family(q);
    ObstructionResult res = bunch_obstruction(fam, ob);
    if (!res.built()) {
      r.lines.push_back("rejected: " + res.rejection);
      r.report["rejection"] = res.rejection;
      r.report["witness"] = res.witness;
      r.exit_code = 1;
      return r;
    }
    TriVerdict val = validate_obstruction(*res.obstruction);
    const auto& ob2 = *res.obstruction;
    r.lines.push_back("family " + line_family_text(fam) + ": no bunch contains it");
    r.lines.push_back("L = " + ob2.l().describe() + ", L1 = " + ob2.l1.describe() + ", L2 = " + ob2.l2.describe());
    r.lines.push_back("X1 = " + ob2.x1.describe() + ", X2 = " + ob2.x2.describe());
    r.lines.push_back("scale checks k <= " + std::to_string(ob2.budget.max_scale) + " on window " +
                      std::to_string(ob2.budget.window) + ": " + (ob2.ok ? "pass" : "fail"));
    r.lines.push_back(verdict_line("certificate re-validated", val));
    r.report["certificate"] = ob2.to_json();
    r.report["validation"] = val.to_json();
    r.exit_code = exit_code_of(val);
    return r;
  }
  const Universe& u = d.backend.universe();
  const FamilyCode a = code_of_masks(parse_family(u, q));
  const ExplicitNearness n =
      d.nearness == "topological" ? ExplicitNearness::topological(u) : induced_nearness(d.backend);
  r.report["family"] = format_code(a, u);
  if (!n.near(a)) {
    r.lines.push_back("family " + format_code(a, u) + " is not near; no bunch can contain it");
    r.report["near"] = false;
    r.exit_code = 1;
    return r;
  }
  BunchSearch s = bunch_exists_explicit(a, n);
  r.report["search"] = s.to_json(u);
  if (s.found)
    r.lines.push_back("bunch containing " + format_code(a, u) + ": " + format_code(s.bunch, u));
  else
    r.lines.push_back("no bunch contains " + format_code(a, u) + " (" + std::to_string(s.bunches) +
                      " bunches inspected)");
  r.exit_code = s.found ? 0 : 1;
  return r;
}

CommandResult cmd_map(const Document& d, const Options& o) {
  CommandResult r;
  if (!d.map.is_object()) schema("document has no map section");
  auto sub = [&](const char* key) {
    json j = need(d.map, key, "map");
    if (!j.contains("coarselab")) j["coarselab"] = kDocumentVersion;
    Document s = Document::parse(j);
    if (s.line()) s.backend = s.backend.with_budget(budget_of(j, o));
    return s;
  };
  const Document x = sub("x"), y = sub("y");
  if (x.line() != y.line()) fail(ErrorKind::UniverseMismatch, "map between a line and a finite space");
  const json& fj = need(d.map, "f", "map");
  const bool has_g = d.map.contains("g");
  r.report = {{"command", "map"}, {"x", x.backend.name()}, {"y", y.backend.name()}};
  TriVerdict v;
  if (x.line()) {
    LineMap f = LineMap::from_json(fj);
    if (has_g) {
      LineMap g = LineMap::from_json(d.map["g"]);
      EquivalenceReport rep = ls_equivalence_report(f, g, x.backend, y.backend);
      v = rep.verdict();
      r.report["equivalence"] = rep.to_json();
      r.lines.push_back(verdict_line("f = " + f.describe() + " is an LS.R map", rep.f_map));
      r.lines.push_back(verdict_line("g = " + g.describe() + " is an LS.R map", rep.g_map));
      r.lines.push_back(verdict_line("g f and f g stay close", rep.definition));
    } else {
      v = is_lsr_map(f, x.backend, y.backend);
      r.lines.push_back(verdict_line("f = " + f.describe() + " is an LS.R map", v));
    }
  } else {
    const Universe& xu = x.backend.universe();
    const Universe& yu = y.backend.universe();
    ExplicitMap f = ExplicitMap::from_json(fj, xu, yu);
    if (has_g) {
      ExplicitMap g = ExplicitMap::from_json(d.map["g"], yu, xu);
      EquivalenceReport rep = ls_equivalence_report(f, g, x.backend.lsr(), y.backend.lsr());
      v = rep.verdict();
      r.report["equivalence"] = rep.to_json();
      r.lines.push_back(verdict_line("f is an LS.R map", rep.f_map));
      r.lines.push_back(verdict_line("g is an LS.R map", rep.g_map));
      r.lines.push_back(verdict_line("equivalence condition", rep.definition));
      r.lines.push_back(verdict_line("member form", rep.lemma_ii));
    } else {
      v = is_lsr_map(f, x.backend, y.backend);
      r.lines.push_back(verdict_line("f is an LS.R map", v));
    }
  }
  r.report["verdict"] = v.to_json();
  r.lines.push_back(std::string("verdict: ") + verdict_word(v));
  r.exit_code = exit_code_of(v);
  return r;
}

CommandResult cmd_mine(const Options& o) {
  require(o.max_size >= 1, ErrorKind::Schema, "--max-size must be at least 1");
  require(o.max_size <= kMaxExplicitWidth, ErrorKind::CapExceeded, "mining runs on at most 4 points");
  CommandResult r;
  r.report = {{"command", "mine"}, {"target", o.target}, {"max_size", o.max_size}, {"seed", o.seed}};
  std::size_t inspected = 0;
  auto report_hit = [&](const ExplicitLsr& c, const json& witness, const char* how) {
    r.lines.push_back("found (" + std::string(how) + "): " + std::to_string(c.width()) + " points, " +
                      std::to_string(member_count(c)) + " member families");
    r.lines.push_back("instance: " + c.describe());
    r.lines.push_back("witness: " + witness.dump());
    r.report["found"] = true;
    r.report["width"] = c.width();
    r.report["witness"] = witness;
    r.report["document"] = lsr_document(c);
    r.report["inspected"] = inspected;
    r.exit_code = 0;
  };
  for (std::size_t w = 1; w <= std::min<std::size_t>(o.max_size, 3); ++w) {
    auto all = enumerate_lsrs(w);
    std::stable_sort(all.begin(), all.end(),
                     [](const ExplicitLsr& p, const ExplicitLsr& q) { return member_count(p) < member_count(q); });
    for (const auto& c : all) {
      ++inspected;
      json witness;
      if (predicate_hit(o.target, c, witness)) {
        report_hit(c, witness, "exhaustive");
        return r;
      }
    }
  }
  if (o.max_size == 4) {
    std::mt19937 rng(o.seed);
    const Universe u = Universe::letters(4);
    std::uniform_int_distribution<Mask> pick(0, 15);
    for (std::size_t i = 0; i < o.cap; ++i) {
      std::vector<Family> gens;
      for (int g = std::uniform_int_distribution<int>(1, 3)(rng); g > 0; --g) {
        std::vector<Mask> ms;
        for (int k = std::uniform_int_distribution<int>(1, 3)(rng); k > 0; --k) ms.push_back(pick(rng));
        gens.emplace_back(4, ms);
      }
      ExplicitLsr c = generate_lsr(u, gens);
      ++inspected;
      json witness;
      if (predicate_hit(o.target, c, witness)) {
        report_hit(c, witness, "sampled");
        return r;
      }
    }
  }
  r.lines.push_back("no instance found (" + std::to_string(inspected) + " inspected)");
  r.report["found"] = false;
  r.report["inspected"] = inspected;
  r.exit_code = 1;
  return r;
}

CommandResult run_command(const std::string& name, const json& doc, const Options& o) {
  try {
    if (name == "mine") return cmd_mine(o);
    const Document d = Document::parse(doc);
    if (name == "check") return cmd_check(d, o);
    if (name == "asdim") return cmd_asdim(d, o);
    if (name == "near") return cmd_near(d, o);
    if (name == "bunch") return cmd_bunch(d, o);
    if (name == "map") return cmd_map(d, o);
    schema("unknown command '" + name + "'");
  } catch (const Error& e) {
    CommandResult r;
    r.exit_code = exit_code_of(e.kind());
    r.lines.push_back(std::string("error: ") + e.what());
    r.report = {{"command", name}, {"error", e.what()}};
    return r;
  } catch (const json::exception& e) {
    CommandResult r;
    r.exit_code = 2;
    r.lines.push_back(std::string("error: malformed document: ") + e.what());
    r.report = {{"command", name}, {"error", e.what()}};
    return r;
  }
}

json lsr_document(const ExplicitLsr& c) {
  const Universe& u = c.universe();
  json members = json::array();
  for (FamilyCode m : c.maximal()) {
    json fam = json::array();
    for_each_bit(m, [&](unsigned s) {
      json set = json::array();
      for_each_bit(Mask(s), [&](unsigned x) { set.push_back(u.label(x)); });
      fam.push_back(set);
    });
    members.push_back(fam);
  }
  return {{"coarselab", kDocumentVersion},
          {"space", {{"universe", u.labels()}}},
          {"lsr", {{"kind", "explicit"}, {"members", members}}}};
}

std::vector<ExplicitLsr> enumerate_lsrs(std::size_t width) {
  require(width >= 1 && width <= 3, ErrorKind::CapExceeded, "LS.R enumeration runs on 1 to 3 points");
  const Universe u = Universe::letters(width);
  std::vector<ExplicitLsr> seen{ExplicitLsr::from_generators(u, std::vector<Family>{}, true)};
  std::deque<std::size_t> todo{0};
  const std::uint64_t nfam = std::uint64_t{1} << (std::size_t{1} << width);
  auto masks = [](FamilyCode f) {
    std::vector<Mask> out;
    for_each_bit(f, [&](unsigned m) { out.push_back(Mask(m)); });
    return out;
  };
  while (!todo.empty()) {
    const ExplicitLsr cur = seen[todo.front()];
    todo.pop_front();
    for (std::uint64_t f = 1; f < nfam; ++f) {
      if (cur.member(static_cast<FamilyCode>(f))) continue;
      std::vector<Family> gens;
      for (FamilyCode m : cur.maximal()) gens.emplace_back(width, masks(m));
      gens.emplace_back(width, masks(static_cast<FamilyCode>(f)));
      auto next = generate_lsr(u, gens);
      if (std::find(seen.begin(), seen.end(), next) == seen.end()) {
        seen.push_back(std::move(next));
        todo.push_back(seen.size() - 1);
      }
    }
  }
  return seen;
}

}  // namespace coarselab
