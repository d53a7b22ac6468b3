#include "coarselab/maps.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>

namespace coarselab {

ExplicitMap::ExplicitMap(std::size_t dom, std::size_t cod, std::vector<unsigned> table)
    : dom_(dom), cod_(cod), table_(std::move(table)) {
  require(table_.size() == dom_, ErrorKind::Schema, "map table must list one image per domain point");
  require(dom_ <= kMaxExplicitWidth && cod_ <= kMaxExplicitWidth, ErrorKind::CapExceeded,
          "explicit maps need universes of at most 4 points");
  for (unsigned y : table_) require(y < cod_, ErrorKind::Schema, "map image outside the codomain");
  require(cod_ > 0 || dom_ == 0, ErrorKind::Schema, "no map from a nonempty set to the empty set");
}

ExplicitMap ExplicitMap::identity(std::size_t n) {
  std::vector<unsigned> t(n);
  std::iota(t.begin(), t.end(), 0u);
  return ExplicitMap(n, n, std::move(t));
}

ExplicitMap ExplicitMap::constant(std::size_t dom, std::size_t cod, unsigned y) {
  return ExplicitMap(dom, cod, std::vector<unsigned>(dom, y));
}

Mask ExplicitMap::image(Mask a) const {
  Mask out = 0;
  for_each_bit(a, [&](unsigned x) { out |= Mask{1} << table_.at(x); });
  return out;
}

Mask ExplicitMap::preimage(Mask b) const {
  Mask out = 0;
  for (unsigned x = 0; x < dom_; ++x)
    if ((b >> table_[x]) & 1u) out |= Mask{1} << x;
  return out;
}

FamilyCode ExplicitMap::image_family(FamilyCode f) const {
  FamilyCode out = 0;
  for_each_bit(f, [&](unsigned m) { out |= code_bit(image(static_cast<Mask>(m))); });
  return out;
}

ExplicitMap ExplicitMap::from_json(const json& j, const Universe& dom, const Universe& cod) {
  if (!j.is_object() || !j.contains("table")) fail(ErrorKind::Schema, "map: expected an object with \"table\"");
  const json& t = j["table"];
  std::vector<unsigned> table(dom.size());
  if (t.is_array()) {
    if (t.size() != dom.size()) fail(ErrorKind::Schema, "map table length differs from the domain size");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i].is_number_integer() && t[i].get<long long>() >= 0) table[i] = t[i].get<unsigned>();
      else if (t[i].is_string()) table[i] = static_cast<unsigned>(cod.index_of(t[i].get<std::string>()));
      else fail(ErrorKind::Schema, "map table entries must be indices or labels");
    }
  } else if (t.is_object()) {
    std::vector<bool> seen(dom.size(), false);
    for (auto& [k, v] : t.items()) {
      if (!v.is_string()) fail(ErrorKind::Schema, "map table values must be labels");
      const std::size_t x = dom.index_of(k);
      table[x] = static_cast<unsigned>(cod.index_of(v.get<std::string>()));
      seen[x] = true;
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }))
      fail(ErrorKind::Schema, "map table must be total on the domain");
  } else {
    fail(ErrorKind::Schema, "map table must be an array or an object");
  }
  return ExplicitMap(dom.size(), cod.size(), std::move(table));
}

json ExplicitMap::to_json(const Universe& dom, const Universe& cod) const {
  json t = json::object();
  for (unsigned x = 0; x < dom_; ++x) t[dom.label(x)] = cod.label(table_[x]);
  return {{"table", std::move(t)}};
}

ExplicitMap compose(const ExplicitMap& g, const ExplicitMap& f) {
  require(f.codomain_size() == g.domain_size(), ErrorKind::UniverseMismatch, "composition: universes differ");
  std::vector<unsigned> t(f.domain_size());
  for (unsigned x = 0; x < t.size(); ++x) t[x] = g(f(x));
  return ExplicitMap(f.domain_size(), g.codomain_size(), std::move(t));
}

// ---------------------------------------------------------------------------

LineMap LineMap::floor_div(Nat d) {
  require(d >= 1, ErrorKind::Schema, "floor division needs d >= 1");
  return {Kind::FloorDiv, 1, 0, d};
}

std::string LineMap::describe() const {
  if (kind == Kind::FloorDiv) return "n -> floor(n/" + std::to_string(d) + ")";
  std::string s = "n -> " + (a == 1 ? std::string("n") : std::to_string(a) + "n");
  return b ? s + " + " + std::to_string(b) : s;
}

LineMap LineMap::from_json(const json& j) {
  if (!j.is_object() || !j.contains("rule") || !j["rule"].is_string())
    fail(ErrorKind::Schema, "line map: expected {\"rule\": \"affine\"|\"floor-div\", ...}");
  auto nat = [&](const char* k, Nat def) {
    if (!j.contains(k)) return def;
    if (!j[k].is_number_integer() || j[k].get<long long>() < 0)
      fail(ErrorKind::Schema, std::string("line map: ") + k + " must be a natural number");
    return j[k].get<Nat>();
  };
  const std::string r = j["rule"].get<std::string>();
  if (r == "affine") return affine(nat("a", 1), nat("b", 0));
  if (r == "floor-div") return floor_div(nat("d", 1));
  fail(ErrorKind::Schema, "unknown line map rule: " + r);
}

json LineMap::to_json() const {
  if (kind == Kind::FloorDiv) return {{"rule", "floor-div"}, {"d", d}};
  return {{"rule", "affine"}, {"a", a}, {"b", b}};
}

LineSet LineMap::image(const LineSet& s) const {
  require(s.exact(), ErrorKind::Precondition, "line map images need a finite or periodic set");
  if (s.is_finite()) {
    std::vector<Nat> out;
    for (Nat x : s.window(s.empty() ? 0 : *s.prev(kNatMax))) out.push_back((*this)(x));
    return LineSet::finite(std::move(out));
  }
  if (kind == Kind::Affine && a == 0) return LineSet::finite({b});
  const PeriodicData& pd = *s.periodic_data();
  Nat base, period;
  std::function<bool(Nat)> in;
  if (kind == Kind::Affine) {
    require(pd.period <= kPeriodCap / a, ErrorKind::CapExceeded, "image period too large");
    base = a * pd.base + b;
    period = a * pd.period;
    in = [&](Nat y) { return y >= b && (y - b) % a == 0 && s.contains((y - b) / a); };
  } else {
    base = (pd.base + d - 1) / d;
    period = pd.period;
    in = [&](Nat y) {
      auto nx = s.next(y * d);
      return nx && *nx < y * d + d;
    };
  }
  std::vector<Nat> head;
  std::vector<Progression> progs;
  for (Nat y = 0; y < base; ++y)
    if (in(y)) head.push_back(y);
  for (Nat r = 0; r < period; ++r)
    if (in(base + r)) progs.push_back({base + r, period});
  if (progs.empty()) return LineSet::finite(std::move(head));
  return LineSet::periodic(std::move(head), std::move(progs));
}

// ---------------------------------------------------------------------------

namespace {

ExplicitLsr space_of(const LsrBackend& b) {
  require(!b.is_line(), ErrorKind::UniverseMismatch, "explicit map between line backends");
  return b.restricted() ? b.subspace_lsr() : b.lsr();
}

void require_sizes(const ExplicitMap& f, const ExplicitLsr& x, const ExplicitLsr& y) {
  require(f.domain_size() == x.width() && f.codomain_size() == y.width(), ErrorKind::UniverseMismatch,
          "map universes differ from the spaces");
}

void require_line_pair(const LsrBackend& x, const LsrBackend& y) {
  require(x.is_line() && y.is_line(), ErrorKind::UniverseMismatch, "line map needs line backends");
  require(x.kind() == y.kind(), ErrorKind::UniverseMismatch, "line maps run between backends of the same kind");
}

std::vector<LineSet> images(const LineMap& f, const std::vector<LineSet>& fam) {
  std::vector<LineSet> out;
  for (const auto& s : fam) out.push_back(f.image(s));
  return out;
}

template <class F>
void for_each_pool_family(const std::vector<LineSet>& pool, std::size_t max_size, F&& f) {
  std::vector<std::size_t> idx;
  std::function<bool(std::size_t)> rec = [&](std::size_t from) {
    if (!idx.empty()) {
      std::vector<LineSet> fam;
      for (auto i : idx) fam.push_back(pool[i]);
      if (!f(fam)) return false;
    }
    if (idx.size() == max_size) return true;
    for (std::size_t i = from; i < pool.size(); ++i) {
      idx.push_back(i);
      bool go = rec(i + 1);
      idx.pop_back();
      if (!go) return false;
    }
    return true;
  };
  rec(0);
}

json family_json(const std::vector<LineSet>& fam) {
  json out = json::array();
  for (const auto& s : fam) out.push_back(s.to_json());
  return out;
}

struct Rational {
  Nat num = 1, den = 1;
};

Rational slope(const LineMap& m) { return m.kind == LineMap::Kind::Affine ? Rational{m.a, 1} : Rational{1, m.d}; }

struct Displacement {
  bool bounded = false;
  Nat sup = 0;
};

// sup_n |h(n) - n| for h = second ∘ first. With slope 1 the displacement is
// periodic in n with period dividing the floor divisor, so a short scan is exact.
Displacement displacement(const LineMap& first, const LineMap& second) {
  Rational s1 = slope(first), s2 = slope(second);
  if (s1.num * s2.num != s1.den * s2.den) return {};
  const Nat span = 4 * (first.a + first.b + first.d + second.a + second.b + second.d + 1);
  Nat sup = 0;
  for (Nat n = 0; n < span; ++n) {
    const Nat h = second(first(n));
    sup = std::max(sup, h > n ? h - n : n - h);
  }
  return {true, sup};
}

// A single sparse set B with a point of h(B) far from B: refutes both closure
// conditions at the given scale on the metric line.
TriVerdict refute_displacement(const LineMap& first, const LineMap& second, Nat scale, const char* side) {
  const Nat r = 4 * std::max({first.a, first.d, second.a, second.d, Nat{2}});
  auto geo = LineSet::geometric(1, r, 1);
  for (Nat i = 0;; ++i) {
    auto n = geo.select(i);
    if (!n || *n > kNatMax / (4 * r)) break;
    const Nat h = second(first(*n));
    const ExtDistance dist = geo.distance(h);
    if (!dist.le(scale))
      return TriVerdict::no(std::string(side) + ": {B, h(B)} is not a member at this scale",
                            {{"side", side},
                             {"B", geo.to_json()},
                             {"point", *n},
                             {"image", h},
                             {"distance", dist.to_json()},
                             {"scale", scale}});
  }
  return TriVerdict::unknown(scale, std::string(side) + ": no witness within range");
}

}  // namespace

std::vector<LineSet> line_map_pool() {
  return {LineSet::naturals(),           LineSet::evens(),
          LineSet::odds(),               LineSet::progression(3, 3),
          LineSet::progression(5, 4),    LineSet::periodic({0, 2}, {{7, 5}}),
          LineSet::periodic({}, {{1, 6}, {4, 6}}, {}),
          LineSet::finite({0}),          LineSet::finite({1, 2, 3}),
          LineSet::finite({4, 9}),       LineSet::finite({17})};
}

TriVerdict is_lsr_map(const ExplicitMap& f, const ExplicitLsr& x, const ExplicitLsr& y) {
  require_sizes(f, x, y);
  for (Mask b = 0; b < (Mask{1} << y.width()); ++b)
    if (y.bounded(b) && !x.bounded(f.preimage(b)))
      return TriVerdict::no("a bounded set has an unbounded preimage",
                            {{"bounded", y.universe().format(b)}, {"preimage", x.universe().format(f.preimage(b))}});
  // Images of subfamilies are subfamilies of images: maximal members suffice.
  std::optional<FamilyCode> bad;
  std::size_t checked = 0;
  for (FamilyCode c : x.maximal()) {
    ++checked;
    if (!y.member(f.image_family(c))) {
      bad = c;
      break;
    }
  }
  if (bad)
    return TriVerdict::no("the image of a member is not a member",
                          {{"family", format_code(*bad, x.universe())},
                           {"image", format_code(f.image_family(*bad), y.universe())}});
  return TriVerdict::yes("bounded preimages and member images", {{"maximal_families", checked}});
}

TriVerdict is_lsr_map(const ExplicitMap& f, const LsrBackend& x, const LsrBackend& y) {
  return is_lsr_map(f, space_of(x), space_of(y));
}

TriVerdict is_lsr_map(const LineMap& f, const LsrBackend& x, const LsrBackend& y) {
  require_line_pair(x, y);
  if (!f.finite_to_one())
    return TriVerdict::no("a bounded set has an unbounded preimage",
                          {{"bounded", LineSet::finite({f.b}).to_json()}, {"preimage", LineSet::naturals().to_json()}});
  const auto pool = line_map_pool();
  std::size_t checked = 0;
  TriVerdict bad;
  bool found = false;
  for_each_pool_family(pool, 4, [&](const std::vector<LineSet>& fam) {
    if (!member(x, fam).is_yes()) return true;
    ++checked;
    auto img = images(f, fam);
    auto v = member(y, img);
    if (v.is_no()) {
      bad = TriVerdict::no("the image of a member is not a member",
                           {{"family", family_json(fam)}, {"image", family_json(img)}, {"reason", v.witness}});
      found = true;
      return false;
    }
    return true;
  });
  if (found) return bad;
  return TriVerdict::yes("finite-to-one, coarsely Lipschitz rule; pool families agree",
                         {{"rule", f.to_json()}, {"pool_families", checked}});
}

// ---------------------------------------------------------------------------

TriVerdict EquivalenceReport::verdict() const {
  if (f_map.is_no()) return f_map;
  if (g_map.is_no()) return g_map;
  if (definition.is_no()) return definition;
  if (f_map.is_yes() && g_map.is_yes() && definition.is_yes())
    return TriVerdict::yes("large scale equivalence", to_json());
  auto u = TriVerdict::unknown(definition.budget, "undecided within budget");
  u.witness = to_json();
  return u;
}

json EquivalenceReport::to_json() const {
  return {{"f_map", f_map.to_json()},
          {"g_map", g_map.to_json()},
          {"definition", definition.to_json()},
          {"lemma_ii", lemma_ii.to_json()}};
}

EquivalenceReport ls_equivalence_report(const ExplicitMap& f, const ExplicitMap& g, const ExplicitLsr& x,
                                        const ExplicitLsr& y) {
  require_sizes(f, x, y);
  require_sizes(g, y, x);
  EquivalenceReport r;
  r.f_map = is_lsr_map(f, x, y);
  r.g_map = is_lsr_map(g, y, x);

  const ExplicitMap gf = compose(g, f), fg = compose(f, g);
  auto definition_side = [](const ExplicitMap& h, const ExplicitLsr& c, const char* side) -> std::optional<json> {
    // family images by byte lookup: codes have at most 16 bits
    const std::uint64_t n = std::uint64_t{1} << (std::size_t{1} << c.width());
    std::array<FamilyCode, 256> lo{}, hi{};
    for (unsigned k = 0; k < std::min<std::uint64_t>(n, 256); ++k) {
      lo[k] = h.image_family(k);
      hi[k] = c.width() == 4 ? h.image_family(static_cast<FamilyCode>(k) << 8) : 0;
    }
    for (std::uint64_t a = 0; a < n; ++a) {
      const FamilyCode fa = static_cast<FamilyCode>(a), img = lo[a & 0xff] | hi[(a >> 8) & 0xff];
      if (c.member(img) && !c.member(img | fa))
        return json{{"side", side}, {"family", format_code(fa, c.universe())}, {"image", format_code(img, c.universe())}};
    }
    return std::nullopt;
  };
  auto lemma_side = [](const ExplicitMap& h, const ExplicitLsr& c, const char* side) -> std::optional<json> {
    // h(𝒜) ∪ 𝒜 grows with 𝒜, so maximal members decide it.
    for (FamilyCode fa : c.maximal())
      if (!c.member(h.image_family(fa) | fa))
        return json{{"side", side}, {"family", format_code(fa, c.universe())},
                    {"image", format_code(h.image_family(fa), c.universe())}};
    return std::nullopt;
  };
  if (auto w = definition_side(gf, x, "g∘f")) r.definition = TriVerdict::no("g∘f(𝒜) ∈ 𝔠 but g∘f(𝒜) ∪ 𝒜 ∉ 𝔠", *w);
  else if (auto w2 = definition_side(fg, y, "f∘g")) r.definition = TriVerdict::no("f∘g(ℬ) ∈ 𝔠′ but f∘g(ℬ) ∪ ℬ ∉ 𝔠′", *w2);
  else r.definition = TriVerdict::yes("both conditional closures hold on every family");

  if (auto w = lemma_side(gf, x, "g∘f")) r.lemma_ii = TriVerdict::no("𝒜 ∈ 𝔠 but g∘f(𝒜) ∪ 𝒜 ∉ 𝔠", *w);
  else if (auto w2 = lemma_side(fg, y, "f∘g")) r.lemma_ii = TriVerdict::no("ℬ ∈ 𝔠′ but f∘g(ℬ) ∪ ℬ ∉ 𝔠′", *w2);
  else r.lemma_ii = TriVerdict::yes("closure holds on every member");
  return r;
}

EquivalenceReport ls_equivalence_report(const LineMap& f, const LineMap& g, const LsrBackend& x, const LsrBackend& y) {
  require_line_pair(x, y);
  EquivalenceReport r;
  r.f_map = is_lsr_map(f, x, y);
  r.g_map = is_lsr_map(g, y, x);

  // Pool members of each side: g∘f(𝒜) ∪ 𝒜 must be a member.
  const auto pool = line_map_pool();
  std::size_t sampled = 0;
  std::optional<json> sample_bad;
  auto sample = [&](const LineMap& first, const LineMap& second, const LsrBackend& c, const char* side) {
    for_each_pool_family(pool, 3, [&](const std::vector<LineSet>& fam) {
      if (!member(c, fam).is_yes()) return true;
      ++sampled;
      auto both = images(second, images(first, fam));
      both.insert(both.end(), fam.begin(), fam.end());
      auto v = member(c, both);
      if (v.is_no()) {
        sample_bad = json{{"side", side}, {"family", family_json(fam)}, {"reason", v.witness}};
        return false;
      }
      return true;
    });
  };
  if (r.f_map.is_yes() && r.g_map.is_yes()) {
    sample(f, g, x, "g∘f");
    if (!sample_bad) sample(g, f, y, "f∘g");
  }

  if (x.kind() == LsrBackend::Kind::TopoTrace) {
    // Finite-to-one maps send finite sets to finite sets and infinite to infinite.
    const bool ok = f.finite_to_one() && g.finite_to_one() && !sample_bad;
    r.definition = r.lemma_ii =
        ok ? TriVerdict::yes("finite-to-one composites preserve finiteness", {{"pool_families", sampled}})
           : TriVerdict::no("a composite is not finite-to-one or a pool family fails",
                            sample_bad ? *sample_bad : json{{"f", f.to_json()}, {"g", g.to_json()}});
    return r;
  }

  const Nat scale = x.budget().max_scale;
  const Displacement dgf = displacement(f, g), dfg = displacement(g, f);
  if (sample_bad) {
    r.definition = r.lemma_ii = TriVerdict::no("a pool family fails the closure", *sample_bad);
  } else if (!dgf.bounded) {
    r.definition = r.lemma_ii = refute_displacement(f, g, scale, "g∘f");
  } else if (!dfg.bounded) {
    r.definition = r.lemma_ii = refute_displacement(g, f, scale, "f∘g");
  } else if (std::max(dgf.sup, dfg.sup) > scale) {
    r.definition = r.lemma_ii = TriVerdict::unknown(scale, "displacement exceeds the scale budget");
  } else {
    r.definition = r.lemma_ii = TriVerdict::yes(
        "composites move points by a bounded amount",
        {{"g∘f_displacement", dgf.sup}, {"f∘g_displacement", dfg.sup}, {"scale", scale}, {"pool_families", sampled}});
  }
  return r;
}

}  // namespace coarselab
