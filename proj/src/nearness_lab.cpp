#include "coarselab/nearness_lab.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>

namespace coarselab {

namespace {

std::string nat(Nat n) { return std::to_string(n); }

json sets_json(const std::vector<LineSet>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(s.to_json());
  return a;
}

std::vector<LineSet> sets_from(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) fail(ErrorKind::Schema, std::string("obstruction: missing array ") + key);
  std::vector<LineSet> out;
  for (const auto& e : j[key]) out.push_back(LineSet::from_json(e));
  return out;
}

Nat nat_from(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0)
    fail(ErrorKind::Schema, std::string("obstruction: ") + key + " must be a natural number");
  return j[key].get<Nat>();
}

/// d(p, x) > k, read off the next element at or after p - k.
bool far_from(const LineSet& x, Nat p, Nat k) {
  auto q = x.next(p >= k ? p - k : 0);
  return !q || *q > p + k;
}

/// Per scale: a point of L_i with nothing of X_i within k, and the size of the
/// canonical candidate {x in X_i : d(x, L) <= k} inside the window.
json scale_checks(const BunchObstruction& o, const json& normality_scales, std::string& failure) {
  const Nat w = o.budget.window;
  const auto dl = distance_profile(o.l(), w);
  const auto x1 = o.x1.window(w), x2 = o.x2.window(w);
  // histogram of d(x, L) over each X_i, so candidate sizes are prefix sums
  std::vector<Nat> h1(o.budget.max_scale + 2, 0), h2(o.budget.max_scale + 2, 0);
  auto bucket = [&](Nat d) { return std::min<Nat>(d, o.budget.max_scale + 1); };
  for (Nat x : x1) ++h1[bucket(dl[x])];
  for (Nat x : x2) ++h2[bucket(dl[x])];
  json out = json::array();
  Nat c1 = 0, c2 = 0;
  for (Nat k = 0; k <= o.budget.max_scale; ++k) {
    c1 += h1[k];
    c2 += h2[k];
    const json& row = normality_scales.at(k);
    const Nat p1 = row.at("a_far_from_x1").get<Nat>();
    const Nat p2 = row.at("b_far_from_x2").get<Nat>();
    if (!o.l1.contains(p1) || !o.l2.contains(p2)) {
      failure = "scale " + nat(k) + ": witness point is not in its part of L";
      return out;
    }
    if (!far_from(o.x1, p1, k) || !far_from(o.x2, p2, k)) {
      failure = "scale " + nat(k) + ": witness point is within k of its part of N";
      return out;
    }
    out.push_back({{"k", k},
                   {"x1", {{"point_of_l1", p1}, {"candidate_size", c1}}},
                   {"x2", {{"point_of_l2", p2}, {"candidate_size", c2}}}});
  }
  return out;
}

json split_checks(const LineSet& l1, const LineSet& l2, const ObstructionBudget& b, std::string& failure) {
  json out = json::array();
  for (Nat k = 0; k <= b.max_scale; ++k) {
    TriVerdict v = hausdorff_at_scale(l1, l2, k, b.window);
    if (!v.is_no()) {
      failure = "L1 and L2 are not separated at scale " + nat(k) + ": " + v.text();
      return out;
    }
    json row = v.witness;
    row["k"] = k;
    out.push_back(std::move(row));
  }
  return out;
}

/// Every check except the normality witnesses, which come from the split itself.
std::string structural_failure(const BunchObstruction& o) {
  const Nat w = o.budget.window;
  if (o.witness.empty() || o.chosen >= o.witness.size()) return "no chosen member";
  for (const auto& s : {o.l1, o.l2})
    if (s.is_finite()) return "a part of L is finite";
  for (const auto* part : {&o.l1, &o.l2})
    for (Nat x : part->window(w))
      if (!o.l().contains(x)) return "point " + nat(x) + " of a part is not in L";
  std::vector<bool> covered(w + 1, false);
  for (const auto* part : {&o.x1, &o.x2})
    for (Nat x : part->window(w)) covered[x] = true;
  for (Nat x = 0; x <= w; ++x)
    if (!covered[x]) return "point " + nat(x) + " is in neither X1 nor X2";
  return {};
}

}  // namespace

json BunchObstruction::to_json() const {
  return {{"family", sets_json(family)},
          {"witness", sets_json(witness)},
          {"chosen", chosen},
          {"l1", l1.to_json()},
          {"l2", l2.to_json()},
          {"x1", x1.to_json()},
          {"x2", x2.to_json()},
          {"budget", {{"window", budget.window}, {"max_scale", budget.max_scale}}},
          {"near", near},
          {"members", members},
          {"split", split},
          {"scales", scales},
          {"ok", ok}};
}

BunchObstruction BunchObstruction::from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::Schema, "obstruction must be an object");
  BunchObstruction o;
  o.family = sets_from(j, "family");
  o.witness = sets_from(j, "witness");
  o.chosen = nat_from(j, "chosen");
  for (auto [key, dst] : {std::pair{"l1", &o.l1}, {"l2", &o.l2}, {"x1", &o.x1}, {"x2", &o.x2}}) {
    if (!j.contains(key)) fail(ErrorKind::Schema, std::string("obstruction: missing ") + key);
    *dst = LineSet::from_json(j[key]);
  }
  if (!j.contains("budget")) fail(ErrorKind::Schema, "obstruction: missing budget");
  o.budget = {nat_from(j["budget"], "window"), nat_from(j["budget"], "max_scale")};
  o.near = j.value("near", json());
  o.members = j.value("members", json());
  o.split = j.value("split", json::array());
  o.scales = j.value("scales", json::array());
  o.ok = j.value("ok", false);
  return o;
}

ObstructionResult bunch_obstruction(const std::vector<LineSet>& a, ObstructionBudget budget) {
  require(!a.empty(), "bunch_obstruction: empty family");
  require(budget.window > budget.max_scale, "bunch_obstruction: window must exceed the scale budget");
  ObstructionResult r;
  const LsrBackend metric = LsrBackend::metric_line({budget.window, budget.max_scale});

  TriVerdict near = nearness_of(metric, a);
  if (!near.is_yes()) {
    r.rejection = near.is_no() ? "family is not near" : "nearness undecided: " + near.text();
    r.witness = near.to_json();
    return r;
  }
  // On N the closure of a set is the set.
  IntersectionResult in = intersects(a, budget.window);
  if (in.outcome != Outcome::No) {
    r.rejection = in.outcome == Outcome::Yes ? "closures meet at " + nat(*in.witness) : "intersection undecided";
    r.witness = in.witness ? json{{"point", *in.witness}} : json{{"window", budget.window}};
    return r;
  }

  BunchObstruction o;
  o.family = a;
  o.witness = a;
  o.budget = budget;
  o.near = near.to_json();
  TriVerdict m = member(metric, o.witness);
  if (!m.is_yes()) {
    r.rejection = "the family is not a member of the structure: " + m.text();
    r.witness = m.to_json();
    return r;
  }
  json dists = json::array();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i].exact() && a[j].exact())
        dists.push_back({{"i", i}, {"j", j}, {"hausdorff", hausdorff_distance(a[i], a[j]).to_json()}});
  o.members = {{"member", m.to_json()}, {"pairwise", dists}};

  const LineSet& l = o.l();
  if (l.is_finite()) {
    r.rejection = "chosen member is finite";
    return r;
  }
  std::tie(o.l1, o.l2) = sparsify_split(l);
  std::string failure;
  o.split = split_checks(o.l1, o.l2, budget, failure);
  if (!failure.empty()) {
    r.rejection = failure;
    return r;
  }
  NormalitySplit ns = normality_split(o.l1, o.l2, budget.window, budget.max_scale);
  o.x1 = ns.x1;
  o.x2 = ns.x2;
  if (!ns.verdict.is_yes()) {
    r.rejection = "normality split failed: " + ns.verdict.text();
    r.witness = ns.verdict.to_json();
    return r;
  }
  failure = structural_failure(o);
  if (failure.empty()) o.scales = scale_checks(o, ns.verdict.witness.at("scales"), failure);
  if (!failure.empty()) {
    r.rejection = failure;
    return r;
  }
  o.ok = true;
  r.obstruction = std::move(o);
  return r;
}

TriVerdict validate_obstruction(const BunchObstruction& o0) {
  // Work from the serialized form only.
  const BunchObstruction o = BunchObstruction::from_json(o0.to_json());
  auto bad = [](const std::string& why) { return TriVerdict::no(why, {{"check", why}}); };
  if (!o.ok) return bad("obstruction is not marked complete");
  if (o.witness.size() != o.family.size()) return bad("witness family differs from the input");
  const LsrBackend metric = LsrBackend::metric_line({o.budget.window, o.budget.max_scale});
  if (!nearness_of(metric, o.family).is_yes()) return bad("family is not near");
  if (intersects(o.family, o.budget.window).outcome != Outcome::No) return bad("closures meet");
  if (!member(metric, o.witness).is_yes()) return bad("witness is not a member");
  if (std::string f = structural_failure(o); !f.empty()) return bad(f);
  // Split: each recorded scale carries a point of one part far from the other.
  if (o.split.size() != o.budget.max_scale + 1) return bad("split certificate has the wrong length");
  for (Nat k = 0; k <= o.budget.max_scale; ++k) {
    const json& row = o.split.at(k);
    if (!row.contains("point") || !row.contains("in")) return bad("split row without a witness point");
    const Nat p = row["point"].get<Nat>();
    const bool in_a = row["in"] == "a";
    const LineSet& own = in_a ? o.l1 : o.l2;
    const LineSet& other = in_a ? o.l2 : o.l1;
    if (!own.contains(p) || !far_from(other, p, k)) return bad("split witness fails at scale " + nat(k));
  }
  // Scales: rebuild the per-scale table from the recorded points.
  json rows = json::array();
  for (const auto& s : o.scales)
    rows.push_back({{"a_far_from_x1", s.at("x1").at("point_of_l1")}, {"b_far_from_x2", s.at("x2").at("point_of_l2")}});
  if (rows.size() != o.budget.max_scale + 1) return bad("scale certificate has the wrong length");
  std::string failure;
  json again = scale_checks(o, rows, failure);
  if (!failure.empty()) return bad(failure);
  if (again != o.scales) return bad("recorded candidate sizes do not match");
  return TriVerdict::yes("obstruction re-validated", {{"scales", o.scales.size()}, {"window", o.budget.window}});
}

json BunchSearch::to_json(const Universe& u) const {
  json j = {{"found", found}, {"bunches_inspected", bunches}};
  if (found) {
    json m = json::array();
    for_each_bit(bunch, [&](unsigned s) { m.push_back(u.format(Mask(s))); });
    j["bunch"] = m;
  }
  return j;
}

BunchSearch bunch_exists_explicit(FamilyCode a, const ExplicitNearness& n) {
  require(n.width() <= kMaxExplicitWidth, ErrorKind::CapExceeded, "bunch search needs |X| <= 4");
  require(n.near(a), "family is not near: " + format_code(a, n.universe()));
  BunchSearch out;
  const auto all = enumerate_bunches(n);
  out.bunches = all.size();
  for (FamilyCode c : all) {
    if ((c & a) != a) continue;
    if (!out.found || std::popcount(c) < std::popcount(out.bunch) ||
        (std::popcount(c) == std::popcount(out.bunch) && c < out.bunch)) {
      out.found = true;
      out.bunch = c;
    }
  }
  return out;
}

namespace {

void restricted_growth(std::size_t n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> rg(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int top) {
    if (i == n) {
      f(rg);
      return;
    }
    for (int b = 0; b <= top + 1; ++b) {
      rg[i] = b;
      rec(i + 1, std::max(top, b));
    }
  };
  rec(1, 0);
}

/// Closures of finite topologies: one per preorder on the points.
std::vector<ClosureTable> preorder_closures(std::size_t n) {
  std::vector<ClosureTable> out;
  for (std::uint32_t bits = 0; bits < (1u << (n * n)); ++bits) {
    std::vector<Mask> below(n, 0);
    bool ok = true;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y)
        if ((bits >> (x * n + y)) & 1u) below[x] |= Mask{1} << y;
      ok = ok && ((below[x] >> x) & 1u);
    }
    for (std::size_t x = 0; x < n && ok; ++x)
      for (std::size_t y = 0; y < n && ok; ++y)
        if ((below[x] >> y) & 1u) ok = (below[y] & ~below[x]) == 0;
    if (!ok) continue;
    ClosureTable cl(std::size_t{1} << n, 0);
    for (Mask m = 0; m < cl.size(); ++m) for_each_bit(m, [&](unsigned x) { cl[m] |= below[x]; });
    out.push_back(std::move(cl));
  }
  return out;
}

}  // namespace

ContrastRow contrast_proximity_pairs(std::size_t width) {
  require(width >= 1 && width <= 3, ErrorKind::CapExceeded, "contrast suite runs on 1 to 3 points");
  const Universe u = Universe::letters(width);
  const Mask n = Mask{1} << width;
  std::map<std::vector<std::uint32_t>, ExplicitProximity> seen;
  auto add = [&](const ExplicitProximity& p) {
    if (!check_proximity_axioms(p).passed()) return;
    std::vector<std::uint32_t> rows(n, 0);
    for (Mask a = 0; a < n; ++a)
      for (Mask b = 0; b < n; ++b)
        if (p.near(a, b)) rows[a] |= 1u << b;
    seen.emplace(std::move(rows), p);
  };
  const auto closures = preorder_closures(width);
  restricted_growth(n, [&](const std::vector<int>& rg) {
    ExplicitAsr l(u, rg);
    if (!check_asr_axioms(l).passed()) return;
    for (const auto& cl : closures) {
      try {
        add(proximity_of(l, cl));
      } catch (const Error&) {
        return;  // not asymptotically normal: no closure helps
      }
    }
  });
  add(ExplicitProximity::discrete(u));
  restricted_growth(width, [&](const std::vector<int>& rg) {
    std::vector<Mask> blocks(*std::max_element(rg.begin(), rg.end()) + 1, 0);
    for (std::size_t i = 0; i < width; ++i) blocks[rg[i]] |= Mask{1} << i;
    add(ExplicitProximity::from_partition(u, blocks));
  });

  ContrastRow row;
  row.proximities = seen.size();
  for (const auto& [rows, p] : seen) {
    const auto clusters = enumerate_clusters(p);
    const ExplicitNearness nn = ExplicitNearness::from_proximity(p);
    for (Mask a = 0; a < n; ++a)
      for (Mask b = a; b < n; ++b) {
        if (!p.near(a, b)) continue;
        ++row.near_pairs;
        const FamilyCode pair = code_bit(a) | code_bit(b);
        const bool in_cluster =
            std::any_of(clusters.begin(), clusters.end(), [&](FamilyCode c) { return (c & pair) == pair; });
        const bool in_bunch = in_cluster && bunch_exists_explicit(pair, nn).found;
        if (in_bunch) {
          ++row.extended;
        } else if (row.failure.is_null()) {
          row.failure = {{"A", u.format(a)}, {"B", u.format(b)}, {"cluster", in_cluster}, {"bunch", in_bunch}};
        }
      }
  }
  return row;
}

}  // namespace coarselab
