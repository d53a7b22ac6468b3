#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coarselab/dimension.hpp"
#include "coarselab/maps.hpp"
#include "support.hpp"

using namespace coarselab;
using namespace support;

namespace {

// Definition-level oracles on the member tables.
bool oracle_bounded(const ExplicitLsr& c, Mask m) {
  if (m == 0) return true;
  for (std::size_t x = 0; x < c.width(); ++x)
    if (c.member(code_of({m, Mask{1} << x}))) return true;
  return false;
}

Mask oracle_img(const std::vector<unsigned>& t, Mask a) {
  Mask out = 0;
  for (std::size_t x = 0; x < t.size(); ++x)
    if ((a >> x) & 1u) out |= Mask{1} << t[x];
  return out;
}

FamilyCode oracle_img_family(const std::vector<unsigned>& t, FamilyCode f) {
  FamilyCode out = 0;
  for (Mask m : masks_of(f)) out |= FamilyCode{1} << oracle_img(t, m);
  return out;
}

bool oracle_map(const std::vector<unsigned>& t, const ExplicitLsr& x, const ExplicitLsr& y) {
  for (Mask b = 0; b < (Mask{1} << y.width()); ++b) {
    Mask pre = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if ((b >> t[i]) & 1u) pre |= Mask{1} << i;
    if (oracle_bounded(y, b) && !oracle_bounded(x, pre)) return false;
  }
  const std::uint64_t n = std::uint64_t{1} << (std::size_t{1} << x.width());
  for (std::uint64_t f = 0; f < n; ++f)
    if (x.member(static_cast<FamilyCode>(f)) && !y.member(oracle_img_family(t, static_cast<FamilyCode>(f)))) return false;
  return true;
}

std::vector<unsigned> after(const std::vector<unsigned>& g, const std::vector<unsigned>& f) {
  std::vector<unsigned> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = g[f[i]];
  return out;
}

bool oracle_side(const std::vector<unsigned>& h, const ExplicitLsr& c) {
  const std::uint64_t n = std::uint64_t{1} << (std::size_t{1} << c.width());
  for (std::uint64_t a = 0; a < n; ++a) {
    FamilyCode img = oracle_img_family(h, static_cast<FamilyCode>(a));
    if (c.member(img) && !c.member(img | static_cast<FamilyCode>(a))) return false;
  }
  return true;
}

struct Pair {
  ExplicitLsr x, y;
  ExplicitMap f, g;
};

// Every verified equivalence between LS.Rs on at most 3 points.
std::vector<Pair> small_equivalences(std::size_t& checked) {
  std::vector<std::vector<ExplicitLsr>> by_w(4);
  for (std::size_t w = 1; w <= 3; ++w) by_w[w] = all_lsrs(w);
  std::vector<Pair> out;
  checked = 0;
  for (std::size_t wx = 1; wx <= 3; ++wx)
    for (std::size_t wy = 1; wy <= 3; ++wy) {
      auto fs = all_maps(wx, wy), gs = all_maps(wy, wx);
      for (const auto& x : by_w[wx])
        for (const auto& y : by_w[wy]) {
          std::vector<ExplicitMap> fok, gok;
          for (const auto& f : fs)
            if (is_lsr_map(f, x, y).is_yes()) fok.push_back(f);
          for (const auto& g : gs)
            if (is_lsr_map(g, y, x).is_yes()) gok.push_back(g);
          for (const auto& f : fok)
            for (const auto& g : gok) {
              ++checked;
              if (is_ls_equivalence(f, g, x, y).is_yes()) out.push_back({x, y, f, g});
            }
        }
    }
  return out;
}

}  // namespace

TEST_CASE("explicit map basics and json") {
  auto u = Universe::letters(3);
  ExplicitMap f(3, 2, {0, 0, 1});
  CHECK(f.image(a | c) == 3u);
  CHECK(f.preimage(1) == (a | b));
  CHECK(f.image_family(code_of({a, b, c})) == code_of({1, 2}));
  auto v = Universe(std::vector<std::string>{"x", "y"});
  auto j = f.to_json(u, v);
  CHECK(j["table"]["c"] == "y");
  CHECK(ExplicitMap::from_json(j, u, v) == f);
  CHECK(ExplicitMap::from_json(json{{"table", {0, 0, 1}}}, u, v) == f);
  CHECK_THROWS_AS(ExplicitMap::from_json(json{{"table", {0, 1}}}, u, v), Error);
  CHECK_THROWS_AS(ExplicitMap(3, 2, {0, 2, 1}), Error);
  CHECK(compose(ExplicitMap::identity(2), f) == f);
}

TEST_CASE("line map images") {
  auto dbl = LineMap::affine(2);
  auto img = dbl.image(LineSet::naturals());
  for (Nat n = 0; n < 200; ++n) CHECK(img.contains(n) == (n % 2 == 0));
  auto half = LineMap::floor_div(2);
  auto h = half.image(LineSet::progression(3, 4));
  for (Nat n = 0; n < 200; ++n) {
    bool want = false;
    for (Nat s = 3; s <= 2 * n + 1; s += 4) want = want || s / 2 == n;
    CHECK(h.contains(n) == want);
  }
  // random exact sets against elementwise mapping
  std::mt19937 rng(3);
  for (int t = 0; t < 100; ++t) {
    auto s = LineSet::periodic({rng() % 20, rng() % 20}, {{rng() % 10, 1 + rng() % 5}});
    LineMap m = t % 2 ? LineMap::affine(1 + rng() % 3, rng() % 5) : LineMap::floor_div(1 + rng() % 4);
    auto im = m.image(s);
    std::set<Nat> want;
    for (Nat x : s.window(3000)) want.insert(m(x));
    for (Nat y = 0; y < 500; ++y) CHECK(im.contains(y) == want.count(y) > 0);
  }
  CHECK(LineMap::from_json(json{{"rule", "affine"}, {"a", 2}, {"b", 1}})(3) == 7);
  CHECK(LineMap::from_json(LineMap::floor_div(3).to_json())(8) == 2);
  CHECK_THROWS_AS(LineMap::from_json(json{{"rule", "floor-div"}, {"d", 0}}), Error);
  CHECK_THROWS_AS(LineMap::from_json(json{{"rule", "shear"}}), Error);
  CHECK(LineMap::affine(0, 4).image(LineSet::evens()).is_finite());
}

TEST_CASE("is_lsr_map examples") {
  for (const auto& c : all_lsrs(3)) CHECK(is_lsr_map(ExplicitMap::identity(3), c, c).is_yes());
  auto metric = LsrBackend::metric_line();
  auto topo = LsrBackend::topo_trace();
  CHECK(is_lsr_map(LineMap::affine(1), metric, metric).is_yes());
  CHECK(is_lsr_map(LineMap::affine(2), metric, metric).is_yes());
  CHECK(is_lsr_map(LineMap::floor_div(2), metric, metric).is_yes());
  CHECK(is_lsr_map(LineMap::affine(2), topo, topo).is_yes());
  auto flat = is_lsr_map(LineMap::affine(0, 5), metric, metric);
  CHECK(flat.is_no());
  CHECK(flat.witness.contains("preimage"));
  CHECK_THROWS_AS(is_lsr_map(LineMap::affine(2), metric, topo), Error);

  // singleton-only structures are unbounded; collapsing to a point fails
  auto lone = ExplicitLsr::from_generators(Universe::letters(2), std::vector<Family>{}, true);
  auto pt = ExplicitLsr::from_generators(Universe::letters(1), std::vector<Family>{}, true);
  auto collapse = is_lsr_map(ExplicitMap::constant(2, 1, 0), lone, pt);
  CHECK(collapse.is_no());
  CHECK(collapse.witness["bounded"] == "{a}");
}

TEST_CASE("is_lsr_map matches the definition exhaustively") {
  std::size_t yes = 0, total = 0;
  for (std::size_t wx = 1; wx <= 3; ++wx)
    for (std::size_t wy = 1; wy <= 3; ++wy) {
      auto xs = all_lsrs(wx), ys = all_lsrs(wy);
      auto fs = all_maps(wx, wy);
      for (const auto& x : xs)
        for (const auto& y : ys)
          for (const auto& f : fs) {
            bool got = is_lsr_map(f, x, y).is_yes();
            CHECK(got == oracle_map(f.table(), x, y));
            yes += got;
            ++total;
          }
    }
  MESSAGE("LS.R maps: " << yes << " of " << total);
  CHECK(yes > 100);
}

TEST_CASE("composition of LS.R maps") {
  std::mt19937 rng(5);
  std::vector<ExplicitLsr> pool;
  for (std::size_t w = 1; w <= 3; ++w)
    for (auto& c : all_lsrs(w)) pool.push_back(c);
  std::size_t hits = 0;
  for (int t = 0; t < 20000 && hits < 300; ++t) {
    const auto& x = pool[rng() % pool.size()];
    const auto& y = pool[rng() % pool.size()];
    const auto& z = pool[rng() % pool.size()];
    auto fs = all_maps(x.width(), y.width());
    auto gs = all_maps(y.width(), z.width());
    const auto& f = fs[rng() % fs.size()];
    const auto& g = gs[rng() % gs.size()];
    if (!is_lsr_map(f, x, y).is_yes() || !is_lsr_map(g, y, z).is_yes()) continue;
    ++hits;
    CHECK(is_lsr_map(compose(g, f), x, z).is_yes());
  }
  CHECK(hits >= 300);
}

TEST_CASE("explicit equivalences") {
  // partition {a,b},{c} collapsed to a point: f is not an LS.R map
  auto part = ExplicitCoarse::from_partition(Universe::letters(3), {a | b, c}).lsr();
  auto pt = ExplicitLsr::from_generators(Universe::letters(1), std::vector<Family>{}, true);
  auto f = ExplicitMap::constant(3, 1, 0);
  for (unsigned s = 0; s < 3; ++s) {
    auto rep = ls_equivalence_report(f, ExplicitMap::constant(1, 3, s), part, pt);
    CHECK(rep.verdict().is_no());
    CHECK(rep.f_map.is_no());
    CHECK(rep.f_map.witness["preimage"] == "{a,b,c}");
  }
  // one block is equivalent to a point
  auto one = ExplicitCoarse::from_partition(Universe::letters(3), {a | b | c}).lsr();
  CHECK(is_ls_equivalence(f, ExplicitMap::constant(1, 3, 2), one, pt).is_yes());
  for (const auto& c : all_lsrs(3))
    CHECK(is_ls_equivalence(ExplicitMap::identity(3), ExplicitMap::identity(3), c, c).is_yes());
}

TEST_CASE("equivalences up to three points: definition, lemma and asdim") {
  std::size_t checked = 0;
  auto eqs = small_equivalences(checked);
  MESSAGE("verified equivalences: " << eqs.size() << " of " << checked << " map pairs");
  CHECK(eqs.size() > 100);
  for (const auto& p : eqs) {
    auto gf = after(p.g.table(), p.f.table()), fg = after(p.f.table(), p.g.table());
    CHECK(oracle_side(gf, p.x));
    CHECK(oracle_side(fg, p.y));
    CHECK(ls_equivalence_report(p.f, p.g, p.x, p.y).lemma_ii.is_yes());
    // Lemma part i: f∘g(ℬ) ∈ 𝔠′ ⇒ ℬ ∈ 𝔠′
    const std::uint64_t n = std::uint64_t{1} << (std::size_t{1} << p.y.width());
    for (std::uint64_t bcode = 0; bcode < n; ++bcode)
      if (p.y.member(oracle_img_family(fg, static_cast<FamilyCode>(bcode)))) CHECK(p.y.member(static_cast<FamilyCode>(bcode)));
    CHECK(asdim_explicit(p.x).asdim == asdim_explicit(p.y).asdim);
  }
}

TEST_CASE("line equivalences") {
  auto metric = LsrBackend::metric_line({1'000'000, 64});
  auto rep = ls_equivalence_report(LineMap::affine(2), LineMap::floor_div(2), metric, metric);
  CHECK(rep.verdict().is_yes());
  CHECK(rep.definition.witness["g∘f_displacement"] == 0);
  CHECK(rep.definition.witness["f∘g_displacement"] == 1);
  CHECK(rep.lemma_ii.is_yes());

  CHECK(is_ls_equivalence(LineMap::affine(1), LineMap::affine(1), metric, metric).is_yes());
  CHECK(is_ls_equivalence(LineMap::affine(1, 3), LineMap::floor_div(1), metric, metric).is_yes());

  auto stretch = ls_equivalence_report(LineMap::affine(2), LineMap::affine(1), metric, metric);
  REQUIRE(stretch.verdict().is_no());
  // re-check the witness: the image point is far from the sparse set
  auto w = stretch.definition.witness;
  auto geo = LineSet::from_json(w["B"]);
  CHECK(geo.contains(w["point"].get<Nat>()));
  CHECK(w["image"].get<Nat>() == 2 * w["point"].get<Nat>());
  CHECK_FALSE(geo.distance(w["image"].get<Nat>()).le(64));

  auto far = ls_equivalence_report(LineMap::affine(1, 100), LineMap::floor_div(1), metric, metric);
  CHECK(far.verdict().is_unknown());

  auto topo = LsrBackend::topo_trace();
  CHECK(is_ls_equivalence(LineMap::affine(2), LineMap::floor_div(2), topo, topo).is_yes());
  CHECK(is_ls_equivalence(LineMap::affine(3), LineMap::affine(1), topo, topo).is_yes());
}

TEST_CASE("randomized four-point equivalences keep asdim") {
  std::vector<ExplicitLsr> partners;
  for (std::size_t w = 1; w <= 3; ++w)
    for (auto& c : all_lsrs(w)) partners.push_back(c);
  std::mt19937 rng(41);
  for (int i = 0; i < 30; ++i) partners.push_back(random_lsr(rng, 4, 1 + rng() % 3, 4));
  auto pairs = random_width4_equivalences(50, 29, partners);
  REQUIRE(pairs.size() == 50);
  for (const auto& p : pairs) {
    CHECK(oracle_side(after(p.g.table(), p.f.table()), p.x));
    CHECK(oracle_side(after(p.f.table(), p.g.table()), p.y));
    CHECK(asdim_explicit(p.x).asdim == asdim_explicit(p.y).asdim);
  }
}
