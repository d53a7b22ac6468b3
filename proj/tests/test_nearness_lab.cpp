#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "coarselab/nearness_lab.hpp"
#include "support.hpp"

using namespace coarselab;
using namespace support;

namespace {

// Brute distance from n to a sorted element list.
Nat brute_dist(const std::vector<Nat>& s, Nat n) {
  Nat best = kNatMax;
  for (Nat x : s) best = std::min(best, x > n ? x - n : n - x);
  return best;
}

// Elements of `s` whose enumeration index lies in [4^j, 2*4^j) (part 1) or [2*4^j, 4^(j+1)).
std::vector<Nat> oracle_part(const std::vector<Nat>& s, int part) {
  std::vector<Nat> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t p = 1;
    while (p * 4 <= i) p *= 4;
    const bool first = i >= p && i < 2 * p;
    if (i > 0 && (part == 1) == first) out.push_back(s[i]);
  }
  return out;
}

bool oracle_far(const std::vector<Nat>& x, Nat p, Nat k) {
  for (Nat q : x)
    if ((q > p ? q - p : p - q) <= k) return false;
  return true;
}

// Bunch axioms straight from the definition; the empty collection is not a bunch.
bool oracle_bunch(const ExplicitNearness& n, FamilyCode cand) {
  const Mask top = Mask{1} << n.width();
  if (cand == 0 || !n.near(cand)) return false;
  auto in = [&](Mask m) { return ((cand >> m) & 1u) != 0; };
  for (Mask x = 0; x < top; ++x)
    for (Mask y = 0; y < top; ++y)
      if (in(x | y) != (in(x) || in(y))) return false;
  for (Mask x = 0; x < top; ++x)
    if (in(n.closure()[x]) && !in(x)) return false;
  return true;
}

bool oracle_cluster(const ExplicitProximity& p, std::size_t width, FamilyCode cand) {
  const Mask top = Mask{1} << width;
  auto in = [&](Mask m) { return ((cand >> m) & 1u) != 0; };
  if (cand == 0) return false;
  for (Mask x = 0; x < top; ++x)
    for (Mask y = 0; y < top; ++y) {
      if (in(x) && in(y) && !p.near(x, y)) return false;
      if (in(x | y) != (in(x) || in(y))) return false;
    }
  for (Mask x = 0; x < top; ++x) {
    bool all = true;
    for (Mask y = 0; y < top; ++y) all = all && (!in(y) || p.near(x, y));
    if (all && !in(x)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("evens and odds give an obstruction") {
  ObstructionResult r = bunch_obstruction({LineSet::evens(), LineSet::odds()});
  REQUIRE(r.built());
  const BunchObstruction& o = *r.obstruction;
  CHECK(o.ok);
  CHECK(o.budget.window == 100'000);
  CHECK(o.budget.max_scale == 32);
  CHECK(o.scales.size() == 33);
  CHECK(o.split.size() == 33);
  CHECK(o.members["pairwise"][0]["hausdorff"] == 1);

  const Nat w = 4000;
  std::vector<Nat> evens;
  for (Nat x = 0; x <= 4 * w; x += 2) evens.push_back(x);
  const auto l1 = oracle_part(evens, 1), l2 = oracle_part(evens, 2);
  auto upto = [&](const std::vector<Nat>& v) {
    std::vector<Nat> out;
    for (Nat x : v)
      if (x <= w) out.push_back(x);
    return out;
  };
  CHECK(o.l1.window(w) == upto(l1));
  CHECK(o.l2.window(w) == upto(l2));
  CHECK(o.l1.window(w).front() == 2);
  // X1 collects points at least as close to L2 as to L1: the midpoint split.
  for (Nat n = 0; n <= w; ++n) {
    CHECK(o.x1.contains(n) == (brute_dist(l2, n) <= brute_dist(l1, n)));
    CHECK(o.x2.contains(n) == (brute_dist(l1, n) <= brute_dist(l2, n)));
  }
  // Scale witnesses, and the canonical candidate count on a small window.
  const auto x1 = o.x1.window(o.budget.window), x2 = o.x2.window(o.budget.window);
  for (const auto& row : o.scales) {
    const Nat k = row["k"].get<Nat>();
    const Nat p1 = row["x1"]["point_of_l1"].get<Nat>(), p2 = row["x2"]["point_of_l2"].get<Nat>();
    CHECK(p1 % 2 == 0);
    CHECK(oracle_far(x1, p1, k));
    CHECK(oracle_far(x2, p2, k));
  }
  const auto lw = LineSet::evens().window(o.budget.window + 40);
  Nat c3 = 0;
  for (Nat x : x1) c3 += brute_dist(lw, x) <= 3 ? 1 : 0;
  CHECK(o.scales[3]["x1"]["candidate_size"].get<Nat>() == c3);
  CHECK(c3 == x1.size());  // every point is within 1 of the evens

  CHECK(validate_obstruction(o).is_yes());
  const BunchObstruction back = BunchObstruction::from_json(o.to_json());
  CHECK(back.to_json() == o.to_json());
  CHECK(validate_obstruction(back).is_yes());
}

TEST_CASE("obstruction rejections") {
  ObstructionResult same = bunch_obstruction({LineSet::evens(), LineSet::evens()});
  CHECK_FALSE(same.built());
  CHECK(same.rejection.find("closures meet") != std::string::npos);
  CHECK(same.witness["point"] == 0);

  ObstructionResult mixed = bunch_obstruction({LineSet::finite({1}), LineSet::evens()});
  CHECK_FALSE(mixed.built());
  CHECK(mixed.rejection == "family is not near");

  // Pairwise meeting but with no common point is still an obstruction.
  ObstructionResult three = bunch_obstruction(
      {LineSet::periodic({}, {{0, 3}, {1, 3}}), LineSet::periodic({}, {{1, 3}, {2, 3}}),
       LineSet::periodic({}, {{0, 3}, {2, 3}})},
      {20'000, 16});
  CHECK(three.built());

  CHECK_THROWS_AS(bunch_obstruction({}), Error);
  CHECK_THROWS_AS(bunch_obstruction({LineSet::evens()}, {10, 32}), Error);
}

TEST_CASE("tampered obstructions fail validation") {
  const BunchObstruction o = *bunch_obstruction({LineSet::evens(), LineSet::odds()}, {20'000, 16}).obstruction;
  REQUIRE(validate_obstruction(o).is_yes());

  BunchObstruction t = o;
  t.x1 = LineSet::naturals();
  CHECK(validate_obstruction(t).is_no());

  t = o;
  t.scales[5]["x1"]["point_of_l1"] = t.scales[5]["x2"]["point_of_l2"];
  CHECK(validate_obstruction(t).is_no());

  t = o;
  t.scales[2]["x2"]["candidate_size"] = 0;
  CHECK(validate_obstruction(t).is_no());

  t = o;
  t.l1 = LineSet::odds();
  CHECK(validate_obstruction(t).is_no());

  t = o;
  t.split.erase(t.split.size() - 1);
  CHECK(validate_obstruction(t).is_no());

  t = o;
  t.family = {LineSet::evens(), LineSet::evens()};
  t.witness = t.family;
  CHECK(validate_obstruction(t).is_no());

  t = o;
  t.ok = false;
  CHECK(validate_obstruction(t).is_no());

  json j = o.to_json();
  j.erase("x2");
  CHECK_THROWS_AS(BunchObstruction::from_json(j), Error);
}

TEST_CASE("random near families with empty intersection") {
  std::mt19937 rng(5);
  int built = 0;
  for (int i = 0; i < 200; ++i) {
    const auto fam = random_near_line_family(rng);
    ObstructionResult r = bunch_obstruction(fam);
    INFO(i << ": " << fam[0].describe() << " ; " << r.rejection);
    REQUIRE(r.built());
    CHECK(r.obstruction->scales.size() == 33);
    if (i % 20 == 0) CHECK(validate_obstruction(*r.obstruction).is_yes());
    ++built;
  }
  CHECK(built == 200);
}

TEST_CASE("bunch search examples") {
  const Universe u = Universe::letters(3);
  const ExplicitNearness top = ExplicitNearness::topological(u);
  BunchSearch s = bunch_exists_explicit(code_of({a}), top);
  REQUIRE(s.found);
  FamilyCode point_a = 0;
  for (Mask m = 0; m < 8; ++m)
    if (m & a) point_a |= code_bit(m);
  CHECK(s.bunch == point_a);
  CHECK(oracle_bunch(top, s.bunch));
  CHECK(s.bunches == 3);
  CHECK(s.to_json(u)["bunch"] == json::array({"{a}", "{a,b}", "{a,c}", "{a,b,c}"}));

  CHECK_THROWS_AS(bunch_exists_explicit(code_of({a, b}), top), Error);

  // Only ∅-free families can be near, but a near family need not sit in a bunch.
  const ExplicitNearness everything = ExplicitNearness::all_without_empty(u);
  BunchSearch all = bunch_exists_explicit(code_of({a, b}), everything);
  CHECK(all.found == oracle_bunch(everything, all.bunch));
}

TEST_CASE("bunch search vs the definition") {
  int checked = 0;
  for (std::size_t w = 1; w <= 3; ++w) {
    const Universe u = Universe::letters(w);
    std::vector<ExplicitNearness> spaces;
    all_closures(w, [&](const ClosureTable& cl) { spaces.push_back(ExplicitNearness::topological(u, cl)); });
    for (const auto& l : all_valid_asrs(w)) {
      try {
        spaces.push_back(ExplicitNearness::from_proximity(proximity_of(l)));
      } catch (const Error&) {
      }
    }
    for (const auto& c : all_lsrs(w)) spaces.push_back(ExplicitNearness::induced(c));
    const FamilyCode codes = FamilyCode{1} << (std::size_t{1} << w);
    for (const auto& n : spaces)
      for (FamilyCode f = 0; f < codes; ++f) {
        if (!n.near(f)) {
          CHECK_THROWS_AS(bunch_exists_explicit(f, n), Error);
          continue;
        }
        BunchSearch s = bunch_exists_explicit(f, n);
        FamilyCode best = 0;
        bool found = false;
        for (FamilyCode cand = 0; cand < codes; ++cand)
          if ((cand & f) == f && oracle_bunch(n, cand) &&
              (!found || std::popcount(cand) < std::popcount(best) ||
               (std::popcount(cand) == std::popcount(best) && cand < best))) {
            best = cand;
            found = true;
          }
        CHECK(s.found == found);
        if (found) CHECK(s.bunch == best);
        ++checked;
      }
  }
  CHECK(checked > 1000);
}

TEST_CASE("proximity contrast: near pairs extend to clusters") {
  for (std::size_t w = 1; w <= 3; ++w) {
    ContrastRow row = contrast_proximity_pairs(w);
    INFO(w << " " << row.failure.dump());
    CHECK(row.proximities > 0);
    CHECK(row.near_pairs > 0);
    CHECK(row.holds());
  }
  CHECK_THROWS_AS(contrast_proximity_pairs(4), Error);

  // Independent check on partition proximities with the cluster definition.
  point_partitions(3, [&](const std::vector<Mask>& blocks) {
    const auto p = ExplicitProximity::from_partition(Universe::letters(3), blocks);
    for (Mask x = 1; x < 8; ++x)
      for (Mask y = x; y < 8; ++y) {
        if (!p.near(x, y)) continue;
        bool ext = false;
        for (FamilyCode cand = 1; cand < 256 && !ext; ++cand)
          ext = ((cand >> x) & 1u) && ((cand >> y) & 1u) && oracle_cluster(p, 3, cand);
        CHECK(ext);
      }
  });
}

TEST_CASE("line pipeline and explicit contrast side by side") {
  ObstructionResult line = bunch_obstruction({LineSet::evens(), LineSet::odds()}, {20'000, 16});
  ContrastRow explicit_row = contrast_proximity_pairs(3);
  CHECK(line.built());
  CHECK(explicit_row.holds());
}
