#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "coarselab/setcore.hpp"

using namespace coarselab;

namespace {

// Independent model: a family is a std::set of std::set<int>.
using SetModel = std::set<int>;
using FamModel = std::set<SetModel>;

FamModel model(const Family& f) {
  FamModel out;
  for (Mask m : f.members()) {
    SetModel s;
    for (int i = 0; i < 32; ++i)
      if ((m >> i) & 1u) s.insert(i);
    out.insert(s);
  }
  return out;
}

FamModel model_vee(const FamModel& a, const FamModel& b) {
  FamModel out;
  for (const auto& x : a)
    for (const auto& y : b) {
      SetModel u = x;
      u.insert(y.begin(), y.end());
      out.insert(u);
    }
  return out;
}

bool model_refines(const FamModel& b, const FamModel& a) {
  for (const auto& big : a) {
    bool found = false;
    for (const auto& small : b)
      if (std::includes(big.begin(), big.end(), small.begin(), small.end())) found = true;
    if (!found) return false;
  }
  return true;
}

Family random_family(std::mt19937& rng, std::size_t width, std::size_t max_members) {
  std::uniform_int_distribution<Mask> pick(0, (Mask{1} << width) - 1);
  std::uniform_int_distribution<std::size_t> count(0, max_members);
  std::vector<Mask> ms;
  for (std::size_t i = count(rng); i > 0; --i) ms.push_back(pick(rng));
  return Family(width, ms);
}

const Universe abc = Universe::letters(3);
Mask A = 1, B = 2, C = 4;

}  // namespace

TEST_CASE("vee examples") {
  CHECK(vee(Family(3, {A}), Family(3, {B})) == Family(3, {A | B}));
  Family f(3, {A, A | C, B});
  CHECK(vee(f, Family(3, {0})) == f);
  CHECK(vee(Family(3, {A, B}), Family(3, {B, C})) == Family(3, {A | B, A | C, B, B | C}));
}

TEST_CASE("ll_refines examples") {
  CHECK(ll_refines(Family(3, {A}), Family(3, {A | B})));
  Family f(3, {A, B | C});
  CHECK(ll_refines(f, f));
  CHECK_FALSE(ll_refines(Family(3, {A | B}), Family(3, {A, B})));
  // Being a subfamily does not imply refinement.
  CHECK_FALSE(ll_refines(Family(3, {A}), Family(3, {A, B})));
}

TEST_CASE("universe mismatch throws") {
  try {
    (void)vee(Family(2, {1}), Family(3, {1}));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UniverseMismatch);
  }
  CHECK_THROWS_AS((void)ll_refines(Family(2, {1}), Family(3, {1})), Error);
}

TEST_CASE("downward_closure examples") {
  std::vector<Family> one{Family(3, {A, A | B})};
  auto c = downward_closure(one);
  // Canonical order is lexicographic on the sorted member masks.
  CHECK(c == std::vector<Family>{Family(3, {}), Family(3, {A}), Family(3, {A, A | B}), Family(3, {A | B})});
  CHECK(downward_closure(std::vector<Family>{}).empty());

  std::vector<Family> gens{Family(3, {A, A | B}), Family(3, {A | C, A | B | C})};
  auto g = downward_closure(gens);
  // Oracle: enumerate the subfamilies of each generator by hand.
  std::set<FamModel> expect;
  for (const auto& gen : gens) {
    auto m = model(gen);
    std::vector<SetModel> items(m.begin(), m.end());
    for (unsigned sel = 0; sel < (1u << items.size()); ++sel) {
      FamModel sub;
      for (std::size_t i = 0; i < items.size(); ++i)
        if ((sel >> i) & 1u) sub.insert(items[i]);
      expect.insert(sub);
    }
  }
  CHECK(g.size() == 7);
  CHECK(expect.size() == 7);
  for (const auto& f : g) CHECK(expect.count(model(f)) == 1);
}

TEST_CASE("downward_closure respects the cap") {
  std::vector<Family> big{Family(4, {1, 2, 3, 4, 5, 6, 7, 8})};
  try {
    (void)downward_closure(big, 100);
    FAIL("expected cap exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CapExceeded);
  }
}

TEST_CASE("property: vee matches model, is associative, commutative, unital") {
  std::mt19937 rng(11);
  for (int t = 0; t < 300; ++t) {
    auto a = random_family(rng, 4, 4), b = random_family(rng, 4, 4), c = random_family(rng, 4, 4);
    CHECK(model(vee(a, b)) == model_vee(model(a), model(b)));
    CHECK(vee(a, b) == vee(b, a));
    CHECK(vee(vee(a, b), c) == vee(a, vee(b, c)));
    CHECK(vee(a, Family(4, {0})) == a);
    CHECK(vee(a, b).size() <= a.size() * b.size());
  }
}

TEST_CASE("property: ll_refines matches model, reflexive and transitive") {
  std::mt19937 rng(12);
  for (int t = 0; t < 400; ++t) {
    auto a = random_family(rng, 3, 3), b = random_family(rng, 3, 3), c = random_family(rng, 3, 3);
    CHECK(ll_refines(b, a) == model_refines(model(b), model(a)));
    CHECK(ll_refines(a, a));
    if (ll_refines(c, b) && ll_refines(b, a)) CHECK(ll_refines(c, a));
  }
}

TEST_CASE("property: downward_closure idempotent and monotone") {
  std::mt19937 rng(13);
  for (int t = 0; t < 60; ++t) {
    std::vector<Family> fams{random_family(rng, 3, 3), random_family(rng, 3, 3)};
    auto c1 = downward_closure(fams);
    CHECK(downward_closure(c1) == c1);
    std::vector<Family> more = fams;
    more.push_back(random_family(rng, 3, 3));
    auto c2 = downward_closure(more);
    for (const auto& f : c1) CHECK(std::binary_search(c2.begin(), c2.end(), f));
  }
}

TEST_CASE("family codes agree with families") {
  std::mt19937 rng(14);
  for (int t = 0; t < 300; ++t) {
    auto a = random_family(rng, 4, 4), b = random_family(rng, 4, 4);
    CHECK(decode(encode(a), 4) == a);
    CHECK(decode(vee(encode(a), encode(b)), 4) == vee(a, b));
    CHECK(ll_refines(encode(b), encode(a), 4) == ll_refines(b, a));
  }
  CHECK(decode(up_code(A, 2), 2) == Family(2, {A, A | B}));
  CHECK(decode(down_code(A | B, 2), 2) == Family(2, {0, A, B, A | B}));
  CHECK(meet(encode(Family(3, {A | B, A | C})), 3) == A);
  CHECK(format_code(encode(Family(3, {A, B | C})), abc) == "{{a},{b,c}}");
}

TEST_CASE("universe validation") {
  CHECK_THROWS_AS(Universe(std::vector<std::string>{"a", "a"}), Error);
  CHECK_THROWS_AS(Universe(std::vector<std::string>{}), Error);
  try {
    Universe(std::vector<std::string>(17, "x"));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CapExceeded);
  }
  CHECK(abc.format(A | C) == "{a,c}");
  std::vector<std::string> labels{"c", "a"};
  CHECK(abc.parse(labels) == (A | C));
}
