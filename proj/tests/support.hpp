#pragma once

// Shared oracle helpers for the test binaries. Nothing here calls the checkers
// under test except where a test explicitly builds inputs through them.

#include <algorithm>
#include <deque>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "coarselab/maps.hpp"
#include "coarselab/structures.hpp"

namespace support {

using namespace coarselab;

inline constexpr Mask a = 1, b = 2, c = 4, d = 8;

using Fam = std::set<Mask>;

inline Fam fam_of(FamilyCode code) {
  Fam f;
  for (Mask m = 0; m < 32; ++m)
    if ((code >> m) & 1u) f.insert(m);
  return f;
}

inline FamilyCode code_of(const Fam& f) {
  FamilyCode out = 0;
  for (Mask m : f) out |= FamilyCode{1} << m;
  return out;
}

inline std::vector<Mask> masks_of(FamilyCode code) {
  auto f = fam_of(code);
  return {f.begin(), f.end()};
}

inline ExplicitLsr abc_instance() {
  std::vector<Family> gens{Family(3, {a, a | b}), Family(3, {a | c, a | b | c})};
  return ExplicitLsr::from_generators(Universe::letters(3), gens, true);
}

/// All partitions of {0..n-1} as restricted growth strings.
inline void partitions(std::size_t n, const std::function<void(const std::vector<int>&)>& f) {
  if (n == 0) return;
  std::vector<int> rg(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int mx) {
    if (i == n) {
      f(rg);
      return;
    }
    for (int v = 0; v <= mx + 1; ++v) {
      rg[i] = v;
      rec(i + 1, std::max(mx, v));
    }
  };
  rec(1, 0);
}

/// Partition of the points {0..n-1} as block masks.
inline std::vector<Mask> blocks_of(const std::vector<int>& rg) {
  int k = *std::max_element(rg.begin(), rg.end()) + 1;
  std::vector<Mask> out(k, 0);
  for (std::size_t i = 0; i < rg.size(); ++i) out[rg[i]] |= Mask{1} << i;
  return out;
}

inline void point_partitions(std::size_t n, const std::function<void(const std::vector<Mask>&)>& f) {
  partitions(n, [&](const std::vector<int>& rg) { f(blocks_of(rg)); });
}

inline std::vector<ExplicitAsr> all_valid_asrs(std::size_t width) {
  std::vector<ExplicitAsr> out;
  partitions(std::size_t{1} << width, [&](const std::vector<int>& rg) {
    ExplicitAsr l(Universe::letters(width), rg);
    if (check_asr_axioms(l).passed()) out.push_back(l);
  });
  return out;
}

inline Family random_family(std::mt19937& rng, std::size_t width, std::size_t max_members) {
  std::uniform_int_distribution<Mask> pick(0, (Mask{1} << width) - 1);
  std::uniform_int_distribution<std::size_t> count(1, max_members);
  std::vector<Mask> ms;
  for (std::size_t i = count(rng); i > 0; --i) ms.push_back(pick(rng));
  return Family(width, ms);
}

inline ExplicitLsr random_lsr(std::mt19937& rng, std::size_t width, std::size_t gens, std::size_t max_members) {
  std::vector<Family> g;
  for (std::size_t i = 0; i < gens; ++i) g.push_back(random_family(rng, width, max_members));
  return generate_lsr(Universe::letters(width), g);
}

/// Every LS.R on `width` <= 3 points: closure search from the singleton-only
/// structure, adding one family at a time (families may contain ∅).
inline std::vector<ExplicitLsr> all_lsrs(std::size_t width) {
  const Universe u = Universe::letters(width);
  std::vector<ExplicitLsr> seen{ExplicitLsr::from_generators(u, std::vector<Family>{}, true)};
  std::deque<std::size_t> todo{0};
  const std::uint64_t nfam = std::uint64_t{1} << (std::size_t{1} << width);
  while (!todo.empty()) {
    const ExplicitLsr cur = seen[todo.front()];
    todo.pop_front();
    for (std::uint64_t f = 1; f < nfam; ++f) {
      if (cur.member(static_cast<FamilyCode>(f))) continue;
      std::vector<Family> gens;
      for (FamilyCode m : cur.maximal()) gens.emplace_back(width, masks_of(m));
      gens.emplace_back(width, masks_of(static_cast<FamilyCode>(f)));
      auto next = generate_lsr(u, gens);
      if (std::find(seen.begin(), seen.end(), next) == seen.end()) {
        seen.push_back(std::move(next));
        todo.push_back(seen.size() - 1);
      }
    }
  }
  return seen;
}

/// Kuratowski closures from preorders: cl{x} = points below x.
inline void all_closures(std::size_t n, const std::function<void(const ClosureTable&)>& f) {
  const std::size_t pairs = n * n;
  for (std::uint32_t bits = 0; bits < (1u << pairs); ++bits) {
    std::vector<Mask> below(n);
    bool ok = true;
    for (std::size_t x = 0; x < n; ++x) {
      below[x] = 0;
      for (std::size_t y = 0; y < n; ++y)
        if ((bits >> (x * n + y)) & 1u) below[x] |= Mask{1} << y;
      ok = ok && ((below[x] >> x) & 1u);
    }
    for (std::size_t x = 0; x < n && ok; ++x)
      for (std::size_t y = 0; y < n && ok; ++y)
        if ((below[x] >> y) & 1u) ok = (below[y] & ~below[x]) == 0;
    if (!ok) continue;
    ClosureTable cl(std::size_t{1} << n, 0);
    for (Mask m = 0; m < cl.size(); ++m)
      for (std::size_t x = 0; x < n; ++x)
        if ((m >> x) & 1u) cl[m] |= below[x];
    f(cl);
  }
}

inline std::vector<ExplicitMap> all_maps(std::size_t dom, std::size_t cod) {
  std::vector<ExplicitMap> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < dom; ++i) total *= cod;
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<unsigned> t(dom);
    std::size_t r = k;
    for (auto& y : t) {
      y = static_cast<unsigned>(r % cod);
      r /= cod;
    }
    out.emplace_back(dom, cod, t);
  }
  return out;
}

struct EquivalentPair {
  ExplicitLsr x, y;
  ExplicitMap f, g;
};

/// Random LS.Rs on four points, each paired with the first partner (from
/// `partners`, in shuffled order) that admits a verified equivalence.
inline std::vector<EquivalentPair> random_width4_equivalences(std::size_t n, unsigned seed,
                                                             const std::vector<ExplicitLsr>& partners) {
  std::mt19937 rng(seed);
  std::vector<EquivalentPair> out;
  while (out.size() < n) {
    auto x = random_lsr(rng, 4, 1 + rng() % 3, 4);
    auto order = partners;
    std::shuffle(order.begin(), order.end(), rng);
    bool found = false;
    for (const auto& y : order) {
      std::vector<ExplicitMap> fs, gs;
      for (auto& f : all_maps(4, y.width()))
        if (is_lsr_map(f, x, y).is_yes()) fs.push_back(f);
      if (fs.empty()) continue;
      for (auto& g : all_maps(y.width(), 4))
        if (is_lsr_map(g, y, x).is_yes()) gs.push_back(g);
      for (std::size_t i = 0; i < fs.size() && !found; ++i)
        for (std::size_t j = 0; j < gs.size() && !found; ++j)
          if (is_ls_equivalence(fs[i], gs[j], x, y).is_yes()) {
            out.push_back({x, y, fs[i], gs[j]});
            found = true;
          }
      if (found) break;
    }
  }
  return out;
}

/// Near families of 2-4 infinite periodic sets (residues mod m plus finite extras)
/// whose members share no point.
inline std::vector<LineSet> random_near_line_family(std::mt19937& rng) {
  std::uniform_int_distribution<Nat> mod(2, 12), count(2, 4), extra(0, 80);
  for (;;) {
    const Nat m = mod(rng);
    std::vector<LineSet> fam;
    const std::size_t members = count(rng);
    for (std::size_t i = 0; i < members; ++i) {
      std::vector<Progression> progs;
      std::vector<Nat> fin;
      for (Nat r = 0; r < m; ++r)
        if (rng() % 3 == 0) progs.push_back({r + m * (rng() % 4), m});
      if (progs.empty()) progs.push_back({rng() % m, m});
      for (int e = rng() % 3; e > 0; --e) fin.push_back(extra(rng));
      fam.push_back(LineSet::periodic(fin, progs));
    }
    // empty intersection, checked far past every base and period
    bool common = false;
    for (Nat x = 0; x < 400 && !common; ++x)
      common = std::all_of(fam.begin(), fam.end(), [&](const LineSet& s) { return s.contains(x); });
    if (!common) return fam;
  }
}

}  // namespace support
