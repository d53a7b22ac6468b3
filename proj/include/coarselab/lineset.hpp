#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarselab/error.hpp"
#include "coarselab/verdict.hpp"

namespace coarselab {

inline constexpr Nat kNatMax = std::numeric_limits<Nat>::max();

/// Largest lcm of progression steps accepted by the exact engine.
inline constexpr Nat kPeriodCap = Nat{1} << 21;

/// A distance in N ∪ {inf}.
struct ExtDistance {
  Nat value = 0;
  bool infinite = false;

  static ExtDistance inf() { return {0, true}; }
  static ExtDistance of(Nat v) { return {v, false}; }

  bool le(Nat k) const { return !infinite && value <= k; }
  std::string text() const { return infinite ? "inf" : std::to_string(value); }
  json to_json() const { return infinite ? json("inf") : json(value); }

  bool operator==(const ExtDistance&) const = default;
};

struct Progression {
  Nat start = 0;
  Nat step = 1;
  bool operator==(const Progression&) const = default;
  auto operator<=>(const Progression&) const = default;
};

enum class GapKind { Bounded, Divergent, Undeclared };

/// Declared behaviour of the gaps between consecutive elements.
struct GapCertificate {
  GapKind kind = GapKind::Undeclared;
  Nat bound = 0;  // only for Bounded
};

/// Closed-form description of an eventually periodic set: finite part,
/// progressions and removals, plus the index used for rank and select.
struct PeriodicData {
  std::vector<Nat> finite;
  std::vector<Progression> progressions;
  std::vector<Nat> removals;

  Nat start_max = 0;          // largest progression start
  Nat period = 1;             // lcm of the steps
  std::vector<Nat> residues;  // r in [0, period) with start_max + r in the progression union
  std::vector<Nat> head;      // progression elements below start_max
  std::vector<Nat> extra;     // finite-part elements outside the progressions
  Nat base = 0;               // one past every finite, removal and start value

  bool infinite() const { return !progressions.empty(); }
  bool contains(Nat n) const;
  bool in_progressions(Nat n) const;
  Nat rank(Nat n) const;  // elements < n
  std::optional<Nat> next(Nat n) const;
  std::optional<Nat> prev(Nat n) const;
  Nat size() const;  // finite sets only
};

/// Immutable symbolic subset of N.
class LineSet {
 public:
  enum class Kind { Finite, Periodic, Blocks, Geometric };
  struct Impl;

  LineSet();

  static LineSet finite(std::vector<Nat> elements);
  static LineSet periodic(std::vector<Nat> finite_part, std::vector<Progression> progressions,
                          std::vector<Nat> removals = {});
  static LineSet progression(Nat start, Nat step) { return periodic({}, {{start, step}}); }
  static LineSet naturals() { return progression(0, 1); }
  static LineSet evens() { return progression(0, 2); }
  static LineSet odds() { return progression(1, 2); }
  static LineSet geometric(Nat m, Nat b, Nat k0);

  /// Eventually periodic set agreeing with `pred` everywhere, periodic with
  /// `period` from `base` on. `pred` is only sampled below base + period.
  template <class Pred>
  static LineSet from_predicate(Nat base, Nat period, Pred&& pred) {
    std::vector<Nat> head;
    std::vector<Progression> progs;
    for (Nat n = 0; n < base; ++n)
      if (pred(n)) head.push_back(n);
    for (Nat r = 0; r < period; ++r)
      if (pred(base + r)) progs.push_back({base + r, period});
    return periodic(std::move(head), std::move(progs));
  }

  /// Enumeration indices [4^j, 2*4^j) (part 1) or [2*4^j, 4^(j+1)) (part 2) of `parent`.
  static LineSet sparsify_part(const LineSet& parent, int part);
  /// Blocks [s_j, s_j + width) with s_j = j*width + 2^j - 1.
  static LineSet gap_doubling(Nat width);
  /// {n : d(n, target) <= d(n, other)}.
  static LineSet nearer_to(const LineSet& target, const LineSet& other);
  static LineSet unite(const LineSet& a, const LineSet& b);

  static LineSet from_json(const json& j);
  json to_json() const;
  std::string describe() const;

  Kind kind() const;
  /// Finite and Periodic sets: every question about them is decidable.
  bool exact() const { return kind() == Kind::Finite || kind() == Kind::Periodic; }
  const PeriodicData* periodic_data() const;
  GapCertificate gap() const;

  bool contains(Nat n) const;
  std::optional<Nat> next(Nat n) const;  // least element >= n
  std::optional<Nat> prev(Nat n) const;  // greatest element <= n
  Nat rank(Nat n) const;                 // number of elements < n
  std::optional<Nat> select(Nat i) const;
  bool is_finite() const;
  bool empty() const { return !next(0).has_value(); }
  std::vector<Nat> window(Nat hi) const;
  /// d(n, this); infinite when the set is empty.
  ExtDistance distance(Nat n) const;

 private:
  explicit LineSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

inline bool member(const LineSet& s, Nat n) { return s.contains(n); }
inline std::vector<Nat> window(const LineSet& s, Nat hi) { return s.window(hi); }
inline bool is_finite(const LineSet& s) { return s.is_finite(); }

/// d(n, s) for every n in [0, hi], exact (elements above hi are taken into account).
std::vector<Nat> distance_profile(const LineSet& s, Nat hi);

/// sup over a of d(x, b). Exact tier only.
ExtDistance directed_distance(const LineSet& a, const LineSet& b);
/// Extended Hausdorff distance. Exact tier only; empty inputs are rejected.
ExtDistance hausdorff_distance(const LineSet& a, const LineSet& b);

/// Upper end of a window over which every exact-tier distance question about
/// `sets` stabilises.
Nat stabilization_bound(std::initializer_list<const LineSet*> sets);

/// Scale-k test of d_H(a, b) <= k. No carries a point at distance > k from the
/// other set; Yes only on the exact tier.
TriVerdict hausdorff_at_scale(const LineSet& a, const LineSet& b, Nat k, Nat hi);

/// Yes with consecutive elements (x, y), y - x > g; exact No on the exact tier.
TriVerdict verify_gap_certificate(const LineSet& s, Nat g, Nat hi);

/// Checks the declared gap certificate against the window [0, hi].
TriVerdict check_declared_gaps(const LineSet& s, Nat hi);

std::pair<LineSet, LineSet> sparsify_split(const LineSet& l);

struct NormalitySplit {
  LineSet x1;  // points at least as close to b as to a
  LineSet x2;  // points at least as close to a as to b
  TriVerdict verdict;
};

/// Splits N into X1 ∪ X2 with X1 away from a and X2 away from b. The verdict
/// checks coverage of [0, hi] and, for every k <= max_scale, exhibits points of
/// a at distance > k from X1 and points of b at distance > k from X2.
NormalitySplit normality_split(const LineSet& a, const LineSet& b, Nat hi, Nat max_scale = 32);

/// Whether the sets share an element. Exact when some set is a finite exact
/// set or all sets are exact; otherwise only [0, hi] is searched.
struct IntersectionResult {
  Outcome outcome = Outcome::Unknown;
  std::optional<Nat> witness;
};
IntersectionResult intersects(const std::vector<LineSet>& sets, Nat hi);

/// Exact union of two exact-tier sets, kept in exact form.
LineSet union_exact(const LineSet& a, const LineSet& b);

/// Exact on the exact tier: an infinite and a finite set are asymptotically
/// disjoint, two infinite periodic sets never are, two finite sets always are.
bool asymptotically_disjoint_exact(const LineSet& a, const LineSet& b);

}  // namespace coarselab
