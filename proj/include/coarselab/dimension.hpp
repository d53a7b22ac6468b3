#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarselab/backends.hpp"

namespace coarselab {

inline constexpr std::size_t kTransversalCap = 12;
inline constexpr std::size_t kSubfamilyCap = 8;

/// 𝒜_𝒱: subsets of ⋃𝒱 meeting every member of 𝒱. Empty 𝒱 is rejected.
Family transversal_family(std::size_t width, std::span<const Mask> v);

/// Uniform boundedness of a finite cover on an explicit backend, exhaustive over
/// nonempty subfamilies (|𝒰| <= 8). No carries the failing subfamily.
TriVerdict is_uniformly_bounded(const LsrBackend& b, const std::vector<Mask>& cover);

/// Indexed interval family on N, i >= 1:
///   U_i = [lo(i), lo(i) + len(i)],  lo(i) = a1*i/b1 + c1,  len(i) = a2*i/b2 + c2  (integer division).
struct IntervalRule {
  Nat a1 = 1, b1 = 1, c1 = 0;
  Nat a2 = 0, b2 = 1, c2 = 0;
  std::string name = "intervals";

  static IntervalRule adjacent_pairs() { return {1, 1, 0, 0, 1, 1, "adjacent-pairs"}; }
  static IntervalRule i_to_2i() { return {1, 1, 0, 1, 1, 0, "i-to-2i"}; }
  static IntervalRule singletons() { return {1, 1, 0, 0, 1, 0, "singletons"}; }

  Nat lo(Nat i) const { return a1 * i / b1 + c1; }
  Nat len(Nat i) const { return a2 * i / b2 + c2; }
  std::vector<Nat> member(Nat i) const;
  /// Each point lies in finitely many distinct members.
  bool star_finite() const { return a1 > 0 || a2 == 0; }
  bool bounded_diameter() const { return a2 == 0; }

  static IntervalRule from_json(const json& j);
  json to_json() const;
};

/// MetricLine: Yes iff diameters are bounded (witness R). TopoTrace: Yes iff
/// every member is finite and the family is star-finite.
TriVerdict is_uniformly_bounded(const LsrBackend& b, const IntervalRule& rule);

/// Cover of a window of N by finite sets (each sorted, nonempty).
struct PointCover {
  Nat lo = 1, hi = 0;
  std::vector<std::vector<Nat>> members;

  /// Members of `rule` restricted to [lo, hi] (indices whose member meets the window).
  static PointCover from_rule(const IntervalRule& rule, Nat lo, Nat hi);
  bool covers() const;
  json to_json() const;
};

std::size_t multiplicity(const std::vector<Mask>& cover, std::size_t width);
std::size_t multiplicity(const PointCover& cover);

/// u refines v: map[i] is an index of v containing u[i]; nullopt names a u-member with no host.
struct Refinement {
  bool ok = false;
  std::vector<std::size_t> map;
  std::optional<std::size_t> orphan;
};
Refinement refines(const std::vector<Mask>& u, const std::vector<Mask>& v);
Refinement refines(const PointCover& u, const PointCover& v);

struct CoarseningCertificate {
  std::vector<Nat> a;  // a_1, a_2, ...
  PointCover v;
  Refinement refinement;
  std::vector<std::size_t> incidence;  // points lo..hi
  std::size_t multiplicity = 0;
  bool intervals_disjoint_two_apart = false;  // V_n ∩ V_m = ∅ for m >= n + 2
  TriVerdict uniformly_bounded;               // on TopoTrace
  json to_json() const;
};

/// Greedy interval coarsening on the window [1, N]. Throws Precondition when u
/// does not cover the window.
CoarseningCertificate greedy_interval_coarsen(const PointCover& u);
/// Rule form: checks star-finiteness first (throws naming the point with an
/// infinite star) and uses every member meeting [1, N].
CoarseningCertificate greedy_interval_coarsen(const IntervalRule& rule, Nat n);

/// Uniformly bounded families of an explicit LS.R (|X| <= 4), as codes over
/// nonempty subsets: bit m set iff the subset with mask m belongs to the family.
class UniformTable {
 public:
  explicit UniformTable(const ExplicitLsr& c);
  std::size_t width() const { return w_; }
  bool transversal_member(FamilyCode v) const;  // 𝒜_𝒱 ∈ 𝔠
  bool uniformly_bounded(FamilyCode u) const;
  bool is_cover(FamilyCode u) const;
  /// Uniformly bounded covers not contained in a larger uniformly bounded family.
  std::vector<FamilyCode> maximal_covers() const;
  std::vector<FamilyCode> covers() const;

 private:
  std::size_t w_;
  std::vector<bool> trans_, ub_;
};

struct AsdimResult {
  unsigned asdim = 0;
  /// For each maximal uniformly bounded cover U: a coarsening V of multiplicity <= asdim + 1.
  struct Certificate {
    FamilyCode u = 0, v = 0;
    std::size_t multiplicity = 0;
    std::vector<std::size_t> map;
  };
  std::vector<Certificate> certificates;
  /// When asdim > 0: a cover with no uniformly bounded coarsening of multiplicity <= asdim.
  std::optional<FamilyCode> lower_bound_cover;
  std::size_t ub_covers = 0;
  json to_json(const Universe& u) const;
};

AsdimResult asdim_explicit(const ExplicitLsr& c);
AsdimResult asdim_explicit(const LsrBackend& b);

struct TopoLineReport {
  struct Window {
    Nat n = 0;
    std::size_t intervals = 0;
    std::size_t multiplicity = 0;
    bool refines = false;
    bool uniformly_bounded = false;
    bool chain_forces_window = false;  // every multiplicity-1 coarsening has a member ⊇ [1, N]
    Nat forced_member_size = 0;
  };
  std::vector<Window> windows;
  bool certified = false;
  std::string conclusion;
  json to_json() const;
};

/// Upper bound via greedy coarsening of {{n, n+1}}; lower bound via chain
/// propagation on each window.
TopoLineReport asdim_topo_line_report(const std::vector<Nat>& windows);

/// Chain propagation: the blocks of the finest multiplicity-1 cover that
/// `cover` refines (connected components of the overlap graph).
std::vector<std::vector<Nat>> forced_blocks(const PointCover& cover);

}  // namespace coarselab
