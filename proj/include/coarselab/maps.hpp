#pragma once

#include <string>
#include <vector>

#include "coarselab/backends.hpp"

namespace coarselab {

/// Total map between finite universes: table[x] is the image index of x.
class ExplicitMap {
 public:
  ExplicitMap() = default;
  ExplicitMap(std::size_t dom, std::size_t cod, std::vector<unsigned> table);
  static ExplicitMap identity(std::size_t n);
  static ExplicitMap constant(std::size_t dom, std::size_t cod, unsigned y);

  std::size_t domain_size() const { return dom_; }
  std::size_t codomain_size() const { return cod_; }
  const std::vector<unsigned>& table() const { return table_; }
  unsigned operator()(unsigned x) const { return table_.at(x); }

  Mask image(Mask a) const;
  Mask preimage(Mask b) const;
  /// f(𝒜) = {f(A) : A ∈ 𝒜}
  FamilyCode image_family(FamilyCode f) const;

  /// {"table": [...]} (indices) or {"table": {"a": "x", ...}} against the given universes.
  static ExplicitMap from_json(const json& j, const Universe& dom, const Universe& cod);
  json to_json(const Universe& dom, const Universe& cod) const;

  bool operator==(const ExplicitMap&) const = default;

 private:
  std::size_t dom_ = 0, cod_ = 0;
  std::vector<unsigned> table_;
};

/// g ∘ f
ExplicitMap compose(const ExplicitMap& g, const ExplicitMap& f);

/// n ↦ a*n + b or n ↦ ⌊n/d⌋.
struct LineMap {
  enum class Kind { Affine, FloorDiv };
  Kind kind = Kind::Affine;
  Nat a = 1, b = 0;  // affine
  Nat d = 1;         // floor division

  static LineMap affine(Nat a, Nat b = 0) { return {Kind::Affine, a, b, 1}; }
  static LineMap floor_div(Nat d);

  Nat operator()(Nat n) const { return kind == Kind::Affine ? a * n + b : n / d; }
  /// Exact image of a finite or periodic set.
  LineSet image(const LineSet& s) const;
  bool finite_to_one() const { return kind == Kind::FloorDiv || a > 0; }
  std::string describe() const;

  static LineMap from_json(const json& j);
  json to_json() const;
};

TriVerdict is_lsr_map(const ExplicitMap& f, const ExplicitLsr& x, const ExplicitLsr& y);
TriVerdict is_lsr_map(const ExplicitMap& f, const LsrBackend& x, const LsrBackend& y);
/// Line rules between line backends of the same kind. Bounded preimages are
/// decided from the rule; images are checked on a pool of structured member
/// families and justified by the rule (coarse Lipschitz, finite-to-one).
TriVerdict is_lsr_map(const LineMap& f, const LsrBackend& x, const LsrBackend& y);

struct EquivalenceReport {
  TriVerdict f_map, g_map;
  TriVerdict definition;  // conditional closure: g∘f(𝒜) ∈ 𝔠 ⇒ g∘f(𝒜) ∪ 𝒜 ∈ 𝔠, both sides
  TriVerdict lemma_ii;    // 𝒜 ∈ 𝔠 ⇒ g∘f(𝒜) ∪ 𝒜 ∈ 𝔠, both sides
  /// Yes iff both maps are LS.R maps and the definition holds.
  TriVerdict verdict() const;
  json to_json() const;
};

EquivalenceReport ls_equivalence_report(const ExplicitMap& f, const ExplicitMap& g, const ExplicitLsr& x,
                                        const ExplicitLsr& y);
EquivalenceReport ls_equivalence_report(const LineMap& f, const LineMap& g, const LsrBackend& x, const LsrBackend& y);

inline TriVerdict is_ls_equivalence(const ExplicitMap& f, const ExplicitMap& g, const ExplicitLsr& x,
                                    const ExplicitLsr& y) {
  return ls_equivalence_report(f, g, x, y).verdict();
}
inline TriVerdict is_ls_equivalence(const LineMap& f, const LineMap& g, const LsrBackend& x, const LsrBackend& y) {
  return ls_equivalence_report(f, g, x, y).verdict();
}

/// Pool of structured sets used for line map checks: progressions, shifts, finite sets.
std::vector<LineSet> line_map_pool();

}  // namespace coarselab
