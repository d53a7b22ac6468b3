#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coarselab/backends.hpp"

namespace coarselab {

struct ObstructionBudget {
  Nat window = 100'000;
  Nat max_scale = 32;
};

/// Certificate that no bunch of the metric-line nearness contains a family:
/// ℬ = 𝒜, L ∈ ℬ, L = L₁ ∪ L₂ far apart, ℕ = X₁ ∪ X₂ with X₁ away from L₁
/// and X₂ away from L₂. Every field is re-checkable from its serialized form.
struct BunchObstruction {
  std::vector<LineSet> family;
  std::vector<LineSet> witness;  // ℬ
  std::size_t chosen = 0;        // L = witness[chosen]
  LineSet l1, l2, x1, x2;
  ObstructionBudget budget;

  json near;      // nearness_of(𝒜)
  json members;   // ℬ ∈ 𝔠: infinite members, pairwise d_H
  json split;     // per k: a point of L₁ farther than k from L₂ (and back)
  json scales;    // per k: points of L₁, L₂ farther than k from X₁, X₂
  bool ok = false;

  const LineSet& l() const { return witness.at(chosen); }
  json to_json() const;
  static BunchObstruction from_json(const json& j);
};

struct ObstructionResult {
  std::optional<BunchObstruction> obstruction;
  std::string rejection;
  json witness;
  bool built() const { return obstruction.has_value(); }
};

/// Runs sparsify, normality split and the per-scale checks. Rejects when the
/// family is not near, or when its members share a point.
ObstructionResult bunch_obstruction(const std::vector<LineSet>& a, ObstructionBudget budget = {});

/// Recomputes every check of an obstruction from its sets alone.
TriVerdict validate_obstruction(const BunchObstruction& o);

struct BunchSearch {
  bool found = false;
  FamilyCode bunch = 0;
  std::size_t bunches = 0;  // bunches of the space, all inspected
  json to_json(const Universe& u) const;
};

/// Smallest bunch containing `a`, or a completed search. Throws when `a` is not near.
BunchSearch bunch_exists_explicit(FamilyCode a, const ExplicitNearness& n);

struct ContrastRow {
  std::size_t proximities = 0;
  std::size_t near_pairs = 0;
  std::size_t extended = 0;  // pairs contained in some cluster and some bunch
  json failure;              // first pair that did not extend
  bool holds() const { return near_pairs == extended; }
};

/// Every near pair {A, B} of each proximity on `width` points extends to a
/// cluster of the proximity and to a bunch of the induced nearness. Proximities
/// come from all asymptotically normal AS.Rs with every compatible closure.
ContrastRow contrast_proximity_pairs(std::size_t width);

}  // namespace coarselab
