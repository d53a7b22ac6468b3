#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "coarselab/setcore.hpp"
#include "coarselab/verdict.hpp"

namespace coarselab {

/// Explicit LS.R on a universe of at most 4 points. Stores the full
/// downward-closed member set plus its maximal members.
class ExplicitLsr {
 public:
  ExplicitLsr() = default;

  /// Downward closure of the generators, plus every singleton family {A} when asked.
  static ExplicitLsr from_generators(Universe u, std::span<const Family> gens, bool add_singletons = true);
  static ExplicitLsr from_codes(Universe u, std::span<const FamilyCode> gens, bool add_singletons = true);
  /// Families all of whose pairs {A, B} satisfy `rel` (rel(A, A) decides {A}).
  template <class Rel>
  static ExplicitLsr from_pair_relation(Universe u, Rel&& rel);

  const Universe& universe() const { return u_; }
  std::size_t width() const { return u_.size(); }
  const FamilySet& members() const { return members_; }
  const std::vector<FamilyCode>& maximal() const { return maximal_; }

  bool member(FamilyCode c) const { return members_.test(c); }
  bool member(const Family& f) const;
  bool pair_member(Mask a, Mask b) const { return member(code_bit(a) | code_bit(b)); }

  /// B = ∅ or {B, {x}} is a member for some x.
  bool bounded(Mask b) const;
  std::optional<unsigned> bounded_witness(Mask b) const;
  bool connected() const;

  std::string describe() const;
  bool operator==(const ExplicitLsr& o) const { return u_ == o.u_ && members_ == o.members_; }

 private:
  ExplicitLsr(Universe u, FamilySet members);
  void add_down(FamilyCode c);
  void finish();

  Universe u_;
  FamilySet members_;
  std::vector<FamilyCode> maximal_;
  friend ExplicitLsr generate_lsr(Universe, std::span<const Family>);
};

/// Smallest LS.R containing the generators (closing under axioms iii and iv).
ExplicitLsr generate_lsr(Universe u, std::span<const Family> gens);

AxiomReport check_lsr_axioms(const ExplicitLsr& c);

struct RegularityWitness {
  FamilyCode family = 0;
  Mask a1 = 0, a2 = 0;
};

/// nullopt when LS-regular; otherwise a member 𝒜 and a split A1 ∪ A2 ∈ 𝒜 that
/// no pair 𝒜1 ∋ A1, 𝒜2 ∋ A2 with 𝒜 ⊆ 𝒜1 ∨ 𝒜2 covers.
std::optional<RegularityWitness> ls_regularity_witness(const ExplicitLsr& c);
inline bool is_ls_regular(const ExplicitLsr& c) { return !ls_regularity_witness(c).has_value(); }

/// Maximal families all of whose 2-subsets are members.
std::vector<FamilyCode> pair_cliques(const ExplicitLsr& c);
/// nullopt when every family whose pairs are members is itself a member.
std::optional<FamilyCode> two_determined_witness(const ExplicitLsr& c);
bool is_a_lsr(const ExplicitLsr& c);

/// Families all of whose pairs are members. Requires an LS-regular input.
ExplicitLsr regularize(const ExplicitLsr& c);

// ---------------------------------------------------------------------------

/// AS.R as a partition of the power set.
class ExplicitAsr {
 public:
  ExplicitAsr() = default;
  /// block[m] is the class id of the subset with mask m.
  ExplicitAsr(Universe u, std::vector<int> block);
  static ExplicitAsr identity(Universe u);
  static ExplicitAsr one_block(Universe u);

  const Universe& universe() const { return u_; }
  std::size_t width() const { return u_.size(); }
  const std::vector<int>& blocks() const { return block_; }
  bool alike(Mask a, Mask b) const { return block_.at(a) == block_.at(b); }
  bool bounded(Mask d) const;

  /// 𝔠_λ: families inside one class.
  ExplicitLsr lsr() const;
  /// ⊗-uniform boundedness.
  bool uniformly_bounded(std::span<const Mask> family) const;
  /// Largest uniformly bounded family: sets U with {U} uniformly bounded.
  std::vector<Mask> maximal_uniform_family() const;
  /// 𝔠̃_λ, built from the largest uniformly bounded family.
  ExplicitLsr lsr_tilde() const;

  bool operator==(const ExplicitAsr& o) const;

 private:
  Universe u_;
  std::vector<int> block_;  // canonical: classes numbered by first occurrence
};

AxiomReport check_asr_axioms(const ExplicitAsr& l);

/// λ_𝔠 when it exists. Throws a Precondition error naming the failure otherwise.
struct LambdaResult {
  std::optional<ExplicitAsr> asr;
  std::string failure;
  json witness;
};
LambdaResult lambda_of(const ExplicitLsr& c);

/// Relation on a finite set stored as rows: bit y of rows[x] means (x, y).
using Relation = std::vector<Mask>;

Mask apply(const Relation& e, Mask a);
Relation compose(const Relation& e, const Relation& f);  // E ∘ F
Relation inverse(const Relation& e);

/// Finite coarse structure given by generators; its members are the subsets of M.
class ExplicitCoarse {
 public:
  ExplicitCoarse() = default;
  ExplicitCoarse(Universe u, std::vector<std::pair<unsigned, unsigned>> generators);
  static ExplicitCoarse from_partition(Universe u, const std::vector<Mask>& blocks);

  const Universe& universe() const { return u_; }
  const Relation& m() const { return m_; }
  Mask apply(Mask a) const { return coarselab::apply(m_, a); }
  std::vector<Mask> classes() const;

  ExplicitLsr lsr() const;        // 𝔠_ℰ
  ExplicitLsr lsr_tilde() const;  // 𝔠̃_ℰ
  ExplicitAsr asr() const;        // λ_ℰ

 private:
  Universe u_;
  std::vector<std::pair<unsigned, unsigned>> gens_;
  Relation m_;
};

struct CoarseCheck {
  Relation m;
  AxiomReport report;
};
CoarseCheck check_coarse(const ExplicitCoarse& c);

// ---------------------------------------------------------------------------

/// Proximity on a universe of at most 4 points: rows[A] has bit B set iff A δ B.
class ExplicitProximity {
 public:
  ExplicitProximity() = default;
  ExplicitProximity(Universe u, std::vector<std::uint32_t> rows);
  template <class Rel>
  static ExplicitProximity from_predicate(Universe u, Rel&& rel) {
    const std::size_t n = std::size_t{1} << u.size();
    std::vector<std::uint32_t> rows(n, 0);
    for (Mask a = 0; a < n; ++a)
      for (Mask b = 0; b < n; ++b)
        if (rel(a, b)) rows[a] |= std::uint32_t{1} << b;
    return ExplicitProximity(std::move(u), std::move(rows));
  }
  /// A δ B iff some block meets both.
  static ExplicitProximity from_partition(Universe u, const std::vector<Mask>& blocks);
  static ExplicitProximity discrete(Universe u);

  const Universe& universe() const { return u_; }
  bool near(Mask a, Mask b) const { return (rows_.at(a) >> b) & 1u; }
  std::vector<Mask> closure() const;

 private:
  Universe u_;
  std::vector<std::uint32_t> rows_;
};

AxiomReport check_proximity_axioms(const ExplicitProximity& p);
bool is_cluster(const ExplicitProximity& p, FamilyCode c);
std::vector<FamilyCode> enumerate_clusters(const ExplicitProximity& p);

// ---------------------------------------------------------------------------

/// Kuratowski closure table, indexed by mask.
using ClosureTable = std::vector<Mask>;
ClosureTable discrete_closure(std::size_t width);
AxiomReport check_closure(const ClosureTable& cl, std::size_t width);

class ExplicitNearness {
 public:
  ExplicitNearness() = default;
  /// Throws a Precondition error when `closure` is not a Kuratowski closure.
  ExplicitNearness(Universe u, FamilySet near, ClosureTable closure);

  /// ⋂ cl(A) ≠ ∅.
  static ExplicitNearness topological(Universe u, ClosureTable closure = {});
  static ExplicitNearness all_without_empty(Universe u);
  static ExplicitNearness empty(Universe u);
  /// 𝒜 near iff some cluster of `p` contains 𝒜.
  static ExplicitNearness from_proximity(const ExplicitProximity& p);
  /// 𝔑_𝔠: ⋂ cl(A) ≠ ∅, or some nonempty member ℬ of 𝔠 with no bounded member has ℬ ≪ 𝒜.
  static ExplicitNearness induced(const ExplicitLsr& c, ClosureTable closure = {});

  const Universe& universe() const { return u_; }
  std::size_t width() const { return u_.size(); }
  const FamilySet& near_set() const { return near_; }
  const ClosureTable& closure() const { return cl_; }
  bool near(FamilyCode c) const { return near_.test(c); }
  FamilyCode close(FamilyCode c) const;

 private:
  Universe u_;
  FamilySet near_;
  ClosureTable cl_;
};

AxiomReport check_nearness_axioms(const ExplicitNearness& n);
bool is_h_nearness(const ExplicitNearness& n);
bool is_bunch(const ExplicitNearness& n, FamilyCode candidate);
std::vector<FamilyCode> enumerate_bunches(const ExplicitNearness& n);

// ---------------------------------------------------------------------------

std::vector<FamilyCode> maximal_cliques(std::size_t nvert, const std::vector<std::uint32_t>& adj);

template <class Rel>
ExplicitLsr ExplicitLsr::from_pair_relation(Universe u, Rel&& rel) {
  const std::size_t n = std::size_t{1} << u.size();
  std::vector<std::uint32_t> adj(n, 0);
  std::uint32_t loops = 0;
  for (Mask a = 0; a < n; ++a) {
    if (rel(a, a)) loops |= std::uint32_t{1} << a;
    for (Mask b = 0; b < n; ++b)
      if (a != b && rel(a, b) && rel(b, a)) adj[a] |= std::uint32_t{1} << b;
  }
  for (Mask a = 0; a < n; ++a)
    if (!((loops >> a) & 1u)) adj[a] = 0;
  for (Mask a = 0; a < n; ++a) adj[a] &= loops;
  std::vector<FamilyCode> gens;
  for (FamilyCode c : maximal_cliques(n, adj))
    if ((c & loops) == c) gens.push_back(c);
  return from_codes(std::move(u), gens, false);
}

}  // namespace coarselab
