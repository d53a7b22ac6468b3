#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coarselab/error.hpp"

namespace coarselab {

/// Membership mask of a subset of a finite universe; bit i is element i.
using Mask = std::uint32_t;

inline constexpr std::size_t kDefaultUniverseCap = 16;

/// Iterate the set bits of a mask, lowest first.
template <class F>
void for_each_bit(std::uint64_t bits, F&& f) {
  while (bits) {
    f(static_cast<unsigned>(std::countr_zero(bits)));
    bits &= bits - 1;
  }
}

class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<std::string> labels, std::size_t cap = kDefaultUniverseCap);

  /// Universe labelled a, b, c, ...
  static Universe letters(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t index_of(const std::string& label) const;
  Mask full() const { return size() == 32 ? ~Mask{0} : (Mask{1} << size()) - 1; }

  Mask parse(std::span<const std::string> labels) const;
  std::string format(Mask m) const;

  bool operator==(const Universe&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// A subset of a finite universe of the given width.
struct Subset {
  Mask mask = 0;
  std::uint8_t width = 0;

  bool contains(std::size_t i) const { return (mask >> i) & 1u; }
  bool operator==(const Subset&) const = default;
};

/// A finite family of subsets: canonically sorted by mask, no duplicates.
class Family {
 public:
  Family() = default;
  Family(std::size_t width, std::vector<Mask> members);

  std::size_t width() const { return width_; }
  std::span<const Mask> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Mask m) const;

  std::string format(const Universe& u) const;

  auto operator<=>(const Family&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<Mask> members_;
};

/// All pairwise unions A ∪ B.
Family vee(const Family& a, const Family& b);

/// True iff every member of `a` contains some member of `b`.
bool ll_refines(const Family& b, const Family& a);

/// Smallest collection containing every input family and all of their subfamilies.
/// Throws CapExceeded when the result would exceed `cap` families.
std::vector<Family> downward_closure(std::span<const Family> fams, std::size_t cap = 1u << 20);

// ---------------------------------------------------------------------------
// Compact family codes for tiny universes (width <= 5): bit m of the code is
// set iff the subset with mask m is a member.

using FamilyCode = std::uint32_t;

inline constexpr std::size_t kMaxCodeWidth = 5;

inline FamilyCode code_bit(Mask m) { return FamilyCode{1} << m; }

FamilyCode encode(const Family& f);
Family decode(FamilyCode code, std::size_t width);

/// Code of the family of all subsets of `m`.
FamilyCode down_code(Mask m, std::size_t width);
/// Code of the family of all supersets of `m` inside the universe.
FamilyCode up_code(Mask m, std::size_t width);
/// Upward closure of a family inside the powerset.
FamilyCode upward_closure(FamilyCode f, std::size_t width);

FamilyCode vee(FamilyCode a, FamilyCode b);
bool ll_refines(FamilyCode b, FamilyCode a, std::size_t width);

/// Intersection of all members; the empty family intersects to the whole universe.
Mask meet(FamilyCode f, std::size_t width);
/// Union of all members.
Mask join(FamilyCode f);

std::string format_code(FamilyCode f, const Universe& u);

/// Dense membership table over all families of a universe of width <= 4.
class FamilySet {
 public:
  FamilySet() = default;
  explicit FamilySet(std::size_t width);

  std::size_t width() const { return width_; }
  std::size_t capacity() const { return std::size_t{1} << (std::size_t{1} << width_); }
  bool test(FamilyCode c) const { return (bits_[c >> 6] >> (c & 63)) & 1u; }
  void set(FamilyCode c) { bits_[c >> 6] |= std::uint64_t{1} << (c & 63); }
  std::size_t count() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < bits_.size(); ++w)
      for_each_bit(bits_[w], [&](unsigned b) { f(static_cast<FamilyCode>(w * 64 + b)); });
  }

  bool operator==(const FamilySet&) const = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> bits_;
};

inline constexpr std::size_t kMaxExplicitWidth = 4;

}  // namespace coarselab
