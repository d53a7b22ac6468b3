#include "coarselab/setcore.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace coarselab {

Universe::Universe(std::vector<std::string> labels, std::size_t cap) : labels_(std::move(labels)) {
  require(!labels_.empty(), "universe must be nonempty");
  if (labels_.size() > cap || labels_.size() > 32)
    fail(ErrorKind::CapExceeded, "universe of size " + std::to_string(labels_.size()) + " exceeds cap " +
                                     std::to_string(std::min<std::size_t>(cap, 32)));
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) require(seen.insert(l).second, "duplicate universe label '" + l + "'");
}

Universe Universe::letters(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  return Universe(std::move(labels));
}

std::size_t Universe::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) fail(ErrorKind::Schema, "unknown element '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

Mask Universe::parse(std::span<const std::string> labels) const {
  Mask m = 0;
  for (const auto& l : labels) m |= Mask{1} << index_of(l);
  return m;
}

std::string Universe::format(Mask m) const {
  std::string out = "{";
  bool first = true;
  for_each_bit(m, [&](unsigned i) {
    if (!first) out += ",";
    out += labels_.at(i);
    first = false;
  });
  return out + "}";
}

Family::Family(std::size_t width, std::vector<Mask> members) : width_(width), members_(std::move(members)) {
  const Mask limit = width >= 32 ? ~Mask{0} : (Mask{1} << width) - 1;
  for (Mask m : members_) require((m & ~limit) == 0, "family member outside universe");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool Family::contains(Mask m) const { return std::binary_search(members_.begin(), members_.end(), m); }

std::string Family::format(const Universe& u) const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ",";
    out += u.format(members_[i]);
  }
  return out + "}";
}

static void check_same_width(const Family& a, const Family& b) {
  if (a.width() != b.width())
    fail(ErrorKind::UniverseMismatch, "families over universes of width " + std::to_string(a.width()) + " and " +
                                          std::to_string(b.width()));
}

Family vee(const Family& a, const Family& b) {
  check_same_width(a, b);
  std::vector<Mask> out;
  out.reserve(a.size() * b.size());
  for (Mask x : a.members())
    for (Mask y : b.members()) out.push_back(x | y);
  return Family(a.width(), std::move(out));
}

bool ll_refines(const Family& b, const Family& a) {
  check_same_width(a, b);
  return std::all_of(a.members().begin(), a.members().end(), [&](Mask big) {
    return std::any_of(b.members().begin(), b.members().end(), [&](Mask small) { return (small & ~big) == 0; });
  });
}

std::vector<Family> downward_closure(std::span<const Family> fams, std::size_t cap) {
  std::set<Family> out;
  for (const auto& f : fams) {
    if (f.width() != fams.front().width()) check_same_width(f, fams.front());
    const std::size_t k = f.size();
    if (k >= 63 || (std::uint64_t{1} << k) > cap)
      fail(ErrorKind::CapExceeded, "downward closure of a " + std::to_string(k) + "-member family exceeds cap");
    auto members = f.members();
    for (std::uint64_t sel = 0; sel < (std::uint64_t{1} << k); ++sel) {
      std::vector<Mask> sub;
      for_each_bit(sel, [&](unsigned i) { sub.push_back(members[i]); });
      out.insert(Family(f.width(), std::move(sub)));
      if (out.size() > cap) fail(ErrorKind::CapExceeded, "downward closure exceeds cap " + std::to_string(cap));
    }
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------

static void check_code_width(std::size_t width) {
  if (width > kMaxCodeWidth)
    fail(ErrorKind::CapExceeded, "family codes need a universe of width <= " + std::to_string(kMaxCodeWidth));
}

FamilyCode encode(const Family& f) {
  check_code_width(f.width());
  FamilyCode c = 0;
  for (Mask m : f.members()) c |= code_bit(m);
  return c;
}

Family decode(FamilyCode code, std::size_t width) {
  check_code_width(width);
  std::vector<Mask> members;
  for_each_bit(code, [&](unsigned m) { members.push_back(m); });
  return Family(width, std::move(members));
}

FamilyCode down_code(Mask m, std::size_t width) {
  check_code_width(width);
  FamilyCode c = 0;
  for (Mask s = m;; s = (s - 1) & m) {
    c |= code_bit(s);
    if (s == 0) break;
  }
  return c;
}

FamilyCode up_code(Mask m, std::size_t width) {
  check_code_width(width);
  const Mask full = (Mask{1} << width) - 1;
  const Mask rest = full & ~m;
  FamilyCode c = 0;
  for (Mask s = rest;; s = (s - 1) & rest) {
    c |= code_bit(m | s);
    if (s == 0) break;
  }
  return c;
}

FamilyCode upward_closure(FamilyCode f, std::size_t width) {
  FamilyCode c = 0;
  for_each_bit(f, [&](unsigned m) { c |= up_code(m, width); });
  return c;
}

FamilyCode vee(FamilyCode a, FamilyCode b) {
  FamilyCode c = 0;
  for_each_bit(a, [&](unsigned x) { for_each_bit(b, [&](unsigned y) { c |= code_bit(x | y); }); });
  return c;
}

bool ll_refines(FamilyCode b, FamilyCode a, std::size_t width) {
  bool ok = true;
  for_each_bit(a, [&](unsigned big) {
    if (ok && (b & down_code(big, width)) == 0) ok = false;
  });
  return ok;
}

Mask meet(FamilyCode f, std::size_t width) {
  Mask m = (Mask{1} << width) - 1;
  for_each_bit(f, [&](unsigned s) { m &= s; });
  return m;
}

Mask join(FamilyCode f) {
  Mask m = 0;
  for_each_bit(f, [&](unsigned s) { m |= s; });
  return m;
}

std::string format_code(FamilyCode f, const Universe& u) { return decode(f, u.size()).format(u); }

FamilySet::FamilySet(std::size_t width) : width_(width) {
  if (width > kMaxExplicitWidth)
    fail(ErrorKind::CapExceeded, "explicit structures support universes of size <= " +
                                     std::to_string(kMaxExplicitWidth));
  bits_.assign(std::max<std::size_t>(1, capacity() / 64), 0);
}

std::size_t FamilySet::count() const {
  std::size_t n = 0;
  for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

}  // namespace coarselab
