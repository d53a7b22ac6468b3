#include "coarselab/lineset.hpp"

#include <algorithm>
#include <numeric>

namespace coarselab {

namespace {

Nat sat_add(Nat a, Nat b) { return a > kNatMax - b ? kNatMax : a + b; }
Nat sat_sub(Nat a, Nat b) { return a > b ? a - b : 0; }

Nat checked_lcm(Nat a, Nat b) {
  const Nat g = std::gcd(a, b);
  const Nat q = a / g;
  if (q > kPeriodCap / b) fail(ErrorKind::CapExceeded, "period lcm exceeds cap " + std::to_string(kPeriodCap));
  return q * b;
}

void sort_unique(std::vector<Nat>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool has(const std::vector<Nat>& v, Nat n) { return std::binary_search(v.begin(), v.end(), n); }

Nat count_below(const std::vector<Nat>& v, Nat n) {
  return static_cast<Nat>(std::lower_bound(v.begin(), v.end(), n) - v.begin());
}

json nat_array(const std::vector<Nat>& v) {
  json a = json::array();
  for (Nat x : v) a.push_back(x);
  return a;
}

constexpr Nat kEnumerationCap = Nat{1} << 26;
constexpr Nat kHeadCap = Nat{1} << 22;

}  // namespace

// ---------------------------------------------------------------------------
// PeriodicData

bool PeriodicData::in_progressions(Nat n) const {
  if (progressions.empty()) return false;
  if (n >= start_max) {
    const Nat r = (n - start_max) % period;
    return std::binary_search(residues.begin(), residues.end(), r);
  }
  for (const auto& p : progressions)
    if (n >= p.start && (n - p.start) % p.step == 0) return true;
  return false;
}

bool PeriodicData::contains(Nat n) const {
  if (has(removals, n)) return false;
  return has(finite, n) || in_progressions(n);
}

Nat PeriodicData::rank(Nat n) const {
  Nat in_p = 0;
  if (!progressions.empty()) {
    if (n <= start_max) {
      in_p = count_below(head, n);
    } else {
      const Nat off = n - start_max;
      in_p = head.size() + (off / period) * residues.size() + count_below(residues, off % period);
    }
  }
  return in_p + count_below(extra, n) - count_below(removals, n);
}

std::optional<Nat> PeriodicData::next(Nat n) const {
  for (;;) {
    std::optional<Nat> cand;
    auto it = std::lower_bound(finite.begin(), finite.end(), n);
    if (it != finite.end()) cand = *it;
    for (const auto& p : progressions) {
      Nat x;
      if (n <= p.start) {
        x = p.start;
      } else {
        const Nat k = (n - p.start + p.step - 1) / p.step;
        if (k > (kNatMax - p.start) / p.step) continue;
        x = p.start + k * p.step;
      }
      if (!cand || x < *cand) cand = x;
    }
    if (!cand) return std::nullopt;
    if (!has(removals, *cand)) return cand;
    if (*cand == kNatMax) return std::nullopt;
    n = *cand + 1;
  }
}

std::optional<Nat> PeriodicData::prev(Nat n) const {
  for (;;) {
    std::optional<Nat> cand;
    auto it = std::upper_bound(finite.begin(), finite.end(), n);
    if (it != finite.begin()) cand = *std::prev(it);
    for (const auto& p : progressions) {
      if (n < p.start) continue;
      const Nat x = p.start + ((n - p.start) / p.step) * p.step;
      if (!cand || x > *cand) cand = x;
    }
    if (!cand) return std::nullopt;
    if (!has(removals, *cand)) return cand;
    if (*cand == 0) return std::nullopt;
    n = *cand - 1;
  }
}

Nat PeriodicData::size() const {
  require(!infinite(), "size of an infinite set");
  return finite.size() - removals.size();
}

namespace {

PeriodicData build_periodic(std::vector<Nat> finite, std::vector<Progression> progs, std::vector<Nat> removals) {
  PeriodicData d;
  sort_unique(finite);
  sort_unique(removals);
  for (const auto& p : progs) require(p.step >= 1, "progression step must be >= 1");
  std::sort(progs.begin(), progs.end());
  progs.erase(std::unique(progs.begin(), progs.end()), progs.end());
  d.finite = std::move(finite);
  d.progressions = std::move(progs);
  d.removals = std::move(removals);

  for (const auto& p : d.progressions) {
    d.start_max = std::max(d.start_max, p.start);
    d.period = checked_lcm(d.period, p.step);
  }
  if (!d.progressions.empty()) {
    if (d.start_max > kHeadCap)
      fail(ErrorKind::CapExceeded, "progression start " + std::to_string(d.start_max) + " too large");
    for (Nat r = 0; r < d.period; ++r) {
      const Nat n = d.start_max + r;
      for (const auto& p : d.progressions)
        if ((n - p.start) % p.step == 0) {
          d.residues.push_back(r);
          break;
        }
    }
    for (Nat n = 0; n < d.start_max; ++n)
      for (const auto& p : d.progressions)
        if (n >= p.start && (n - p.start) % p.step == 0) {
          d.head.push_back(n);
          break;
        }
  }
  for (Nat f : d.finite)
    if (!d.in_progressions(f)) d.extra.push_back(f);
  for (Nat r : d.removals)
    require(has(d.finite, r) || d.in_progressions(r),
            "removal " + std::to_string(r) + " is not an element of the set");

  Nat top = d.start_max;
  if (!d.finite.empty()) top = std::max(top, d.finite.back());
  if (!d.removals.empty()) top = std::max(top, d.removals.back());
  d.base = top + 1;
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// Implementations

struct LineSet::Impl {
  virtual ~Impl() = default;
  virtual Kind kind() const = 0;
  virtual bool contains(Nat n) const = 0;
  virtual std::optional<Nat> next(Nat n) const = 0;
  virtual std::optional<Nat> prev(Nat n) const = 0;
  virtual bool is_finite() const = 0;
  virtual GapCertificate gap() const { return {}; }
  virtual json to_json() const = 0;
  virtual std::string describe() const = 0;
  virtual const PeriodicData* periodic() const { return nullptr; }

  virtual Nat rank(Nat n) const {
    Nat c = 0;
    for (auto x = next(0); x && *x < n; x = *x == kNatMax ? std::nullopt : next(*x + 1)) {
      if (++c > kEnumerationCap) fail(ErrorKind::CapExceeded, "rank enumeration exceeds cap");
    }
    return c;
  }
  virtual std::optional<Nat> select(Nat i) const {
    auto x = next(0);
    for (Nat c = 0; x && c < i; ++c) {
      if (c > kEnumerationCap) fail(ErrorKind::CapExceeded, "select enumeration exceeds cap");
      x = *x == kNatMax ? std::nullopt : next(*x + 1);
    }
    return x;
  }
  virtual std::vector<Nat> window(Nat hi) const {
    std::vector<Nat> out;
    for (auto x = next(0); x && *x <= hi; x = *x == kNatMax ? std::nullopt : next(*x + 1)) out.push_back(*x);
    return out;
  }
};

namespace {

using Kind = LineSet::Kind;

struct PeriodicImpl final : LineSet::Impl {
  PeriodicData d;
  bool finite_kind;

  PeriodicImpl(PeriodicData data, bool fk) : d(std::move(data)), finite_kind(fk) {}

  Kind kind() const override { return finite_kind ? Kind::Finite : Kind::Periodic; }
  bool contains(Nat n) const override { return d.contains(n); }
  std::optional<Nat> next(Nat n) const override { return d.next(n); }
  std::optional<Nat> prev(Nat n) const override { return d.prev(n); }
  bool is_finite() const override { return !d.infinite(); }
  const PeriodicData* periodic() const override { return &d; }

  GapCertificate gap() const override {
    Nat g = 0;
    // One period past every base value sees all gaps.
    const Nat hi = sat_add(d.base, 2 * d.period);
    std::optional<Nat> last;
    for (auto x = d.next(0); x && *x <= hi; x = d.next(*x + 1)) {
      if (last) g = std::max(g, *x - *last);
      last = x;
    }
    return {GapKind::Bounded, g};
  }

  Nat rank(Nat n) const override { return d.rank(n); }

  std::optional<Nat> select(Nat i) const override {
    if (!d.infinite() && i >= d.size()) return std::nullopt;
    Nat hi = std::max<Nat>(d.base, 1);
    while (d.rank(hi) <= i) {
      if (hi > kNatMax / 2) return std::nullopt;
      hi *= 2;
    }
    Nat lo = 0;  // rank(lo) <= i < rank(hi)
    while (hi - lo > 1) {
      const Nat mid = lo + (hi - lo) / 2;
      if (d.rank(mid) <= i) lo = mid;
      else hi = mid;
    }
    return lo;
  }

  json to_json() const override {
    json j;
    if (finite_kind) {
      j["kind"] = "finite";
      std::vector<Nat> el;
      for (Nat f : d.finite)
        if (!has(d.removals, f)) el.push_back(f);
      j["elements"] = nat_array(el);
      return j;
    }
    j["kind"] = "periodic";
    j["finite"] = nat_array(d.finite);
    json progs = json::array();
    for (const auto& p : d.progressions) progs.push_back(json::array({p.start, p.step}));
    j["progressions"] = progs;
    j["removals"] = nat_array(d.removals);
    return j;
  }

  std::string describe() const override {
    auto list = [](const std::vector<Nat>& v) {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s + "]";
    };
    if (finite_kind) return "Finite" + list(d.finite);
    std::string s;
    for (const auto& p : d.progressions) s += (s.empty() ? "" : " u ") + std::string("AP(") +
                                              std::to_string(p.start) + "," + std::to_string(p.step) + ")";
    if (!d.finite.empty()) s += " u " + list(d.finite);
    if (!d.removals.empty()) s += " \\ " + list(d.removals);
    return s;
  }
};

struct GeometricImpl final : LineSet::Impl {
  Nat m, b, k0;
  std::vector<Nat> el;  // every element representable in a Nat

  GeometricImpl(Nat m_, Nat b_, Nat k0_) : m(m_), b(b_), k0(k0_) {
    require(m >= 1, "geometric coefficient must be >= 1");
    require(b >= 2, "geometric base must be >= 2");
    Nat x = m;
    bool overflow = false;
    for (Nat k = 0; !overflow; ++k) {
      if (k >= k0) el.push_back(x);
      if (x > kNatMax / b) overflow = true;
      else x *= b;
    }
  }

  Kind kind() const override { return Kind::Geometric; }
  bool contains(Nat n) const override { return has(el, n); }
  std::optional<Nat> next(Nat n) const override {
    auto it = std::lower_bound(el.begin(), el.end(), n);
    if (it == el.end()) return std::nullopt;
    return *it;
  }
  std::optional<Nat> prev(Nat n) const override {
    auto it = std::upper_bound(el.begin(), el.end(), n);
    if (it == el.begin()) return std::nullopt;
    return *std::prev(it);
  }
  bool is_finite() const override { return false; }
  GapCertificate gap() const override { return {GapKind::Divergent, 0}; }
  Nat rank(Nat n) const override { return count_below(el, n); }
  std::optional<Nat> select(Nat i) const override {
    if (i >= el.size()) return std::nullopt;
    return el[i];
  }
  json to_json() const override { return {{"kind", "geometric"}, {"m", m}, {"b", b}, {"k0", k0}}; }
  std::string describe() const override {
    return "Geometric(" + std::to_string(m) + "*" + std::to_string(b) + "^k, k>=" + std::to_string(k0) + ")";
  }
};

struct GapDoublingImpl final : LineSet::Impl {
  Nat w;
  std::vector<Nat> starts;

  explicit GapDoublingImpl(Nat width) : w(width) {
    require(w >= 1, "block width must be >= 1");
    for (Nat j = 0; j < 63; ++j) {
      const Nat p = (Nat{1} << j) - 1;
      if (j > 0 && w > (kNatMax - p) / j) break;
      const Nat s = j * w + p;
      if (s > kNatMax - w) break;
      starts.push_back(s);
    }
  }

  Kind kind() const override { return Kind::Blocks; }
  bool contains(Nat n) const override {
    auto it = std::upper_bound(starts.begin(), starts.end(), n);
    if (it == starts.begin()) return false;
    return n < *std::prev(it) + w;
  }
  std::optional<Nat> next(Nat n) const override {
    auto it = std::upper_bound(starts.begin(), starts.end(), n);
    if (it != starts.begin() && n < *std::prev(it) + w) return n;
    if (it == starts.end()) return std::nullopt;
    return *it;
  }
  std::optional<Nat> prev(Nat n) const override {
    auto it = std::upper_bound(starts.begin(), starts.end(), n);
    if (it == starts.begin()) return std::nullopt;
    const Nat s = *std::prev(it);
    return std::min(n, s + w - 1);
  }
  bool is_finite() const override { return false; }
  GapCertificate gap() const override { return {GapKind::Divergent, 0}; }
  Nat rank(Nat n) const override {
    auto it = std::lower_bound(starts.begin(), starts.end(), n);
    if (it == starts.begin()) return 0;
    const Nat j = static_cast<Nat>(std::prev(it) - starts.begin());
    return j * w + std::min(w, n - starts[j]);
  }
  std::optional<Nat> select(Nat i) const override {
    const Nat j = i / w;
    if (j >= starts.size()) return std::nullopt;
    return starts[j] + i % w;
  }
  json to_json() const override { return {{"kind", "blocks"}, {"rule", "gap-doubling"}, {"width", w}}; }
  std::string describe() const override { return "GapDoubling(width " + std::to_string(w) + ")"; }
};

/// Index blocks of one sparsify part, as half-open [lo, hi) pairs.
std::vector<std::pair<Nat, Nat>> sparsify_blocks(int part) {
  std::vector<std::pair<Nat, Nat>> out;
  for (Nat j = 0; j < 31; ++j) {
    const Nat q = Nat{1} << (2 * j);
    if (part == 1) out.emplace_back(q, 2 * q);
    else out.emplace_back(2 * q, 4 * q);
  }
  return out;
}

struct SparsifyImpl final : LineSet::Impl {
  LineSet parent;
  int part;
  std::vector<std::pair<Nat, Nat>> blocks;

  SparsifyImpl(LineSet p, int pt) : parent(std::move(p)), part(pt), blocks(sparsify_blocks(pt)) {}

  bool index_in(Nat i) const {
    for (const auto& [lo, hi] : blocks)
      if (i >= lo && i < hi) return true;
    return false;
  }
  // Number of indices in the part that are < r.
  Nat index_count(Nat r) const {
    Nat c = 0;
    for (const auto& [lo, hi] : blocks) {
      if (r <= lo) break;
      c += std::min(r, hi) - lo;
    }
    return c;
  }
  std::optional<Nat> index_select(Nat i) const {
    for (const auto& [lo, hi] : blocks) {
      if (i < hi - lo) return lo + i;
      i -= hi - lo;
    }
    return std::nullopt;
  }
  std::optional<Nat> index_next(Nat r) const {
    for (const auto& [lo, hi] : blocks) {
      if (r < lo) return lo;
      if (r < hi) return r;
    }
    return std::nullopt;
  }
  std::optional<Nat> index_prev(Nat r) const {
    std::optional<Nat> best;
    for (const auto& [lo, hi] : blocks) {
      if (r < lo) break;
      best = std::min(r, hi - 1);
    }
    return best;
  }

  Kind kind() const override { return Kind::Blocks; }
  bool contains(Nat n) const override { return parent.contains(n) && index_in(parent.rank(n)); }
  std::optional<Nat> next(Nat n) const override {
    auto idx = index_next(parent.rank(n));
    if (!idx) return std::nullopt;
    return parent.select(*idx);
  }
  std::optional<Nat> prev(Nat n) const override {
    const Nat r = n == kNatMax ? parent.rank(n) : parent.rank(n + 1);
    if (r == 0) return std::nullopt;
    auto idx = index_prev(r - 1);
    if (!idx) return std::nullopt;
    return parent.select(*idx);
  }
  bool is_finite() const override { return false; }
  GapCertificate gap() const override { return {GapKind::Divergent, 0}; }
  Nat rank(Nat n) const override { return index_count(parent.rank(n)); }
  std::optional<Nat> select(Nat i) const override {
    auto idx = index_select(i);
    if (!idx) return std::nullopt;
    return parent.select(*idx);
  }
  std::vector<Nat> window(Nat hi) const override {
    std::vector<Nat> out;
    const auto pw = parent.window(hi);
    for (std::size_t i = 0; i < pw.size(); ++i)
      if (index_in(i)) out.push_back(pw[i]);
    return out;
  }
  json to_json() const override {
    return {{"kind", "blocks"}, {"rule", "sparsify-part"}, {"part", part}, {"parent", parent.to_json()}};
  }
  std::string describe() const override {
    return "SparsifyPart" + std::to_string(part) + "(" + parent.describe() + ")";
  }
};

bool at_most(const ExtDistance& a, const ExtDistance& b) {
  if (b.infinite) return true;
  if (a.infinite) return false;
  return a.value <= b.value;
}

struct NearerToImpl final : LineSet::Impl {
  LineSet target, other;
  bool finite_;
  Nat scan_limit = kNatMax;  // no element lies above this when finite_

  NearerToImpl(LineSet t, LineSet o) : target(std::move(t)), other(std::move(o)) {
    require(!target.empty() && !other.empty(), "nearer_to needs nonempty sets");
    if (!target.is_finite()) {
      finite_ = false;
    } else {
      const Nat tmax = *target.prev(kNatMax);
      if (!other.is_finite()) {
        // Past the first element of `other` above max(target), `other` wins.
        finite_ = true;
        auto o1 = other.next(sat_add(tmax, 1));
        scan_limit = o1 ? *o1 : kNatMax;
      } else {
        const Nat omax = *other.prev(kNatMax);
        finite_ = tmax < omax;
        if (finite_) scan_limit = omax;
      }
    }
  }

  Kind kind() const override { return Kind::Blocks; }
  bool contains(Nat n) const override { return at_most(target.distance(n), other.distance(n)); }
  std::optional<Nat> next(Nat n) const override {
    Nat stop = scan_limit;
    if (!finite_) {
      if (!target.is_finite()) {
        auto t = target.next(n);
        if (!t) return std::nullopt;
        stop = *t;
      } else {
        // Both finite and target reaches furthest: everything from max(target) on.
        stop = std::max(n, *target.prev(kNatMax));
      }
    }
    for (Nat x = n; x <= stop; ++x) {
      if (contains(x)) return x;
      if (x == kNatMax) break;
    }
    return std::nullopt;
  }
  std::optional<Nat> prev(Nat n) const override {
    Nat floor = 0;
    if (!target.is_finite()) {
      if (auto t = target.prev(n)) floor = *t;
    }
    if (finite_) n = std::min(n, scan_limit);
    for (Nat x = n;; --x) {
      if (contains(x)) return x;
      if (x == floor) break;
    }
    return std::nullopt;
  }
  bool is_finite() const override { return finite_; }
  std::vector<Nat> window(Nat hi) const override {
    std::vector<Nat> out;
    const auto dt = distance_profile(target, hi);
    const auto dd = distance_profile(other, hi);
    for (Nat n = 0; n <= hi; ++n)
      if (dt[n] <= dd[n]) out.push_back(n);
    return out;
  }
  json to_json() const override {
    return {{"kind", "blocks"}, {"rule", "nearer-to"}, {"target", target.to_json()}, {"other", other.to_json()}};
  }
  std::string describe() const override {
    return "NearerTo(" + target.describe() + " | " + other.describe() + ")";
  }
};

struct UnionImpl final : LineSet::Impl {
  LineSet a, b;
  UnionImpl(LineSet a_, LineSet b_) : a(std::move(a_)), b(std::move(b_)) {}

  Kind kind() const override { return Kind::Blocks; }
  bool contains(Nat n) const override { return a.contains(n) || b.contains(n); }
  std::optional<Nat> next(Nat n) const override {
    auto x = a.next(n), y = b.next(n);
    if (!x) return y;
    if (!y) return x;
    return std::min(*x, *y);
  }
  std::optional<Nat> prev(Nat n) const override {
    auto x = a.prev(n), y = b.prev(n);
    if (!x) return y;
    if (!y) return x;
    return std::max(*x, *y);
  }
  bool is_finite() const override { return a.is_finite() && b.is_finite(); }
  json to_json() const override {
    return {{"kind", "blocks"}, {"rule", "union"}, {"left", a.to_json()}, {"right", b.to_json()}};
  }
  std::string describe() const override { return "(" + a.describe() + " u " + b.describe() + ")"; }
};

std::vector<Nat> json_nats(const json& j, const char* key) {
  std::vector<Nat> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) fail(ErrorKind::Schema, std::string("'") + key + "' must be an array");
  for (const auto& x : j.at(key)) {
    if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0))
      fail(ErrorKind::Schema, std::string("'") + key + "' must hold naturals");
    out.push_back(x.get<Nat>());
  }
  return out;
}

Nat json_nat(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorKind::Schema, std::string("missing field '") + key + "'");
  const auto& x = j.at(key);
  if (!x.is_number_integer() || (x.is_number_integer() && !x.is_number_unsigned() && x.get<long long>() < 0))
    fail(ErrorKind::Schema, std::string("field '") + key + "' must be a natural number");
  return x.get<Nat>();
}

}  // namespace

// ---------------------------------------------------------------------------
// LineSet

LineSet::LineSet() : LineSet(finite({})) {}

LineSet LineSet::finite(std::vector<Nat> elements) {
  return LineSet(std::make_shared<PeriodicImpl>(build_periodic(std::move(elements), {}, {}), true));
}

LineSet LineSet::periodic(std::vector<Nat> finite_part, std::vector<Progression> progressions,
                          std::vector<Nat> removals) {
  return LineSet(std::make_shared<PeriodicImpl>(
      build_periodic(std::move(finite_part), std::move(progressions), std::move(removals)), false));
}

LineSet LineSet::geometric(Nat m, Nat b, Nat k0) { return LineSet(std::make_shared<GeometricImpl>(m, b, k0)); }

LineSet LineSet::sparsify_part(const LineSet& parent, int part) {
  require(part == 1 || part == 2, "sparsify part must be 1 or 2");
  require(!parent.is_finite(), "sparsify needs an infinite set");
  return LineSet(std::make_shared<SparsifyImpl>(parent, part));
}

LineSet LineSet::gap_doubling(Nat width) { return LineSet(std::make_shared<GapDoublingImpl>(width)); }

LineSet LineSet::nearer_to(const LineSet& target, const LineSet& other) {
  return LineSet(std::make_shared<NearerToImpl>(target, other));
}

LineSet LineSet::unite(const LineSet& a, const LineSet& b) {
  if (a.exact() && b.exact()) return union_exact(a, b);
  return LineSet(std::make_shared<UnionImpl>(a, b));
}

LineSet LineSet::from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    fail(ErrorKind::Schema, "line set needs a string 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "finite") return finite(json_nats(j, "elements"));
  if (kind == "periodic") {
    std::vector<Progression> progs;
    if (j.contains("progressions")) {
      for (const auto& p : j.at("progressions")) {
        if (!p.is_array() || p.size() != 2) fail(ErrorKind::Schema, "progression must be [start, step]");
        json tmp = {{"s", p[0]}, {"p", p[1]}};
        progs.push_back({json_nat(tmp, "s"), json_nat(tmp, "p")});
        if (progs.back().step == 0) fail(ErrorKind::Schema, "progression step must be >= 1");
      }
    }
    return periodic(json_nats(j, "finite"), std::move(progs), json_nats(j, "removals"));
  }
  if (kind == "geometric") return geometric(json_nat(j, "m"), json_nat(j, "b"), json_nat(j, "k0"));
  if (kind == "blocks") {
    if (!j.contains("rule") || !j.at("rule").is_string()) fail(ErrorKind::Schema, "blocks set needs a 'rule'");
    const auto rule = j.at("rule").get<std::string>();
    if (rule == "gap-doubling") return gap_doubling(json_nat(j, "width"));
    if (rule == "sparsify-part") {
      if (!j.contains("parent")) fail(ErrorKind::Schema, "sparsify-part needs a 'parent'");
      return sparsify_part(from_json(j.at("parent")), static_cast<int>(json_nat(j, "part")));
    }
    if (rule == "nearer-to") {
      if (!j.contains("target") || !j.contains("other")) fail(ErrorKind::Schema, "nearer-to needs target and other");
      return nearer_to(from_json(j.at("target")), from_json(j.at("other")));
    }
    if (rule == "union") {
      if (!j.contains("left") || !j.contains("right")) fail(ErrorKind::Schema, "union needs left and right");
      return unite(from_json(j.at("left")), from_json(j.at("right")));
    }
    fail(ErrorKind::Schema, "unknown blocks rule '" + rule + "'");
  }
  fail(ErrorKind::Schema, "unknown line set kind '" + kind + "'");
}

json LineSet::to_json() const { return impl_->to_json(); }
std::string LineSet::describe() const { return impl_->describe(); }
LineSet::Kind LineSet::kind() const { return impl_->kind(); }
const PeriodicData* LineSet::periodic_data() const { return impl_->periodic(); }
GapCertificate LineSet::gap() const { return impl_->gap(); }
bool LineSet::contains(Nat n) const { return impl_->contains(n); }
std::optional<Nat> LineSet::next(Nat n) const { return impl_->next(n); }
std::optional<Nat> LineSet::prev(Nat n) const { return impl_->prev(n); }
Nat LineSet::rank(Nat n) const { return impl_->rank(n); }
std::optional<Nat> LineSet::select(Nat i) const { return impl_->select(i); }
bool LineSet::is_finite() const { return impl_->is_finite(); }
std::vector<Nat> LineSet::window(Nat hi) const { return impl_->window(hi); }

ExtDistance LineSet::distance(Nat n) const {
  auto p = prev(n);
  if (p && *p == n) return ExtDistance::of(0);
  auto q = next(n);
  if (!p && !q) return ExtDistance::inf();
  Nat d = kNatMax;
  if (p) d = n - *p;
  if (q) d = std::min(d, *q - n);
  return ExtDistance::of(d);
}

// ---------------------------------------------------------------------------
// Distances

std::vector<Nat> distance_profile(const LineSet& s, Nat hi) {
  require(hi < kEnumerationCap, "distance profile window too large");
  std::vector<Nat> d(hi + 1, kNatMax);
  const auto w = s.window(hi);
  std::optional<Nat> last;
  std::size_t i = 0;
  for (Nat n = 0; n <= hi; ++n) {
    while (i < w.size() && w[i] <= n) last = w[i++];
    if (last) d[n] = n - *last;
  }
  std::optional<Nat> upcoming = hi == kNatMax ? std::nullopt : s.next(hi + 1);
  std::size_t k = w.size();
  for (Nat n = hi + 1; n-- > 0;) {
    while (k > 0 && w[k - 1] >= n) upcoming = w[--k];
    if (upcoming) d[n] = std::min(d[n], *upcoming - n);
  }
  return d;
}

static void require_exact_nonempty(const LineSet& a, const LineSet& b) {
  require(a.exact() && b.exact(), "exact distance needs finite or periodic sets; use hausdorff_at_scale");
  require(!a.empty() && !b.empty(), "Hausdorff distance to the empty set is undefined");
}

Nat stabilization_bound(std::initializer_list<const LineSet*> sets) {
  Nat base = 0, period = 1;
  for (const auto* s : sets) {
    const auto* d = s->periodic_data();
    require(d != nullptr, "stabilization bound needs exact-tier sets");
    base = std::max(base, d->base);
    period = checked_lcm(period, d->period);
  }
  return sat_add(base, 2 * period);
}

ExtDistance directed_distance(const LineSet& a, const LineSet& b) {
  require_exact_nonempty(a, b);
  if (!a.is_finite() && b.is_finite()) return ExtDistance::inf();
  Nat sup = 0;
  if (a.is_finite()) {
    for (Nat x : a.window(*a.prev(kNatMax))) sup = std::max(sup, b.distance(x).value);
    return ExtDistance::of(sup);
  }
  const Nat w = stabilization_bound({&a, &b});
  const auto prof = distance_profile(b, w);
  for (Nat x : a.window(w)) sup = std::max(sup, prof[x]);
  return ExtDistance::of(sup);
}

ExtDistance hausdorff_distance(const LineSet& a, const LineSet& b) {
  require_exact_nonempty(a, b);
  if (a.is_finite() != b.is_finite()) return ExtDistance::inf();
  const auto x = directed_distance(a, b), y = directed_distance(b, a);
  return ExtDistance::of(std::max(x.value, y.value));
}

namespace {

/// First element x of `from` with x <= limit and no element of `to` in [x-k, x+k].
std::optional<Nat> first_far_point(const LineSet& from, const LineSet& to, Nat k, Nat limit) {
  for (auto x = from.next(0); x && *x <= limit; x = *x == kNatMax ? std::nullopt : from.next(*x + 1)) {
    auto y = to.next(sat_sub(*x, k));
    if (!y || *y > sat_add(*x, k)) return x;
  }
  return std::nullopt;
}

json far_witness(Nat x, const char* side, const LineSet& other) {
  return {{"point", x}, {"in", side}, {"distance", other.distance(x).to_json()}};
}

}  // namespace

TriVerdict hausdorff_at_scale(const LineSet& a, const LineSet& b, Nat k, Nat hi) {
  require(hi >= k, "window must be at least the scale");
  if (a.exact() && b.exact()) {
    const auto d = hausdorff_distance(a, b);
    if (d.le(k)) return TriVerdict::yes("d_H = " + d.text() + " <= " + std::to_string(k), {{"distance", d.value}});
    Nat limit;
    if (d.infinite) {
      const LineSet& fin = a.is_finite() ? a : b;
      const LineSet& inf = a.is_finite() ? b : a;
      const Nat x = *inf.next(sat_add(*fin.prev(kNatMax), k + 1));
      json w = far_witness(x, a.is_finite() ? "b" : "a", fin);
      w["hausdorff"] = "inf";
      return TriVerdict::no("point " + std::to_string(x) + " is more than " + std::to_string(k) + " from the other set", w);
    }
    limit = stabilization_bound({&a, &b});
    if (auto x = first_far_point(a, b, k, limit)) {
      json w = far_witness(*x, "a", b);
      w["hausdorff"] = d.value;
      return TriVerdict::no("point " + std::to_string(*x) + " of a is more than " + std::to_string(k) + " from b", w);
    }
    auto x = first_far_point(b, a, k, limit);
    json w = far_witness(*x, "b", a);
    w["hausdorff"] = d.value;
    return TriVerdict::no("point " + std::to_string(*x) + " of b is more than " + std::to_string(k) + " from a", w);
  }
  if (auto x = first_far_point(a, b, k, hi - k))
    return TriVerdict::no("point " + std::to_string(*x) + " of a is more than " + std::to_string(k) + " from b",
                          far_witness(*x, "a", b));
  if (auto x = first_far_point(b, a, k, hi - k))
    return TriVerdict::no("point " + std::to_string(*x) + " of b is more than " + std::to_string(k) + " from a",
                          far_witness(*x, "b", a));
  return TriVerdict::unknown(hi, "no point farther than " + std::to_string(k) + " below " + std::to_string(hi - k));
}

TriVerdict verify_gap_certificate(const LineSet& s, Nat g, Nat hi) {
  Nat limit = hi;
  const bool exact = s.exact();
  if (exact) limit = s.is_finite() ? (s.empty() ? 0 : *s.prev(kNatMax)) : stabilization_bound({&s});
  std::optional<Nat> last;
  for (auto x = s.next(0); x && *x <= limit; x = *x == kNatMax ? std::nullopt : s.next(*x + 1)) {
    if (last && *x - *last > g)
      return TriVerdict::yes("gap " + std::to_string(*x - *last) + " > " + std::to_string(g),
                             {{"from", *last}, {"to", *x}});
    last = x;
  }
  if (exact) return TriVerdict::no("every gap is at most " + std::to_string(g), {{"checked_to", limit}});
  return TriVerdict::unknown(hi);
}

TriVerdict check_declared_gaps(const LineSet& s, Nat hi) {
  const auto cert = s.gap();
  switch (cert.kind) {
    case GapKind::Bounded: {
      auto v = verify_gap_certificate(s, cert.bound, hi);
      if (v.is_yes()) return TriVerdict::no("declared bound " + std::to_string(cert.bound) + " violated", v.witness);
      if (v.is_no()) return TriVerdict::yes("gaps bounded by " + std::to_string(cert.bound));
      return TriVerdict::yes("gaps bounded by " + std::to_string(cert.bound) + " on window",
                             {{"window", hi}});
    }
    case GapKind::Divergent: {
      // Record gaps must keep growing inside the window.
      json records = json::array();
      Nat best = 0;
      std::optional<Nat> last;
      for (auto x = s.next(0); x && *x <= hi; x = *x == kNatMax ? std::nullopt : s.next(*x + 1)) {
        if (last && *x - *last > best) {
          best = *x - *last;
          records.push_back(json::array({*last, *x}));
        }
        last = x;
      }
      if (records.size() >= 3) return TriVerdict::yes("gap records grow to " + std::to_string(best), {{"records", records}});
      return TriVerdict::unknown(hi, "too few gap records below " + std::to_string(hi));
    }
    case GapKind::Undeclared: break;
  }
  return TriVerdict::unknown(hi, "no gap certificate declared");
}

std::pair<LineSet, LineSet> sparsify_split(const LineSet& l) {
  require(!l.is_finite(), "sparsify_split needs an infinite set");
  return {LineSet::sparsify_part(l, 1), LineSet::sparsify_part(l, 2)};
}

namespace {

/// First element w of `s` with w + k <= hi such that no n in [w-k, w+k] has bad[n].
std::optional<Nat> isolated_point(const std::vector<Nat>& s, const std::vector<Nat>& bad_prefix, Nat k, Nat hi) {
  for (Nat w : s) {
    if (w + k > hi) break;
    const Nat lo = sat_sub(w, k);
    if (bad_prefix[w + k + 1] - bad_prefix[lo] == 0) return w;
  }
  return std::nullopt;
}

}  // namespace

NormalitySplit normality_split(const LineSet& a, const LineSet& b, Nat hi, Nat max_scale) {
  NormalitySplit out{LineSet::nearer_to(b, a), LineSet::nearer_to(a, b), {}};
  const auto da = distance_profile(a, hi);
  const auto db = distance_profile(b, hi);
  std::vector<Nat> in1(hi + 2, 0), in2(hi + 2, 0);  // prefix counts
  for (Nat n = 0; n <= hi; ++n) {
    const bool x1 = db[n] <= da[n];
    const bool x2 = da[n] <= db[n];
    if (!x1 && !x2) {
      out.verdict = TriVerdict::no("point " + std::to_string(n) + " is in neither part", {{"point", n}});
      return out;
    }
    in1[n + 1] = in1[n] + (x1 ? 1 : 0);
    in2[n + 1] = in2[n] + (x2 ? 1 : 0);
  }
  const auto wa = a.window(hi), wb = b.window(hi);
  json scales = json::array();
  for (Nat k = 0; k <= max_scale; ++k) {
    auto w1 = isolated_point(wa, in1, k, hi);
    auto w2 = isolated_point(wb, in2, k, hi);
    if (!w1 || !w2) {
      out.verdict = TriVerdict::unknown(hi, "no separation witness at scale " + std::to_string(k));
      return out;
    }
    scales.push_back({{"k", k}, {"a_far_from_x1", *w1}, {"b_far_from_x2", *w2}});
  }
  out.verdict = TriVerdict::yes("X1 u X2 covers [0," + std::to_string(hi) + "], separated up to scale " +
                                    std::to_string(max_scale),
                                {{"covered_to", hi}, {"scales", scales}});
  return out;
}

IntersectionResult intersects(const std::vector<LineSet>& sets, Nat hi) {
  require(!sets.empty(), "intersection of no sets");
  auto common = [&](Nat x) {
    return std::all_of(sets.begin(), sets.end(), [&](const LineSet& s) { return s.contains(x); });
  };
  // A finite exact member can be checked element by element.
  for (const auto& s : sets) {
    if (s.exact() && s.is_finite()) {
      for (Nat x : s.window(s.empty() ? 0 : *s.prev(kNatMax)))
        if (common(x)) return {Outcome::Yes, x};
      return {Outcome::No, std::nullopt};
    }
  }
  const bool all_exact = std::all_of(sets.begin(), sets.end(), [](const LineSet& s) { return s.exact(); });
  Nat limit = hi;
  if (all_exact) {
    Nat base = 0, period = 1;
    for (const auto& s : sets) {
      base = std::max(base, s.periodic_data()->base);
      period = checked_lcm(period, s.periodic_data()->period);
    }
    limit = sat_add(base, period);
  }
  const LineSet& first = sets.front();
  for (auto x = first.next(0); x && *x <= limit; x = *x == kNatMax ? std::nullopt : first.next(*x + 1))
    if (common(*x)) return {Outcome::Yes, *x};
  return {all_exact ? Outcome::No : Outcome::Unknown, std::nullopt};
}

LineSet union_exact(const LineSet& a, const LineSet& b) {
  const auto* da = a.periodic_data();
  const auto* db = b.periodic_data();
  require(da && db, "exact union needs finite or periodic sets");
  std::vector<Nat> fin = da->finite;
  fin.insert(fin.end(), db->finite.begin(), db->finite.end());
  std::vector<Progression> progs = da->progressions;
  progs.insert(progs.end(), db->progressions.begin(), db->progressions.end());
  std::vector<Nat> rem;
  for (Nat r : da->removals)
    if (!b.contains(r)) rem.push_back(r);
  for (Nat r : db->removals)
    if (!a.contains(r)) rem.push_back(r);
  if (a.kind() == LineSet::Kind::Finite && b.kind() == LineSet::Kind::Finite) {
    std::vector<Nat> el = a.window(a.empty() ? 0 : *a.prev(kNatMax));
    for (Nat x : b.window(b.empty() ? 0 : *b.prev(kNatMax))) el.push_back(x);
    return LineSet::finite(std::move(el));
  }
  return LineSet::periodic(std::move(fin), std::move(progs), std::move(rem));
}

bool asymptotically_disjoint_exact(const LineSet& a, const LineSet& b) {
  require(a.exact() && b.exact(), "exact asymptotic disjointness needs finite or periodic sets");
  return a.is_finite() || b.is_finite();
}

}  // namespace coarselab
