#include "coarselab/dimension.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace coarselab {

namespace {

std::vector<Mask> members_of(FamilyCode f) {
  std::vector<Mask> out;
  for_each_bit(f, [&](unsigned m) { out.push_back(m); });
  return out;
}

std::size_t family_multiplicity(FamilyCode f, std::size_t w) {
  std::size_t best = 0;
  for (unsigned x = 0; x < w; ++x) {
    std::size_t k = 0;
    for_each_bit(f, [&](unsigned m) { k += (m >> x) & 1u; });
    best = std::max(best, k);
  }
  return best;
}

FamilyCode down_of(FamilyCode f, std::size_t w) {
  FamilyCode out = 0;
  for_each_bit(f, [&](unsigned m) { out |= down_code(m, w); });
  return out;
}

Nat interval_lo(const std::vector<Nat>& s) { return s.front(); }
Nat interval_hi(const std::vector<Nat>& s) { return s.back(); }

}  // namespace

// ---------------------------------------------------------------------------

Family transversal_family(std::size_t width, std::span<const Mask> v) {
  require(!v.empty(), ErrorKind::Precondition, "transversal family of an empty subfamily");
  Mask un = 0;
  for (Mask m : v) un |= m;
  require(static_cast<std::size_t>(std::popcount(un)) <= kTransversalCap, ErrorKind::CapExceeded,
          "transversal family: union exceeds " + std::to_string(kTransversalCap) + " points");
  std::vector<Mask> out;
  for (Mask a = un;; a = (a - 1) & un) {
    bool meets = a != 0 && std::all_of(v.begin(), v.end(), [&](Mask m) { return (a & m) != 0; });
    if (meets) out.push_back(a);
    if (a == 0) break;
  }
  return Family(width, std::move(out));
}

TriVerdict is_uniformly_bounded(const LsrBackend& b, const std::vector<Mask>& cover) {
  require(!b.is_line(), ErrorKind::UniverseMismatch, "finite cover given to a line backend");
  require(cover.size() <= kSubfamilyCap, ErrorKind::CapExceeded,
          "uniform boundedness: more than " + std::to_string(kSubfamilyCap) + " members");
  const Universe& u = b.universe();
  for (std::uint32_t sel = 1; sel < (1u << cover.size()); ++sel) {
    std::vector<Mask> v;
    for (std::size_t i = 0; i < cover.size(); ++i)
      if ((sel >> i) & 1u) v.push_back(cover[i]);
    Family t = transversal_family(u.size(), v);
    std::vector<Mask> tm(t.members().begin(), t.members().end());
    if (tm.empty() || !member(b, tm).is_yes()) {
      Family vf(u.size(), v);
      return TriVerdict::no("a transversal family is not a member",
                            {{"subfamily", vf.format(u)}, {"transversal", t.format(u)}});
    }
  }
  return TriVerdict::yes("every transversal family is a member", {{"subfamilies", (1u << cover.size()) - 1}});
}

// ---------------------------------------------------------------------------

std::vector<Nat> IntervalRule::member(Nat i) const {
  require(i >= 1, ErrorKind::Precondition, "member indices start at 1");
  std::vector<Nat> out(len(i) + 1);
  std::iota(out.begin(), out.end(), lo(i));
  return out;
}

IntervalRule IntervalRule::from_json(const json& j) {
  if (!j.is_object() || !j.contains("rule") || !j["rule"].is_string())
    fail(ErrorKind::Schema, "cover rule: expected an object with a string field \"rule\"");
  const std::string r = j["rule"].get<std::string>();
  if (r == "adjacent-pairs") return adjacent_pairs();
  if (r == "i-to-2i") return i_to_2i();
  if (r == "singletons") return singletons();
  if (r != "intervals") fail(ErrorKind::Schema, "unknown cover rule: " + r);
  const json& p = j.contains("params") ? j["params"] : j;
  auto get = [&](const char* k, Nat def) {
    if (!p.contains(k)) return def;
    if (!p[k].is_number_integer() || p[k].get<long long>() < 0) fail(ErrorKind::Schema, std::string("cover rule: ") + k + " must be a natural number");
    return p[k].get<Nat>();
  };
  IntervalRule out{get("a1", 1), get("b1", 1), get("c1", 0), get("a2", 0), get("b2", 1), get("c2", 0), "intervals"};
  if (out.b1 == 0 || out.b2 == 0) fail(ErrorKind::Schema, "cover rule: divisors must be positive");
  return out;
}

json IntervalRule::to_json() const {
  if (name != "intervals") return {{"rule", name}};
  return {{"rule", "intervals"},
          {"params", {{"a1", a1}, {"b1", b1}, {"c1", c1}, {"a2", a2}, {"b2", b2}, {"c2", c2}}}};
}

TriVerdict is_uniformly_bounded(const LsrBackend& b, const IntervalRule& rule) {
  require(b.is_line(), ErrorKind::UniverseMismatch, "interval rule given to a finite backend");
  if (b.kind() == LsrBackend::Kind::MetricLine) {
    if (rule.bounded_diameter()) return TriVerdict::yes("bounded diameters", {{"R", rule.c2}});
    Nat i = 1;
    while (rule.len(i) <= b.budget().max_scale) ++i;
    return TriVerdict::no("diameters grow without bound",
                          {{"index", i}, {"diameter", rule.len(i)}, {"scale", b.budget().max_scale}});
  }
  if (rule.star_finite())
    return TriVerdict::yes("finite members, star-finite", {{"max_star_rule", rule.a1 > 0 ? "lo(i) grows" : "one member"}});
  return TriVerdict::no("infinitely many members contain one point",
                        {{"point", rule.c1}, {"members", {rule.member(1).back(), rule.member(2).back(), rule.member(3).back()}}});
}

// ---------------------------------------------------------------------------

PointCover PointCover::from_rule(const IntervalRule& rule, Nat lo, Nat hi) {
  require(lo <= hi, ErrorKind::Precondition, "empty window");
  PointCover pc{lo, hi, {}};
  if (rule.a1 == 0) {
    require(rule.a2 == 0, ErrorKind::Precondition,
            "infinitely many members contain the point " + std::to_string(rule.c1));
    if (rule.c1 <= hi && rule.c1 + rule.c2 >= lo) pc.members.push_back(rule.member(1));
    return pc;
  }
  std::vector<std::vector<Nat>> seen;
  for (Nat i = 1; rule.lo(i) <= hi; ++i) {
    if (rule.lo(i) + rule.len(i) < lo) continue;
    auto m = rule.member(i);
    if (seen.empty() || seen.back() != m) seen.push_back(std::move(m));
  }
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  pc.members = std::move(seen);
  return pc;
}

bool PointCover::covers() const {
  std::vector<bool> hit(hi - lo + 1, false);
  for (const auto& m : members)
    for (Nat x : m)
      if (x >= lo && x <= hi) hit[x - lo] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
}

json PointCover::to_json() const {
  json ms = json::array();
  for (const auto& m : members) ms.push_back(m.size() > 4 && m.back() - m.front() + 1 == m.size()
                                                 ? json{{"from", m.front()}, {"to", m.back()}}
                                                 : json(m));
  return {{"window", {lo, hi}}, {"members", std::move(ms)}};
}

std::size_t multiplicity(const std::vector<Mask>& cover, std::size_t width) {
  std::size_t best = 0;
  for (unsigned x = 0; x < width; ++x) {
    std::size_t k = 0;
    for (Mask m : cover) k += (m >> x) & 1u;
    best = std::max(best, k);
  }
  return best;
}

std::size_t multiplicity(const PointCover& cover) {
  std::vector<std::size_t> inc(cover.hi - cover.lo + 1, 0);
  for (const auto& m : cover.members)
    for (Nat x : m)
      if (x >= cover.lo && x <= cover.hi) ++inc[x - cover.lo];
  return inc.empty() ? 0 : *std::max_element(inc.begin(), inc.end());
}

Refinement refines(const std::vector<Mask>& u, const std::vector<Mask>& v) {
  Refinement r;
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto it = std::find_if(v.begin(), v.end(), [&](Mask m) { return (u[i] & ~m) == 0; });
    if (it == v.end()) {
      r.orphan = i;
      return r;
    }
    r.map.push_back(static_cast<std::size_t>(it - v.begin()));
  }
  r.ok = true;
  return r;
}

Refinement refines(const PointCover& u, const PointCover& v) {
  Refinement r;
  for (std::size_t i = 0; i < u.members.size(); ++i) {
    const auto& um = u.members[i];
    auto it = std::find_if(v.members.begin(), v.members.end(), [&](const std::vector<Nat>& vm) {
      return std::includes(vm.begin(), vm.end(), um.begin(), um.end());
    });
    if (it == v.members.end()) {
      r.orphan = i;
      return r;
    }
    r.map.push_back(static_cast<std::size_t>(it - v.members.begin()));
  }
  r.ok = true;
  return r;
}

// ---------------------------------------------------------------------------

json CoarseningCertificate::to_json() const {
  json inc = json::object();
  return {{"a", a},
          {"intervals", v.members.size()},
          {"cover", v.to_json()},
          {"refines", refinement.ok},
          {"map", refinement.map},
          {"multiplicity", multiplicity},
          {"disjoint_two_apart", intervals_disjoint_two_apart},
          {"uniformly_bounded", uniformly_bounded.to_json()}};
}

namespace {

CoarseningCertificate coarsen(const PointCover& u) {
  require(!u.members.empty(), ErrorKind::Precondition, "greedy coarsening of an empty cover");
  for (const auto& m : u.members) {
    require(!m.empty(), ErrorKind::Precondition, "cover members must be nonempty");
    require(std::is_sorted(m.begin(), m.end()), ErrorKind::Precondition, "cover members must be sorted");
  }
  for (Nat x = u.lo; x <= u.hi; ++x) {
    bool hit = std::any_of(u.members.begin(), u.members.end(),
                           [&](const std::vector<Nat>& m) { return std::binary_search(m.begin(), m.end(), x); });
    require(hit, ErrorKind::Precondition, "not a cover of the window: " + std::to_string(x) + " is uncovered");
  }
  CoarseningCertificate cert;
  cert.a.push_back(u.lo);
  Nat last_start = 0, floor = u.lo;  // members may stick out below the window
  for (const auto& m : u.members) {
    last_start = std::max(last_start, interval_lo(m));
    floor = std::min(floor, interval_lo(m));
  }
  // a_{n+1}: largest x sharing a member with some l <= a_n + 1. Run until the
  // window is covered and every member starts at or before a_{m-1} + 1.
  while (cert.a.size() < 2 || cert.a.back() < u.hi || cert.a[cert.a.size() - 2] + 1 < last_start) {
    const Nat reach = cert.a.back() + 1;
    Nat next = 0;
    bool any = false;
    for (const auto& m : u.members)
      if (interval_lo(m) <= reach) {
        next = std::max(next, interval_hi(m));
        any = true;
      }
    require(any && next >= reach, ErrorKind::Precondition,
            "no member reaches past " + std::to_string(cert.a.back()));
    cert.a.push_back(next);
  }
  cert.v.lo = u.lo;
  cert.v.hi = u.hi;
  for (std::size_t n = 0; n + 1 < cert.a.size(); ++n) {
    const Nat from = n == 0 ? floor : cert.a[n - 1] + 1;
    std::vector<Nat> iv(cert.a[n + 1] - from + 1);
    std::iota(iv.begin(), iv.end(), from);
    cert.v.members.push_back(std::move(iv));
  }
  cert.refinement = refines(u, cert.v);
  cert.incidence.assign(u.hi - u.lo + 1, 0);
  for (const auto& m : cert.v.members)
    for (Nat x : m)
      if (x >= u.lo && x <= u.hi) ++cert.incidence[x - u.lo];
  cert.multiplicity = *std::max_element(cert.incidence.begin(), cert.incidence.end());
  cert.intervals_disjoint_two_apart = true;
  for (std::size_t n = 0; n + 2 < cert.v.members.size(); ++n)
    cert.intervals_disjoint_two_apart =
        cert.intervals_disjoint_two_apart && interval_hi(cert.v.members[n]) < interval_lo(cert.v.members[n + 2]);
  cert.uniformly_bounded =
      cert.intervals_disjoint_two_apart
          ? TriVerdict::yes("finite intervals, each point in at most two",
                            {{"max_member", std::accumulate(cert.v.members.begin(), cert.v.members.end(), std::size_t{0},
                                                            [](std::size_t s, const std::vector<Nat>& m) {
                                                              return std::max(s, m.size());
                                                            })}})
          : TriVerdict::no("intervals two apart overlap", {{"multiplicity", cert.multiplicity}});
  return cert;
}

}  // namespace

CoarseningCertificate greedy_interval_coarsen(const PointCover& u) { return coarsen(u); }

CoarseningCertificate greedy_interval_coarsen(const IntervalRule& rule, Nat n) {
  require(n >= 1, ErrorKind::Precondition, "window [1, N] needs N >= 1");
  if (!rule.star_finite())
    fail(ErrorKind::Precondition, "a_n undefined: the point " + std::to_string(rule.c1) + " lies in infinitely many members");
  return coarsen(PointCover::from_rule(rule, 1, n));
}

// ---------------------------------------------------------------------------

UniformTable::UniformTable(const ExplicitLsr& c) : w_(c.width()) {
  require(w_ <= kMaxExplicitWidth, ErrorKind::CapExceeded, "uniform table needs |X| <= 4");
  const std::size_t subsets = (std::size_t{1} << w_) - 1;  // nonempty subsets
  const std::size_t n = std::size_t{1} << subsets;
  trans_.assign(n, false);
  ub_.assign(n, false);
  trans_[0] = ub_[0] = true;
  for (std::size_t idx = 1; idx < n; ++idx) {
    const FamilyCode v = static_cast<FamilyCode>(idx) << 1;
    Mask un = 0;
    for_each_bit(v, [&](unsigned m) { un |= m; });
    FamilyCode t = 0;
    for (Mask a = un; a != 0; a = (a - 1) & un) {
      bool meets = true;
      for_each_bit(v, [&](unsigned m) { meets = meets && (a & m) != 0; });
      if (meets) t |= code_bit(a);
    }
    trans_[idx] = t != 0 && c.member(t);
    bool ok = trans_[idx];
    for (std::size_t rest = idx; ok && rest; rest &= rest - 1) ok = ub_[idx & ~(rest & -rest)];
    ub_[idx] = ok;
  }
}

bool UniformTable::transversal_member(FamilyCode v) const { return trans_.at(v >> 1); }
bool UniformTable::uniformly_bounded(FamilyCode u) const { return ub_.at(u >> 1); }

bool UniformTable::is_cover(FamilyCode u) const {
  Mask un = 0;
  for_each_bit(u, [&](unsigned m) { un |= m; });
  return un == (Mask{1} << w_) - 1;
}

std::vector<FamilyCode> UniformTable::covers() const {
  std::vector<FamilyCode> out;
  for (std::size_t idx = 1; idx < ub_.size(); ++idx) {
    FamilyCode f = static_cast<FamilyCode>(idx) << 1;
    if (ub_[idx] && is_cover(f)) out.push_back(f);
  }
  return out;
}

std::vector<FamilyCode> UniformTable::maximal_covers() const {
  const std::size_t subsets = (std::size_t{1} << w_) - 1;
  std::vector<FamilyCode> out;
  for (FamilyCode f : covers()) {
    bool maximal = true;
    for (std::size_t m = 1; m <= subsets && maximal; ++m)
      if (!((f >> m) & 1u) && uniformly_bounded(f | code_bit(static_cast<Mask>(m)))) maximal = false;
    if (maximal) out.push_back(f);
  }
  return out;
}

json AsdimResult::to_json(const Universe& u) const {
  json certs = json::array();
  for (const auto& c : certificates)
    certs.push_back({{"cover", format_code(c.u, u)},
                     {"coarsening", format_code(c.v, u)},
                     {"multiplicity", c.multiplicity},
                     {"map", c.map}});
  json j = {{"asdim", asdim}, {"uniformly_bounded_covers", ub_covers}, {"certificates", std::move(certs)}};
  if (lower_bound_cover) j["lower_bound_cover"] = format_code(*lower_bound_cover, u);
  return j;
}

AsdimResult asdim_explicit(const ExplicitLsr& c) {
  AsdimResult r;
  if (c.width() == 0) return r;
  UniformTable t(c);
  const std::size_t w = c.width();
  auto covers = t.covers();
  r.ub_covers = covers.size();
  std::vector<std::pair<std::size_t, FamilyCode>> by_mult;
  for (FamilyCode v : covers) by_mult.push_back({family_multiplicity(v, w), v});
  std::sort(by_mult.begin(), by_mult.end());
  std::vector<FamilyCode> downs;
  for (auto& [m, v] : by_mult) downs.push_back(down_of(v, w));

  const auto maximal = t.maximal_covers();
  // Smallest multiplicity each maximal cover can be coarsened to.
  std::vector<std::size_t> best(maximal.size());
  std::vector<std::size_t> choice(maximal.size());
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    for (std::size_t j = 0; j < by_mult.size(); ++j)
      if ((maximal[i] & ~downs[j]) == 0) {
        best[i] = by_mult[j].first;
        choice[i] = j;
        break;
      }
  }
  std::size_t need = 1;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < maximal.size(); ++i)
    if (best[i] > need) {
      need = best[i];
      worst = i;
    }
  r.asdim = static_cast<unsigned>(need - 1);
  if (r.asdim > 0) r.lower_bound_cover = maximal[worst];
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    AsdimResult::Certificate cert;
    cert.u = maximal[i];
    cert.v = by_mult[choice[i]].second;
    cert.multiplicity = by_mult[choice[i]].first;
    auto rf = refines(members_of(cert.u), members_of(cert.v));
    require(rf.ok, ErrorKind::Precondition, "internal: refinement certificate failed");
    cert.map = rf.map;
    r.certificates.push_back(std::move(cert));
  }
  return r;
}

AsdimResult asdim_explicit(const LsrBackend& b) {
  require(!b.is_line(), ErrorKind::UniverseMismatch, "asdim_explicit needs an explicit backend");
  return asdim_explicit(b.restricted() ? b.subspace_lsr() : b.lsr());
}

// ---------------------------------------------------------------------------

std::vector<std::vector<Nat>> forced_blocks(const PointCover& cover) {
  Nat top = cover.hi;
  for (const auto& m : cover.members)
    if (!m.empty()) top = std::max(top, m.back());
  std::vector<Nat> parent(top + 1);
  std::iota(parent.begin(), parent.end(), Nat{0});
  auto find = [&](Nat x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> used(top + 1, false);
  for (const auto& m : cover.members)
    for (Nat x : m) {
      used[x] = true;
      parent[find(x)] = find(m.front());
    }
  std::vector<std::vector<Nat>> groups(top + 1);
  for (Nat x = 0; x <= top; ++x)
    if (used[x]) groups[find(x)].push_back(x);
  std::vector<std::vector<Nat>> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(std::move(g));
  return out;
}

json TopoLineReport::to_json() const {
  json ws = json::array();
  for (const auto& w : windows)
    ws.push_back({{"N", w.n},
                  {"intervals", w.intervals},
                  {"multiplicity", w.multiplicity},
                  {"refines", w.refines},
                  {"uniformly_bounded", w.uniformly_bounded},
                  {"chain_forces_window", w.chain_forces_window},
                  {"forced_member_size", w.forced_member_size}});
  return {{"windows", std::move(ws)}, {"certified", certified}, {"conclusion", conclusion}};
}

TopoLineReport asdim_topo_line_report(const std::vector<Nat>& ns) {
  TopoLineReport rep;
  rep.certified = !ns.empty();
  const auto rule = IntervalRule::adjacent_pairs();
  for (Nat n : ns) {
    TopoLineReport::Window w;
    w.n = n;
    auto cover = PointCover::from_rule(rule, 1, n);
    auto cert = greedy_interval_coarsen(cover);
    w.intervals = cert.v.members.size();
    w.multiplicity = cert.multiplicity;
    w.refines = cert.refinement.ok;
    w.uniformly_bounded = cert.uniformly_bounded.is_yes();
    for (const auto& blk : forced_blocks(cover))
      if (blk.front() <= 1 && blk.back() >= n && blk.size() >= n) {
        w.chain_forces_window = true;
        w.forced_member_size = blk.size();
      }
    rep.certified = rep.certified && w.multiplicity == 2 && w.refines && w.uniformly_bounded && w.chain_forces_window;
    rep.windows.push_back(w);
  }
  std::string list;
  for (Nat n : ns) list += (list.empty() ? "" : ", ") + std::to_string(n);
  rep.conclusion = rep.certified ? "asdim = 1 certified at windows N ∈ {" + list + "}"
                                 : "asdim = 1 not certified at windows N ∈ {" + list + "}";
  return rep;
}

}  // namespace coarselab
