#include "coarselab/backends.hpp"

#include <algorithm>
#include <bit>

namespace coarselab {

namespace {

Mask compress(Mask m, Mask y) {
  Mask out = 0;
  unsigned j = 0;
  for_each_bit(y, [&](unsigned i) {
    if ((m >> i) & 1u) out |= Mask{1} << j;
    ++j;
  });
  return out;
}

void require_explicit(const LsrBackend& b, const char* what) {
  require(!b.is_line(), ErrorKind::UniverseMismatch,
          std::string(what) + ": finite subsets given to the line backend " + b.name());
}

void require_line(const LsrBackend& b, const char* what) {
  require(b.is_line(), ErrorKind::UniverseMismatch,
          std::string(what) + ": line sets given to the finite backend " + b.name());
}

void require_in_space(const LsrBackend& b, const std::vector<Mask>& fam) {
  const Mask full = b.universe().full();
  for (Mask a : fam) {
    require((a & ~full) == 0, ErrorKind::UniverseMismatch, "set outside the universe");
    require((a & ~b.subspace()) == 0, ErrorKind::Precondition,
            b.universe().format(a) + " is not a subset of the subspace " + b.universe().format(b.subspace()));
  }
}

// Finite non-exact sets become explicit finite lists so that every question is exact.
LineSet exactify(const LineSet& s) {
  if (s.exact() || !s.is_finite()) return s;
  auto top = s.prev(kNatMax);
  return top ? LineSet::finite(s.window(*top)) : LineSet::finite({});
}

bool subset_exact(const LineSet& a, const LineSet& y) {
  const Nat hi = stabilization_bound({&a, &y});
  for (Nat n : a.window(hi))
    if (!y.contains(n)) return false;
  return true;
}

void require_in_line_space(const LsrBackend& b, const std::vector<LineSet>& fam) {
  const auto& y = b.line_subspace();
  if (!y) return;
  for (const LineSet& a : fam) {
    if (a.exact() || a.is_finite()) {
      require(subset_exact(exactify(a), *y), ErrorKind::Precondition,
              a.describe() + " is not a subset of the subspace " + y->describe());
    } else {
      for (Nat n : a.window(b.budget().window))
        require(y->contains(n), ErrorKind::Precondition,
                a.describe() + " leaves the subspace at " + std::to_string(n));
    }
  }
}

bool same_set(const LineSet& a, const LineSet& b) { return a.to_json() == b.to_json(); }

}  // namespace

// ---------------------------------------------------------------------------

LsrBackend LsrBackend::explicit_lsr(ExplicitLsr c) {
  LsrBackend b;
  b.kind_ = Kind::Explicit;
  b.u_ = c.universe();
  b.subspace_ = b.u_.full();
  b.lsr_ = std::make_shared<const ExplicitLsr>(std::move(c));
  return b;
}

LsrBackend LsrBackend::metric_line(ScaleBudget budget) {
  LsrBackend b;
  b.kind_ = Kind::MetricLine;
  b.budget_ = budget;
  return b;
}

LsrBackend LsrBackend::topo_trace(ScaleBudget budget) {
  LsrBackend b;
  b.kind_ = Kind::TopoTrace;
  b.budget_ = budget;
  return b;
}

LsrBackend LsrBackend::partition(ExplicitCoarse e) {
  LsrBackend b;
  b.kind_ = Kind::PartitionCoarse;
  b.u_ = e.universe();
  b.subspace_ = b.u_.full();
  if (b.u_.size() <= kMaxExplicitWidth) b.lsr_ = std::make_shared<const ExplicitLsr>(e.lsr());
  b.coarse_ = std::make_shared<const ExplicitCoarse>(std::move(e));
  return b;
}

LsrBackend LsrBackend::from_asr(ExplicitAsr l) {
  LsrBackend b;
  b.kind_ = Kind::FromAsr;
  b.u_ = l.universe();
  b.subspace_ = b.u_.full();
  b.lsr_ = std::make_shared<const ExplicitLsr>(l.lsr());
  b.asr_ = std::make_shared<const ExplicitAsr>(std::move(l));
  return b;
}

LsrBackend LsrBackend::with_budget(ScaleBudget budget) const {
  LsrBackend b = *this;
  b.budget_ = budget;
  return b;
}

std::string LsrBackend::name() const {
  switch (kind_) {
    case Kind::Explicit: return "explicit";
    case Kind::MetricLine: return "metric-line";
    case Kind::TopoTrace: return "topo-trace";
    case Kind::PartitionCoarse: return "partition";
    case Kind::FromAsr: return "from-asr";
  }
  return "?";
}

const Universe& LsrBackend::universe() const {
  require_explicit(*this, "universe");
  return u_;
}

const ExplicitLsr& LsrBackend::lsr() const {
  require_explicit(*this, "lsr");
  if (!lsr_) fail(ErrorKind::CapExceeded, "explicit LS.R tables need |X| <= 4");
  return *lsr_;
}

const ExplicitCoarse& LsrBackend::coarse() const {
  require(kind_ == Kind::PartitionCoarse, ErrorKind::Precondition, "not a partition backend");
  return *coarse_;
}

const ExplicitAsr& LsrBackend::asr() const {
  require(kind_ == Kind::FromAsr, ErrorKind::Precondition, "not a from-asr backend");
  return *asr_;
}

bool LsrBackend::restricted() const {
  return is_line() ? line_subspace_.has_value() : subspace_ != u_.full();
}

ExplicitLsr LsrBackend::subspace_lsr() const { return restrict(lsr(), subspace_); }

ExplicitLsr restrict(const ExplicitLsr& c, Mask y) {
  const Universe& u = c.universe();
  require(y != 0, ErrorKind::Precondition, "restriction to the empty set");
  require((y & ~u.full()) == 0, ErrorKind::UniverseMismatch, "subspace outside the universe");
  std::vector<std::string> labels;
  for_each_bit(y, [&](unsigned i) { labels.push_back(u.label(i)); });
  Universe uy(std::move(labels));
  const FamilyCode inside = down_code(y, u.size());
  std::vector<FamilyCode> gens;
  for (FamilyCode m : c.maximal()) {
    FamilyCode g = 0;
    for_each_bit(m & inside, [&](unsigned a) { g |= code_bit(compress(a, y)); });
    gens.push_back(g);
  }
  return ExplicitLsr::from_codes(std::move(uy), gens, false);
}

LsrBackend restrict(const LsrBackend& b, Mask y) {
  require_explicit(b, "restrict");
  require(y != 0, ErrorKind::Precondition, "restriction to the empty set");
  require((y & ~b.universe().full()) == 0, ErrorKind::UniverseMismatch, "subspace outside the universe");
  LsrBackend r = b;
  r.subspace_ = b.subspace_ & y;
  require(r.subspace_ == y, ErrorKind::Precondition, "subspace is not inside the current subspace");
  return r;
}

LsrBackend restrict(const LsrBackend& b, const LineSet& y) {
  require_line(b, "restrict");
  require(!y.empty(), ErrorKind::Precondition, "restriction to the empty set");
  require(y.exact(), ErrorKind::Precondition, "line subspaces must be finite or periodic sets");
  if (b.line_subspace_)
    require(subset_exact(y, *b.line_subspace_), ErrorKind::Precondition,
            "subspace is not inside the current subspace");
  LsrBackend r = b;
  r.line_subspace_ = y;
  return r;
}

// ---------------------------------------------------------------------------

TriVerdict member(const LsrBackend& b, const std::vector<Mask>& fam) {
  require_explicit(b, "member");
  require(!fam.empty(), ErrorKind::Precondition, "member: empty family");
  require_in_space(b, fam);
  const Universe& u = b.universe();
  Family f(u.size(), fam);
  switch (b.kind()) {
    case LsrBackend::Kind::Explicit: {
      bool in = b.lsr().member(f);
      return TriVerdict::of(in, in ? "listed member" : "not a member", {{"family", f.format(u)}});
    }
    case LsrBackend::Kind::PartitionCoarse: {
      const ExplicitCoarse& e = b.coarse();
      for (Mask a : f.members())
        for (Mask c : f.members())
          if ((a & ~e.apply(c)) != 0)
            return TriVerdict::no("A not inside M(B)", {{"A", u.format(a)}, {"B", u.format(c)},
                                                        {"M(B)", u.format(e.apply(c))}});
      return TriVerdict::yes("A inside M(B) for all pairs", {{"family", f.format(u)}});
    }
    case LsrBackend::Kind::FromAsr: {
      const ExplicitAsr& l = b.asr();
      Mask first = f.members()[0];
      for (Mask a : f.members())
        if (!l.alike(first, a))
          return TriVerdict::no("members in different classes", {{"A", u.format(first)}, {"B", u.format(a)}});
      return TriVerdict::yes("one class", {{"class", l.blocks()[first]}});
    }
    default: break;
  }
  fail(ErrorKind::Precondition, "member: unsupported backend");
}

TriVerdict metric_pair(const LineSet& a0, const LineSet& b0, const ScaleBudget& budget) {
  const LineSet a = exactify(a0), b = exactify(b0);
  if (a.empty() || b.empty()) {
    if (a.empty() && b.empty()) return TriVerdict::yes("both empty", {{"k", 0}});
    return TriVerdict::no("exactly one set is empty", {{"d_H", "inf"}});
  }
  if (a.exact() && b.exact()) {
    ExtDistance d = hausdorff_distance(a, b);
    if (d.infinite) return TriVerdict::no("infinite Hausdorff distance", {{"d_H", "inf"}});
    return TriVerdict::yes("finite Hausdorff distance", {{"k", d.value}});
  }
  if (same_set(a, b)) return TriVerdict::yes("identical descriptors", {{"k", 0}});
  if (a.is_finite() != b.is_finite()) {
    const LineSet& fin = a.is_finite() ? a : b;
    const LineSet& inf = a.is_finite() ? b : a;
    Nat top = *fin.prev(kNatMax);
    Nat far = *inf.next(top + 2 * budget.max_scale + 1);
    return TriVerdict::no("finite set against an infinite set",
                          {{"d_H", "inf"}, {"far_point", far}, {"distance", fin.distance(far).value}});
  }
  // Both infinite, at least one with enumerator-backed gaps.
  GapCertificate ga = a.gap(), gb = b.gap();
  if (a.exact()) ga = {GapKind::Bounded, 0};
  if (b.exact()) gb = {GapKind::Bounded, 0};
  if ((ga.kind == GapKind::Divergent && gb.kind == GapKind::Bounded) ||
      (ga.kind == GapKind::Bounded && gb.kind == GapKind::Divergent)) {
    TriVerdict s = hausdorff_at_scale(a, b, budget.max_scale, budget.window);
    json w = {{"d_H", "inf"}, {"rule", "divergent gaps against bounded gaps"}};
    if (s.is_no()) w["scale_witness"] = s.witness;
    return TriVerdict::no("gaps of one set diverge while the other has bounded gaps", std::move(w));
  }
  TriVerdict s = hausdorff_at_scale(a, b, budget.max_scale, budget.window);
  TriVerdict u = TriVerdict::unknown(budget.window,
                                     s.is_no() ? "d_H exceeds the largest scale inside the window"
                                               : "d_H within the largest scale on the window");
  u.witness = {{"max_scale", budget.max_scale}, {"scale_verdict", s.to_json()}};
  return u;
}

TriVerdict member(const LsrBackend& b, const std::vector<LineSet>& fam) {
  require_line(b, "member");
  require(!fam.empty(), ErrorKind::Precondition, "member: empty family");
  require_in_line_space(b, fam);
  if (b.kind() == LsrBackend::Kind::TopoTrace) {
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = i + 1; j < fam.size(); ++j)
        if (fam[i].is_finite() != fam[j].is_finite()) {
          std::size_t f = fam[i].is_finite() ? i : j, g = fam[i].is_finite() ? j : i;
          return TriVerdict::no("finite and infinite members", {{"finite", f}, {"infinite", g}});
        }
    return TriVerdict::yes(fam[0].is_finite() ? "all members finite" : "all members infinite",
                           {{"all", fam[0].is_finite() ? "finite" : "infinite"}});
  }
  Nat k = 0;
  bool unknown = false;
  json pending;
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = i + 1; j < fam.size(); ++j) {
      TriVerdict v = metric_pair(fam[i], fam[j], b.budget());
      if (v.is_no()) {
        v.witness["pair"] = {i, j};
        return v;
      }
      if (v.is_unknown()) {
        if (!unknown) pending = {{"pair", {i, j}}, {"detail", v.witness}};
        unknown = true;
      } else {
        k = std::max<Nat>(k, v.witness["k"].get<Nat>());
      }
    }
  if (unknown) {
    TriVerdict u = TriVerdict::unknown(b.budget().window, "some pair is only scale-checked");
    u.witness = pending;
    return u;
  }
  return TriVerdict::yes("pairwise Hausdorff distance bounded", {{"k", k}});
}

TriVerdict bounded(const LsrBackend& b, Mask s) {
  require_explicit(b, "bounded");
  require_in_space(b, {s});
  if (s == 0) return TriVerdict::yes("empty set", {{"point", nullptr}});
  for (unsigned x = 0; x < b.universe().size(); ++x) {
    if (!((b.subspace() >> x) & 1u)) continue;
    if (member(b, {s, Mask{1} << x}).is_yes())
      return TriVerdict::yes("{B, {x}} is a member", {{"point", b.universe().label(x)}});
  }
  return TriVerdict::no("no point x with {B, {x}} a member", {{"set", b.universe().format(s)}});
}

TriVerdict bounded(const LsrBackend& b, const LineSet& s) {
  require_line(b, "bounded");
  require_in_line_space(b, {s});
  if (s.is_finite()) return TriVerdict::yes("finite set", {{"size", exactify(s).rank(kNatMax)}});
  return TriVerdict::no("infinite set", {{"finite", false}});
}

TriVerdict is_connected(const LsrBackend& b) {
  if (b.is_line()) return TriVerdict::yes("every finite set is bounded", {{"rule", "finite pairs"}});
  if (b.kind() == LsrBackend::Kind::PartitionCoarse && !b.restricted()) {
    auto cls = b.coarse().classes();
    if (cls.size() == 1) return TriVerdict::yes("one class", {{"classes", 1}});
    return TriVerdict::no("several classes", {{"A", b.universe().format(cls[0])}, {"B", b.universe().format(cls[1])}});
  }
  const Universe& u = b.universe();
  for (unsigned x = 0; x < u.size(); ++x)
    for (unsigned y = x + 1; y < u.size(); ++y) {
      if (!((b.subspace() >> x) & 1u) || !((b.subspace() >> y) & 1u)) continue;
      if (!member(b, {Mask{1} << x, Mask{1} << y}).is_yes())
        return TriVerdict::no("{{x}, {y}} is not a member", {{"x", u.label(x)}, {"y", u.label(y)}});
    }
  return TriVerdict::yes("all point pairs are members");
}

// ---------------------------------------------------------------------------

Family n_e_of_l(const Relation& e, Mask l) {
  const std::size_t w = e.size();
  require(w <= kDefaultUniverseCap, ErrorKind::CapExceeded, "n_e_of_l: universe too large");
  const Mask el = apply(e, l);
  std::vector<Mask> out;
  for (Mask lp = 0; lp < (Mask{1} << w); ++lp)
    if ((l & ~apply(e, lp)) == 0 && (lp & ~el) == 0) out.push_back(lp);
  return Family(w, std::move(out));
}

InducedAsr lambda_of(const LsrBackend& b) {
  InducedAsr r;
  switch (b.kind()) {
    case LsrBackend::Kind::MetricLine:
      r.rule = "finite-hausdorff";
      return r;
    case LsrBackend::Kind::TopoTrace:
      r.rule = "finite-or-infinite";
      return r;
    default: break;
  }
  LambdaResult l = lambda_of(b.restricted() ? b.subspace_lsr() : b.lsr());
  r.asr = std::move(l.asr);
  r.failure = std::move(l.failure);
  r.witness = std::move(l.witness);
  if (!r.failure.empty()) r.asr.reset();
  return r;
}

TriVerdict line_alike(const LsrBackend& b, const LineSet& x, const LineSet& y) {
  require_line(b, "line_alike");
  return member(b, std::vector<LineSet>{x, y});
}

// ---------------------------------------------------------------------------

ExplicitNearness induced_nearness(const LsrBackend& b, ClosureTable closure) {
  require_explicit(b, "induced_nearness");
  require(!b.restricted(), ErrorKind::Precondition, "nearness queries run on the ambient space");
  return ExplicitNearness::induced(b.lsr(), std::move(closure));
}

TriVerdict nearness_of(const LsrBackend& b, const std::vector<Mask>& fam, const ClosureTable& closure) {
  require_explicit(b, "nearness_of");
  require_in_space(b, fam);
  ExplicitNearness n = induced_nearness(b, closure);
  const Universe& u = b.universe();
  Family f(u.size(), fam);
  FamilyCode c = encode(f);
  Mask common = u.full();
  for (Mask a : f.members()) common &= n.closure()[a];
  if (common != 0)
    return TriVerdict::yes("closures meet", {{"clause", 1}, {"point", u.format(common & -common)}});
  if (n.near(c)) {
    // Recover a refining member of unbounded sets for the witness.
    const ExplicitLsr& lsr = b.lsr();
    for (FamilyCode m : lsr.maximal()) {
      FamilyCode unb = 0;
      for_each_bit(m, [&](unsigned a) {
        if (!lsr.bounded(a)) unb |= code_bit(a);
      });
      if (unb && ll_refines(unb, c, u.size()))
        return TriVerdict::yes("refined by a member of unbounded sets",
                               {{"clause", 2}, {"B", format_code(unb, u)}});
    }
    return TriVerdict::yes("near", {{"clause", 2}});
  }
  json w = {{"clause", 1}, {"intersection", "empty"}, {"family", f.format(u)}};
  return TriVerdict::no("closures are disjoint and no member of unbounded sets refines it", std::move(w));
}

TriVerdict nearness_of(const LsrBackend& b, const std::vector<LineSet>& fam0) {
  require_line(b, "nearness_of");
  require_in_line_space(b, fam0);
  if (fam0.empty()) return TriVerdict::yes("empty family: the intersection is all of N", {{"clause", 1}});
  std::vector<LineSet> fam;
  for (const LineSet& s : fam0) fam.push_back(exactify(s));
  for (std::size_t i = 0; i < fam.size(); ++i)
    if (fam[i].empty()) return TriVerdict::no("empty member", {{"member", i}});
  IntersectionResult in = intersects(fam, b.budget().window);
  if (in.outcome == Outcome::Yes) return TriVerdict::yes("members meet", {{"clause", 1}, {"point", *in.witness}});
  for (std::size_t i = 0; i < fam.size(); ++i)
    if (fam[i].is_finite()) {
      // A finite member contains no unbounded set; intersecting is exact here.
      return TriVerdict::no("disjoint members and a finite member",
                            {{"clause", 2}, {"finite_member", i}, {"intersection", "empty"}});
    }
  bool bounded_gaps = true;
  for (const LineSet& s : fam) bounded_gaps = bounded_gaps && (s.exact() || s.gap().kind == GapKind::Bounded);
  if (b.kind() == LsrBackend::Kind::TopoTrace || bounded_gaps) {
    json w = {{"clause", 2}, {"B", "the family itself"}};
    if (b.kind() == LsrBackend::Kind::MetricLine) {
      TriVerdict m = member(b, fam);
      if (m.is_yes()) w["k"] = m.witness["k"];
      else w["rule"] = "bounded gaps give finite Hausdorff distance";
    }
    return TriVerdict::yes("all members infinite", std::move(w));
  }
  TriVerdict r = refute_near_at_scale(fam, b.budget().max_scale, b.budget().window);
  TriVerdict u = TriVerdict::unknown(b.budget().window,
                                     r.is_no() ? "clause 2 refuted at every scale up to max_scale inside the window"
                                               : "no intersection inside the window");
  u.witness = {{"max_scale", b.budget().max_scale}, {"refutation", r.to_json()}};
  return u;
}

TriVerdict refute_near_at_scale(const std::vector<LineSet>& fam, Nat k, Nat hi) {
  require(!fam.empty(), ErrorKind::Precondition, "refute_near_at_scale: empty family");
  require(fam.size() >= 2, ErrorKind::Precondition, "refute_near_at_scale: needs two members");
  IntersectionResult in = intersects(fam, hi);
  if (in.outcome == Outcome::Yes)
    return TriVerdict::yes("members meet inside the window", {{"point", *in.witness}});
  std::size_t anchor = 0;
  Nat fewest = kNatMax;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    Nat c = fam[i].rank(hi + 1);
    if (c < fewest) {
      fewest = c;
      anchor = i;
    }
  }
  if (hi < k) return TriVerdict::unknown(hi, "window smaller than the scale");
  json pts = json::array();
  for (Nat m : fam[anchor].window(hi - k)) {
    bool found = false;
    for (std::size_t j = 0; j < fam.size() && !found; ++j) {
      if (j == anchor) continue;
      ExtDistance d = fam[j].distance(m);
      if (!d.le(k)) {
        pts.push_back({{"m", m}, {"member", j}, {"distance", d.to_json()}});
        found = true;
      }
    }
    if (!found) {
      TriVerdict u = TriVerdict::unknown(hi, "a point of the sparsest member is within k of every member");
      u.witness = {{"k", k}, {"anchor", anchor}, {"m", m}};
      return u;
    }
  }
  return TriVerdict::no("every anchor point is farther than k from some member",
                        {{"k", k}, {"window", hi}, {"anchor", anchor}, {"points", std::move(pts)}});
}

// ---------------------------------------------------------------------------

bool asymptotically_disjoint(const ExplicitAsr& l, Mask a, Mask b) {
  std::vector<Mask> ua, ub;
  for (Mask s = a;; s = (s - 1) & a) {
    if (!l.bounded(s)) ua.push_back(s);
    if (s == 0) break;
  }
  for (Mask s = b;; s = (s - 1) & b) {
    if (!l.bounded(s)) ub.push_back(s);
    if (s == 0) break;
  }
  for (Mask x : ua)
    for (Mask y : ub)
      if (l.alike(x, y)) return false;
  return true;
}

ExplicitProximity proximity_of(const ExplicitAsr& l, const ClosureTable& closure0) {
  const Universe& u = l.universe();
  const std::size_t w = u.size();
  require(w <= kMaxExplicitWidth, ErrorKind::CapExceeded, "explicit proximity needs |X| <= 4");
  ClosureTable cl = closure0.empty() ? discrete_closure(w) : closure0;
  AxiomReport cr = check_closure(cl, w);
  require(cr.passed(), ErrorKind::Precondition, "closure table is not a Kuratowski closure: " + cr.text());
  const Mask n = Mask{1} << w;
  std::vector<std::vector<bool>> dis(n, std::vector<bool>(n));
  for (Mask a = 0; a < n; ++a)
    for (Mask b = 0; b < n; ++b) dis[a][b] = asymptotically_disjoint(l, a, b);
  for (Mask a = 0; a < n; ++a)
    for (Mask b = 0; b < n; ++b) {
      if (!dis[a][b]) continue;
      bool split = false;
      for (Mask x1 = 0; x1 < n && !split; ++x1)
        split = dis[x1][a] && dis[(u.full() & ~x1)][b];
      // X2 = complement of X1 is the largest choice; shrinking X2 only helps disjointness.
      if (!split)
        fail(ErrorKind::Precondition, "AS.R is not asymptotically normal at A = " + u.format(a) +
                                          ", B = " + u.format(b));
    }
  return ExplicitProximity::from_predicate(u, [&](Mask a, Mask b) {
    return (cl[a] & cl[b]) != 0 || !dis[a][b];
  });
}

TriVerdict proximity_of(const LsrBackend& b, const LineSet& x0, const LineSet& y0) {
  require_line(b, "proximity_of");
  const LineSet x = exactify(x0), y = exactify(y0);
  IntersectionResult in = intersects({x, y}, b.budget().window);
  if (in.outcome == Outcome::Yes) return TriVerdict::yes("the sets meet", {{"point", *in.witness}});
  if (x.is_finite() || y.is_finite())
    return TriVerdict::no("disjoint and one set is finite", {{"finite", x.is_finite() ? 0 : 1}});
  if (b.kind() == LsrBackend::Kind::TopoTrace || (x.exact() && y.exact()))
    return TriVerdict::yes("both infinite", {{"rule", "infinite sets are not asymptotically disjoint"}});
  TriVerdict u = TriVerdict::unknown(b.budget().window, "infinite enumerator-backed sets");
  u.witness = {{"hausdorff_scale", hausdorff_at_scale(x, y, b.budget().max_scale, b.budget().window).to_json()}};
  return u;
}

ExplicitLsr regularize(const LsrBackend& b) {
  require_explicit(b, "regularize");
  return regularize(b.restricted() ? b.subspace_lsr() : b.lsr());
}

}  // namespace coarselab
