#include "coarselab/structures.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace coarselab {

namespace {

std::size_t nsubsets(std::size_t width) { return std::size_t{1} << width; }

void check_explicit_width(std::size_t width) {
  if (width > kMaxExplicitWidth)
    fail(ErrorKind::CapExceeded,
         "explicit structures support universes of size <= " + std::to_string(kMaxExplicitWidth));
}

template <class F>
void for_each_submask(FamilyCode g, F&& f) {
  FamilyCode s = g;
  while (true) {
    f(s);
    if (s == 0) break;
    s = (s - 1) & g;
  }
}

std::string fam(FamilyCode c, const Universe& u) { return format_code(c, u); }

}  // namespace

// ---------------------------------------------------------------------------
// ExplicitLsr

ExplicitLsr::ExplicitLsr(Universe u, FamilySet members) : u_(std::move(u)), members_(std::move(members)) {}

void ExplicitLsr::add_down(FamilyCode g) {
  if (members_.test(g)) return;
  for_each_submask(g, [&](FamilyCode s) { members_.set(s); });
}

void ExplicitLsr::finish() {
  maximal_.clear();
  const std::size_t n = nsubsets(width());
  members_.for_each([&](FamilyCode c) {
    for (Mask m = 0; m < n; ++m)
      if (!(c & code_bit(m)) && members_.test(c | code_bit(m))) return;
    maximal_.push_back(c);
  });
}

ExplicitLsr ExplicitLsr::from_codes(Universe u, std::span<const FamilyCode> gens, bool add_singletons) {
  check_explicit_width(u.size());
  ExplicitLsr c(u, FamilySet(u.size()));
  const std::size_t n = nsubsets(u.size());
  for (FamilyCode g : gens) {
    require(n == 32 || (g >> n) == 0, "family code outside universe");
    c.add_down(g);
  }
  if (add_singletons)
    for (Mask m = 0; m < n; ++m) c.add_down(code_bit(m));
  c.finish();
  return c;
}

ExplicitLsr ExplicitLsr::from_generators(Universe u, std::span<const Family> gens, bool add_singletons) {
  std::vector<FamilyCode> codes;
  for (const auto& f : gens) {
    if (f.width() != u.size()) fail(ErrorKind::UniverseMismatch, "generator family over a different universe");
    codes.push_back(encode(f));
  }
  return from_codes(std::move(u), codes, add_singletons);
}

bool ExplicitLsr::member(const Family& f) const {
  if (f.width() != width()) fail(ErrorKind::UniverseMismatch, "family over a different universe");
  return member(encode(f));
}

std::optional<unsigned> ExplicitLsr::bounded_witness(Mask b) const {
  for (unsigned x = 0; x < width(); ++x)
    if (pair_member(b, Mask{1} << x)) return x;
  return std::nullopt;
}

bool ExplicitLsr::bounded(Mask b) const { return b == 0 || bounded_witness(b).has_value(); }

bool ExplicitLsr::connected() const {
  for (unsigned x = 0; x < width(); ++x)
    for (unsigned y = x + 1; y < width(); ++y)
      if (!pair_member(Mask{1} << x, Mask{1} << y)) return false;
  return true;
}

std::string ExplicitLsr::describe() const {
  std::string out = "LS.R on " + u_.format(u_.full()) + " with " + std::to_string(members_.count()) +
                    " member families; maximal:";
  for (FamilyCode c : maximal_) out += " " + fam(c, u_);
  return out;
}

ExplicitLsr generate_lsr(Universe u, std::span<const Family> gens) {
  ExplicitLsr c = ExplicitLsr::from_generators(std::move(u), gens, true);
  for (bool changed = true; changed;) {
    changed = false;
    const auto maxes = c.maximal();
    for (std::size_t i = 0; i < maxes.size(); ++i)
      for (std::size_t j = i; j < maxes.size(); ++j) {
        const FamilyCode p = maxes[i], q = maxes[j];
        for (FamilyCode add : {vee(p, q), (p & q) ? (p | q) : FamilyCode{0}}) {
          if (!c.member(add)) {
            c.add_down(add);
            changed = true;
          }
        }
      }
    if (changed) c.finish();
  }
  return c;
}

AxiomReport check_lsr_axioms(const ExplicitLsr& c) {
  AxiomReport r;
  r.subject = "LS.R";
  const Universe& u = c.universe();
  const std::size_t n = nsubsets(c.width());

  std::optional<Mask> missing;
  for (Mask m = 0; m < n && !missing; ++m)
    if (!c.member(code_bit(m))) missing = m;
  if (missing)
    r.fail("i", "{" + u.format(*missing) + "} is not a member", {{"missing", fam(code_bit(*missing), u)}});
  else
    r.pass("i");

  // Members are materialized downward closed; re-verify one-step removals.
  std::optional<std::pair<FamilyCode, FamilyCode>> hole;
  c.members().for_each([&](FamilyCode f) {
    if (hole) return;
    for_each_bit(f, [&](unsigned m) {
      if (!hole && !c.member(f & ~code_bit(m))) hole = {{f, f & ~code_bit(m)}};
    });
  });
  if (hole)
    r.fail("ii", fam(hole->second, u) + " is a subfamily of member " + fam(hole->first, u) + " but not a member");
  else
    r.pass("ii");

  // Both closure axioms are monotone in their arguments, so maximal pairs decide them.
  const auto& maxes = c.maximal();
  std::optional<std::pair<FamilyCode, FamilyCode>> bad3, bad4;
  for (std::size_t i = 0; i < maxes.size(); ++i)
    for (std::size_t j = i; j < maxes.size(); ++j) {
      const FamilyCode p = maxes[i], q = maxes[j];
      if (!bad3 && (p & q) && !c.member(p | q)) bad3 = {{p, q}};
      if (!bad4 && !c.member(vee(p, q))) bad4 = {{p, q}};
    }
  if (bad3) {
    auto [p, q] = *bad3;
    r.fail("iii", fam(p, u) + " and " + fam(q, u) + " share " + fam(p & q, u) + " but their union is not a member",
           {{"left", fam(p, u)}, {"right", fam(q, u)}, {"missing", fam(p | q, u)}});
  } else {
    r.pass("iii");
  }
  if (bad4) {
    auto [p, q] = *bad4;
    r.fail("iv", fam(p, u) + " v " + fam(q, u) + " = " + fam(vee(p, q), u) + " is not a member",
           {{"left", fam(p, u)}, {"right", fam(q, u)}, {"missing", fam(vee(p, q), u)}});
  } else {
    r.pass("iv");
  }
  return r;
}

std::optional<RegularityWitness> ls_regularity_witness(const ExplicitLsr& c) {
  const auto& maxes = c.maximal();
  for (FamilyCode a : maxes) {
    std::optional<RegularityWitness> found;
    for_each_bit(a, [&](unsigned whole) {
      if (found || whole == 0) return;
      // Every split whole = a1 ∪ a2 with both parts nonempty.
      for (Mask a1 = whole; a1; a1 = (a1 - 1) & whole) {
        const Mask rest = whole & ~a1;
        for (Mask extra = a1;; extra = (extra - 1) & a1) {
          const Mask a2 = rest | extra;
          if (a2 != 0) {
            bool ok = false;
            for (FamilyCode p : maxes) {
              if (!(p & code_bit(a1))) continue;
              for (FamilyCode q : maxes)
                if ((q & code_bit(a2)) && (a & ~vee(p, q)) == 0) {
                  ok = true;
                  break;
                }
              if (ok) break;
            }
            if (!ok) {
              found = RegularityWitness{a, a1, a2};
              return;
            }
          }
          if (extra == 0) break;
        }
      }
    });
    if (found) return found;
  }
  return std::nullopt;
}

std::vector<FamilyCode> maximal_cliques(std::size_t nvert, const std::vector<std::uint32_t>& adj) {
  std::vector<FamilyCode> out;
  const std::uint32_t all = nvert >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << nvert) - 1;
  auto rec = [&](auto&& self, std::uint32_t r, std::uint32_t p, std::uint32_t x) -> void {
    if (!p && !x) {
      out.push_back(r);
      return;
    }
    const unsigned pivot = static_cast<unsigned>(std::countr_zero(p | x));
    std::uint32_t cand = p & ~adj[pivot];
    while (cand) {
      const unsigned v = static_cast<unsigned>(std::countr_zero(cand));
      const std::uint32_t bit = std::uint32_t{1} << v;
      cand &= cand - 1;
      self(self, r | bit, p & adj[v], x & adj[v]);
      p &= ~bit;
      x |= bit;
    }
  };
  rec(rec, 0, all, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<FamilyCode> pair_cliques(const ExplicitLsr& c) {
  const std::size_t n = nsubsets(c.width());
  std::vector<std::uint32_t> adj(n, 0);
  std::uint32_t loops = 0;
  for (Mask a = 0; a < n; ++a) {
    if (c.member(code_bit(a))) loops |= std::uint32_t{1} << a;
    for (Mask b = 0; b < n; ++b)
      if (a != b && c.pair_member(a, b)) adj[a] |= std::uint32_t{1} << b;
  }
  for (Mask a = 0; a < n; ++a) adj[a] = ((loops >> a) & 1u) ? (adj[a] & loops) : 0;
  std::vector<FamilyCode> out;
  for (FamilyCode k : maximal_cliques(n, adj))
    if ((k & loops) == k) out.push_back(k);
  return out;
}

std::optional<FamilyCode> two_determined_witness(const ExplicitLsr& c) {
  for (FamilyCode k : pair_cliques(c))
    if (!c.member(k)) return k;
  return std::nullopt;
}

bool is_a_lsr(const ExplicitLsr& c) { return is_ls_regular(c) && !two_determined_witness(c); }

ExplicitLsr regularize(const ExplicitLsr& c) {
  if (auto w = ls_regularity_witness(c))
    fail(ErrorKind::Precondition, "regularize needs an LS-regular input; " + fam(w->family, c.universe()) +
                                      " does not split along " + c.universe().format(w->a1) + " u " +
                                      c.universe().format(w->a2));
  auto cl = pair_cliques(c);
  return ExplicitLsr::from_codes(c.universe(), cl, false);
}

// ---------------------------------------------------------------------------
// ExplicitAsr

ExplicitAsr::ExplicitAsr(Universe u, std::vector<int> block) : u_(std::move(u)) {
  check_explicit_width(u_.size());
  require(block.size() == nsubsets(u_.size()), "AS.R needs one class id per subset");
  std::vector<std::pair<int, int>> renum;
  block_.resize(block.size());
  for (std::size_t i = 0; i < block.size(); ++i) {
    auto it = std::find_if(renum.begin(), renum.end(), [&](auto& p) { return p.first == block[i]; });
    if (it == renum.end()) {
      renum.push_back({block[i], static_cast<int>(renum.size())});
      it = renum.end() - 1;
    }
    block_[i] = it->second;
  }
}

ExplicitAsr ExplicitAsr::identity(Universe u) {
  std::vector<int> b(nsubsets(u.size()));
  std::iota(b.begin(), b.end(), 0);
  return ExplicitAsr(std::move(u), std::move(b));
}

ExplicitAsr ExplicitAsr::one_block(Universe u) {
  std::vector<int> b(nsubsets(u.size()), 0);
  return ExplicitAsr(std::move(u), std::move(b));
}

bool ExplicitAsr::operator==(const ExplicitAsr& o) const { return u_ == o.u_ && block_ == o.block_; }

bool ExplicitAsr::bounded(Mask d) const {
  if (d == 0) return true;
  for (unsigned x = 0; x < width(); ++x)
    if (alike(d, Mask{1} << x)) return true;
  return false;
}

ExplicitLsr ExplicitAsr::lsr() const {
  std::vector<FamilyCode> gens;
  for (std::size_t m = 0; m < block_.size(); ++m) {
    const auto id = static_cast<std::size_t>(block_[m]);
    if (gens.size() <= id) gens.resize(id + 1, 0);
    gens[id] |= code_bit(static_cast<Mask>(m));
  }
  return ExplicitLsr::from_codes(u_, gens, false);
}

namespace {

/// ⊗_𝒰(B): union of the members of 𝒰 that meet B.
struct Otimes {
  std::vector<Mask> star;  // star[x] = union of members containing x
  Mask operator()(Mask b) const {
    Mask out = 0;
    for_each_bit(b, [&](unsigned x) { out |= star[x]; });
    return out;
  }
};

Otimes otimes(std::size_t width, std::span<const Mask> family) {
  Otimes o{std::vector<Mask>(width, 0)};
  for (Mask u : family) for_each_bit(u, [&](unsigned x) { o.star[x] |= u; });
  return o;
}

}  // namespace

bool ExplicitAsr::uniformly_bounded(std::span<const Mask> family) const {
  const auto o = otimes(width(), family);
  const std::size_t n = block_.size();
  for (Mask a = 0; a < n; ++a)
    for (Mask b = a + 1; b < n; ++b)
      if ((a & ~o(b)) == 0 && (b & ~o(a)) == 0 && !alike(a, b)) return false;
  return true;
}

std::vector<Mask> ExplicitAsr::maximal_uniform_family() const {
  std::vector<Mask> out;
  for (Mask m = 0; m < block_.size(); ++m) {
    const Mask one[1] = {m};
    if (uniformly_bounded(one)) out.push_back(m);
  }
  return out;
}

ExplicitLsr ExplicitAsr::lsr_tilde() const {
  const auto fam_max = maximal_uniform_family();
  if (!uniformly_bounded(fam_max))
    fail(ErrorKind::Precondition, "union of uniformly bounded singletons is not uniformly bounded");
  const auto o = otimes(width(), fam_max);
  return ExplicitLsr::from_pair_relation(u_, [&](Mask a, Mask b) { return (a & ~o(b)) == 0 && (b & ~o(a)) == 0; });
}

AxiomReport check_asr_axioms(const ExplicitAsr& l) {
  AxiomReport r;
  r.subject = "AS.R";
  const Universe& u = l.universe();
  const Mask n = static_cast<Mask>(l.blocks().size());
  r.pass("equivalence", "classes of a partition");

  std::vector<std::pair<Mask, Mask>> alike_pairs;
  for (Mask a = 0; a < n; ++a)
    for (Mask b = 0; b < n; ++b)
      if (l.alike(a, b)) alike_pairs.push_back({a, b});
  bool ok1 = true;
  for (auto [a1, b1] : alike_pairs) {
    for (auto [a2, b2] : alike_pairs)
      if (!l.alike(a1 | a2, b1 | b2)) {
        r.fail("i",
               u.format(a1) + "~" + u.format(b1) + " and " + u.format(a2) + "~" + u.format(b2) + " but " +
                   u.format(a1 | a2) + " is not alike " + u.format(b1 | b2),
               {{"a1", u.format(a1)}, {"b1", u.format(b1)}, {"a2", u.format(a2)}, {"b2", u.format(b2)}});
        ok1 = false;
        break;
      }
    if (!ok1) break;
  }
  if (ok1) r.pass("i");

  for (Mask a1 = 1; a1 < n; ++a1)
    for (Mask a2 = 1; a2 < n; ++a2)
      for (Mask b = 1; b < n; ++b) {
        if (!l.alike(a1 | a2, b)) continue;
        bool split = false;
        for (Mask b1 = b; b1 && !split; b1 = (b1 - 1) & b) {
          if (!l.alike(a1, b1)) continue;
          const Mask rest = b & ~b1;
          for (Mask extra = b1;; extra = (extra - 1) & b1) {
            const Mask b2 = rest | extra;
            if (b2 && l.alike(a2, b2)) {
              split = true;
              break;
            }
            if (extra == 0) break;
          }
        }
        if (!split) {
          r.fail("ii",
                 u.format(a1) + " u " + u.format(a2) + " ~ " + u.format(b) + " admits no matching split of " +
                     u.format(b),
                 {{"a1", u.format(a1)}, {"a2", u.format(a2)}, {"b", u.format(b)}});
          return r;
        }
      }
  r.pass("ii");
  return r;
}

LambdaResult lambda_of(const ExplicitLsr& c) {
  LambdaResult out;
  const Universe& u = c.universe();
  if (auto w = ls_regularity_witness(c)) {
    out.failure = "not LS-regular";
    out.witness = {{"family", fam(w->family, u)}, {"a1", u.format(w->a1)}, {"a2", u.format(w->a2)}};
    return out;
  }
  const Mask n = static_cast<Mask>(nsubsets(c.width()));
  for (Mask a = 0; a < n; ++a)
    for (Mask b = 0; b < n; ++b) {
      if (!c.pair_member(a, b)) continue;
      for (Mask d = 0; d < n; ++d)
        if (c.pair_member(b, d) && !c.pair_member(a, d)) {
          out.failure = "not transitive";
          out.witness = {{"a", u.format(a)}, {"b", u.format(b)}, {"c", u.format(d)}};
          return out;
        }
    }
  std::vector<int> block(n, -1);
  int next = 0;
  for (Mask a = 0; a < n; ++a) {
    if (block[a] >= 0) continue;
    for (Mask b = a; b < n; ++b)
      if (c.pair_member(a, b)) block[b] = next;
    ++next;
  }
  out.asr = ExplicitAsr(u, std::move(block));
  return out;
}

// ---------------------------------------------------------------------------
// Relations and ExplicitCoarse

Mask apply(const Relation& e, Mask a) {
  Mask out = 0;
  for_each_bit(a, [&](unsigned x) { out |= e.at(x); });
  return out;
}

Relation compose(const Relation& e, const Relation& f) {
  Relation out(f.size(), 0);
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = apply(e, f[x]);
  return out;
}

Relation inverse(const Relation& e) {
  Relation out(e.size(), 0);
  for (std::size_t x = 0; x < e.size(); ++x) for_each_bit(e[x], [&](unsigned y) { out[y] |= Mask{1} << x; });
  return out;
}

ExplicitCoarse::ExplicitCoarse(Universe u, std::vector<std::pair<unsigned, unsigned>> generators)
    : u_(std::move(u)), gens_(std::move(generators)) {
  const std::size_t n = u_.size();
  m_.assign(n, 0);
  for (std::size_t x = 0; x < n; ++x) m_[x] |= Mask{1} << x;
  for (auto [x, y] : gens_) {
    require(x < n && y < n, "coarse generator outside universe");
    m_[x] |= Mask{1} << y;
  }
  for (bool changed = true; changed;) {
    Relation next = compose(m_, m_);
    const Relation inv = inverse(m_);
    for (std::size_t x = 0; x < n; ++x) next[x] |= m_[x] | inv[x];
    changed = next != m_;
    m_ = std::move(next);
  }
}

ExplicitCoarse ExplicitCoarse::from_partition(Universe u, const std::vector<Mask>& blocks) {
  std::vector<std::pair<unsigned, unsigned>> gens;
  Mask seen = 0;
  for (Mask b : blocks) {
    require(b != 0 && (b & seen) == 0 && (b & ~u.full()) == 0, "partition blocks must be disjoint and nonempty");
    seen |= b;
    const auto first = static_cast<unsigned>(std::countr_zero(b));
    for_each_bit(b, [&](unsigned y) {
      if (y != first) gens.push_back({first, y});
    });
  }
  require(seen == u.full(), "partition blocks must cover the universe");
  return ExplicitCoarse(std::move(u), std::move(gens));
}

std::vector<Mask> ExplicitCoarse::classes() const {
  std::vector<Mask> out;
  Mask seen = 0;
  for (std::size_t x = 0; x < m_.size(); ++x)
    if (!((seen >> x) & 1u)) {
      out.push_back(m_[x]);
      seen |= m_[x];
    }
  return out;
}

ExplicitLsr ExplicitCoarse::lsr() const {
  check_explicit_width(u_.size());
  // One E serves every pair, and E = M is the largest choice.
  return ExplicitLsr::from_pair_relation(u_, [&](Mask a, Mask b) { return (a & ~apply(b)) == 0; });
}

ExplicitLsr ExplicitCoarse::lsr_tilde() const {
  check_explicit_width(u_.size());
  return ExplicitLsr::from_pair_relation(
      u_, [&](Mask a, Mask b) { return (a & ~apply(b)) == 0 && (b & ~apply(a)) == 0; });
}

ExplicitAsr ExplicitCoarse::asr() const {
  check_explicit_width(u_.size());
  const Mask n = static_cast<Mask>(nsubsets(u_.size()));
  std::vector<int> block(n, -1);
  int next = 0;
  for (Mask a = 0; a < n; ++a) {
    if (block[a] >= 0) continue;
    for (Mask b = a; b < n; ++b)
      if ((a & ~apply(b)) == 0 && (b & ~apply(a)) == 0) block[b] = next;
    ++next;
  }
  return ExplicitAsr(u_, std::move(block));
}

CoarseCheck check_coarse(const ExplicitCoarse& c) {
  CoarseCheck out{c.m(), {}};
  auto& r = out.report;
  r.subject = "coarse structure";
  const Relation& m = c.m();
  const Universe& u = c.universe();
  auto pair_text = [&](std::size_t x, Mask row) {
    return "(" + u.label(x) + "," + u.label(static_cast<std::size_t>(std::countr_zero(row))) + ")";
  };
  bool refl = true;
  for (std::size_t x = 0; x < m.size(); ++x)
    if (!((m[x] >> x) & 1u)) {
      r.fail("contains diagonal", "(" + u.label(x) + "," + u.label(x) + ") missing");
      refl = false;
      break;
    }
  if (refl) r.pass("contains diagonal");
  const Relation inv = inverse(m), sq = compose(m, m);
  std::optional<std::size_t> bad_inv, bad_comp;
  for (std::size_t x = 0; x < m.size(); ++x) {
    if (!bad_inv && (inv[x] & ~m[x])) bad_inv = x;
    if (!bad_comp && (sq[x] & ~m[x])) bad_comp = x;
  }
  if (bad_inv)
    r.fail("closed under inverse", pair_text(*bad_inv, inv[*bad_inv] & ~m[*bad_inv]) + " missing");
  else
    r.pass("closed under inverse");
  if (bad_comp)
    r.fail("closed under composition", pair_text(*bad_comp, sq[*bad_comp] & ~m[*bad_comp]) + " missing");
  else
    r.pass("closed under composition");
  r.pass("closed under union and subsets", "members are exactly the subsets of M");
  return out;
}

// ---------------------------------------------------------------------------
// ExplicitProximity

ExplicitProximity::ExplicitProximity(Universe u, std::vector<std::uint32_t> rows)
    : u_(std::move(u)), rows_(std::move(rows)) {
  check_explicit_width(u_.size());
  require(rows_.size() == nsubsets(u_.size()), "proximity needs one row per subset");
}

ExplicitProximity ExplicitProximity::from_partition(Universe u, const std::vector<Mask>& blocks) {
  return from_predicate(std::move(u), [&](Mask a, Mask b) {
    for (Mask p : blocks)
      if ((p & a) && (p & b)) return true;
    return false;
  });
}

ExplicitProximity ExplicitProximity::discrete(Universe u) {
  return from_predicate(std::move(u), [](Mask a, Mask b) { return (a & b) != 0; });
}

std::vector<Mask> ExplicitProximity::closure() const {
  std::vector<Mask> cl(rows_.size(), 0);
  for (Mask a = 0; a < rows_.size(); ++a)
    for (unsigned x = 0; x < u_.size(); ++x)
      if (near(Mask{1} << x, a)) cl[a] |= Mask{1} << x;
  return cl;
}

AxiomReport check_proximity_axioms(const ExplicitProximity& p) {
  AxiomReport r;
  r.subject = "proximity";
  const Universe& u = p.universe();
  const Mask n = static_cast<Mask>(nsubsets(u.size()));
  auto pair = [&](Mask a, Mask b) { return json{{"a", u.format(a)}, {"b", u.format(b)}}; };

  [&] {
    for (Mask a = 0; a < n; ++a)
      for (Mask b = 0; b < n; ++b)
        if (p.near(a, b) && !p.near(b, a)) {
          r.fail("i", u.format(a) + " is near " + u.format(b) + " but not conversely", pair(a, b));
          return;
        }
    r.pass("i");
  }();
  [&] {
    for (Mask a = 0; a < n; ++a)
      for (Mask b = 0; b < n; ++b)
        for (Mask c = 0; c < n; ++c)
          if (p.near(a, b | c) != (p.near(a, b) || p.near(a, c))) {
            r.fail("ii", "A=" + u.format(a) + " B=" + u.format(b) + " C=" + u.format(c),
                   {{"a", u.format(a)}, {"b", u.format(b)}, {"c", u.format(c)}});
            return;
          }
    r.pass("ii");
  }();
  [&] {
    for (Mask a = 0; a < n; ++a)
      if (p.near(a, 0) || p.near(0, a)) {
        r.fail("iii", "the empty set is near " + u.format(a), pair(0, a));
        return;
      }
    r.pass("iii");
  }();
  [&] {
    const Mask full = u.full();
    for (Mask a = 0; a < n; ++a)
      for (Mask b = 0; b < n; ++b) {
        if (p.near(a, b)) continue;
        bool sep = false;
        for (Mask d = 0; d < n && !sep; ++d) sep = !p.near(a, d) && !p.near(full & ~d, b);
        if (!sep) {
          r.fail("iv", "no set separates " + u.format(a) + " from " + u.format(b), pair(a, b));
          return;
        }
      }
    r.pass("iv");
  }();
  [&] {
    for (Mask a = 0; a < n; ++a)
      for (Mask b = 0; b < n; ++b)
        if ((a & b) && !p.near(a, b)) {
          r.fail("overlap", u.format(a) + " meets " + u.format(b) + " but they are not near", pair(a, b));
          return;
        }
    r.pass("overlap");
  }();
  return r;
}

bool is_cluster(const ExplicitProximity& p, FamilyCode c) {
  const Mask n = static_cast<Mask>(nsubsets(p.universe().size()));
  bool ok = true;
  for_each_bit(c, [&](unsigned a) {
    for_each_bit(c, [&](unsigned b) { ok = ok && p.near(a, b); });
  });
  if (!ok) return false;
  auto in = [&](Mask a) { return (c & code_bit(a)) != 0; };
  for (Mask a = 0; a < n; ++a)
    for (Mask b = a; b < n; ++b)
      if (in(a | b) != (in(a) || in(b))) return false;
  for (Mask a = 0; a < n; ++a) {
    if (in(a)) continue;
    bool all = true;
    for_each_bit(c, [&](unsigned b) { all = all && p.near(a, b); });
    if (all) return false;
  }
  return true;
}

std::vector<FamilyCode> enumerate_clusters(const ExplicitProximity& p) {
  std::vector<FamilyCode> out;
  const std::size_t total = std::size_t{1} << nsubsets(p.universe().size());
  for (std::size_t c = 0; c < total; ++c)
    if (is_cluster(p, static_cast<FamilyCode>(c))) out.push_back(static_cast<FamilyCode>(c));
  return out;
}

// ---------------------------------------------------------------------------
// Closures and ExplicitNearness

ClosureTable discrete_closure(std::size_t width) {
  ClosureTable cl(nsubsets(width));
  std::iota(cl.begin(), cl.end(), Mask{0});
  return cl;
}

AxiomReport check_closure(const ClosureTable& cl, std::size_t width) {
  AxiomReport r;
  r.subject = "closure";
  const Mask n = static_cast<Mask>(nsubsets(width));
  if (cl.size() != n) {
    r.fail("shape", "closure table needs " + std::to_string(n) + " entries");
    return r;
  }
  const Mask full = n - 1;
  auto check = [&](const char* name, auto&& bad) {
    for (Mask a = 0; a < n; ++a)
      if (bad(a)) {
        r.fail(name, "fails at mask " + std::to_string(a), {{"mask", a}});
        return;
      }
    r.pass(name);
  };
  check("within universe", [&](Mask a) { return (cl[a] & ~full) != 0; });
  check("empty closed", [&](Mask a) { return a == 0 && cl[0] != 0; });
  check("extensive", [&](Mask a) { return (a & ~cl[a]) != 0; });
  check("idempotent", [&](Mask a) { return (cl[a] & ~full) == 0 && cl[cl[a]] != cl[a]; });
  check("preserves unions", [&](Mask a) {
    for (Mask b = 0; b < n; ++b)
      if (cl[a | b] != (cl[a] | cl[b])) return true;
    return false;
  });
  return r;
}

ExplicitNearness::ExplicitNearness(Universe u, FamilySet near, ClosureTable closure)
    : u_(std::move(u)), near_(std::move(near)), cl_(std::move(closure)) {
  check_explicit_width(u_.size());
  require(near_.width() == u_.size(), "near set over a different universe");
  if (cl_.empty()) cl_ = discrete_closure(u_.size());
  auto rep = check_closure(cl_, u_.size());
  if (!rep.passed()) fail(ErrorKind::Precondition, "closure table is not a Kuratowski closure:\n" + rep.text());
}

FamilyCode ExplicitNearness::close(FamilyCode c) const {
  FamilyCode out = 0;
  for_each_bit(c, [&](unsigned a) { out |= code_bit(cl_[a]); });
  return out;
}

namespace {

template <class Pred>
FamilySet collect(std::size_t width, Pred&& pred) {
  FamilySet s(width);
  const std::size_t total = s.capacity();
  for (std::size_t c = 0; c < total; ++c)
    if (pred(static_cast<FamilyCode>(c))) s.set(static_cast<FamilyCode>(c));
  return s;
}

ClosureTable or_discrete(ClosureTable cl, std::size_t width) {
  return cl.empty() ? discrete_closure(width) : cl;
}

Mask closed_meet(FamilyCode c, const ClosureTable& cl, std::size_t width) {
  Mask m = static_cast<Mask>(nsubsets(width) - 1);
  for_each_bit(c, [&](unsigned a) { m &= cl[a]; });
  return m;
}

}  // namespace

ExplicitNearness ExplicitNearness::topological(Universe u, ClosureTable closure) {
  check_explicit_width(u.size());
  const std::size_t w = u.size();
  closure = or_discrete(std::move(closure), w);
  auto near = collect(w, [&](FamilyCode c) { return closed_meet(c, closure, w) != 0; });
  return ExplicitNearness(std::move(u), std::move(near), std::move(closure));
}

ExplicitNearness ExplicitNearness::all_without_empty(Universe u) {
  check_explicit_width(u.size());
  auto near = collect(u.size(), [](FamilyCode c) { return (c & 1u) == 0; });
  return ExplicitNearness(u, std::move(near), {});
}

ExplicitNearness ExplicitNearness::empty(Universe u) {
  check_explicit_width(u.size());
  return ExplicitNearness(u, FamilySet(u.size()), {});
}

ExplicitNearness ExplicitNearness::from_proximity(const ExplicitProximity& p) {
  FamilySet near(p.universe().size());
  for (FamilyCode k : enumerate_clusters(p)) for_each_submask(k, [&](FamilyCode s) { near.set(s); });
  return ExplicitNearness(p.universe(), std::move(near), p.closure());
}

ExplicitNearness ExplicitNearness::induced(const ExplicitLsr& c, ClosureTable closure) {
  const std::size_t w = c.width();
  closure = or_discrete(std::move(closure), w);
  FamilyCode unbounded = 0;
  for (Mask b = 0; b < nsubsets(w); ++b)
    if (!c.bounded(b)) unbounded |= code_bit(b);
  // Clause 2: 𝒜 ⊆ up(ℬ) for a nonempty member ℬ of unbounded sets; maximal ℬ suffice.
  std::set<FamilyCode> ups;
  for (FamilyCode m : c.maximal())
    if (m & unbounded) ups.insert(upward_closure(m & unbounded, w));
  std::vector<FamilyCode> tops;
  for (FamilyCode x : ups) {
    bool dominated = false;
    for (FamilyCode y : ups) dominated = dominated || (x != y && (x & ~y) == 0);
    if (!dominated) tops.push_back(x);
  }
  FamilySet near = collect(w, [&](FamilyCode f) { return closed_meet(f, closure, w) != 0; });
  for (FamilyCode t : tops) for_each_submask(t, [&](FamilyCode s) { near.set(s); });
  return ExplicitNearness(c.universe(), std::move(near), std::move(closure));
}

AxiomReport check_nearness_axioms(const ExplicitNearness& nn) {
  AxiomReport r;
  r.subject = "nearness";
  const Universe& u = nn.universe();
  const std::size_t w = nn.width();
  const std::size_t total = nn.near_set().capacity();

  [&] {
    for (std::size_t c = 0; c < total; ++c)
      if (meet(static_cast<FamilyCode>(c), w) != 0 && !nn.near(static_cast<FamilyCode>(c))) {
        r.fail("i", fam(static_cast<FamilyCode>(c), u) + " has nonempty intersection but is not near",
               {{"family", fam(static_cast<FamilyCode>(c), u)}});
        return;
      }
    r.pass("i");
  }();

  // 𝒜 ≪ ℬ iff ℬ ⊆ up(𝒜): axiom ii is closure under subfamilies plus up(𝒜) ∈ 𝔑.
  bool ii_ok = true;
  nn.near_set().for_each([&](FamilyCode a) {
    if (!ii_ok) return;
    const FamilyCode up = upward_closure(a, w);
    if (!nn.near(up)) {
      r.fail("ii", fam(a, u) + " is near, refines " + fam(up, u) + " which is not",
             {{"near", fam(a, u)}, {"refined", fam(up, u)}});
      ii_ok = false;
      return;
    }
    for_each_bit(a, [&](unsigned m) {
      if (ii_ok && !nn.near(a & ~code_bit(m))) {
        r.fail("ii", fam(a, u) + " is near, refines " + fam(a & ~code_bit(m), u) + " which is not",
               {{"near", fam(a, u)}, {"refined", fam(a & ~code_bit(m), u)}});
        ii_ok = false;
      }
    });
  });
  if (ii_ok) r.pass("ii");

  [&] {
    std::optional<FamilyCode> bad;
    nn.near_set().for_each([&](FamilyCode a) {
      if (!bad && (a & 1u)) bad = a;
    });
    if (bad)
      r.fail("iii", fam(*bad, u) + " is near and contains the empty set", {{"family", fam(*bad, u)}});
    else
      r.pass("iii");
  }();

  [&] {
    std::vector<FamilyCode> far;
    const bool all_pairs = total <= 256;
    if (!all_pairs && !ii_ok) {
      r.skip("iv", "pair scan over all families exceeds budget and the up-closed reduction needs axiom ii");
      return;
    }
    for (std::size_t c = 0; c < total; ++c) {
      const auto f = static_cast<FamilyCode>(c);
      if (nn.near(f)) continue;
      if (all_pairs || upward_closure(f, w) == f) far.push_back(f);
    }
    for (std::size_t i = 0; i < far.size(); ++i)
      for (std::size_t j = i; j < far.size(); ++j) {
        const FamilyCode v = vee(far[i], far[j]);
        if (nn.near(v)) {
          r.fail("iv", fam(far[i], u) + " and " + fam(far[j], u) + " are not near but their vee " + fam(v, u) +
                           " is",
                 {{"left", fam(far[i], u)}, {"right", fam(far[j], u)}, {"vee", fam(v, u)}});
          return;
        }
      }
    r.pass("iv");
  }();
  return r;
}

bool is_h_nearness(const ExplicitNearness& nn) {
  const std::size_t total = nn.near_set().capacity();
  for (std::size_t c = 0; c < total; ++c) {
    const auto f = static_cast<FamilyCode>(c);
    if (nn.near(nn.close(f)) && !nn.near(f)) return false;
  }
  return true;
}

bool is_bunch(const ExplicitNearness& nn, FamilyCode c) {
  if (c == 0 || !nn.near(c)) return false;
  const Mask n = static_cast<Mask>(nsubsets(nn.width()));
  auto in = [&](Mask a) { return (c & code_bit(a)) != 0; };
  for (Mask a = 0; a < n; ++a)
    for (Mask b = a; b < n; ++b)
      if (in(a | b) != (in(a) || in(b))) return false;
  for (Mask a = 0; a < n; ++a)
    if (in(nn.closure()[a]) && !in(a)) return false;
  return true;
}

std::vector<FamilyCode> enumerate_bunches(const ExplicitNearness& nn) {
  std::vector<FamilyCode> out;
  nn.near_set().for_each([&](FamilyCode c) {
    if (is_bunch(nn, c)) out.push_back(c);
  });
  return out;
}

}  // namespace coarselab
