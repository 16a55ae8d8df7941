#pragma once

#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "realiz/fiber.hpp"
#include "realiz/meets.hpp"
#include "realiz/relcomp.hpp"
#include "realiz/relcore.hpp"
#include "realiz/report.hpp"
#include "realiz/uord.hpp"

namespace realiz {

// [r](M, N): every element of M is r-related to some element of N.
inline bool bracket(const Rel& r, Mask M, Mask N) {
  bool ok = true;
  for_each_bit(M, [&](std::size_t a) {
    if (ok && (r.row_mask(a) & N) == 0) ok = false;
  });
  return ok;
}

// (r)(M, N): every element of N is r-related from some element of M.
inline bool ubracket(const Rel& r, Mask M, Mask N) {
  bool ok = true;
  for_each_bit(N, [&](std::size_t b) {
    if (ok && (r.col_mask(b) & M) == 0) ok = false;
  });
  return ok;
}

enum class PowerKind { Down, DownPlus, Up };

inline std::string subset_label(const FinSet& c, Mask m) {
  std::string s = "{";
  bool first = true;
  for_each_bit(m, [&](std::size_t a) {
    s += (first ? "" : ",") + c.elements.at(a);
    first = false;
  });
  return s + "}";
}

// The powerset construction with carriers listed by (size, lexicographic).
struct PowerUOrd {
  UOrd uord;
  std::vector<std::vector<Mask>> subsets;  // per sort: element -> subset

  std::size_t index_of(std::size_t sort, Mask m) const {
    const auto& s = subsets.at(sort);
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k] == m) return k;
    throw std::invalid_argument("PowerUOrd: subset not in carrier");
  }
};

inline PowerUOrd build_D(const UOrd& u, PowerKind kind = PowerKind::Down, std::size_t max_carrier = 12) {
  if (u.max_carrier() > max_carrier) throw std::invalid_argument("build_D: carrier exceeds the powerset bound");
  PowerUOrd out;
  std::vector<FinSet> carriers;
  for (std::size_t i = 0; i < u.num_sorts(); ++i) {
    std::vector<Mask> subs;
    for (Mask m : subsets_by_size(u.size(i)))
      if (kind != PowerKind::DownPlus || m != 0) subs.push_back(m);
    FinSet c;
    c.name = "P" + u.carriers[i].name;
    for (Mask m : subs) c.elements.push_back(subset_label(u.carriers[i], m));
    out.subsets.push_back(std::move(subs));
    carriers.push_back(std::move(c));
  }
  out.uord = UOrd(u.sorts, carriers);
  for (std::size_t i = 0; i < u.num_sorts(); ++i)
    for (std::size_t j = 0; j < u.num_sorts(); ++j)
      for (const auto& r : u.bases(i, j)) {
        const auto& si = out.subsets[i];
        const auto& sj = out.subsets[j];
        Rel lifted(si.size(), sj.size());
        for (std::size_t x = 0; x < si.size(); ++x)
          for (std::size_t y = 0; y < sj.size(); ++y)
            if (kind == PowerKind::Up ? ubracket(r, si[x], sj[y]) : bracket(r, si[x], sj[y])) lifted.set(x, y);
        out.uord.add_base(i, j, std::move(lifted));
      }
  return out;
}

// A predicate of the D fiber: a sort and a subset of its carrier per index.
struct DPred {
  std::size_t sort = 0;
  std::vector<Mask> vals;
  bool operator==(const DPred&) const = default;
};

// The fibered logic of downsets over a finitely complete instance. Implication
// and universal quantification come either from relational-completeness data
// or, for a Heyting algebra source, from the lifted connectives.
class DFiber {
 public:
  using Pred = DPred;

  DFiber(UOrd u, MeetData m) : u_(std::move(u)), m_(std::move(m)) {
    if (u_.max_carrier() > kMaskBits) throw std::invalid_argument("DFiber: carriers larger than 64");
    check_meet_shape(u_, m_);
  }

  DFiber& with_relcomp(RcData rc) {
    check_rc_shape(u_, m_, rc);
    rc_ = std::move(rc);
    return *this;
  }
  DFiber& with_heyting(HeytingAlgebra h) {
    if (u_.num_sorts() != 1 || u_.size(0) != h.size()) throw std::invalid_argument("DFiber: Heyting source mismatch");
    h_ = std::move(h);
    return *this;
  }

  const UOrd& uord() const { return u_; }
  const MeetData& meets() const { return m_; }
  const std::optional<RcData>& relcomp() const { return rc_; }
  bool has_implication() const { return rc_.has_value() || h_.has_value(); }
  // One base relation per sort pair makes entailment an index-by-index test.
  bool pointwise_entailment() const {
    for (std::size_t s = 0; s < u_.num_sorts(); ++s)
      for (std::size_t t = 0; t < u_.num_sorts(); ++t)
        if (u_.bases(s, t).size() > 1) return false;
    return true;
  }

  std::size_t index_size(const Pred& p) const { return p.vals.size(); }
  Pred top(std::size_t n) const { return {m_.unit, std::vector<Mask>(n, bit(m_.top))}; }
  Pred bottom(std::size_t n) const { return {m_.unit, std::vector<Mask>(n, 0)}; }

  Pred meet(const Pred& p, const Pred& q) const {
    same_size(p, q);
    Pred out{m_.star_of(p.sort, q.sort), std::vector<Mask>(p.vals.size(), 0)};
    for (std::size_t k = 0; k < p.vals.size(); ++k)
      for_each_bit(p.vals[k], [&](std::size_t a) {
        for_each_bit(q.vals[k], [&](std::size_t b) { out.vals[k] |= bit(m_.meet(u_, p.sort, q.sort, a, b)); });
      });
    return out;
  }

  Pred reindex(const Pred& p, const IndexMap& m) const {
    Pred out{p.sort, std::vector<Mask>(m.size())};
    for (std::size_t k = 0; k < m.size(); ++k) out.vals[k] = p.vals.at(m[k]);
    return out;
  }

  Pred exists_along(const Pred& p, const IndexMap& m, std::size_t n) const {
    if (m.size() != p.vals.size()) throw std::invalid_argument("exists_along: map has wrong domain");
    Pred out{p.sort, std::vector<Mask>(n, 0)};
    for (std::size_t k = 0; k < m.size(); ++k) out.vals.at(m[k]) |= p.vals[k];
    return out;
  }

  Pred implies(const Pred& p, const Pred& q) const {
    same_size(p, q);
    if (h_) return lift_implies(p, q);
    if (!rc_) throw std::logic_error("DFiber: no implication available");
    IndexMap id = FinFun::identity(p.vals.size()).table;
    return {rc_->arrow_of(p.sort, q.sort),
            synth_forall_implies(u_, m_, *rc_, p.sort, p.vals, q.sort, q.vals, id, p.vals.size())};
  }

  Pred forall_along(const Pred& p, const IndexMap& m, std::size_t n) const {
    if (m.size() != p.vals.size()) throw std::invalid_argument("forall_along: map has wrong domain");
    if (h_) return lift_forall(p, m, n);
    if (!rc_) throw std::logic_error("DFiber: no universal quantification available");
    Pred t = top(p.vals.size());
    return {rc_->arrow_of(t.sort, p.sort), synth_forall_implies(u_, m_, *rc_, t.sort, t.vals, p.sort, p.vals, m, n)};
  }

  // The synthetic connective forall_m (p => q).
  Pred forall_implies(const Pred& p, const Pred& q, const IndexMap& m, std::size_t n) const {
    if (!rc_) throw std::logic_error("DFiber: no relational completeness data");
    same_size(p, q);
    return {rc_->arrow_of(p.sort, q.sort), synth_forall_implies(u_, m_, *rc_, p.sort, p.vals, q.sort, q.vals, m, n)};
  }

  std::optional<std::size_t> entails_witness(const Pred& p, const Pred& q) const {
    same_size(p, q);
    const auto& bs = u_.bases(p.sort, q.sort);
    for (std::size_t x = 0; x < bs.size(); ++x) {
      bool ok = true;
      for (std::size_t k = 0; k < p.vals.size() && ok; ++k) ok = bracket(bs[x], p.vals[k], q.vals[k]);
      if (ok) return x;
    }
    return std::nullopt;
  }
  bool entails(const Pred& p, const Pred& q) const { return entails_witness(p, q).has_value(); }

  std::vector<bool> support(const Pred& p) const {
    std::vector<bool> out(p.vals.size());
    for (std::size_t k = 0; k < p.vals.size(); ++k) out[k] = p.vals[k] != 0;
    return out;
  }

  // {m | top entails p(m)}
  std::vector<bool> gamma(const Pred& p) const {
    std::vector<bool> out(p.vals.size(), false);
    for (std::size_t k = 0; k < p.vals.size(); ++k)
      for (const auto& r : u_.bases(m_.unit, p.sort))
        if ((r.row_mask(m_.top) & p.vals[k]) != 0) out[k] = true;
    return out;
  }

  bool for_each_pred(std::size_t n, const std::function<bool(const Pred&)>& visit) const {
    for (std::size_t s = 0; s < u_.num_sorts(); ++s)
      if (!for_each_pred_of_sort(n, s, visit)) return false;
    return true;
  }

  bool for_each_pred_of_sort(std::size_t n, std::size_t s, const std::function<bool(const Pred&)>& visit) const {
    const std::size_t vals = std::size_t{1} << u_.size(s);
    return for_each_function(n, vals, [&](const FinFun& f) {
      Pred p{s, {}};
      for (auto v : f.table) p.vals.push_back(static_cast<Mask>(v));
      return visit(p);
    });
  }

  Pred y(const Predicate& p) const {
    Pred out{p.sort, {}};
    for (auto a : p.values) out.vals.push_back(bit(a));
    return out;
  }

  std::string describe(const Pred& p) const {
    std::string s = u_.sorts[p.sort] + ":[";
    for (std::size_t k = 0; k < p.vals.size(); ++k) s += (k ? " " : "") + subset_label(u_.carriers[p.sort], p.vals[k]);
    return s + "]";
  }

  // Splits p into a singleton-valued predicate over {(m, a) | a in p m} and
  // the projection to m.
  struct Decomposition {
    IndexMap proj;
    Pred prime;
  };
  Decomposition prime_decompose(const Pred& p) const {
    Decomposition d{{}, {p.sort, {}}};
    for (std::size_t k = 0; k < p.vals.size(); ++k)
      for_each_bit(p.vals[k], [&](std::size_t a) {
        d.proj.push_back(k);
        d.prime.vals.push_back(bit(a));
      });
    return d;
  }

  Pred lift_implies(const Pred& p, const Pred& q) const {
    const HeytingAlgebra& h = *h_;
    Pred out{0, std::vector<Mask>(p.vals.size(), 0)};
    for (std::size_t k = 0; k < p.vals.size(); ++k) {
      auto as = bits_of(p.vals[k]);
      // one nonempty subset of q(k) per element of p(k)
      std::vector<Mask> choice(as.size(), 0);
      const Mask qk = q.vals[k];
      auto next_subset = [&](Mask s) { return ((s | ~qk) + 1) & qk; };
      if (qk == 0 && !as.empty()) continue;
      for (auto& c : choice) c = next_subset(0);
      while (true) {
        std::size_t acc = h.top;
        for (std::size_t x = 0; x < as.size(); ++x)
          for_each_bit(choice[x], [&](std::size_t b) { acc = h.m(acc, h.i(as[x], b)); });
        out.vals[k] |= bit(acc);
        std::size_t x = 0;
        for (; x < as.size(); ++x) {
          choice[x] = next_subset(choice[x]);
          if (choice[x] != 0) break;
          choice[x] = next_subset(0);
        }
        if (x == as.size()) break;
      }
    }
    return out;
  }

  Pred lift_forall(const Pred& p, const IndexMap& m, std::size_t n) const {
    const HeytingAlgebra& h = *h_;
    Pred out{0, std::vector<Mask>(n, 0)};
    std::vector<std::vector<Mask>> fibers(n);
    for (std::size_t k = 0; k < m.size(); ++k) fibers.at(m[k]).push_back(p.vals[k]);
    for (std::size_t y = 0; y < n; ++y) {
      Mask all = 0;
      for (Mask v : fibers[y]) all |= v;
      // every U inside the union that meets each member of the fiber
      for (Mask U = all;; U = (U - 1) & all) {
        bool hits = true;
        for (Mask v : fibers[y]) hits = hits && (v & U) != 0;
        if (hits) {
          std::size_t acc = h.top;
          for_each_bit(U, [&](std::size_t a) { acc = h.m(acc, a); });
          out.vals[y] |= bit(acc);
        }
        if (U == 0) break;
      }
    }
    return out;
  }

 private:
  static void same_size(const Pred& p, const Pred& q) {
    if (p.vals.size() != q.vals.size()) throw std::invalid_argument("DFiber: index sets differ");
  }

  UOrd u_;
  MeetData m_;
  std::optional<RcData> rc_;
  std::optional<HeytingAlgebra> h_;
};

static_assert(LogicFiber<DFiber>);

// Relational completeness data of a one-sorted meet-semilattice: trivial
// arrow sort and the order as application.
inline RcData semilattice_relcomp(const UOrd& u) {
  if (u.num_sorts() != 1 || u.bases(0, 0).empty()) throw std::invalid_argument("semilattice_relcomp: one sort needed");
  RcData rc;
  rc.nsorts = 1;
  rc.arrow = {0};
  rc.app = {u.bases(0, 0)[0]};
  return rc;
}

// D of a finite Heyting algebra, with implication from relational completeness.
inline DFiber heyting_d_fiber(const HeytingAlgebra& h) {
  UOrd u = h.as_uord();
  MeetData m = h.as_meets(u);
  DFiber f(u, m);
  f.with_relcomp(semilattice_relcomp(u));
  return f;
}

struct DSpan {
  std::size_t sort = 0;
  std::size_t index_size = 0;
  IndexMap proj;                    // N -> M
  std::vector<std::size_t> values;  // N -> A_sort
};

inline DSpan powerset_to_span(const DPred& p) {
  DSpan s{p.sort, p.vals.size(), {}, {}};
  for (std::size_t m = 0; m < p.vals.size(); ++m)
    for_each_bit(p.vals[m], [&](std::size_t a) {
      s.proj.push_back(m);
      s.values.push_back(a);
    });
  return s;
}

inline DPred span_to_powerset(const DSpan& s) {
  DPred p{s.sort, std::vector<Mask>(s.index_size, 0)};
  for (std::size_t n = 0; n < s.proj.size(); ++n) p.vals.at(s.proj[n]) |= bit(s.values[n]);
  return p;
}

struct PrimeResult {
  Verdict verdict = Verdict::Unknown;  // Pass = prime, Fail = refuted
  std::string detail;                  // certificate or counterexample
  std::optional<std::size_t> relation;
  std::vector<std::size_t> choice;     // a singleton interreducible with each value
};

// Certifies p as locally a y-image, else searches spans with |J|, |K| <= bound
// against the definition of existential primality.
inline PrimeResult is_prime(const DFiber& f, const DPred& p, std::size_t bound = 2) {
  const UOrd& u = f.uord();
  const std::size_t n = p.vals.size();
  for (std::size_t x = 0; x < u.bases(p.sort, p.sort).size(); ++x) {
    const Rel& r = u.bases(p.sort, p.sort)[x];
    std::vector<std::size_t> choice;
    for (std::size_t k = 0; k < n; ++k) {
      std::optional<std::size_t> pick;
      for_each_bit(p.vals[k], [&](std::size_t a) {
        if (!pick && (p.vals[k] & ~r.col_mask(a)) == 0) pick = a;
      });
      if (!pick) break;
      choice.push_back(*pick);
    }
    if (choice.size() != n) continue;
    DPred single = f.y(Predicate{p.sort, choice});
    if (f.entails(single, p) && f.entails(p, single)) {
      std::string d = "interreducible with singletons [";
      for (std::size_t k = 0; k < n; ++k) d += (k ? " " : "") + u.carriers[p.sort].elements[choice[k]];
      return {Verdict::Pass, d + "] via base #" + std::to_string(x), x, choice};
    }
  }
  for (std::size_t jsz = 1; jsz <= bound; ++jsz) {
    PrimeResult out;
    bool refuted = !for_each_function(jsz, n, [&](const FinFun& umap) {
      DPred pu = f.reindex(p, umap.table);
      for (std::size_t ksz = 0; ksz <= bound; ++ksz) {
        bool stop = !for_each_function(ksz, jsz, [&](const FinFun& v) {
          return f.for_each_pred(ksz, [&](const DPred& theta) {
            if (!f.entails(pu, f.exists_along(theta, v.table, jsz))) return true;
            // a section w of v with pu |- theta . w
            bool section = !for_each_function(jsz, ksz, [&](const FinFun& w) {
              for (std::size_t j = 0; j < jsz; ++j)
                if (v(w(j)) != j) return true;
              return !f.entails(pu, f.reindex(theta, w.table));
            });
            if (section) return true;
            std::string d = "J=" + std::to_string(jsz) + " u=[";
            for (auto x : umap.table) d += std::to_string(x) + " ";
            d += "] K=" + std::to_string(ksz) + " v=[";
            for (auto x : v.table) d += std::to_string(x) + " ";
            d += "] theta=" + f.describe(theta) + ": no section";
            out = {Verdict::Fail, d, std::nullopt, {}};
            return false;
          });
        });
        if (stop) return false;
      }
      return true;
    });
    if (refuted) return out;
  }
  return {Verdict::Unknown, "no certificate and no counterexample within bound " + std::to_string(bound), std::nullopt, {}};
}

namespace detail {

struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i / 64] |= bit(i % 64); }
  bool get(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1U; }
  void fill() {
    for (auto& x : w) x = ~std::uint64_t{0};
  }
  // first element of this missing from o
  std::optional<std::size_t> first_not_in(const Bits& o) const {
    for (std::size_t k = 0; k < w.size(); ++k)
      if (std::uint64_t d = w[k] & ~o.w[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(d));
    return std::nullopt;
  }
};

}  // namespace detail

// Union of the members of a set of subsets, each subset encoded as a raw mask.
using JoinFn = std::function<Mask(const std::vector<Mask>&)>;

inline Mask union_join(const std::vector<Mask>& ms) {
  Mask out = 0;
  for (Mask m : ms) out |= m;
  return out;
}

inline std::vector<Mask> members_of(std::uint64_t family) {
  std::vector<Mask> out;
  for_each_bit(family, [&](std::size_t M) { out.push_back(static_cast<Mask>(M)); });
  return out;
}

inline std::string family_label(const FinSet& c, const std::vector<Mask>& ms) {
  std::string s = "{";
  for (std::size_t k = 0; k < ms.size(); ++k) s += (k ? "," : "") + subset_label(c, ms[k]);
  return s + "}";
}

// Unit, multiplication, the monad laws and the lax idempotency of D, checked
// on raw subsets. Second-level sets are enumerated exhaustively up to
// |A_i| = 4; the third level exhaustively up to |A_i| = 2 and on a fixed
// sample of 4096 families beyond.
inline Report monad_audit(const UOrd& u, const JoinFn& join = union_join) {
  Report rep;
  const std::string mod = "dlogic";
  if (u.max_carrier() > 4) {
    for (auto id : {"eta-monotone", "mu-monotone", "unit-laws", "associativity", "kz"})
      rep.unknown(mod, id, "monad law", "carriers larger than 4");
    return rep;
  }
  const std::size_t n = u.num_sorts();
  auto P = [&](std::size_t i) { return std::size_t{1} << u.size(i); };

  // eta_A, D(eta_A), eta_DA are monotone
  std::string bad;
  for (std::size_t i = 0; i < n && bad.empty(); ++i)
    for (std::size_t j = 0; j < n && bad.empty(); ++j)
      for (const auto& r : u.bases(i, j)) {
        bool found = false;
        for (const auto& s : u.bases(i, j)) {
          bool ok = true;
          for (auto [a, b] : r.pairs()) ok = ok && bracket(s, bit(a), bit(b));
          if (ok) found = true;
        }
        if (!found) bad = "eta on " + u.sorts[i] + "->" + u.sorts[j];
        // (M, N) in [r] must map into a single [[s]] under M -> {M} and M -> {{a} | a in M}
        bool f1 = false, f2 = false;
        for (const auto& s : u.bases(i, j)) {
          bool ok1 = true, ok2 = true;
          for (Mask M = 0; M < P(i); ++M)
            for (Mask N = 0; N < P(j); ++N) {
              if (!bracket(r, M, N)) continue;
              ok1 = ok1 && bracket(s, M, N);
              for_each_bit(M, [&](std::size_t a) {
                bool hit = false;
                for_each_bit(N, [&](std::size_t b) { hit = hit || s.get(a, b); });
                ok2 = ok2 && hit;
              });
            }
          f1 = f1 || ok1;
          f2 = f2 || ok2;
        }
        if (!f1 && bad.empty()) bad = "eta_D on " + u.sorts[i] + "->" + u.sorts[j];
        if (!f2 && bad.empty()) bad = "D(eta) on " + u.sorts[i] + "->" + u.sorts[j];
      }
  if (bad.empty())
    rep.pass(mod, "eta-monotone", "unit maps are monotone");
  else
    rep.fail(mod, "eta-monotone", "unit maps are monotone", bad);

  // mu : DDA -> DA monotone. For r in R_ij, T(F) is the set of second-level
  // families G with [[r]](F, G); we need T(F) inside {G | [s](join F, join G)}.
  std::vector<std::vector<Mask>> joins(n);
  for (std::size_t i = 0; i < n; ++i) {
    joins[i].resize(std::size_t{1} << P(i));
    for (std::size_t F = 0; F < joins[i].size(); ++F) joins[i][F] = join(members_of(F));
  }
  bad.clear();
  for (std::size_t i = 0; i < n && bad.empty(); ++i)
    for (std::size_t j = 0; j < n && bad.empty(); ++j)
      for (std::size_t x = 0; x < u.bases(i, j).size() && bad.empty(); ++x) {
        const Rel& r = u.bases(i, j)[x];
        const std::size_t famj = std::size_t{1} << P(j);
        std::vector<detail::Bits> hit(P(i), detail::Bits(famj));
        for (Mask M = 0; M < P(i); ++M) {
          Mask up = 0;
          for (Mask N = 0; N < P(j); ++N)
            if (bracket(r, M, N)) up |= bit(N);
          for (std::size_t G = 0; G < famj; ++G)
            if ((G & up) != 0) hit[M].set(G);
        }
        std::string first_bad;
        bool any = false;
        for (const auto& s : u.bases(i, j)) {
          std::vector<detail::Bits> good(P(i), detail::Bits(famj));
          for (Mask X = 0; X < P(i); ++X)
            for (std::size_t G = 0; G < famj; ++G)
              if (bracket(s, X, joins[j][G])) good[X].set(G);
          std::string w;
          std::vector<detail::Bits> stack(P(i) + 1, detail::Bits(famj));
          stack[0].fill();
          std::function<void(std::size_t, std::size_t, std::size_t)> dfs = [&](std::size_t from, std::size_t depth,
                                                                              std::size_t F) {
            if (!w.empty()) return;
            if (auto g = stack[depth].first_not_in(good[joins[i][F]]); g && *g < famj) {
              w = "F=" + family_label(u.carriers[i], members_of(F)) + " G=" + family_label(u.carriers[j], members_of(*g));
              return;
            }
            for (std::size_t M = from; M < P(i); ++M) {
              auto& next = stack[depth + 1];
              for (std::size_t k = 0; k < next.w.size(); ++k) next.w[k] = stack[depth].w[k] & hit[M].w[k];
              dfs(M + 1, depth + 1, F | (std::size_t{1} << M));
            }
          };
          dfs(0, 0, 0);
          if (w.empty()) {
            any = true;
            break;
          }
          if (first_bad.empty()) first_bad = w;
        }
        if (!any) bad = "base #" + std::to_string(x) + " on " + u.sorts[i] + "->" + u.sorts[j] + ": " + first_bad;
      }
  if (bad.empty())
    rep.pass(mod, "mu-monotone", "multiplication is monotone");
  else
    rep.fail(mod, "mu-monotone", "multiplication is monotone", bad);

  bad.clear();
  for (std::size_t i = 0; i < n && bad.empty(); ++i)
    for (Mask M = 0; M < P(i) && bad.empty(); ++M) {
      if (join({M}) != M) bad = "mu{M} != M at M=" + subset_label(u.carriers[i], M);
      std::vector<Mask> singles;
      for_each_bit(M, [&](std::size_t a) { singles.push_back(bit(a)); });
      if (bad.empty() && join(singles) != M) bad = "mu(D eta M) != M at M=" + subset_label(u.carriers[i], M);
    }
  if (bad.empty())
    rep.pass(mod, "unit-laws", "mu . eta_D = id = mu . D eta");
  else
    rep.fail(mod, "unit-laws", "mu . eta_D = id = mu . D eta", bad);

  bad.clear();
  std::string how = "exhaustive";
  std::mt19937_64 rng(20240611);
  for (std::size_t i = 0; i < n && bad.empty(); ++i) {
    const std::size_t fam = std::size_t{1} << P(i);
    auto check = [&](const std::vector<std::size_t>& X) {
      std::vector<Mask> inner;
      std::size_t flat = 0;
      for (auto F : X) {
        inner.push_back(joins[i][F]);
        flat |= F;
      }
      Mask a = joins[i][flat], b = join(inner);
      if (a != b) bad = "third-level family of size " + std::to_string(X.size()) + " on sort " + u.sorts[i];
    };
    if (fam <= 16) {
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << fam) && bad.empty(); ++code) {
        std::vector<std::size_t> X;
        for_each_bit(code, [&](std::size_t F) { X.push_back(F); });
        check(X);
      }
    } else {
      how = "sampled 4096 families";
      for (int t = 0; t < 4096 && bad.empty(); ++t) {
        std::vector<std::size_t> X;
        std::size_t k = rng() % 6;
        for (std::size_t c = 0; c < k; ++c) X.push_back(rng() % fam);
        check(X);
      }
    }
  }
  if (bad.empty())
    rep.pass(mod, "associativity", "mu . mu_D = mu . D mu", how);
  else
    rep.fail(mod, "associativity", "mu . mu_D = mu . D mu", bad);

  // id <= eta_D . mu on DDA
  bad.clear();
  for (std::size_t i = 0; i < n && bad.empty(); ++i) {
    bool any = false;
    std::string first;
    for (const auto& s : u.bases(i, i)) {
      std::optional<std::size_t> badF;
      for (std::size_t F = 0; F < joins[i].size() && !badF; ++F)
        for_each_bit(F, [&](std::size_t M) {
          if (!badF && !bracket(s, static_cast<Mask>(M), joins[i][F])) badF = F;
        });
      if (!badF) {
        any = true;
        break;
      }
      if (first.empty()) first = "F=" + family_label(u.carriers[i], members_of(*badF));
    }
    if (!any) bad = first;
  }
  if (bad.empty())
    rep.pass(mod, "kz", "mu is left adjoint to eta_D");
  else
    rep.fail(mod, "kz", "mu is left adjoint to eta_D", bad);
  return rep;
}

// Structure maps sup_i : PA_i -> A_i on raw subsets.
using SupFn = std::function<std::size_t(std::size_t sort, Mask)>;

// Checks that sup is a monotone algebra map left adjoint to the unit.
inline Report algebra_audit(const UOrd& u, const SupFn& sup) {
  Report rep;
  const std::string mod = "dlogic";
  if (u.max_carrier() > 12) {
    rep.unknown(mod, "algebra", "algebra laws", "carriers larger than 12");
    return rep;
  }
  PowerUOrd d = build_D(u);
  MonotoneMap s;
  MonotoneMap eta;
  for (std::size_t i = 0; i < u.num_sorts(); ++i) {
    std::vector<std::size_t> t;
    for (Mask M : d.subsets[i]) t.push_back(sup(i, M));
    s.sort_map.push_back(i);
    s.fns.emplace_back(u.size(i), t);
    std::vector<std::size_t> e;
    for (std::size_t a = 0; a < u.size(i); ++a) e.push_back(d.index_of(i, bit(a)));
    eta.sort_map.push_back(i);
    eta.fns.emplace_back(d.subsets[i].size(), e);
  }
  auto add = [&](const char* id, const char* law, std::optional<std::string> v) {
    if (v)
      rep.fail(mod, id, law, *v);
    else
      rep.pass(mod, id, law);
  };
  add("algebra-monotone", "structure map is monotone", monotone_violation(d.uord, u, s));
  MonotoneMap se = compose(eta, s);
  auto id = MonotoneMap::identity(u);
  auto v1 = map_leq_violation(u, u, se, id);
  auto v2 = map_leq_violation(u, u, id, se);
  add("algebra-unit", "sup . eta = id", v1 ? v1 : v2);
  add("algebra-kz", "sup is left adjoint to eta",
      map_leq_violation(d.uord, d.uord, MonotoneMap::identity(d.uord), compose(s, eta)));
  return rep;
}

// Exhaustive search for a structure map on a one-sorted instance.
inline std::optional<std::vector<std::size_t>> search_algebra(const UOrd& u) {
  if (u.num_sorts() != 1 || u.size(0) > 3) throw std::invalid_argument("search_algebra: one sort of size <= 3");
  PowerUOrd d = build_D(u);
  std::optional<std::vector<std::size_t>> found;
  for_each_function(d.subsets[0].size(), u.size(0), [&](const FinFun& f) {
    SupFn sup = [&](std::size_t, Mask M) { return f(d.index_of(0, M)); };
    if (algebra_audit(u, sup).all_pass()) {
      found = f.table;
      return false;
    }
    return true;
  });
  return found;
}

// Laws of the D fiber over predicates with at most max_index indices: meets
// are greatest lower bounds, existential quantification is left adjoint to
// reindexing and satisfies Frobenius and Beck-Chevalley, and the singleton
// embedding is monotone, meet preserving and order reflecting.
inline Report frame_audit(const DFiber& f, std::size_t max_index = 2) {
  Report rep;
  const std::string mod = "dlogic";
  const UOrd& u = f.uord();
  auto add = [&](const char* id, const char* law, const std::string& bad) {
    if (bad.empty())
      rep.pass(mod, id, law);
    else
      rep.fail(mod, id, law, bad);
  };

  // predicates with one index, all sorts
  std::vector<DPred> singles;
  f.for_each_pred(1, [&](const DPred& p) {
    singles.push_back(p);
    return true;
  });
  std::string bad;
  for (const auto& p : singles)
    for (const auto& q : singles) {
      if (!bad.empty()) break;
      DPred pq = f.meet(p, q);
      if (!f.entails(pq, p) || !f.entails(pq, q)) bad = "meet not below " + f.describe(p) + "," + f.describe(q);
      for (const auto& r : singles)
        if (bad.empty() && f.entails(r, p) && f.entails(r, q) && !f.entails(r, pq))
          bad = f.describe(r) + " below " + f.describe(p) + " and " + f.describe(q) + " but not their meet";
    }
  add("meet-glb", "meets are greatest lower bounds", bad);

  bad.clear();
  std::string frob, bc;
  for (std::size_t m = 0; m <= max_index && bad.empty(); ++m)
    for (std::size_t k = 0; k <= max_index && bad.empty(); ++k)
      for_each_function(m, k, [&](const FinFun& h) {
        f.for_each_pred(m, [&](const DPred& phi) {
          DPred ex = f.exists_along(phi, h.table, k);
          return f.for_each_pred(k, [&](const DPred& psi) {
            bool lhs = f.entails(ex, psi), rhs = f.entails(phi, f.reindex(psi, h.table));
            if (lhs != rhs) {
              bad = "exists along h for phi=" + f.describe(phi) + " psi=" + f.describe(psi);
              return false;
            }
            DPred a = f.meet(psi, ex);
            DPred b = f.exists_along(f.meet(f.reindex(psi, h.table), phi), h.table, k);
            if (frob.empty() && !equivalent(f, a, b)) frob = "phi=" + f.describe(phi) + " psi=" + f.describe(psi);
            return true;
          });
        });
        return bad.empty();
      });
  add("exists-adjoint", "exists is left adjoint to reindexing", bad);
  add("frobenius", "psi & exists phi = exists (psi & phi)", frob);

  // pullback of f : A -> C and g : B -> C
  for (std::size_t a = 1; a <= max_index && bc.empty(); ++a)
    for (std::size_t b = 1; b <= max_index && bc.empty(); ++b)
      for (std::size_t c = 1; c <= max_index && bc.empty(); ++c)
        for_each_function(a, c, [&](const FinFun& fa) {
          return for_each_function(b, c, [&](const FinFun& gb) {
            IndexMap p1, p2;
            for (std::size_t x = 0; x < a; ++x)
              for (std::size_t y = 0; y < b; ++y)
                if (fa(x) == gb(y)) {
                  p1.push_back(x);
                  p2.push_back(y);
                }
            return f.for_each_pred(a, [&](const DPred& phi) {
              DPred l = f.reindex(f.exists_along(phi, fa.table, c), gb.table);
              DPred r = f.exists_along(f.reindex(phi, p1), p2, b);
              if (!equivalent(f, l, r)) {
                bc = "phi=" + f.describe(phi);
                return false;
              }
              return true;
            });
          });
        });
  add("beck-chevalley", "reindexing commutes with exists along pullbacks", bc);

  // the singleton embedding
  bad.clear();
  const MeetData& md = f.meets();
  for (std::size_t m = 1; m <= max_index && bad.empty(); ++m)
    for (std::size_t i = 0; i < u.num_sorts() && bad.empty(); ++i)
      for (std::size_t j = 0; j < u.num_sorts() && bad.empty(); ++j)
        for_each_function(m, u.size(i), [&](const FinFun& pv) {
          return for_each_function(m, u.size(j), [&](const FinFun& qv) {
            Predicate p{i, pv.table}, q{j, qv.table};
            bool base = entails(u, p, q);
            bool lifted = f.entails(f.y(p), f.y(q));
            if (base != lifted) {
              bad = "order " + std::string(base ? "not preserved" : "not reflected") + " at sorts " + u.sorts[i] + "," +
                    u.sorts[j];
              return false;
            }
            Predicate pq{md.star_of(i, j), {}};
            for (std::size_t k = 0; k < m; ++k) pq.values.push_back(md.meet(u, i, j, p.values[k], q.values[k]));
            if (!equivalent(f, f.y(pq), f.meet(f.y(p), f.y(q)))) {
              bad = "meets not preserved at sorts " + u.sorts[i] + "," + u.sorts[j];
              return false;
            }
            return true;
          });
        });
  add("y-embedding", "singletons preserve and reflect order and meets", bad);
  return rep;
}

// For the frame DA with join as union: the two ways of meeting an element
// with a join agree, as maps DA x DDA -> DA compared in both directions.
inline Report frobenius_rectangle(const UOrd& u, const MeetData& m) {
  Report rep;
  if (u.max_carrier() > 4 || u.num_sorts() != 1) {
    rep.unknown("dlogic", "frobenius-rectangle", "a & sup N = sup {a & n}", "one sort of size <= 4 only");
    return rep;
  }
  const std::size_t P = std::size_t{1} << u.size(0);
  auto dmeet = [&](Mask x, Mask y) {
    Mask out = 0;
    for_each_bit(x, [&](std::size_t a) { for_each_bit(y, [&](std::size_t b) { out |= bit(m.meet(u, 0, 0, a, b)); }); });
    return out;
  };
  std::string bad;
  for (int dir = 0; dir < 2 && bad.empty(); ++dir) {
    bool any = false;
    for (const auto& s : u.bases(0, 0)) {
      bool ok = true;
      for (Mask a = 0; a < P && ok; ++a)
        for (std::size_t N = 0; N < (std::size_t{1} << P) && ok; ++N) {
          Mask path1 = 0, flat = 0;
          for_each_bit(N, [&](std::size_t n) {
            path1 |= dmeet(a, static_cast<Mask>(n));
            flat |= static_cast<Mask>(n);
          });
          Mask path2 = dmeet(a, flat);
          ok = dir == 0 ? bracket(s, path1, path2) : bracket(s, path2, path1);
        }
      if (ok) {
        any = true;
        break;
      }
    }
    if (!any) bad = dir == 0 ? "first path not below second" : "second path not below first";
  }
  if (bad.empty())
    rep.pass("dlogic", "frobenius-rectangle", "a & sup N = sup {a & n}");
  else
    rep.fail("dlogic", "frobenius-rectangle", "a & sup N = sup {a & n}", bad);
  return rep;
}

// Geometric inclusion of the frame B = DA into DB: sup is left adjoint to the
// singleton map, preserves meets and sup . y = id. Exhaustive for |A_i| <= 3.
inline Report geometric_inclusion_audit(const UOrd& u, const MeetData& m, const JoinFn& join = union_join) {
  Report rep;
  const std::string mod = "dlogic";
  if (u.max_carrier() > 3 || u.num_sorts() != 1) {
    rep.unknown(mod, "geometric-inclusion", "sup -| y", "one sort of size <= 3 only");
    return rep;
  }
  const std::size_t P = std::size_t{1} << u.size(0);
  const std::size_t F = std::size_t{1} << P;
  auto dmeet = [&](Mask x, Mask y) {
    Mask out = 0;
    for_each_bit(x, [&](std::size_t a) { for_each_bit(y, [&](std::size_t b) { out |= bit(m.meet(u, 0, 0, a, b)); }); });
    return out;
  };
  std::vector<Mask> sup(F);
  for (std::size_t G = 0; G < F; ++G) sup[G] = join(members_of(G));
  std::string bad;
  for (Mask M = 0; M < P && bad.empty(); ++M)
    if (sup[std::size_t{1} << M] != M) bad = "sup{M} != M at " + subset_label(u.carriers[0], M);
  if (bad.empty()) {
    bool any = false;
    for (const auto& s : u.bases(0, 0)) {
      bool ok = true;
      for (std::size_t G = 0; G < F && ok; ++G)
        for_each_bit(G, [&](std::size_t M) { ok = ok && bracket(s, static_cast<Mask>(M), sup[G]); });
      if (ok) any = true;
    }
    if (!any) bad = "id <= y . sup fails";
  }
  if (bad.empty()) {
    // sup(G & H) vs sup G & sup H, both directions under one base
    for (int dir = 0; dir < 2 && bad.empty(); ++dir) {
      bool any = false;
      for (const auto& s : u.bases(0, 0)) {
        bool ok = true;
        for (std::size_t G = 0; G < F && ok; ++G)
          for (std::size_t H = 0; H < F && ok; ++H) {
            std::size_t GH = 0;
            for_each_bit(G, [&](std::size_t x) { for_each_bit(H, [&](std::size_t y) { GH |= std::size_t{1} << dmeet(x, y); }); });
            Mask l = sup[GH], r = dmeet(sup[G], sup[H]);
            ok = dir == 0 ? bracket(s, l, r) : bracket(s, r, l);
          }
        if (ok) {
          any = true;
          break;
        }
      }
      if (!any) bad = "sup does not preserve binary meets";
    }
  }
  if (bad.empty())
    rep.pass(mod, "geometric-inclusion", "sup -| y with sup meet preserving");
  else
    rep.fail(mod, "geometric-inclusion", "sup -| y with sup meet preserving", bad);
  return rep;
}

}  // namespace realiz
