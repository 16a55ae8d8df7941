#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realiz/relcore.hpp"
#include "realiz/report.hpp"
#include "realiz/uord.hpp"

namespace realiz {

// G : A -/-> B. Component (j, i) holds base relations from B_j to A_i; the
// component itself is their down-closure.
struct Distributor {
  UOrd src, dst;
  std::vector<std::vector<Rel>> comps;  // j * |I| + i

  Distributor() = default;
  Distributor(UOrd a, UOrd b) : src(std::move(a)), dst(std::move(b)), comps(dst.num_sorts() * src.num_sorts()) {}

  const std::vector<Rel>& at(std::size_t j, std::size_t i) const { return comps.at(j * src.num_sorts() + i); }
  std::vector<Rel>& at(std::size_t j, std::size_t i) { return comps.at(j * src.num_sorts() + i); }

  void add(std::size_t j, std::size_t i, Rel r) {
    if (r.rows() != dst.size(j) || r.cols() != src.size(i)) throw std::invalid_argument("distributor: wrong shape");
    for (const auto& x : at(j, i))
      if (contained(r, x)) return;
    auto& c = at(j, i);
    std::erase_if(c, [&](const Rel& x) { return contained(x, r); });
    c.push_back(std::move(r));
  }

  bool member(std::size_t j, std::size_t i, const Rel& r) const {
    for (const auto& x : at(j, i))
      if (contained(r, x)) return true;
    return false;
  }
};

inline Distributor identity_dist(const UOrd& u) {
  Distributor d(u, u);
  for (std::size_t j = 0; j < u.num_sorts(); ++j)
    for (std::size_t i = 0; i < u.num_sorts(); ++i)
      for (const auto& r : u.bases(j, i)) d.add(j, i, r);
  return d;
}

// Closure under precomposition with the source structure and postcomposition
// with the target structure.
inline std::optional<std::string> distributor_violation(const Distributor& d) {
  const UOrd &a = d.src, &b = d.dst;
  for (std::size_t j = 0; j < b.num_sorts(); ++j)
    for (std::size_t i = 0; i < a.num_sorts(); ++i)
      for (const auto& h : d.at(j, i)) {
        for (std::size_t i2 = 0; i2 < a.num_sorts(); ++i2)
          for (const auto& r : a.bases(i, i2))
            if (!d.member(j, i2, compose(h, r)))
              return "h then r leaves the component (" + b.sorts[j] + "," + a.sorts[i2] + ")";
        for (std::size_t j2 = 0; j2 < b.num_sorts(); ++j2)
          for (const auto& s : b.bases(j2, j))
            if (!d.member(j2, i, compose(s, h)))
              return "s then h leaves the component (" + b.sorts[j2] + "," + a.sorts[i] + ")";
      }
  return std::nullopt;
}

// G : A -/-> B then H : B -/-> C.
inline Distributor dist_compose(const Distributor& g, const Distributor& h) {
  if (g.dst.num_sorts() != h.src.num_sorts()) throw std::invalid_argument("dist_compose: middle objects differ");
  for (std::size_t j = 0; j < g.dst.num_sorts(); ++j)
    if (g.dst.size(j) != h.src.size(j)) throw std::invalid_argument("dist_compose: middle carriers differ");
  Distributor out(g.src, h.dst);
  for (std::size_t k = 0; k < h.dst.num_sorts(); ++k)
    for (std::size_t i = 0; i < g.src.num_sorts(); ++i)
      for (std::size_t j = 0; j < g.dst.num_sorts(); ++j)
        for (const auto& y : h.at(k, j))
          for (const auto& x : g.at(j, i)) out.add(k, i, compose(y, x));
  return out;
}

// G : A -/-> C and H : B -/-> D give A x B -/-> C x D.
inline Distributor dist_product(const Distributor& g, const Distributor& h) {
  Distributor out(product({g.src, h.src}), product({g.dst, h.dst}));
  const std::size_t nb = h.src.num_sorts(), nd = h.dst.num_sorts();
  for (std::size_t k = 0; k < g.dst.num_sorts(); ++k)
    for (std::size_t l = 0; l < nd; ++l)
      for (std::size_t i = 0; i < g.src.num_sorts(); ++i)
        for (std::size_t j = 0; j < nb; ++j)
          for (const auto& x : g.at(k, i))
            for (const auto& y : h.at(l, j)) out.add(k * nd + l, i * nb + j, box_product(x, y));
  return out;
}

// (u,f)^* : A -/-> B; component (j,i) = {g | g then f_i lies in S_{j,ui}}.
inline Distributor companion(const UOrd& a, const UOrd& b, const MonotoneMap& f) {
  check_shape(a, b, f);
  Distributor out(a, b);
  for (std::size_t j = 0; j < b.num_sorts(); ++j)
    for (std::size_t i = 0; i < a.num_sorts(); ++i)
      for (const auto& s : b.bases(j, f.sort_map[i])) {
        Rel g(b.size(j), a.size(i));
        for (std::size_t y = 0; y < b.size(j); ++y)
          for (std::size_t x = 0; x < a.size(i); ++x)
            if (s.get(y, f.fns[i](x))) g.set(y, x);
        out.add(j, i, std::move(g));
      }
  return out;
}

// (u,f)_* : B -/-> A; component (i,j) = {h | f_i converse then h lies in S_{ui,j}}.
inline Distributor conjoint(const UOrd& a, const UOrd& b, const MonotoneMap& f) {
  check_shape(a, b, f);
  Distributor out(b, a);
  for (std::size_t i = 0; i < a.num_sorts(); ++i)
    for (std::size_t j = 0; j < b.num_sorts(); ++j)
      for (const auto& s : b.bases(f.sort_map[i], j)) {
        Rel h(a.size(i), b.size(j));
        for (std::size_t x = 0; x < a.size(i); ++x)
          for (std::size_t y = 0; y < b.size(j); ++y)
            if (s.get(f.fns[i](x), y)) h.set(x, y);
        out.add(i, j, std::move(h));
      }
  return out;
}

inline std::optional<std::string> dist_leq_violation(const Distributor& g, const Distributor& h) {
  if (g.comps.size() != h.comps.size()) throw std::invalid_argument("dist_leq: endpoints differ");
  for (std::size_t j = 0; j < g.dst.num_sorts(); ++j)
    for (std::size_t i = 0; i < g.src.num_sorts(); ++i)
      for (std::size_t x = 0; x < g.at(j, i).size(); ++x)
        if (!h.member(j, i, g.at(j, i)[x]))
          return "base #" + std::to_string(x) + " of component (" + g.dst.sorts[j] + "," + g.src.sorts[i] +
                 ") is " + describe_pairs(g.at(j, i)[x], g.dst.carriers[j], g.src.carriers[i]) + ", not covered";
  return std::nullopt;
}

inline bool dist_leq(const Distributor& g, const Distributor& h) { return !dist_leq_violation(g, h); }
inline bool dist_equiv(const Distributor& g, const Distributor& h) { return dist_leq(g, h) && dist_leq(h, g); }

// The indexed action: psi over B and phi over A on a common index set are
// related iff {(psi m, phi m)} lies in G_{ji}.
inline bool ufam_dist(const Distributor& g, const Predicate& psi, const Predicate& phi) {
  if (psi.index_size() != phi.index_size()) throw std::invalid_argument("ufam_dist: index sets differ");
  Rel r(g.dst.size(psi.sort), g.src.size(phi.sort));
  for (std::size_t m = 0; m < psi.index_size(); ++m) r.set(psi.values[m], phi.values[m]);
  return g.member(psi.sort, phi.sort, r);
}

// G : A -/-> B left adjoint to H : B -/-> A: id_A <= H.G and G.H <= id_B.
inline Report adjunction_audit(const Distributor& g, const Distributor& h) {
  Report rep;
  auto unit = dist_leq_violation(identity_dist(g.src), dist_compose(g, h));
  if (unit)
    rep.fail("udist", "adjunction-unit", "identity below H after G", *unit);
  else
    rep.pass("udist", "adjunction-unit", "identity below H after G");
  auto counit = dist_leq_violation(dist_compose(h, g), identity_dist(g.dst));
  if (counit)
    rep.fail("udist", "adjunction-counit", "G after H below identity", *counit);
  else
    rep.pass("udist", "adjunction-counit", "G after H below identity");
  return rep;
}

namespace detail {

// Identity on indices between uniform preorders with the same sort and
// carrier sizes, e.g. the canonical isomorphisms between lexicographic
// products.
inline MonotoneMap reindexing_iso(const UOrd& a, const UOrd& b) {
  if (a.num_sorts() != b.num_sorts()) throw std::invalid_argument("reindexing_iso: sort counts differ");
  MonotoneMap m;
  for (std::size_t i = 0; i < a.num_sorts(); ++i) {
    if (a.size(i) != b.size(i)) throw std::invalid_argument("reindexing_iso: carrier sizes differ");
    m.sort_map.push_back(i);
    m.fns.push_back(FinFun::identity(a.size(i)));
  }
  if (!is_monotone(a, b, m)) throw std::logic_error("reindexing_iso: not monotone");
  return m;
}

inline Distributor iso_dist(const UOrd& a, const UOrd& b) { return companion(a, b, reindexing_iso(a, b)); }

}  // namespace detail

// eta : 1 -/-> A x A^op and eps : A^op x A -/-> 1, both given by R.
inline Distributor dual_unit(const UOrd& u) {
  UOrd one = chain(1);
  Distributor d(one, product({u, oppose(u)}));
  const std::size_t n = u.num_sorts();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& r : u.bases(i, j)) {
        Rel col(r.rows() * r.cols(), 1);
        for (std::size_t a = 0; a < r.rows(); ++a)
          for (std::size_t b = 0; b < r.cols(); ++b)
            if (r.get(a, b)) col.set(a * r.cols() + b, 0);
        d.add(i * n + j, 0, std::move(col));
      }
  return d;
}

inline Distributor dual_counit(const UOrd& u) {
  UOrd one = chain(1);
  Distributor d(product({oppose(u), u}), one);
  const std::size_t n = u.num_sorts();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& r : u.bases(i, j)) {
        Rel row(1, r.rows() * r.cols());
        for (std::size_t a = 0; a < r.rows(); ++a)
          for (std::size_t b = 0; b < r.cols(); ++b)
            if (r.get(a, b)) row.set(0, a * r.cols() + b);
        d.add(0, i * n + j, std::move(row));
      }
  return d;
}

// Triangle equalities for A^op dual to A, up to mutual containment.
inline Report dual_audit(const UOrd& u) {
  Report rep;
  UOrd one = chain(1), op = oppose(u);
  Distributor eta = dual_unit(u), eps = dual_counit(u);
  for (const auto* d : {&eta, &eps})
    if (auto bad = distributor_violation(*d)) {
      rep.fail("udist", "dual-structure", "unit and counit are distributors", *bad);
      return rep;
    }
  rep.pass("udist", "dual-structure", "unit and counit are distributors");

  // A = 1 x A -> (A x A^op) x A = A x (A^op x A) -> A x 1 = A
  Distributor first = detail::iso_dist(u, product({one, u}));
  first = dist_compose(first, dist_product(eta, identity_dist(u)));
  first = dist_compose(first, detail::iso_dist(product({product({u, op}), u}), product({u, product({op, u})})));
  first = dist_compose(first, dist_product(identity_dist(u), eps));
  first = dist_compose(first, detail::iso_dist(product({u, one}), u));
  if (dist_equiv(first, identity_dist(u)))
    rep.pass("udist", "dual-triangle-1", "(id x eps)(eta x id) = id");
  else
    rep.fail("udist", "dual-triangle-1", "(id x eps)(eta x id) = id",
             dist_leq_violation(first, identity_dist(u)).value_or("identity not below the composite"));

  // A^op = A^op x 1 -> A^op x (A x A^op) = (A^op x A) x A^op -> 1 x A^op = A^op
  Distributor second = detail::iso_dist(op, product({op, one}));
  second = dist_compose(second, dist_product(identity_dist(op), eta));
  second = dist_compose(second, detail::iso_dist(product({op, product({u, op})}), product({product({op, u}), op})));
  second = dist_compose(second, dist_product(eps, identity_dist(op)));
  second = dist_compose(second, detail::iso_dist(product({one, op}), op));
  if (dist_equiv(second, identity_dist(op)))
    rep.pass("udist", "dual-triangle-2", "(eps x id)(id x eta) = id");
  else
    rep.fail("udist", "dual-triangle-2", "(eps x id)(id x eta) = id",
             dist_leq_violation(second, identity_dist(op)).value_or("identity not below the composite"));
  return rep;
}

struct AdjointSearch {
  Verdict verdict = Verdict::Unknown;
  std::optional<MonotoneMap> map;
  std::string detail;
};

// Recovers (u,f) from G -| H: for each sort i the least j with bases h, g
// such that id is below h then g, and f_i a = least b with h(a,b), g(b,a).
inline AdjointSearch adjoint_search(const Distributor& g, const Distributor& h) {
  const UOrd &a = g.src, &b = g.dst;
  if (!adjunction_audit(g, h).all_pass()) return {Verdict::Fail, std::nullopt, "G is not left adjoint to H"};
  MonotoneMap f;
  for (std::size_t i = 0; i < a.num_sorts(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < b.num_sorts() && !found; ++j)
      for (const auto& hh : h.at(i, j)) {
        for (const auto& gg : g.at(j, i)) {
          std::vector<std::size_t> table(a.size(i));
          bool ok = true;
          for (std::size_t x = 0; x < a.size(i) && ok; ++x) {
            ok = false;
            for (std::size_t y = 0; y < b.size(j) && !ok; ++y)
              if (hh.get(x, y) && gg.get(y, x)) {
                table[x] = y;
                ok = true;
              }
          }
          if (ok) {
            f.sort_map.push_back(j);
            f.fns.emplace_back(b.size(j), table);
            found = true;
            break;
          }
        }
        if (found) break;
      }
    if (!found) return {Verdict::Fail, std::nullopt, "no splitting of the identity on sort " + a.sorts[i]};
  }
  if (auto bad = monotone_violation(a, b, f)) return {Verdict::Fail, std::nullopt, "chosen map not monotone: " + *bad};
  if (!dist_equiv(companion(a, b, f), g) || !dist_equiv(conjoint(a, b, f), h))
    return {Verdict::Fail, f, "companion/conjoint of the chosen map differ from the given pair"};
  return {Verdict::Pass, f, {}};
}

}  // namespace realiz
