#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realiz/relcore.hpp"
#include "realiz/report.hpp"
#include "realiz/uord.hpp"

namespace realiz {

// Chosen finite meets: a unit sort with a top element, and for sorts i, j a
// sort i*j with a map wedge_ij : A_i x A_j -> A_{i*j}.
struct MeetData {
  std::size_t unit = 0;
  std::size_t top = 0;
  std::vector<std::size_t> star;                 // i * n + j
  std::vector<std::vector<std::size_t>> wedge;   // i * n + j, table a * |A_j| + b

  std::size_t nsorts = 0;

  std::size_t n() const { return nsorts; }
  std::size_t star_of(std::size_t i, std::size_t j) const { return star.at(i * n() + j); }
  std::size_t meet(const UOrd& u, std::size_t i, std::size_t j, std::size_t a, std::size_t b) const {
    return wedge.at(i * n() + j).at(a * u.size(j) + b);
  }
};

// One-sorted meets from a binary meet table (row-major) and a top element.
inline MeetData meets_from_table(const UOrd& u, const std::vector<std::size_t>& table, std::size_t top) {
  if (u.num_sorts() != 1) throw std::invalid_argument("meets_from_table: one-sorted instances only");
  if (table.size() != u.size(0) * u.size(0)) throw std::invalid_argument("meets_from_table: table has wrong size");
  MeetData m;
  m.nsorts = 1;
  m.unit = 0;
  m.top = top;
  m.star = {0};
  m.wedge = {table};
  return m;
}

// Meets of a preorder that is a meet-semilattice, computed from the order.
inline MeetData meets_from_order(const UOrd& u, std::size_t top) {
  const Rel& leq = u.bases(0, 0).at(0);
  const std::size_t n = u.size(0);
  std::vector<std::size_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::optional<std::size_t> best;
      for (std::size_t c = 0; c < n; ++c)
        if (leq.get(c, a) && leq.get(c, b) && (!best || leq.get(*best, c))) best = c;
      if (!best) throw std::invalid_argument("meets_from_order: no meet");
      table[a * n + b] = *best;
    }
  return meets_from_table(u, table, top);
}

inline void check_meet_shape(const UOrd& u, const MeetData& m) {
  const std::size_t n = u.num_sorts();
  if (m.nsorts != n || m.star.size() != n * n || m.wedge.size() != n * n) throw std::invalid_argument("meets: tables have wrong size");
  if (m.unit >= n || m.top >= u.size(m.unit)) throw std::invalid_argument("meets: unit out of range");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t s = m.star[i * n + j];
      if (s >= n) throw std::invalid_argument("meets: product sort out of range");
      const auto& w = m.wedge[i * n + j];
      if (w.size() != u.size(i) * u.size(j)) throw std::invalid_argument("meets: wedge table has wrong size");
      for (auto v : w)
        if (v >= u.size(s)) throw std::invalid_argument("meets: wedge value out of range");
    }
}

inline Report verify_meets(const UOrd& u, const MeetData& m) {
  check_meet_shape(u, m);
  Report rep;
  const std::size_t n = u.num_sorts();
  const auto& S = u.sorts;

  std::string bad;
  for (std::size_t i = 0; i < n && bad.empty(); ++i)
    for (std::size_t j = 0; j < n && bad.empty(); ++j)
      for (std::size_t k = 0; k < n && bad.empty(); ++k)
        for (std::size_t l = 0; l < n && bad.empty(); ++l)
          for (std::size_t x = 0; x < u.bases(i, j).size() && bad.empty(); ++x)
            for (std::size_t y = 0; y < u.bases(k, l).size() && bad.empty(); ++y) {
              const Rel& r = u.bases(i, j)[x];
              const Rel& s = u.bases(k, l)[y];
              std::size_t ik = m.star_of(i, k), jl = m.star_of(j, l);
              Rel img(u.size(ik), u.size(jl));
              for (auto [a, b] : r.pairs())
                for (auto [c, d] : s.pairs()) img.set(m.meet(u, i, k, a, c), m.meet(u, j, l, b, d));
              if (!in_down(u, ik, jl, img))
                bad = "base #" + std::to_string(x) + " on " + S[i] + "->" + S[j] + " with base #" + std::to_string(y) +
                      " on " + S[k] + "->" + S[l];
            }
  if (bad.empty())
    rep.pass("meets", "wedge-monotone", "meet of related pairs is related");
  else
    rep.fail("meets", "wedge-monotone", "meet of related pairs is related", bad);

  auto projection = [&](bool left) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t t = left ? i : j;
        Rel r(u.size(m.star_of(i, j)), u.size(t));
        for (std::size_t a = 0; a < u.size(i); ++a)
          for (std::size_t b = 0; b < u.size(j); ++b) r.set(m.meet(u, i, j, a, b), left ? a : b);
        if (!in_down(u, m.star_of(i, j), t, r)) return S[i] + "*" + S[j] + " -> " + S[t] + " " +
                                                       describe_pairs(r, u.carriers[m.star_of(i, j)], u.carriers[t]);
      }
    return std::string{};
  };
  bad = projection(true);
  if (bad.empty())
    rep.pass("meets", "wedge-left", "a meet lies below its left factor");
  else
    rep.fail("meets", "wedge-left", "a meet lies below its left factor", bad);
  bad = projection(false);
  if (bad.empty())
    rep.pass("meets", "wedge-right", "a meet lies below its right factor");
  else
    rep.fail("meets", "wedge-right", "a meet lies below its right factor", bad);

  bad.clear();
  for (std::size_t i = 0; i < n && bad.empty(); ++i) {
    Rel r(u.size(i), u.size(m.star_of(i, i)));
    for (std::size_t a = 0; a < u.size(i); ++a) r.set(a, m.meet(u, i, i, a, a));
    if (!in_down(u, i, m.star_of(i, i), r)) bad = "sort " + S[i];
  }
  if (bad.empty())
    rep.pass("meets", "wedge-diagonal", "a lies below a meet a");
  else
    rep.fail("meets", "wedge-diagonal", "a lies below a meet a", bad);

  bad.clear();
  for (std::size_t i = 0; i < n && bad.empty(); ++i) {
    Rel r(u.size(i), u.size(m.unit));
    for (std::size_t a = 0; a < u.size(i); ++a) r.set(a, m.top);
    if (!in_down(u, i, m.unit, r)) bad = "sort " + S[i];
  }
  if (bad.empty())
    rep.pass("meets", "top", "everything lies below top");
  else
    rep.fail("meets", "top", "everything lies below top", bad);
  return rep;
}

inline bool has_meets(const UOrd& u, const MeetData& m) { return verify_meets(u, m).all_pass(); }

// First pair of sorts whose wedge map is not injective.
inline std::optional<std::string> wedge_injectivity_violation(const UOrd& u, const MeetData& m) {
  const std::size_t n = u.num_sorts();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& w = m.wedge[i * n + j];
      std::vector<std::optional<std::size_t>> seen(u.size(m.star_of(i, j)));
      for (std::size_t x = 0; x < w.size(); ++x) {
        if (seen[w[x]]) {
          std::size_t y = *seen[w[x]];
          const auto& ci = u.carriers[i].elements;
          const auto& cj = u.carriers[j].elements;
          return "(" + ci[y / u.size(j)] + "," + cj[y % u.size(j)] + ") and (" + ci[x / u.size(j)] + "," +
                 cj[x % u.size(j)] + ") have the same meet";
        }
        seen[w[x]] = x;
      }
    }
  return std::nullopt;
}

// Wedge maps must be injective on functional instances.
inline Report injectivity_check(const UOrd& u, const MeetData& m) {
  Report rep;
  if (!is_functional_uord(u))
    rep.not_applicable("meets", "wedge-injective", "wedge maps are injective", "the instance is not functional");
  else if (auto bad = wedge_injectivity_violation(u, m))
    rep.fail("meets", "wedge-injective", "wedge maps are injective", *bad);
  else
    rep.pass("meets", "wedge-injective", "wedge maps are injective");
  return rep;
}

// Sort of the left-associated meet of the given sorts; the unit for none.
inline std::size_t nfold_sort(const MeetData& m, const std::vector<std::size_t>& sorts) {
  if (sorts.empty()) return m.unit;
  std::size_t s = sorts[0];
  for (std::size_t k = 1; k < sorts.size(); ++k) s = m.star_of(s, sorts[k]);
  return s;
}

inline std::size_t nfold_meet(const UOrd& u, const MeetData& m, const std::vector<std::size_t>& sorts,
                              const std::vector<std::size_t>& tuple) {
  if (sorts.empty()) return m.top;
  std::size_t s = sorts[0], a = tuple[0];
  for (std::size_t k = 1; k < sorts.size(); ++k) {
    a = m.meet(u, s, sorts[k], a, tuple[k]);
    s = m.star_of(s, sorts[k]);
  }
  return a;
}

// A relation from the product of input carriers to an output carrier.
struct CloneRel {
  std::vector<std::size_t> inputs;
  std::size_t output = 0;
  Rel rel;
};

inline std::vector<std::size_t> input_dims(const UOrd& u, const std::vector<std::size_t>& inputs) {
  std::vector<std::size_t> dims;
  for (auto i : inputs) dims.push_back(u.size(i));
  return dims;
}

// {(a1..an, b) | r(a1 & ... & an, b)} for a relation r on the meet sort.
inline CloneRel clone_generator(const UOrd& u, const MeetData& m, const std::vector<std::size_t>& inputs,
                                std::size_t output, const Rel& r) {
  auto dims = input_dims(u, inputs);
  CloneRel out{inputs, output, Rel(product_size(dims), u.size(output))};
  for (std::size_t t = 0; t < product_size(dims); ++t) {
    std::size_t a = nfold_meet(u, m, inputs, decode(dims, t));
    for (std::size_t b = 0; b < u.size(output); ++b)
      if (r.get(a, b)) out.rel.set(t, b);
  }
  return out;
}

// The wedge-composite predicate p & q lies below p and q, and p below p & p,
// for predicates with at most max_n indices.
inline Report meet_predicate_audit(const UOrd& u, const MeetData& m, std::size_t max_n = 3) {
  Report rep;
  check_meet_shape(u, m);
  std::string bad;
  for (std::size_t n = 0; n <= max_n && bad.empty(); ++n)
    for (std::size_t i = 0; i < u.num_sorts() && bad.empty(); ++i)
      for (std::size_t j = 0; j < u.num_sorts() && bad.empty(); ++j)
        for_each_function(n, u.size(i), [&](const FinFun& p) {
          Predicate pp{i, p.table}, diag{m.star_of(i, i), {}};
          for (auto a : p.table) diag.values.push_back(m.meet(u, i, i, a, a));
          if (!entails(u, pp, diag)) {
            bad = "p |/- p & p at p=" + describe_map(p);
            return false;
          }
          return for_each_function(n, u.size(j), [&](const FinFun& q) {
            Predicate qq{j, q.table}, pq{m.star_of(i, j), {}};
            for (std::size_t k = 0; k < n; ++k) pq.values.push_back(m.meet(u, i, j, p(k), q(k)));
            if (!entails(u, pq, pp) || !entails(u, pq, qq)) {
              bad = "p & q not below its factors at p=" + describe_map(p) + " q=" + describe_map(q);
              return false;
            }
            return true;
          });
        });
  if (bad.empty())
    rep.pass("meets", "meet-predicates", "p & q |- p, q and p |- p & p");
  else
    rep.fail("meets", "meet-predicates", "p & q |- p, q and p |- p & p", bad);
  return rep;
}

// Index of the base relation whose generator covers q.
inline std::optional<std::size_t> clone_member(const UOrd& u, const MeetData& m, const CloneRel& q) {
  std::size_t s = nfold_sort(m, q.inputs);
  const auto& bs = u.bases(s, q.output);
  for (std::size_t k = 0; k < bs.size(); ++k)
    if (contained(q.rel, clone_generator(u, m, q.inputs, q.output, bs[k]).rel)) return k;
  return std::nullopt;
}

// s after (r1, ..., rn): (a, c) iff there are b_k with r_k(a, b_k) and s(b, c).
inline CloneRel clone_compose(const UOrd& u, const CloneRel& s, const std::vector<CloneRel>& rs) {
  if (rs.size() != s.inputs.size()) throw std::invalid_argument("clone_compose: arity mismatch");
  if (rs.empty()) return s;
  const auto& inputs = rs[0].inputs;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (rs[k].inputs != inputs) throw std::invalid_argument("clone_compose: input sorts differ");
    if (rs[k].output != s.inputs[k]) throw std::invalid_argument("clone_compose: sort mismatch");
  }
  auto adims = input_dims(u, inputs);
  auto bdims = input_dims(u, s.inputs);
  CloneRel out{inputs, s.output, Rel(product_size(adims), u.size(s.output))};
  for (std::size_t a = 0; a < product_size(adims); ++a)
    for (std::size_t b = 0; b < product_size(bdims); ++b) {
      auto bt = decode(bdims, b);
      bool ok = true;
      for (std::size_t k = 0; k < rs.size() && ok; ++k) ok = rs[k].rel.get(a, bt[k]);
      if (!ok) continue;
      for (std::size_t c = 0; c < u.size(s.output); ++c)
        if (s.rel.get(b, c)) out.rel.set(a, c);
    }
  return out;
}

// Elements a of each sort with {a} in the nullary clone.
inline std::vector<std::vector<std::size_t>> designated_truth_values(const UOrd& u, const MeetData& m) {
  std::vector<std::vector<std::size_t>> out(u.num_sorts());
  for (std::size_t i = 0; i < u.num_sorts(); ++i)
    for (std::size_t a = 0; a < u.size(i); ++a)
      for (const auto& r : u.bases(m.unit, i))
        if (r.get(m.top, a)) {
          out[i].push_back(a);
          break;
        }
  return out;
}

}  // namespace realiz
