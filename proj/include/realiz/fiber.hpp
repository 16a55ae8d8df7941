#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realiz/meets.hpp"
#include "realiz/relcore.hpp"
#include "realiz/uord.hpp"

namespace realiz {

using IndexMap = std::vector<std::size_t>;

// A fibered logic over finite index sets. Predicates carry their index-set
// size; reindex(p, m) has value p[m[k]] at k, and the quantifiers along
// m : |p| -> n act on the fibers of m.
template <class F>
concept LogicFiber = requires(const F& f, const typename F::Pred& p, const IndexMap& m, std::size_t n,
                              const std::function<bool(const typename F::Pred&)>& visit) {
  { f.index_size(p) } -> std::convertible_to<std::size_t>;
  { f.top(n) } -> std::same_as<typename F::Pred>;
  { f.bottom(n) } -> std::same_as<typename F::Pred>;
  { f.meet(p, p) } -> std::same_as<typename F::Pred>;
  { f.implies(p, p) } -> std::same_as<typename F::Pred>;
  { f.reindex(p, m) } -> std::same_as<typename F::Pred>;
  { f.exists_along(p, m, n) } -> std::same_as<typename F::Pred>;
  { f.forall_along(p, m, n) } -> std::same_as<typename F::Pred>;
  { f.entails(p, p) } -> std::convertible_to<bool>;
  { f.support(p) } -> std::same_as<std::vector<bool>>;
  { f.for_each_pred(n, visit) } -> std::convertible_to<bool>;
  { f.describe(p) } -> std::convertible_to<std::string>;
};

template <LogicFiber F>
bool equivalent(const F& f, const typename F::Pred& p, const typename F::Pred& q) {
  return f.entails(p, q) && f.entails(q, p);
}

// Reindexes p, a predicate on the product with dimensions pdims, into the
// context ctx; coordinate k of p reads context variable vars[k].
template <LogicFiber F>
typename F::Pred at(const F& f, const typename F::Pred& p, const std::vector<std::size_t>& pdims,
                    const std::vector<std::size_t>& ctx, const std::vector<std::size_t>& vars) {
  if (pdims.size() != vars.size()) throw std::invalid_argument("at: arity mismatch");
  if (product_size(pdims) != f.index_size(p)) throw std::invalid_argument("at: predicate has wrong index size");
  const std::size_t n = product_size(ctx);
  IndexMap m(n);
  std::vector<std::size_t> coords(ctx.size(), 0);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) idx = idx * pdims[k] + coords[vars[k]];
    m[t] = idx;
    for (std::size_t k = ctx.size(); k-- > 0;) {
      if (++coords[k] < ctx[k]) break;
      coords[k] = 0;
    }
  }
  return f.reindex(p, m);
}

inline IndexMap drop_var_map(const std::vector<std::size_t>& ctx, std::size_t var) {
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < ctx.size(); ++k)
    if (k != var) rest.push_back(ctx[k]);
  const std::size_t n = product_size(ctx);
  IndexMap m(n);
  for (std::size_t t = 0; t < n; ++t) {
    auto c = decode(ctx, t);
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(var));
    m[t] = encode(rest, c);
  }
  return m;
}

inline std::vector<std::size_t> drop_var(std::vector<std::size_t> ctx, std::size_t var) {
  ctx.erase(ctx.begin() + static_cast<std::ptrdiff_t>(var));
  return ctx;
}

template <LogicFiber F>
typename F::Pred exists_var(const F& f, const typename F::Pred& p, const std::vector<std::size_t>& ctx, std::size_t var) {
  return f.exists_along(p, drop_var_map(ctx, var), product_size(drop_var(ctx, var)));
}

template <LogicFiber F>
typename F::Pred forall_var(const F& f, const typename F::Pred& p, const std::vector<std::size_t>& ctx, std::size_t var) {
  return f.forall_along(p, drop_var_map(ctx, var), product_size(drop_var(ctx, var)));
}

template <LogicFiber F>
typename F::Pred meet_all(const F& f, std::size_t n, const std::vector<typename F::Pred>& ps) {
  if (ps.empty()) return f.top(n);
  typename F::Pred acc = ps[0];
  for (std::size_t k = 1; k < ps.size(); ++k) acc = f.meet(acc, ps[k]);
  return acc;
}

// hyps |- concl over an index set of size n
template <LogicFiber F>
bool holds(const F& f, std::size_t n, const std::vector<typename F::Pred>& hyps, const typename F::Pred& concl) {
  return f.entails(meet_all(f, n, hyps), concl);
}

// The predicate "m is in U", obtained as the image of top under the inclusion.
template <LogicFiber F>
typename F::Pred delta_subset(const F& f, const std::vector<bool>& in) {
  IndexMap incl;
  for (std::size_t k = 0; k < in.size(); ++k)
    if (in[k]) incl.push_back(k);
  return f.exists_along(f.top(incl.size()), incl, in.size());
}

template <LogicFiber F>
typename F::Pred equality(const F& f, std::size_t n) {
  std::vector<bool> diag(n * n, false);
  for (std::size_t k = 0; k < n; ++k) diag[k * n + k] = true;
  return delta_subset(f, diag);
}

// A finite Heyting algebra given by its order and operation tables.
struct HeytingAlgebra {
  std::vector<std::string> names;
  Rel leq;
  std::vector<std::size_t> meet, join, imp;  // row-major
  std::size_t top = 0, bot = 0;

  std::size_t size() const { return names.size(); }
  std::size_t m(std::size_t a, std::size_t b) const { return meet[a * size() + b]; }
  std::size_t j(std::size_t a, std::size_t b) const { return join[a * size() + b]; }
  std::size_t i(std::size_t a, std::size_t b) const { return imp[a * size() + b]; }

  // Fills meet, join, implication, top and bottom from the order.
  static HeytingAlgebra from_order(std::vector<std::string> names, const Rel& leq) {
    HeytingAlgebra h;
    h.names = std::move(names);
    h.leq = leq;
    const std::size_t n = h.size();
    auto extremum = [&](auto&& below, bool greatest) {
      for (std::size_t c = 0; c < n; ++c) {
        if (!below(c)) continue;
        bool ok = true;
        for (std::size_t d = 0; d < n && ok; ++d)
          if (below(d) && !(greatest ? leq.get(d, c) : leq.get(c, d))) ok = false;
        if (ok) return c;
      }
      throw std::invalid_argument("HeytingAlgebra: order is not a Heyting algebra");
    };
    h.meet.resize(n * n);
    h.join.resize(n * n);
    h.imp.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        h.meet[a * n + b] = extremum([&](std::size_t c) { return leq.get(c, a) && leq.get(c, b); }, true);
        h.join[a * n + b] = extremum([&](std::size_t c) { return leq.get(a, c) && leq.get(b, c); }, false);
      }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        h.imp[a * n + b] = extremum([&](std::size_t c) { return leq.get(h.meet[c * n + a], b); }, true);
    h.top = extremum([](std::size_t) { return true; }, true);
    h.bot = extremum([](std::size_t) { return true; }, false);
    return h;
  }

  static HeytingAlgebra chain(std::size_t n) {
    Rel leq(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) leq.set(a, b);
    return from_order(FinSet::range("", n).elements, leq);
  }

  // Subsets of a k-element set.
  static HeytingAlgebra boolean(std::size_t k) {
    const std::size_t n = std::size_t{1} << k;
    Rel leq(n, n);
    std::vector<std::string> names;
    for (std::size_t a = 0; a < n; ++a) {
      std::string s = "{";
      for (std::size_t e = 0; e < k; ++e)
        if ((a >> e) & 1U) s += (s.size() > 1 ? "," : "") + std::to_string(e);
      names.push_back(s + "}");
      for (std::size_t b = 0; b < n; ++b)
        if ((a & ~b) == 0) leq.set(a, b);
    }
    return from_order(names, leq);
  }

  bool is_join_prime(std::size_t a) const {
    if (a == bot) return false;
    for (std::size_t b = 0; b < size(); ++b)
      for (std::size_t c = 0; c < size(); ++c)
        if (leq.get(a, j(b, c)) && !leq.get(a, b) && !leq.get(a, c)) return false;
    return true;
  }

  UOrd as_uord() const { return from_preorder(FinSet("H", names), leq); }
  MeetData as_meets(const UOrd& u) const { return meets_from_table(u, meet, top); }
};

struct HPred {
  std::vector<std::size_t> v;
  bool operator==(const HPred&) const = default;
};

// Families of truth values of a finite Heyting algebra, ordered pointwise.
class HeytingFiber {
 public:
  using Pred = HPred;

  explicit HeytingFiber(HeytingAlgebra h) : h_(std::move(h)) {}
  const HeytingAlgebra& algebra() const { return h_; }

  std::size_t index_size(const Pred& p) const { return p.v.size(); }
  Pred constant(std::size_t n, std::size_t a) const { return {std::vector<std::size_t>(n, a)}; }
  Pred top(std::size_t n) const { return constant(n, h_.top); }
  Pred bottom(std::size_t n) const { return constant(n, h_.bot); }

  Pred meet(const Pred& p, const Pred& q) const { return zip(p, q, [&](auto a, auto b) { return h_.m(a, b); }); }
  Pred implies(const Pred& p, const Pred& q) const { return zip(p, q, [&](auto a, auto b) { return h_.i(a, b); }); }

  Pred reindex(const Pred& p, const IndexMap& m) const {
    Pred out{std::vector<std::size_t>(m.size())};
    for (std::size_t k = 0; k < m.size(); ++k) out.v[k] = p.v.at(m[k]);
    return out;
  }
  Pred exists_along(const Pred& p, const IndexMap& m, std::size_t n) const {
    check_map(p, m, n);
    Pred out = bottom(n);
    for (std::size_t k = 0; k < m.size(); ++k) out.v[m[k]] = h_.j(out.v[m[k]], p.v[k]);
    return out;
  }
  Pred forall_along(const Pred& p, const IndexMap& m, std::size_t n) const {
    check_map(p, m, n);
    Pred out = top(n);
    for (std::size_t k = 0; k < m.size(); ++k) out.v[m[k]] = h_.m(out.v[m[k]], p.v[k]);
    return out;
  }
  bool entails(const Pred& p, const Pred& q) const {
    if (p.v.size() != q.v.size()) throw std::invalid_argument("entails: index sets differ");
    for (std::size_t k = 0; k < p.v.size(); ++k)
      if (!h_.leq.get(p.v[k], q.v[k])) return false;
    return true;
  }
  std::vector<bool> support(const Pred& p) const {
    std::vector<bool> out(p.v.size());
    for (std::size_t k = 0; k < p.v.size(); ++k) out[k] = p.v[k] != h_.bot;
    return out;
  }
  std::vector<bool> gamma(const Pred& p) const {
    std::vector<bool> out(p.v.size());
    for (std::size_t k = 0; k < p.v.size(); ++k) out[k] = p.v[k] == h_.top;
    return out;
  }
  bool has_implication() const { return true; }
  bool pointwise_entailment() const { return true; }
  bool for_each_pred(std::size_t n, const std::function<bool(const Pred&)>& visit) const {
    return for_each_function(n, h_.size(), [&](const FinFun& f) { return visit(Pred{f.table}); });
  }
  std::string describe(const Pred& p) const {
    std::string s = "[";
    for (std::size_t k = 0; k < p.v.size(); ++k) s += (k ? " " : "") + h_.names[p.v[k]];
    return s + "]";
  }

  // p as a join of join-prime families: index set {(m, x) | x join-prime below p m}.
  struct Decomposition {
    IndexMap proj;  // new index -> old index
    Pred prime;
  };
  Decomposition prime_decompose(const Pred& p) const {
    Decomposition d;
    for (std::size_t k = 0; k < p.v.size(); ++k)
      for (std::size_t x = 0; x < h_.size(); ++x)
        if (h_.is_join_prime(x) && h_.leq.get(x, p.v[k])) {
          d.proj.push_back(k);
          d.prime.v.push_back(x);
        }
    return d;
  }

 private:
  template <class Op>
  Pred zip(const Pred& p, const Pred& q, Op op) const {
    if (p.v.size() != q.v.size()) throw std::invalid_argument("HeytingFiber: index sets differ");
    Pred out{std::vector<std::size_t>(p.v.size())};
    for (std::size_t k = 0; k < p.v.size(); ++k) out.v[k] = op(p.v[k], q.v[k]);
    return out;
  }
  void check_map(const Pred& p, const IndexMap& m, std::size_t n) const {
    if (m.size() != p.v.size()) throw std::invalid_argument("quantifier: map has wrong domain");
    for (auto x : m)
      if (x >= n) throw std::invalid_argument("quantifier: map value out of range");
  }

  HeytingAlgebra h_;
};

static_assert(LogicFiber<HeytingFiber>);

}  // namespace realiz
