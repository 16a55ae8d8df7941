#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realiz/fiber.hpp"
#include "realiz/relcore.hpp"
#include "realiz/topos.hpp"

namespace realiz {

template <class F>
concept DecomposableFiber = LogicFiber<F> && requires(const F& f, const typename F::Pred& p) {
  { f.prime_decompose(p).proj } -> std::convertible_to<IndexMap>;
  { f.prime_decompose(p).prime } -> std::convertible_to<typename F::Pred>;
};

template <DecomposableFiber F>
struct Normalized {
  typename PerCategory<F>::Object obj;
  typename PerCategory<F>::Morphism iso;  // obj -> original
  IndexMap proj;
};

// An isomorphic object whose existence part is a sum of prime predicates:
// sigma(j,j') = p(j) & p(j') & rho(uj, uj').
template <DecomposableFiber F>
Normalized<F> prime_normalize(const PerCategory<F>& cat, const typename PerCategory<F>::Object& a) {
  const F& f = cat.fiber();
  auto d = f.prime_decompose(cat.ex(a));
  const std::size_t J = d.proj.size(), C = a.carrier;
  IndexMap pairs(J * J), mixed(J * C);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t k = 0; k < J; ++k) pairs[j * J + k] = d.proj[j] * C + d.proj[k];
    for (std::size_t c = 0; c < C; ++c) mixed[j * C + c] = d.proj[j] * C + c;
  }
  const std::vector<std::size_t> jj{J, J}, jc{J, C};
  auto sigma = f.meet(f.meet(cat.atv(d.prime, {J}, jj, {0}), cat.atv(d.prime, {J}, jj, {1})), f.reindex(a.rho, pairs));
  typename PerCategory<F>::Object o{J, sigma};
  typename PerCategory<F>::Morphism iso{o, a, f.meet(cat.atv(d.prime, {J}, jc, {0}), f.reindex(a.rho, mixed))};
  return {o, iso, d.proj};
}

template <LogicFiber F>
struct Exponential {
  using Cat = PerCategory<F>;
  typename Cat::Object base, target, obj;
  std::vector<std::vector<Mask>> trel;  // total relations J -> K, one K-mask per j
  typename Cat::Product prod;           // obj x base
  typename Cat::Morphism eval;

  std::size_t index_of(const std::vector<Mask>& t) const {
    for (std::size_t x = 0; x < trel.size(); ++x)
      if (trel[x] == t) return x;
    throw std::invalid_argument("exponential: relation is not total");
  }
};

inline std::vector<std::vector<Mask>> total_relations(std::size_t J, std::size_t K) {
  std::vector<std::vector<Mask>> out;
  for_each_total_relation(J, K, [&](const std::vector<Mask>& rows) {
    out.push_back(rows);
    return true;
  });
  return out;
}

// tau^sigma over tRel(J,K) x tRel(J,K). The literal form quantifies over all
// (j,j',k,k') with membership guards; the restricted form quantifies only
// over members, which is equivalent and much smaller.
template <LogicFiber F>
typename F::Pred exponential_rel(const PerCategory<F>& cat, const typename PerCategory<F>::Object& sigma,
                                 const typename PerCategory<F>::Object& tau, const std::vector<std::vector<Mask>>& trel,
                                 bool literal) {
  const F& f = cat.fiber();
  const std::size_t J = sigma.carrier, K = tau.carrier, T = trel.size();
  if (literal) {
    const std::vector<std::size_t> ctx{T, T, J, J, K, K};
    std::vector<bool> in_t(T * J * K);
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t j = 0; j < J; ++j)
        for (std::size_t k = 0; k < K; ++k) in_t[(t * J + j) * K + k] = has(trel[t][j], k);
    auto mem = delta_subset(f, in_t);
    auto hyp = meet_all(f, product_size(ctx),
                        {cat.atv(sigma.rho, {J, J}, ctx, {2, 3}), cat.atv(mem, {T, J, K}, ctx, {0, 2, 4}),
                         cat.atv(mem, {T, J, K}, ctx, {1, 3, 5})});
    auto body = f.implies(hyp, cat.atv(tau.rho, {K, K}, ctx, {4, 5}));
    IndexMap to_tu(product_size(ctx));
    for (std::size_t x = 0; x < to_tu.size(); ++x) to_tu[x] = x / (J * J * K * K);
    return f.forall_along(body, to_tu, T * T);
  }
  const std::vector<std::size_t> c4{J, J, K, K};
  auto imp = f.implies(cat.atv(sigma.rho, {J, J}, c4, {0, 1}), cat.atv(tau.rho, {K, K}, c4, {2, 3}));
  IndexMap pick, to_tu;
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t u = 0; u < T; ++u)
      for (std::size_t j = 0; j < J; ++j)
        for_each_bit(trel[t][j], [&](std::size_t k) {
          for (std::size_t j2 = 0; j2 < J; ++j2)
            for_each_bit(trel[u][j2], [&](std::size_t k2) {
              pick.push_back(((j * J + j2) * K + k) * K + k2);
              to_tu.push_back(t * T + u);
            });
        });
  return f.forall_along(f.reindex(imp, pick), to_tu, T * T);
}

template <LogicFiber F>
Exponential<F> exponential(const PerCategory<F>& cat, const typename PerCategory<F>::Object& sigma,
                           const typename PerCategory<F>::Object& tau, std::size_t max_carrier = 3,
                           bool literal = false) {
  if (sigma.carrier > max_carrier || tau.carrier > max_carrier)
    throw std::invalid_argument("exponential: carriers exceed the total-relation bound");
  Exponential<F> e;
  e.base = sigma;
  e.target = tau;
  e.trel = total_relations(sigma.carrier, tau.carrier);
  e.obj = {e.trel.size(), exponential_rel(cat, sigma, tau, e.trel, literal)};
  e.prod = cat.product(e.obj, sigma);
  const std::size_t J = sigma.carrier, K = tau.carrier;
  Rel mem(e.trel.size() * J, K);
  for (std::size_t t = 0; t < e.trel.size(); ++t)
    for (std::size_t j = 0; j < J; ++j)
      for_each_bit(e.trel[t][j], [&](std::size_t k) { mem.set(t * J + j, k); });
  e.eval = cat.from_tracking(e.prod.obj, tau, mem);
  return e;
}

// Transpose of m : a x base -> target through a tracking relation of m.
template <LogicFiber F>
std::optional<typename PerCategory<F>::Morphism> transpose(const PerCategory<F>& cat, const Exponential<F>& e,
                                                           const typename PerCategory<F>::Object& a,
                                                           const typename PerCategory<F>::Morphism& m) {
  auto s = cat.tracking(m);
  if (!s) return std::nullopt;
  const std::size_t I = a.carrier, J = e.base.carrier;
  std::vector<std::size_t> g(I);
  for (std::size_t i = 0; i < I; ++i) {
    std::vector<Mask> rows(J);
    for (std::size_t j = 0; j < J; ++j) rows[j] = s->row_mask(i * J + j);
    g[i] = e.index_of(rows);
  }
  return cat.from_tracking(a, e.obj, Rel::graph(FinFun(e.trel.size(), g)));
}

// eval . (h x id)
template <LogicFiber F>
typename PerCategory<F>::Morphism uncurry(const PerCategory<F>& cat, const Exponential<F>& e,
                                          const typename PerCategory<F>::Object& a,
                                          const typename PerCategory<F>::Morphism& h) {
  auto from = cat.product(a, e.base);
  return cat.compose(cat.product_map(from, e.prod, h, cat.identity(e.base)), e.eval);
}

}  // namespace realiz
