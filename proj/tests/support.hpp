#pragma once

#include <random>
#include <string>

#include "realiz/instance.hpp"
#include "realiz/relcore.hpp"

namespace realiz::testing {

inline Rel random_rel(std::mt19937_64& rng, std::size_t n, std::size_t m, double density = 0.4) {
  std::bernoulli_distribution coin(density);
  Rel r(n, m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (coin(rng)) r.set(a, b);
  return r;
}

inline FinFun random_fun(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::vector<std::size_t> t(n);
  for (auto& v : t) v = pick(rng);
  return FinFun(m, t);
}

// Calls fn on every relation between an n- and an m-element set.
template <class Fn>
void for_each_rel(std::size_t n, std::size_t m, Fn&& fn) {
  const std::size_t cells = n * m;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << cells); ++code) {
    Rel r(n, m);
    for (std::size_t c = 0; c < cells; ++c)
      if ((code >> c) & 1U) r.set(c / m, c % m);
    fn(r);
  }
}

inline Instance bundled(const std::string& name) {
  return load_instance(std::string(REALIZ_INSTANCE_DIR) + "/" + name + ".json");
}

}  // namespace realiz::testing
