#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realiz/meets.hpp"
#include "realiz/pca.hpp"
#include "realiz/relcomp.hpp"
#include "realiz/report.hpp"
#include "realiz/uord.hpp"

namespace realiz {

// The uniform preorder induced by the SK pca: one sort, base relations the
// graphs of (e . -), meets by pairing with top K, and @ = {(pair h b, h b)}.
// Every question is answered by bounded evaluation.
struct EffectiveUord {
  SkPca pca;
  Pairing pairing;
  SkElem top, at;
  std::size_t fuel = 10000;

  explicit EffectiveUord(std::size_t fuel_ = 10000) : fuel(fuel_) {
    pairing = derive_pairing(pca, fuel);
    top = pca.k();
    std::map<std::string, SkElem> c{{"fst", pairing.fst}, {"snd", pairing.snd}};
    auto r = eval_fuel(pca, parse_term("\\*w. (fst w) (snd w)", c), fuel);
    if (!r.is_defined()) throw std::runtime_error("EffectiveUord: fuel exhausted building @");
    at = r.value;
  }

  std::map<std::string, SkElem> constants() const {
    return {{"PAIR", pairing.pair}, {"FST", pairing.fst}, {"SND", pairing.snd}, {"AT", at}, {"TOP", top}};
  }

  Outcome<SkElem> wedge(const SkElem& a, const SkElem& b) const {
    return eval_fuel(pca, Term::apps(Term::constant(pairing.pair), Term::constant(a), Term::constant(b)), fuel);
  }

  // The functional reading of @.
  Outcome<SkElem> apply_at(const SkElem& w) const { return pca.apply_fuel(at, w, fuel); }

  // (a, b) in the graph of (e . -); application is deterministic, so a
  // defined value different from b is an exact refutation.
  Verdict in_base(const SkElem& e, const SkElem& a, const SkElem& b) const {
    auto r = pca.apply_fuel(e, a, fuel);
    if (r.kind == OutcomeKind::Budget) return Verdict::Unknown;
    return verdict_of(r.is_defined() && sk_equal(r.value, b));
  }

  // Searches realizers among the first `bound` elements and the constant
  // maps for a base relation containing all pairs.
  std::optional<SkElem> entails_search(const std::vector<std::pair<SkElem, SkElem>>& pairs, std::size_t bound) const {
    std::vector<SkElem> cands = pca.enumerate(bound);
    if (!pairs.empty()) cands.push_back(SkPca::node(SkNode::K, {pairs.front().second}));
    for (const auto& e : cands) {
      bool ok = true;
      for (const auto& [a, b] : pairs)
        if (in_base(e, a, b) != Verdict::Pass) {
          ok = false;
          break;
        }
      if (ok) return e;
    }
    return std::nullopt;
  }

  // {(top, a)} lies in the base relation of K a.
  std::optional<SkElem> designated_certificate(const SkElem& a) const {
    SkElem e = SkPca::node(SkNode::K, {a});
    if (in_base(e, top, a) == Verdict::Pass) return e;
    return std::nullopt;
  }
};

template <class E>
struct PcaExtraction {
  TypedPcaData<E> pca;
  SubPcaData<E> sub;
};

// Typed application is @ on the wedge of function and argument, and the
// combinators are bracket abstractions of the clone operations built from @,
// the wedge and its projections.
inline PcaExtraction<SkElem> extract_pca(const EffectiveUord& eu) {
  auto consts = eu.constants();
  auto abstract = [&](const char* src) {
    auto r = eval_fuel(eu.pca, parse_term(src, consts), eu.fuel);
    if (!r.is_defined()) throw std::runtime_error(std::string("extract_pca: abstraction failed for ") + src);
    return r.value;
  };
  SkElem s = abstract("\\*x y z. AT (PAIR (AT (PAIR x z)) (AT (PAIR y z)))");
  SkElem k = abstract("\\*x y. x");
  SkElem pair = abstract("\\*x y. PAIR x y");
  SkElem fst = abstract("\\*w. FST w");
  SkElem snd = abstract("\\*w. SND w");

  PcaExtraction<SkElem> out;
  auto& d = out.pca;
  d.sorts = {"A"};
  d.star = {0};
  d.arrow = {0};
  d.sample = [eu](std::size_t, std::size_t count) { return eu.pca.enumerate(count); };
  d.finite = [](std::size_t) { return false; };
  d.app = [eu](std::size_t, std::size_t, const SkElem& f, const SkElem& x, std::size_t fuel) {
    auto w = eu.pca.apply_fuel(eu.pairing.pair, f, fuel);
    if (!w.is_defined()) return w;
    auto fx = eu.pca.apply(w.value, x, fuel);
    if (!fx.is_defined()) return fx;
    return eu.pca.apply(eu.at, fx.value, fuel);
  };
  d.k = [k](std::size_t, std::size_t) { return k; };
  d.s = [s](std::size_t, std::size_t, std::size_t) { return s; };
  d.pair = [pair](std::size_t, std::size_t) { return pair; };
  d.fst = [fst](std::size_t, std::size_t) { return fst; };
  d.snd = [snd](std::size_t, std::size_t) { return snd; };
  d.equal = sk_equal;
  d.show = sk_show;
  out.sub.parent = d;
  out.sub.member = [eu](std::size_t, const SkElem& a) {
    return eu.designated_certificate(a) ? Verdict::Pass : Verdict::Unknown;
  };
  return out;
}

namespace detail {

inline std::optional<std::size_t> single_value(const Rel& r, std::size_t row) {
  auto es = r.row_elements(row);
  if (es.empty()) return std::nullopt;
  return es.front();
}

}  // namespace detail

// Finite Lambda oracle: for each input tuple a, the first h in A_{j=>k} with
// h . b in f(a, b) whenever f(a, b) is nonempty; the resulting total map
// must be a clone member.
class FiniteLambda {
 public:
  FiniteLambda(const UOrd& u, const MeetData& m, const RcData& rc) : u_(u), m_(m), rc_(rc) {}

  std::optional<std::size_t> app(std::size_t j, std::size_t k, std::size_t h, std::size_t b) const {
    std::size_t arrow = rc_.arrow_of(j, k);
    return detail::single_value(rc_.app_of(j, k), m_.meet(u_, arrow, j, h, b));
  }

  using Fn = std::function<std::vector<std::size_t>(const std::vector<std::size_t>& a, std::size_t b)>;

  std::vector<std::size_t> operator()(const std::vector<std::size_t>& ins, std::size_t j, std::size_t k,
                                      const Fn& f) const {
    const std::size_t arrow = rc_.arrow_of(j, k);
    auto dims = input_dims(u_, ins);
    std::vector<std::size_t> out;
    CloneRel graph{ins, arrow, Rel(product_size(dims), u_.size(arrow))};
    for (std::size_t t = 0; t < product_size(dims); ++t) {
      auto a = decode(dims, t);
      std::optional<std::size_t> pick;
      for (std::size_t h = 0; h < u_.size(arrow) && !pick; ++h) {
        bool ok = true;
        for (std::size_t b = 0; b < u_.size(j) && ok; ++b) {
          auto want = f(a, b);
          if (want.empty()) continue;
          auto got = app(j, k, h, b);
          ok = got && std::find(want.begin(), want.end(), *got) != want.end();
        }
        if (ok) pick = h;
      }
      if (!pick) throw std::runtime_error("Lambda: no abstraction for sorts " + u_.sorts[j] + " => " + u_.sorts[k]);
      out.push_back(*pick);
      graph.rel.set(t, *pick);
    }
    if (!clone_member(u_, m_, graph)) throw std::runtime_error("Lambda: abstraction is not a clone member");
    return out;
  }

 private:
  UOrd u_;
  MeetData m_;
  RcData rc_;
};

// Extraction for a finite functional relationally complete instance.
inline PcaExtraction<std::size_t> extract_pca(const UOrd& u, const MeetData& m, const RcData& rc) {
  check_rc_shape(u, m, rc);
  const std::size_t n = u.num_sorts();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const Rel& a = rc.app_of(j, k);
      for (std::size_t w = 0; w < a.rows(); ++w)
        if (a.row_elements(w).size() > 1)
          throw std::invalid_argument("extract_pca: @ is not functional at sorts " + u.sorts[j] + "," + u.sorts[k]);
    }
  FiniteLambda lam(u, m, rc);
  auto arr = [&](std::size_t i, std::size_t j) { return rc.arrow_of(i, j); };
  auto one = [](std::optional<std::size_t> v) { return v ? std::vector<std::size_t>{*v} : std::vector<std::size_t>{}; };
  auto bind = [](std::optional<std::size_t> v, auto f) { return v ? f(*v) : std::optional<std::size_t>{}; };

  std::vector<std::size_t> k_tab(n * n), pair_tab(n * n), fst_tab(n * n), snd_tab(n * n), s_tab(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // k = Lambda x. Lambda y. x
      auto inner = lam({i}, j, i, [](const std::vector<std::size_t>& a, std::size_t) { return std::vector{a[0]}; });
      k_tab[i * n + j] = lam({}, i, arr(j, i), [&](const std::vector<std::size_t>&, std::size_t x) {
        return std::vector{inner[x]};
      })[0];
      const std::size_t ij = m.star_of(i, j);
      auto pinner = lam({i}, j, ij, [&](const std::vector<std::size_t>& a, std::size_t y) {
        return std::vector{m.meet(u, i, j, a[0], y)};
      });
      pair_tab[i * n + j] = lam({}, i, arr(j, ij), [&](const std::vector<std::size_t>&, std::size_t x) {
        return std::vector{pinner[x]};
      })[0];
      // fst = Lambda of {(x & y, x)}, snd symmetric
      auto proj = [&](bool first) {
        return lam({}, ij, first ? i : j, [&, first](const std::vector<std::size_t>&, std::size_t w) {
          std::vector<std::size_t> xs;
          for (std::size_t x = 0; x < u.size(i); ++x)
            for (std::size_t y = 0; y < u.size(j); ++y)
              if (m.meet(u, i, j, x, y) == w) xs.push_back(first ? x : y);
          return xs;
        })[0];
      };
      fst_tab[i * n + j] = proj(true);
      snd_tab[i * n + j] = proj(false);
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t jk = arr(j, k), ijk = arr(i, jk), ij2 = arr(i, j), ik = arr(i, k);
        // s = Lambda x. Lambda y. Lambda z. x z (y z)
        auto l3 = lam({ijk, ij2}, i, k, [&](const std::vector<std::size_t>& a, std::size_t z) {
          return one(bind(lam.app(i, jk, a[0], z), [&](std::size_t xz) {
            return bind(lam.app(i, j, a[1], z), [&](std::size_t yz) { return lam.app(j, k, xz, yz); });
          }));
        });
        const std::size_t ydim = u.size(ij2);
        auto l2 = lam({ijk}, ij2, ik, [&](const std::vector<std::size_t>& a, std::size_t y) {
          return std::vector{l3[a[0] * ydim + y]};
        });
        s_tab[(i * n + j) * n + k] = lam({}, ijk, arr(ij2, ik), [&](const std::vector<std::size_t>&, std::size_t x) {
          return std::vector{l2[x]};
        })[0];
      }
    }

  PcaExtraction<std::size_t> out;
  auto& d = out.pca;
  d.sorts = u.sorts;
  d.star = m.star;
  d.arrow = rc.arrow;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < n; ++i) sizes.push_back(u.size(i));
  d.sample = [sizes](std::size_t sort, std::size_t) {
    std::vector<std::size_t> all(sizes.at(sort));
    for (std::size_t a = 0; a < all.size(); ++a) all[a] = a;
    return all;
  };
  d.finite = [](std::size_t) { return true; };
  d.app = [lam](std::size_t i, std::size_t j, const std::size_t& f, const std::size_t& x, std::size_t) {
    auto r = lam.app(i, j, f, x);
    return r ? Outcome<std::size_t>::defined(*r) : Outcome<std::size_t>::undefined();
  };
  d.k = [k_tab, n](std::size_t i, std::size_t j) { return k_tab[i * n + j]; };
  d.pair = [pair_tab, n](std::size_t i, std::size_t j) { return pair_tab[i * n + j]; };
  d.fst = [fst_tab, n](std::size_t i, std::size_t j) { return fst_tab[i * n + j]; };
  d.snd = [snd_tab, n](std::size_t i, std::size_t j) { return snd_tab[i * n + j]; };
  d.s = [s_tab, n](std::size_t i, std::size_t j, std::size_t k) { return s_tab[(i * n + j) * n + k]; };
  d.equal = [](const std::size_t& a, const std::size_t& b) { return a == b; };
  d.show = [](const std::size_t& a) { return std::to_string(a); };
  out.sub.parent = d;
  auto designated = designated_truth_values(u, m);
  out.sub.member = [designated](std::size_t sort, const std::size_t& a) {
    const auto& ds = designated.at(sort);
    return verdict_of(std::find(ds.begin(), ds.end(), a) != ds.end());
  };
  return out;
}

}  // namespace realiz
