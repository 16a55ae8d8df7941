#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realiz/fiber.hpp"
#include "realiz/relcore.hpp"

namespace realiz {

// Partial equivalence relations and functional relations valued in a logic
// fiber. Carriers are plain sizes; binary predicates are indexed
// lexicographically over the product.
template <LogicFiber F>
class PerCategory {
 public:
  using Pred = typename F::Pred;

  struct Object {
    std::size_t carrier = 0;
    Pred rho;  // over C x C
  };
  struct Morphism {
    Object src, dst;
    Pred phi;  // over C x D
  };

  explicit PerCategory(const F& f) : f_(f) {}
  const F& fiber() const { return f_; }

  // p reindexed into ctx, reading context variables vars
  Pred atv(const Pred& p, const std::vector<std::size_t>& pdims, const std::vector<std::size_t>& ctx,
           const std::vector<std::size_t>& vars) const {
    return at(f_, p, pdims, ctx, vars);
  }

  Pred ex(const Object& a) const { return atv(a.rho, {a.carrier, a.carrier}, {a.carrier}, {0, 0}); }

  std::optional<std::string> object_violation(const Object& a) const {
    const std::size_t C = a.carrier;
    check_size(a.rho, C * C, "object");
    std::vector<std::size_t> d2{C, C};
    if (!f_.entails(a.rho, atv(a.rho, d2, d2, {1, 0}))) return "symm: rho(c,d) |- rho(d,c) fails";
    std::vector<std::size_t> c3{C, C, C};
    if (!holds(f_, C * C * C, {atv(a.rho, d2, c3, {0, 1}), atv(a.rho, d2, c3, {1, 2})}, atv(a.rho, d2, c3, {0, 2})))
      return "trans: rho(c,d), rho(d,e) |- rho(c,e) fails";
    return std::nullopt;
  }

  std::optional<std::string> morphism_violation(const Morphism& m) const {
    const std::size_t C = m.src.carrier, D = m.dst.carrier;
    check_size(m.phi, C * D, "morphism");
    const std::vector<std::size_t> cd{C, D};
    const std::size_t n = C * D;
    if (!f_.entails(m.phi, atv(ex(m.src), {C}, cd, {0})) || !f_.entails(m.phi, atv(ex(m.dst), {D}, cd, {1})))
      return "strict: phi(c,d) |- rho(c) & sigma(d) fails";
    const std::vector<std::size_t> c4{C, C, D, D};
    if (!holds(f_, n * n,
               {atv(m.phi, cd, c4, {0, 2}), atv(m.src.rho, {C, C}, c4, {0, 1}), atv(m.dst.rho, {D, D}, c4, {2, 3})},
               atv(m.phi, cd, c4, {1, 3})))
      return "cong: phi(c,d), rho(c,c'), sigma(d,d') |- phi(c',d') fails";
    const std::vector<std::size_t> c3{C, D, D};
    if (!holds(f_, n * D, {atv(m.phi, cd, c3, {0, 1}), atv(m.phi, cd, c3, {0, 2})}, atv(m.dst.rho, {D, D}, c3, {1, 2})))
      return "singval: phi(c,d), phi(c,d') |- sigma(d,d') fails";
    if (!f_.entails(ex(m.src), exists_var(f_, m.phi, cd, 1))) return "tot: rho(c) |- exists d. phi(c,d) fails";
    return std::nullopt;
  }

  bool is_object(const Object& a) const { return !object_violation(a); }
  bool is_morphism(const Morphism& m) const { return !morphism_violation(m); }

  bool equal(const Morphism& a, const Morphism& b) const {
    if (a.src.carrier != b.src.carrier || a.dst.carrier != b.dst.carrier) return false;
    return equivalent(f_, a.phi, b.phi);
  }

  Morphism identity(const Object& a) const { return {a, a, a.rho}; }

  // g . m
  Morphism compose(const Morphism& m, const Morphism& g) const {
    if (m.dst.carrier != g.src.carrier) throw std::invalid_argument("compose: carriers do not match");
    const std::size_t C = m.src.carrier, D = m.dst.carrier, E = g.dst.carrier;
    const std::vector<std::size_t> ctx{C, D, E};
    Pred body = f_.meet(atv(m.phi, {C, D}, ctx, {0, 1}), atv(g.phi, {D, E}, ctx, {1, 2}));
    return {m.src, g.dst, exists_var(f_, body, ctx, 1)};
  }

  Object terminal() const { return {1, f_.top(1)}; }
  Morphism to_terminal(const Object& a) const { return {a, terminal(), ex(a)}; }

  struct Product {
    Object obj;
    Morphism p1, p2;
  };
  Product product(const Object& a, const Object& b) const {
    const std::size_t C = a.carrier, D = b.carrier;
    const std::vector<std::size_t> c4{C, D, C, D};
    Object o{C * D, f_.meet(atv(a.rho, {C, C}, c4, {0, 2}), atv(b.rho, {D, D}, c4, {1, 3}))};
    const std::vector<std::size_t> c1{C, D, C}, c2{C, D, D};
    Pred p1 = f_.meet(atv(a.rho, {C, C}, c1, {0, 2}), atv(ex(b), {D}, c1, {1}));
    Pred p2 = f_.meet(atv(ex(a), {C}, c2, {0}), atv(b.rho, {D, D}, c2, {1, 2}));
    return {o, {o, a, p1}, {o, b, p2}};
  }
  Morphism pair(const Product& p, const Morphism& f, const Morphism& g) const {
    const std::size_t X = f.src.carrier, C = f.dst.carrier, D = g.dst.carrier;
    const std::vector<std::size_t> ctx{X, C, D};
    return {f.src, p.obj, f_.meet(atv(f.phi, {X, C}, ctx, {0, 1}), atv(g.phi, {X, D}, ctx, {0, 2}))};
  }
  // f x g between products
  Morphism product_map(const Product& from, const Product& to, const Morphism& f, const Morphism& g) const {
    return pair(to, compose(from.p1, f), compose(from.p2, g));
  }

  struct Equalizer {
    Object obj;
    Morphism incl;
  };
  Equalizer equalizer(const Morphism& f, const Morphism& g) const {
    const std::size_t C = f.src.carrier, D = f.dst.carrier;
    const std::vector<std::size_t> cd{C, D};
    Pred v = exists_var(f_, f_.meet(f.phi, g.phi), cd, 1);
    Object o = restrict(f.src, v);
    return {o, {o, f.src, o.rho}};
  }
  Morphism equalizer_mediator(const Equalizer& e, const Morphism& h) const { return {h.src, e.obj, h.phi}; }

  struct Pullback {
    Object obj;
    Morphism p1, p2;
  };
  Pullback pullback(const Morphism& f, const Morphism& g) const {
    Product p = product(f.src, g.src);
    Equalizer e = equalizer(compose(p.p1, f), compose(p.p2, g));
    return {e.obj, compose(e.incl, p.p1), compose(e.incl, p.p2)};
  }

  // sigma(d) |- exists c. phi(c, d)
  bool is_surj(const Morphism& m) const {
    return f_.entails(ex(m.dst), exists_var(f_, m.phi, {m.src.carrier, m.dst.carrier}, 0));
  }
  // phi(c,d), phi(c',d) |- rho(c,c')
  bool is_inj(const Morphism& m) const {
    const std::size_t C = m.src.carrier, D = m.dst.carrier;
    const std::vector<std::size_t> ctx{C, C, D};
    return holds(f_, C * C * D, {atv(m.phi, {C, D}, ctx, {0, 2}), atv(m.phi, {C, D}, ctx, {1, 2})},
                 atv(m.src.rho, {C, C}, ctx, {0, 1}));
  }
  bool is_iso(const Morphism& m) const { return is_inj(m) && is_surj(m); }

  // over C x C: rho(c) & rho(c') & exists d. phi(c,d) & phi(c',d)
  Pred kernel_pair(const Morphism& m) const {
    const std::size_t C = m.src.carrier, D = m.dst.carrier;
    const std::vector<std::size_t> ctx{C, C, D};
    Pred both = f_.meet(atv(m.phi, {C, D}, ctx, {0, 2}), atv(m.phi, {C, D}, ctx, {1, 2}));
    Pred k = exists_var(f_, both, ctx, 2);
    const std::vector<std::size_t> c2{C, C};
    return f_.meet(f_.meet(atv(ex(m.src), {C}, c2, {0}), atv(ex(m.src), {C}, c2, {1})), k);
  }

  struct Factorization {
    Object coimage, image;
    Morphism cover, iso, mono;
  };
  Factorization factorize(const Morphism& m) const {
    const std::size_t C = m.src.carrier, D = m.dst.carrier;
    Object co{C, kernel_pair(m)};
    Pred v = exists_var(f_, m.phi, {C, D}, 0);
    Object im = restrict(m.dst, v);
    return {co, im, {m.src, co, co.rho}, {co, im, m.phi}, {im, m.dst, im.rho}};
  }

  std::optional<std::string> strict_violation(const Object& a, const Pred& v) const {
    const std::size_t C = a.carrier;
    if (!f_.entails(v, ex(a))) return "v(x) |- rho(x) fails";
    const std::vector<std::size_t> ctx{C, C};
    if (!holds(f_, C * C, {atv(v, {C}, ctx, {0}), a.rho}, atv(v, {C}, ctx, {1}))) return "v(x), rho(x,y) |- v(y) fails";
    return std::nullopt;
  }
  // (D, sigma|_v) with sigma|_v(d,d') = sigma(d,d') & v(d)
  Object restrict(const Object& a, const Pred& v) const {
    const std::size_t C = a.carrier;
    return {C, f_.meet(a.rho, atv(v, {C}, {C, C}, {0}))};
  }
  Morphism subobject(const Object& a, const Pred& v) const {
    if (auto bad = strict_violation(a, v)) throw std::invalid_argument("subobject: predicate not strict: " + *bad);
    Object o = restrict(a, v);
    return {o, a, o.rho};
  }

  // tau must refine rho from above and have the same existence part
  std::optional<std::string> quotient_violation(const Object& a, const Pred& tau) const {
    Object t{a.carrier, tau};
    if (auto bad = object_violation(t)) return "tau is not a partial equivalence relation: " + *bad;
    if (!f_.entails(a.rho, tau)) return "rho(c,c') |- tau(c,c') fails";
    if (!f_.entails(ex(t), ex(a))) return "tau(c) |- rho(c) fails";
    return std::nullopt;
  }
  Morphism quotient(const Object& a, const Pred& tau) const {
    if (auto bad = quotient_violation(a, tau)) throw std::invalid_argument("quotient: " + *bad);
    Object t{a.carrier, tau};
    return {a, t, tau};
  }

  Pred delta_rel(const Rel& r) const {
    std::vector<bool> in(r.rows() * r.cols());
    for (std::size_t i = 0; i < r.rows(); ++i)
      for (std::size_t j = 0; j < r.cols(); ++j) in[i * r.cols() + j] = r.get(i, j);
    return delta_subset(f_, in);
  }

  Object delta(std::size_t M) const { return {M, equality(f_, M)}; }
  Morphism delta_map(const FinFun& g) const {
    const std::size_t M = g.table.size(), N = g.dst_size;
    return {delta(M), delta(N), delta_rel(Rel::graph(g))};
  }

  // (x =_phi y) = phi(x) & x = y
  Object assembly(const Pred& phi) const {
    const std::size_t M = f_.index_size(phi);
    return {M, f_.meet(atv(phi, {M}, {M, M}, {0}), equality(f_, M))};
  }

  bool for_each_morphism(const Object& a, const Object& b, const std::function<bool(const Morphism&)>& visit) const {
    return f_.for_each_pred(a.carrier * b.carrier, [&](const Pred& p) {
      Morphism m{a, b, p};
      if (!is_morphism(m)) return true;
      return visit(m);
    });
  }

  // morphisms a -> b up to equality, in enumeration order
  std::vector<Morphism> hom(const Object& a, const Object& b) const {
    std::vector<Morphism> out;
    for_each_morphism(a, b, [&](const Morphism& m) {
      for (const auto& x : out)
        if (equal(x, m)) return true;
      out.push_back(m);
      return true;
    });
    return out;
  }

  std::vector<Morphism> global_sections(const Object& a) const { return hom(terminal(), a); }

  // Pi: elements with inhabited existence part, identified along the support of rho.
  struct PiResult {
    std::vector<std::optional<std::size_t>> cls;
    std::size_t count = 0;
  };
  PiResult Pi(const Object& a) const {
    const std::size_t C = a.carrier;
    auto supp = f_.support(a.rho);
    auto in = f_.support(ex(a));
    PiResult r;
    r.cls.assign(C, std::nullopt);
    for (std::size_t c = 0; c < C; ++c) {
      if (!in[c] || r.cls[c]) continue;
      for (std::size_t d = c; d < C; ++d)
        if (in[d] && supp[c * C + d]) r.cls[d] = r.count;
      ++r.count;
    }
    return r;
  }

  // delta(pi v) & rho(c)
  Pred closure_j(const Object& a, const Pred& v) const { return f_.meet(delta_subset(f_, f_.support(v)), ex(a)); }

  // quotient by the closure of the diagonal
  Morphism separated_reflection(const Object& a) const {
    Product p = product(a, a);
    Pred jdiag = f_.meet(delta_subset(f_, f_.support(a.rho)), ex(p.obj));
    return quotient(a, jdiag);
  }

  Pred negate(const Pred& v) const { return f_.implies(v, f_.bottom(f_.index_size(v))); }
  Pred notnot(const Object& a, const Pred& v) const { return f_.meet(negate(negate(v)), ex(a)); }

  // rho(i), (delta t)(i,j) |- phi(i,j)
  bool tracks(const Morphism& m, const Rel& t) const {
    if (!is_total(t)) return false;
    const std::size_t I = m.src.carrier, J = m.dst.carrier;
    return holds(f_, I * J, {atv(ex(m.src), {I}, {I, J}, {0}), delta_rel(t)}, m.phi);
  }

  // rho(i,i'), (delta t)(i,j), (delta u)(i',j') |- sigma(j,j')
  bool tracking_compatible(const Object& a, const Object& b, const Rel& t, const Rel& u) const {
    const std::size_t I = a.carrier, J = b.carrier;
    const std::vector<std::size_t> ctx{I, I, J, J};
    return holds(f_, I * I * J * J,
                 {atv(a.rho, {I, I}, ctx, {0, 1}), atv(delta_rel(t), {I, J}, ctx, {0, 2}),
                  atv(delta_rel(u), {I, J}, ctx, {1, 3})},
                 atv(b.rho, {J, J}, ctx, {2, 3}));
  }

  // rho(i) & exists j'. (delta t)(i,j') & sigma(j',j)
  // The quantifier only ranges over pairs in t; the others contribute bottom.
  Morphism from_tracking(const Object& a, const Object& b, const Rel& t) const {
    const std::size_t I = a.carrier, J = b.carrier;
    IndexMap left, right, to;
    for (std::size_t i = 0; i < I; ++i)
      for (std::size_t j2 : t.row_elements(i))
        for (std::size_t j = 0; j < J; ++j) {
          left.push_back(i);
          right.push_back(j2 * J + j);
          to.push_back(i * J + j);
        }
    Pred body = f_.meet(f_.reindex(ex(a), left), f_.reindex(b.rho, right));
    return {a, b, f_.exists_along(body, to, I * J)};
  }

  // A total tracking relation: the pairs that track pointwise when they form
  // a tracking relation, otherwise the least tracking function inside them.
  std::optional<Rel> tracking(const Morphism& m) const {
    const std::size_t I = m.src.carrier, J = m.dst.carrier;
    Rel ok(I, J);
    for (std::size_t i = 0; i < I; ++i)
      for (std::size_t j = 0; j < J; ++j) {
        Rel single(I, J);
        single.set(i, j);
        IndexMap pick{i * J + j};
        Pred lhs = f_.meet(f_.reindex(ex(m.src), {i}), f_.reindex(delta_rel(single), pick));
        if (f_.entails(lhs, f_.reindex(m.phi, pick))) ok.set(i, j);
      }
    if (!is_total(ok)) return std::nullopt;
    if (tracks(m, ok)) return ok;
    std::optional<Rel> found;
    std::vector<std::vector<std::size_t>> choices(I);
    for (std::size_t i = 0; i < I; ++i) choices[i] = ok.row_elements(i);
    std::vector<std::size_t> pos(I, 0);
    while (!found) {
      Rel t(I, J);
      for (std::size_t i = 0; i < I; ++i) t.set(i, choices[i][pos[i]]);
      if (tracks(m, t)) found = t;
      std::size_t i = I;
      while (i-- > 0) {
        if (++pos[i] < choices[i].size()) break;
        pos[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return found;
  }

  std::string describe(const Object& a) const {
    return "(" + std::to_string(a.carrier) + ", " + f_.describe(a.rho) + ")";
  }

 private:
  void check_size(const Pred& p, std::size_t n, const char* what) const {
    if (f_.index_size(p) != n) throw std::invalid_argument(std::string(what) + ": predicate has wrong index size");
  }

  const F& f_;
};

}  // namespace realiz
