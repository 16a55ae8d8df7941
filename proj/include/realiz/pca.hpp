#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "realiz/report.hpp"

namespace realiz {

enum class OutcomeKind { Defined, Undefined, Budget };

// Undefined is only produced by structures whose definedness is decidable
// (finite tables); fuel-bounded evaluation answers Defined or Budget.
template <class E>
struct Outcome {
  OutcomeKind kind = OutcomeKind::Budget;
  E value{};

  static Outcome defined(E v) { return {OutcomeKind::Defined, std::move(v)}; }
  static Outcome undefined() { return {OutcomeKind::Undefined, E{}}; }
  static Outcome budget() { return {OutcomeKind::Budget, E{}}; }
  bool is_defined() const { return kind == OutcomeKind::Defined; }
};

// Closed S/K terms in normal form: K, K a, S, S a, S a b.
class SkNode;
using SkElem = std::shared_ptr<const SkNode>;

class SkNode {
 public:
  enum Head { K = 0, S = 1 };

  SkNode(Head h, std::vector<SkElem> args) : head_(h), args_(std::move(args)) {
    size_ = 1;
    hash_ = static_cast<std::size_t>(h) * 0x9e3779b97f4a7c15ULL;
    for (const auto& a : args_) {
      size_ += a->size_;
      hash_ = (hash_ ^ a->hash_) * 0x100000001b3ULL + args_.size();
    }
  }

  Head head() const { return head_; }
  const std::vector<SkElem>& args() const { return args_; }
  std::size_t size() const { return size_; }
  std::size_t hash() const { return hash_; }

 private:
  Head head_;
  std::vector<SkElem> args_;
  std::size_t size_;
  std::size_t hash_;
};

inline bool sk_equal(const SkElem& a, const SkElem& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->hash() != b->hash() || a->size() != b->size() || a->head() != b->head() ||
      a->args().size() != b->args().size())
    return false;
  for (std::size_t k = 0; k < a->args().size(); ++k)
    if (!sk_equal(a->args()[k], b->args()[k])) return false;
  return true;
}

// Total order: by size, then head, then arguments.
inline bool sk_less(const SkElem& a, const SkElem& b) {
  if (a->size() != b->size()) return a->size() < b->size();
  if (a->head() != b->head()) return a->head() < b->head();
  if (a->args().size() != b->args().size()) return a->args().size() < b->args().size();
  for (std::size_t k = 0; k < a->args().size(); ++k) {
    if (sk_less(a->args()[k], b->args()[k])) return true;
    if (sk_less(b->args()[k], a->args()[k])) return false;
  }
  return false;
}

inline std::string sk_show(const SkElem& e) {
  std::string s = e->head() == SkNode::K ? "K" : "S";
  for (const auto& a : e->args()) {
    std::string t = sk_show(a);
    s += a->args().empty() ? t : "(" + t + ")";
  }
  return s;
}

// The SK pca: application is call-by-value weak reduction, one unit of fuel
// per K or S step. Values are normal forms, so the k and s laws hold as
// equalities of values.
class SkPca {
 public:
  using Elem = SkElem;

  SkPca() : k_(std::make_shared<SkNode>(SkNode::K, std::vector<SkElem>{})),
            s_(std::make_shared<SkNode>(SkNode::S, std::vector<SkElem>{})) {}

  Elem k() const { return k_; }
  Elem s() const { return s_; }
  Elem i() const { return node(SkNode::S, {k_, k_}); }

  static Elem node(SkNode::Head h, std::vector<SkElem> args) { return std::make_shared<SkNode>(h, std::move(args)); }

  // Applies a to b; fuel is decremented by the number of steps taken.
  Outcome<Elem> apply(const Elem& a, const Elem& b, std::size_t& fuel) const {
    struct Frame {
      bool second;  // waiting for y z (true) or for x z (false)
      Elem p, q;    // (y, z) or (x z, -)
    };
    std::vector<Frame> stack;
    Elem f = a, x = b;
    for (;;) {
      std::vector<SkElem> args = f->args();
      args.push_back(x);
      Elem value;
      const std::size_t arity = f->head() == SkNode::K ? 2 : 3;
      if (args.size() < arity) {
        value = node(f->head(), std::move(args));
      } else {
        if (fuel == 0) return Outcome<Elem>::budget();
        --fuel;
        if (f->head() == SkNode::K) {
          value = args[0];
        } else {
          stack.push_back({false, args[1], args[2]});
          f = args[0];
          x = args[2];
          continue;
        }
      }
      // return value to the innermost pending frame
      for (;;) {
        if (stack.empty()) return Outcome<Elem>::defined(value);
        Frame fr = stack.back();
        stack.pop_back();
        if (!fr.second) {
          stack.push_back({true, value, nullptr});
          f = fr.p;
          x = fr.q;
          break;
        }
        f = fr.p;
        x = value;
        break;
      }
    }
  }

  Outcome<Elem> apply_fuel(const Elem& a, const Elem& b, std::size_t fuel) const { return apply(a, b, fuel); }

  // Normal forms ordered by size, then structure; the stream always starts
  // from K, S.
  std::vector<Elem> enumerate(std::size_t count) const {
    std::vector<Elem> out;
    std::vector<std::vector<Elem>> by_size{{}};
    for (std::size_t n = 1; out.size() < count; ++n) {
      std::vector<Elem> level;
      if (n == 1) {
        level = {k_, s_};
      } else {
        for (int h = 0; h < 2; ++h) {
          for (const auto& a : by_size[n - 1]) level.push_back(node(static_cast<SkNode::Head>(h), {a}));
          if (h == 1)
            for (std::size_t m = 1; m + 1 < n; ++m)
              for (const auto& a : by_size[m])
                for (const auto& b : by_size[n - 1 - m]) level.push_back(node(SkNode::S, {a, b}));
        }
      }
      for (const auto& e : level) {
        if (out.size() >= count) break;
        out.push_back(e);
      }
      by_size.push_back(std::move(level));
    }
    return out;
  }

 private:
  Elem k_, s_;
};

// Surface terms: variables, constants and application.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum Kind { Var, Const, App } kind;
  std::string name;  // variable name, or constant label
  SkElem value;      // for constants
  TermPtr left, right;

  static TermPtr var(std::string n) { return std::make_shared<Term>(Term{Var, std::move(n), nullptr, nullptr, nullptr}); }
  static TermPtr constant(SkElem v, std::string label = {}) {
    if (label.empty()) label = sk_show(v);
    return std::make_shared<Term>(Term{Const, std::move(label), std::move(v), nullptr, nullptr});
  }
  static TermPtr app(TermPtr l, TermPtr r) {
    return std::make_shared<Term>(Term{App, {}, nullptr, std::move(l), std::move(r)});
  }
  template <class... Ts>
  static TermPtr apps(TermPtr f, Ts... args) {
    ((f = app(f, args)), ...);
    return f;
  }
};

inline std::string show_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Var: return t->name;
    case Term::Const: {
      bool atomic = t->name.find_first_of(" ()") == std::string::npos;
      return atomic ? t->name : "(" + t->name + ")";
    }
    case Term::App: {
      std::string r = show_term(t->right);
      if (t->right->kind == Term::App) r = "(" + r + ")";
      return show_term(t->left) + " " + r;
    }
  }
  return {};
}

inline bool occurs_free(const std::string& x, const TermPtr& t) {
  switch (t->kind) {
    case Term::Var: return t->name == x;
    case Term::Const: return false;
    case Term::App: return occurs_free(x, t->left) || occurs_free(x, t->right);
  }
  return false;
}

inline void free_vars(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == Term::Var) out.insert(t->name);
  if (t->kind == Term::App) {
    free_vars(t->left, out);
    free_vars(t->right, out);
  }
}

// k/s/i abstraction without the K-collapse for applications, so abstracts of
// terms are built only from S, K and atoms and are always defined.
inline TermPtr bracket_abstract(const std::string& x, const TermPtr& t) {
  SkPca p;
  auto K = Term::constant(p.k(), "K"), S = Term::constant(p.s(), "S");
  switch (t->kind) {
    case Term::Var:
      if (t->name == x) return Term::constant(p.i(), "I");
      return Term::app(K, t);
    case Term::Const: return Term::app(K, t);
    case Term::App: return Term::apps(S, bracket_abstract(x, t->left), bracket_abstract(x, t->right));
  }
  return t;
}

// Abstracts the variables right to left: \*x y. t = \*x. (\*y. t).
inline TermPtr bracket_abstract(const std::vector<std::string>& xs, TermPtr t) {
  for (std::size_t k = xs.size(); k-- > 0;) t = bracket_abstract(xs[k], t);
  return t;
}

// Abstracts xs from t, requiring every free variable of t to be among xs.
inline TermPtr abstract_closed(const std::vector<std::string>& xs, const TermPtr& t) {
  std::set<std::string> fv;
  free_vars(t, fv);
  for (const auto& v : fv)
    if (std::find(xs.begin(), xs.end(), v) == xs.end())
      throw std::invalid_argument("bracket_abstract: free variable " + v + " is not abstracted");
  return bracket_abstract(xs, t);
}

// Strict left-to-right evaluation sharing one fuel budget.
inline Outcome<SkElem> eval(const SkPca& p, const TermPtr& t, std::size_t& fuel) {
  switch (t->kind) {
    case Term::Var: throw std::invalid_argument("eval: unbound variable " + t->name);
    case Term::Const: return Outcome<SkElem>::defined(t->value);
    case Term::App: {
      auto l = eval(p, t->left, fuel);
      if (!l.is_defined()) return l;
      auto r = eval(p, t->right, fuel);
      if (!r.is_defined()) return r;
      return p.apply(l.value, r.value, fuel);
    }
  }
  return Outcome<SkElem>::budget();
}

inline Outcome<SkElem> eval_fuel(const SkPca& p, const TermPtr& t, std::size_t fuel) { return eval(p, t, fuel); }

inline TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& v) {
  switch (t->kind) {
    case Term::Var: return t->name == x ? v : t;
    case Term::Const: return t;
    case Term::App: return Term::app(substitute(t->left, x, v), substitute(t->right, x, v));
  }
  return t;
}

// Identifiers, juxtaposition, parentheses and \*x y. t. K, S and I are
// constants; other names are constants when listed in consts, else variables.
class TermParser {
 public:
  explicit TermParser(std::string src, std::map<std::string, SkElem> consts = {})
      : src_(std::move(src)), consts_(std::move(consts)) {
    SkPca p;
    consts_.emplace("K", p.k());
    consts_.emplace("S", p.s());
    consts_.emplace("I", p.i());
  }

  TermPtr parse() {
    auto t = expr();
    skip();
    if (pos_ != src_.size()) error("unexpected '" + std::string(1, src_[pos_]) + "'");
    return t;
  }

 private:
  std::string src_;
  std::map<std::string, SkElem> consts_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& what) const {
    throw std::invalid_argument("term syntax at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool ident_char(char c, bool first) const {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (!first && (std::isdigit(static_cast<unsigned char>(c)) || c == '\''));
  }
  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_], pos_ == start)) ++pos_;
    if (start == pos_) error("identifier expected");
    return src_.substr(start, pos_ - start);
  }
  TermPtr expr() {
    skip();
    if (src_.compare(pos_, 2, "\\*") == 0) {
      pos_ += 2;
      std::vector<std::string> xs;
      for (;;) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == '.') {
          ++pos_;
          break;
        }
        xs.push_back(ident());
      }
      if (xs.empty()) error("abstraction without variables");
      return bracket_abstract(xs, expr());
    }
    TermPtr t;
    for (;;) {
      skip();
      if (pos_ >= src_.size() || src_[pos_] == ')') break;
      TermPtr a;
      if (src_[pos_] == '(') {
        ++pos_;
        a = expr();
        skip();
        if (pos_ >= src_.size() || src_[pos_] != ')') error("')' expected");
        ++pos_;
      } else if (src_.compare(pos_, 2, "\\*") == 0) {
        a = expr();
      } else {
        std::string id = ident();
        auto c = consts_.find(id);
        a = c != consts_.end() ? Term::constant(c->second, id) : Term::var(id);
      }
      t = t ? Term::app(t, a) : a;
    }
    if (!t) error("term expected");
    return t;
  }
};

inline TermPtr parse_term(const std::string& s, std::map<std::string, SkElem> consts = {}) {
  return TermParser(s, std::move(consts)).parse();
}

struct Pairing {
  SkElem pair, fst, snd;
};

// pair = \*x y f. f x y, fst = \*p. p K, snd = \*p. p (K I).
inline Pairing derive_pairing(const SkPca& p, std::size_t fuel = 10000) {
  auto get = [&](const char* src) {
    auto r = eval_fuel(p, parse_term(src), fuel);
    if (!r.is_defined()) throw std::runtime_error(std::string("derive_pairing: fuel exhausted for ") + src);
    return r.value;
  };
  return {get("\\*x y f. f x y"), get("\\*q. q K"), get("\\*q. q (K I)")};
}

// Random closed terms over the given atoms, for property tests.
inline TermPtr random_term(std::mt19937_64& rng, const std::vector<TermPtr>& atoms, std::size_t depth) {
  if (depth == 0 || rng() % 3 == 0) return atoms[rng() % atoms.size()];
  return Term::app(random_term(rng, atoms, depth - 1), random_term(rng, atoms, depth - 1));
}

// Typed pca data over an element type E. Sorts with finite carriers are
// listed exhaustively; infinite ones are sampled from a stable enumeration.
template <class E>
struct TypedPcaData {
  std::vector<std::string> sorts;
  std::vector<std::size_t> star, arrow;  // i * n + j
  std::function<std::vector<E>(std::size_t sort, std::size_t count)> sample;
  std::function<bool(std::size_t sort)> finite;
  // f in A_{i=>j}, x in A_i
  std::function<Outcome<E>(std::size_t i, std::size_t j, const E& f, const E& x, std::size_t fuel)> app;
  std::function<E(std::size_t i, std::size_t j)> k, pair, fst, snd;
  std::function<E(std::size_t i, std::size_t j, std::size_t k)> s;
  std::function<bool(const E&, const E&)> equal;
  std::function<std::string(const E&)> show;

  std::size_t n() const { return sorts.size(); }
  std::size_t arr(std::size_t i, std::size_t j) const { return arrow.at(i * n() + j); }
  std::size_t prod(std::size_t i, std::size_t j) const { return star.at(i * n() + j); }
};

template <class E>
struct SubPcaData {
  TypedPcaData<E> parent;
  std::function<Verdict(std::size_t sort, const E&)> member;
};

namespace detail {

// Per-axiom tally: Fail on the first counterexample, Unknown if any case ran
// out of fuel, Pass otherwise.
struct Tally {
  std::size_t cases = 0, budget = 0;
  std::string witness;
  void add(Verdict v, const std::string& w) {
    ++cases;
    if (v == Verdict::Unknown) ++budget;
    if (v == Verdict::Fail && witness.empty()) witness = w;
  }
  void report(Report& rep, const char* module, const char* id, const char* law) const {
    std::string detail = std::to_string(cases) + " cases";
    if (!witness.empty())
      rep.fail(module, id, law, witness);
    else if (budget > 0)
      rep.unknown(module, id, law, std::to_string(budget) + " of " + std::to_string(cases) + " cases exhausted fuel");
    else
      rep.pass(module, id, law, detail);
  }
};

inline std::size_t per_axis(std::size_t budget, std::size_t arity) {
  std::size_t m = 1;
  while (static_cast<std::size_t>(std::pow(static_cast<double>(m), static_cast<double>(arity))) < budget) ++m;
  return m;
}

}  // namespace detail

// All axioms of a typed pca, over all sort triples; per sort triple the
// first samples^(1/arity) elements of each sort form the tested tuples.
template <class E>
Report check_typed_pca(const TypedPcaData<E>& d, std::size_t budget, std::size_t fuel) {
  Report rep;
  detail::Tally tk, ts_def, ts, tfst, tsnd;
  const std::size_t n = d.n();
  auto sample = [&](std::size_t sort, std::size_t arity) { return d.sample(sort, detail::per_axis(budget, arity)); };
  auto app = [&](std::size_t i, std::size_t j, const Outcome<E>& f, const Outcome<E>& x) {
    if (f.kind != OutcomeKind::Defined) return f;
    if (x.kind != OutcomeKind::Defined) return x;
    return d.app(i, j, f.value, x.value, fuel);
  };
  auto def = [](const E& e) { return Outcome<E>::defined(e); };
  auto verdict_eq = [&](const Outcome<E>& got, const E& want) {
    if (got.kind == OutcomeKind::Budget) return Verdict::Unknown;
    return got.is_defined() && d.equal(got.value, want) ? Verdict::Pass : Verdict::Fail;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t ji = d.arr(j, i), i_ji = d.arr(i, ji);
      // k x y = x
      for (const auto& x : sample(i, 2))
        for (const auto& y : sample(j, 2)) {
          auto r = app(j, i, app(i, ji, def(d.k(i, j)), def(x)), def(y));
          tk.add(verdict_eq(r, x), "k x y != x at x=" + d.show(x) + " y=" + d.show(y));
        }
      (void)i_ji;
      // fst (pair x y) = x, snd (pair x y) = y
      const std::size_t ij = d.prod(i, j), j_ij = d.arr(j, ij);
      for (const auto& x : sample(i, 2))
        for (const auto& y : sample(j, 2)) {
          auto pxy = app(j, ij, app(i, j_ij, def(d.pair(i, j)), def(x)), def(y));
          tfst.add(verdict_eq(app(ij, i, def(d.fst(i, j)), pxy), x), "fst (pair x y) != x at x=" + d.show(x) + " y=" + d.show(y));
          tsnd.add(verdict_eq(app(ij, j, def(d.snd(i, j)), pxy), y), "snd (pair x y) != y at x=" + d.show(x) + " y=" + d.show(y));
        }
      for (std::size_t k = 0; k < n; ++k) {
        // x : i=>j=>k, y : i=>j, z : i
        const std::size_t jk = d.arr(j, k), ijk = d.arr(i, jk), ij2 = d.arr(i, j), ik = d.arr(i, k);
        const std::size_t t2 = d.arr(ij2, ik);
        auto sapp = [&](const E& x, const E& y) {
          return app(ij2, ik, app(ijk, t2, def(d.s(i, j, k)), def(x)), def(y));
        };
        for (const auto& x : sample(ijk, 2))
          for (const auto& y : sample(ij2, 2)) {
            auto sxy = sapp(x, y);
            Verdict dv = sxy.kind == OutcomeKind::Budget ? Verdict::Unknown : verdict_of(sxy.is_defined());
            ts_def.add(dv, "s x y undefined at x=" + d.show(x) + " y=" + d.show(y));
          }
        for (const auto& x : sample(ijk, 3))
          for (const auto& y : sample(ij2, 3)) {
            auto sxy = sapp(x, y);
            for (const auto& z : sample(i, 3)) {
              auto rhs = app(j, k, app(i, jk, def(x), def(z)), app(i, j, def(y), def(z)));
              if (rhs.kind == OutcomeKind::Undefined) {
                ts.add(Verdict::Pass, {});
                continue;
              }
              if (rhs.kind == OutcomeKind::Budget) {
                ts.add(Verdict::Unknown, {});
                continue;
              }
              auto lhs = app(i, k, sxy, def(z));
              ts.add(verdict_eq(lhs, rhs.value),
                     "s x y z differs from x z (y z) at x=" + d.show(x) + " y=" + d.show(y) + " z=" + d.show(z));
            }
          }
      }
    }
  tk.report(rep, "pca", "k-axiom", "k x y = x");
  ts_def.report(rep, "pca", "s-defined", "s x y is defined");
  ts.report(rep, "pca", "s-axiom", "s x y z extends x z (y z)");
  tfst.report(rep, "pca", "fst-axiom", "fst (pair x y) = x");
  tsnd.report(rep, "pca", "snd-axiom", "snd (pair x y) = y");
  return rep;
}

template <class E>
Report check_sub_pca(const SubPcaData<E>& s, std::size_t budget, std::size_t fuel) {
  const auto& d = s.parent;
  Report rep;
  detail::Tally closure, comb;
  const std::size_t n = d.n();
  auto members = [&](std::size_t sort, std::size_t count) {
    std::vector<E> out;
    for (const auto& e : d.sample(sort, count))
      if (s.member(sort, e) == Verdict::Pass) out.push_back(e);
    return out;
  };
  const std::size_t per = detail::per_axis(budget, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& f : members(d.arr(i, j), per))
        for (const auto& x : members(i, per)) {
          auto r = d.app(i, j, f, x, fuel);
          if (r.kind == OutcomeKind::Budget) {
            closure.add(Verdict::Unknown, {});
            continue;
          }
          if (!r.is_defined()) {
            closure.add(Verdict::Pass, {});
            continue;
          }
          Verdict v = s.member(j, r.value);
          closure.add(v, d.show(f) + " . " + d.show(x) + " = " + d.show(r.value) + " is not a member");
        }
  auto need = [&](std::size_t sort, const E& e, const std::string& name) {
    Verdict v = s.member(sort, e);
    comb.add(v, name + " = " + d.show(e) + " is not a member");
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      need(d.arr(i, d.arr(j, i)), d.k(i, j), "k");
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t t = d.arr(d.arr(i, d.arr(j, k)), d.arr(d.arr(i, j), d.arr(i, k)));
        need(t, d.s(i, j, k), "s");
      }
      need(d.arr(i, d.arr(j, d.prod(i, j))), d.pair(i, j), "pair");
      need(d.arr(d.prod(i, j), i), d.fst(i, j), "fst");
      need(d.arr(d.prod(i, j), j), d.snd(i, j), "snd");
    }
  closure.report(rep, "pca", "sub-closure", "closed under defined application");
  comb.report(rep, "pca", "sub-combinators", "combinators are members");
  return rep;
}

// The SK pca as one-sorted typed pca data with the derived pairing.
inline TypedPcaData<SkElem> sk_typed(const SkPca& p, std::size_t fuel = 10000) {
  Pairing pr = derive_pairing(p, fuel);
  TypedPcaData<SkElem> d;
  d.sorts = {"A"};
  d.star = {0};
  d.arrow = {0};
  d.sample = [p](std::size_t, std::size_t count) { return p.enumerate(count); };
  d.finite = [](std::size_t) { return false; };
  d.app = [p](std::size_t, std::size_t, const SkElem& f, const SkElem& x, std::size_t fl) { return p.apply(f, x, fl); };
  d.k = [p](std::size_t, std::size_t) { return p.k(); };
  d.s = [p](std::size_t, std::size_t, std::size_t) { return p.s(); };
  d.pair = [pr](std::size_t, std::size_t) { return pr.pair; };
  d.fst = [pr](std::size_t, std::size_t) { return pr.fst; };
  d.snd = [pr](std::size_t, std::size_t) { return pr.snd; };
  d.equal = sk_equal;
  d.show = sk_show;
  return d;
}

// An applicative morphism between SK pcas: a total relation given by a
// membership test and a finite image sample per element, with realizer e.
struct ApplicativeMorphism {
  std::function<bool(const SkElem& a, const SkElem& b)> related;
  std::function<std::vector<SkElem>(const SkElem& a)> images;
  SkElem realizer;
};

// Certificates of a finite meet preserving monotone map A -> D(B): for each
// r a realizer s tracking (r . -), and one realizer t for binary meets.
struct MeetMap {
  std::function<std::vector<SkElem>(const SkElem& a)> images;
  std::function<bool(const SkElem& a, const SkElem& b)> related;
  std::function<std::optional<SkElem>(const SkElem& r)> monotone;
  SkElem meet;
};

struct MorphismCheck {
  Report report;
  std::optional<MeetMap> meetmap;
  std::optional<ApplicativeMorphism> applicative;
};

namespace detail {

inline std::optional<SkElem> eval_opt(const SkPca& p, const TermPtr& t, std::size_t fuel) {
  auto r = eval_fuel(p, t, fuel);
  if (!r.is_defined()) return std::nullopt;
  return r.value;
}

}  // namespace detail

// gamma(a,b), gamma(a',b'), a a' = a'' |- gamma(a'', e b b') on samples.
inline Report applicative_audit(const SkPca& p, const ApplicativeMorphism& g, std::size_t budget, std::size_t fuel) {
  Report rep;
  detail::Tally t;
  auto xs = p.enumerate(detail::per_axis(budget, 2));
  for (const auto& a : xs)
    for (const auto& a2 : xs) {
      auto a3 = p.apply_fuel(a, a2, fuel);
      if (a3.kind == OutcomeKind::Budget) {
        t.add(Verdict::Unknown, {});
        continue;
      }
      for (const auto& b : g.images(a))
        for (const auto& b2 : g.images(a2)) {
          auto eb = p.apply_fuel(g.realizer, b, fuel);
          auto ebb = eb.is_defined() ? p.apply_fuel(eb.value, b2, fuel) : eb;
          if (ebb.kind == OutcomeKind::Budget) {
            t.add(Verdict::Unknown, {});
            continue;
          }
          t.add(verdict_of(ebb.is_defined() && g.related(a3.value, ebb.value)),
                "a=" + sk_show(a) + " a'=" + sk_show(a2) + " b=" + sk_show(b) + " b'=" + sk_show(b2));
        }
    }
  t.report(rep, "pca", "applicative-realizer", "e realizes the applicative morphism");
  return rep;
}

// Monotonicity certificate s = e s0 for s0 in gamma(r); meet certificate
// t with t (b & b') = e (e q b) b' for q in gamma(pair).
inline MorphismCheck applicative_to_meetmap(const SkPca& p, const ApplicativeMorphism& g, std::size_t budget,
                                            std::size_t fuel) {
  MorphismCheck out;
  Pairing pr = derive_pairing(p, fuel);
  auto e = Term::constant(g.realizer, "e");
  MeetMap m;
  m.images = g.images;
  m.related = g.related;
  m.monotone = [p, g, fuel](const SkElem& r) -> std::optional<SkElem> {
    auto s0 = g.images(r);
    if (s0.empty()) return std::nullopt;
    auto s = p.apply_fuel(g.realizer, s0.front(), fuel);
    if (!s.is_defined()) return std::nullopt;
    return s.value;
  };
  auto qs = g.images(pr.pair);
  if (qs.empty()) {
    out.report.fail("pca", "meet-certificate", "meet preservation realizer", "gamma(pair) is empty");
    return out;
  }
  std::map<std::string, SkElem> c{{"e", g.realizer}, {"q", qs.front()}, {"fst", pr.fst}, {"snd", pr.snd}};
  auto t = detail::eval_opt(p, parse_term("\\*w. e (e q (fst w)) (snd w)", c), fuel);
  if (!t) {
    out.report.unknown("pca", "meet-certificate", "meet preservation realizer", "fuel exhausted building the realizer");
    return out;
  }
  m.meet = *t;
  (void)e;

  detail::Tally mono, meet;
  auto xs = p.enumerate(detail::per_axis(budget, 2));
  for (const auto& r : xs) {
    auto s = m.monotone(r);
    for (const auto& a : xs) {
      auto a2 = p.apply_fuel(r, a, fuel);
      if (a2.kind == OutcomeKind::Budget || !s) {
        mono.add(Verdict::Unknown, {});
        continue;
      }
      for (const auto& b : g.images(a)) {
        auto sb = p.apply_fuel(*s, b, fuel);
        if (sb.kind == OutcomeKind::Budget) {
          mono.add(Verdict::Unknown, {});
          continue;
        }
        mono.add(verdict_of(sb.is_defined() && g.related(a2.value, sb.value)),
                 "r=" + sk_show(r) + " a=" + sk_show(a) + " b=" + sk_show(b));
      }
    }
  }
  for (const auto& a : xs)
    for (const auto& a2 : xs) {
      auto aa = detail::eval_opt(p, Term::apps(Term::constant(pr.pair), Term::constant(a), Term::constant(a2)), fuel);
      for (const auto& b : g.images(a))
        for (const auto& b2 : g.images(a2)) {
          auto lhs = eval_fuel(p,
                               Term::app(Term::constant(m.meet),
                                         Term::apps(Term::constant(pr.pair), Term::constant(b), Term::constant(b2))),
                               fuel);
          if (!aa || lhs.kind == OutcomeKind::Budget) {
            meet.add(Verdict::Unknown, {});
            continue;
          }
          meet.add(verdict_of(lhs.is_defined() && g.related(*aa, lhs.value)),
                   "a=" + sk_show(a) + " a'=" + sk_show(a2) + " b=" + sk_show(b) + " b'=" + sk_show(b2));
        }
    }
  mono.report(out.report, "pca", "monotone-certificate", "realizers track application");
  meet.report(out.report, "pca", "meet-certificate", "meet preservation realizer");
  out.meetmap = m;
  return out;
}

// e = \*b b'. s (t (pair b b')) with r = \*w. (fst w) (snd w).
inline MorphismCheck meetmap_to_applicative(const SkPca& p, const MeetMap& m, std::size_t budget, std::size_t fuel) {
  MorphismCheck out;
  Pairing pr = derive_pairing(p, fuel);
  std::map<std::string, SkElem> c{{"fst", pr.fst}, {"snd", pr.snd}};
  auto r = detail::eval_opt(p, parse_term("\\*w. (fst w) (snd w)", c), fuel);
  auto s = r ? m.monotone(*r) : std::nullopt;
  if (!s) {
    out.report.unknown("pca", "applicative-realizer", "e realizes the applicative morphism",
                       "no monotonicity certificate for the application realizer");
    return out;
  }
  c.insert({{"s", *s}, {"t", m.meet}, {"pair", pr.pair}});
  auto e = detail::eval_opt(p, parse_term("\\*b c. s (t (pair b c))", c), fuel);
  if (!e) {
    out.report.unknown("pca", "applicative-realizer", "e realizes the applicative morphism", "fuel exhausted");
    return out;
  }
  ApplicativeMorphism g{m.related, m.images, *e};
  out.report = applicative_audit(p, g, budget, fuel);
  out.applicative = g;
  return out;
}

}  // namespace realiz
