#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "realiz/characterize.hpp"
#include "realiz/effective.hpp"
#include "realiz/exponential.hpp"
#include "realiz/suite.hpp"
#include "realiz/topos_audit.hpp"
#include "realiz/udist.hpp"
#include "support.hpp"

using namespace realiz;
using realiz::testing::bundled;

namespace {

struct Result {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void require(const Report& r, const std::string& what) {
    const Check* c = r.first_failure();
    if (c) {
      require(false, what + ": " + c->module + "/" + c->id + " " + c->witness);
      return;
    }
    for (const auto& k : r.checks)
      if (k.verdict == Verdict::Unknown) {
        require(false, what + ": " + k.module + "/" + k.id + " unknown (" + k.detail + ")");
        return;
      }
  }
};

std::size_t leading_number(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) {
    if (c < '0' || c > '9') break;
    n = n * 10 + static_cast<std::size_t>(c - '0');
  }
  return n;
}

// 1. k and s laws on enumerated triples, typed axioms, bracket abstraction.
Result pca_axioms() {
  Result o;
  const std::size_t fuel = 10000;
  SkPca p;
  auto elems = p.enumerate(5);
  std::size_t triples = 0, rhs_defined = 0;
  auto app = [&](const SkElem& a, const SkElem& b) { return p.apply_fuel(a, b, fuel); };
  for (const auto& x : elems)
    for (const auto& y : elems)
      for (const auto& z : elems) {
        ++triples;
        auto kx = app(p.k(), x);
        o.require(kx.is_defined(), "k x undefined");
        if (!o.ok) return o;
        auto kxy = app(kx.value, y);
        o.require(kxy.is_defined() && sk_equal(kxy.value, x), "k x y != x for x=" + sk_show(x));
        auto sx = app(p.s(), x);
        auto sxy = sx.is_defined() ? app(sx.value, y) : sx;
        o.require(sxy.is_defined(), "s x y undefined for x=" + sk_show(x) + " y=" + sk_show(y));
        if (!o.ok) return o;
        auto xz = app(x, z), yz = app(y, z);
        if (!xz.is_defined() || !yz.is_defined()) continue;
        auto rhs = app(xz.value, yz.value);
        if (!rhs.is_defined()) continue;
        ++rhs_defined;
        auto lhs = app(sxy.value, z);
        o.require(lhs.is_defined() && sk_equal(lhs.value, rhs.value),
                  "s x y z differs from x z (y z) at " + sk_show(x) + ", " + sk_show(y) + ", " + sk_show(z));
      }
  o.require(triples >= 100, "fewer than 100 triples");
  o.require(check_typed_pca(sk_typed(p, fuel), 100, fuel), "typed axioms");
  Report ab = abstraction_audit(200, fuel);
  o.require(ab, "bracket abstraction");
  if (o.ok) o.require(leading_number(ab.checks.at(0).detail) >= 100, "fewer than 100 defined abstraction cases");
  if (o.ok)
    o.detail = std::to_string(triples) + " triples (" + std::to_string(rhs_defined) + " with x z (y z) defined); " +
               ab.checks.at(0).detail;
  return o;
}

// 2. entails laws for |M| <= 3 and base reconstruction.
Result uord_semantics() {
  Result o;
  for (const char* name : {"2-chain", "diamond"}) o.require(semantics_audit(bundled(name).uord, 3), name);
  if (o.ok) o.detail = "2-chain and diamond, |M| <= 3";
  return o;
}

// 3. D-monad laws and the fibered logic of downsets.
Result d_monad() {
  Result o;
  for (const char* name : {"one-point", "2-chain", "diamond"}) {
    Instance in = bundled(name);
    o.require(monad_audit(in.uord), name);
    DFiber f(in.uord, *in.meets);
    f.with_relcomp(*in.rc);
    // index sets of size 3 over the 4-element diamond take minutes
    o.require(frame_audit(f, in.uord.size(0) <= 3 ? 3 : 2), name);
  }
  if (o.ok) o.detail = "one-point, 2-chain, diamond";
  return o;
}

// 4. existential primality over D(2-chain), |M| <= 3.
Result primality() {
  Result o;
  Instance in = bundled("2-chain");
  DFiber f(in.uord, *in.meets);
  f.with_relcomp(*in.rc);
  const std::size_t A = in.uord.size(0);
  std::vector<Mask> singletonish;
  for (Mask v = 0; v < (Mask{1} << A); ++v)
    for (std::size_t a = 0; a < A; ++a) {
      DPred one{0, {v}}, s = f.y({0, {a}});
      if (f.entails(one, s) && f.entails(s, one)) {
        singletonish.push_back(v);
        break;
      }
    }
  std::size_t singles = 0, interreducible = 0;
  for (std::size_t n = 0; n <= 3; ++n) {
    for_each_function(n, A, [&](const FinFun& g) {
      ++singles;
      o.require(is_prime(f, f.y({0, g.table})).verdict == Verdict::Pass, "singleton-valued predicate not certified");
      return o.ok;
    });
    for (const auto& p : detail::all_preds(f, n)) {
      bool inter = true;
      for (Mask v : p.vals) inter = inter && std::find(singletonish.begin(), singletonish.end(), v) != singletonish.end();
      if (!inter) continue;
      ++interreducible;
      o.require(is_prime(f, p).verdict == Verdict::Pass, "interreducible-value predicate not certified");
    }
    if (n > 0) {
      PrimeResult e = is_prime(f, DPred{0, std::vector<Mask>(n, 0)});
      o.require(e.verdict == Verdict::Fail && !e.detail.empty(), "constant-empty predicate not refuted");
    }
  }
  if (o.ok)
    o.detail = std::to_string(singles) + " singleton-valued, " + std::to_string(interreducible) +
               " interreducible-value predicates";
  return o;
}

// 5. relational completeness and the synthesized connectives.
Result relational_completeness() {
  Result o;
  for (const char* name : {"2-chain", "diamond"}) {
    Instance in = bundled(name);
    auto s = search_relcomp(in.uord, *in.meets);
    o.require(s.found.has_value() && s.found->app[0] == in.uord.bases(0, 0)[0], std::string(name) + ": @ is not <=");
    if (!o.ok) return o;
    o.require(check_relcomp(in.uord, *in.meets, *s.found), name);
    DFiber f(in.uord, *in.meets);
    f.with_relcomp(*s.found);
    o.require(synth_audit(f, 2), name);
    if (auto h = heyting_source(in.uord)) o.require(heyting_agreement_audit(*h, 2), name);
  }
  Instance ce = bundled("relcomp-counterexample");
  Report r = check_relcomp(ce.uord, *ce.meets, *ce.rc);
  const Check* c = r.first_failure();
  o.require(c && c->id == "relational-completeness" && !c->witness.empty(), "counterexample not refuted");
  if (o.ok) o.detail = "counterexample witness " + c->witness;
  return o;
}

// 6. extraction from the effective uord and designated truth values.
Result pca_round_trip() {
  Result o;
  const std::size_t fuel = 10000;
  EffectiveUord eu(fuel);
  auto ex = extract_pca(eu);
  o.require(check_typed_pca(ex.pca, 50, fuel), "extracted typed pca");
  o.require(check_sub_pca(ex.sub, 50, fuel), "extracted sub-pca");
  Instance two = bundled("2-chain"), one = bundled("one-point");
  auto d2 = designated_truth_values(two.uord, *two.meets), d1 = designated_truth_values(one.uord, *one.meets);
  o.require(d2 == std::vector<std::vector<std::size_t>>{{1}}, "2-chain designated values are not {1}");
  o.require(d1 == std::vector<std::vector<std::size_t>>{{0}}, "one-point designated values are not the point");
  o.require(d1[0].size() == one.uord.size(0) && d2[0].size() < two.uord.size(0), "criterion does not separate");
  if (o.ok) o.detail = "2-chain {1}, one-point {0}";
  return o;
}

template <class F>
std::vector<typename PerCategory<F>::Object> objects(const PerCategory<F>& cat, std::size_t per_carrier) {
  auto out = sample_objects(cat, 1, per_carrier);
  for (std::size_t c = 2; c <= 3; ++c) {
    auto more = sample_objects(cat, c, per_carrier);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

// 7. exactness of the category of partial equivalence relations.
Result topos_exactness() {
  Result o;
  {
    HeytingFiber f(HeytingAlgebra::chain(3));
    PerCategory<HeytingFiber> cat(f);
    auto o1 = sample_objects(cat, 1, 3), o2 = sample_objects(cat, 2, 4);
    auto objs = objects(cat, 3), small = o1;
    small.insert(small.end(), o2.begin(), o2.end());
    o.require(category_audit(cat, objs), "3-chain category");
    o.require(limits_audit(cat, o1, o2), "3-chain limits");
    // orthogonality squares through 3-element carriers take minutes
    o.require(factorization_audit(cat, small), "3-chain factorization");
    o.require(exactness_audit(cat, objs), "3-chain exactness");
    o.require(delta_audit(cat, 3), "3-chain delta");
    o.require(reconstruction_audit(cat, 3, 2), "3-chain reconstruction");
  }
  {
    DFiber f = heyting_d_fiber(HeytingAlgebra::chain(2));
    PerCategory<DFiber> cat(f);
    auto o1 = sample_objects(cat, 1, 3), o2 = sample_objects(cat, 2, 3);
    auto small = o1;
    small.insert(small.end(), o2.begin(), o2.end());
    auto objs = small;
    objs.push_back(sample_objects(cat, 3, 1).at(0));
    o.require(category_audit(cat, objs), "D(2-chain) category");
    o.require(limits_audit(cat, o1, {o1[0], o2[0]}), "D(2-chain) limits");
    o.require(factorization_audit(cat, small), "D(2-chain) factorization");
    o.require(exactness_audit(cat, objs), "D(2-chain) exactness");
    o.require(delta_audit(cat, 3), "D(2-chain) delta");
    o.require(reconstruction_audit(cat, 3, 1), "D(2-chain) reconstruction");
  }
  if (o.ok) o.detail = "3-chain Heyting fiber and D(2-chain)";
  return o;
}

// 8. total connectedness, assemblies, double negation.
Result total_connectedness() {
  Result o;
  for (const char* name : {"one-point", "2-chain"}) {
    Instance in = bundled(name);
    DFiber f(in.uord, *in.meets);
    f.with_relcomp(*in.rc);
    o.require(total_connectedness_audit(f, 3, 2), name);
  }
  DFiber f = heyting_d_fiber(HeytingAlgebra::chain(2));
  PerCategory<DFiber> cat(f);
  auto objs = sample_objects(cat, 1, 3);
  auto two = sample_objects(cat, 2, 3);
  objs.insert(objs.end(), two.begin(), two.end());
  o.require(assemblies_audit(cat, 3), "assemblies");
  o.require(notnot_audit(cat, 3, objs), "double negation");
  if (o.ok) o.detail = "D(one-point), D(2-chain), |M| <= 3";
  return o;
}

// 9. exponentials over D of a finite Heyting source.
Result exponentials() {
  Result o;
  DFiber f = heyting_d_fiber(HeytingAlgebra::chain(2));
  PerCategory<DFiber> cat(f);
  std::size_t runs = 0;
  for (std::size_t J = 1; J <= 3; ++J)
    for (std::size_t K = 1; K <= 3; ++K)
      for (std::size_t I = 1; I <= 2; ++I) {
        o.require(exponential_audit(cat, cat.delta(I), cat.delta(J), cat.delta(K)),
                  "J=" + std::to_string(J) + " K=" + std::to_string(K) + " I=" + std::to_string(I));
        ++runs;
      }
  auto odd = sample_objects(cat, 2, 2).back();
  o.require(exponential_audit(cat, odd, cat.delta(2), odd), "non-constant objects");

  DFiber b = heyting_d_fiber(HeytingAlgebra::chain(1));
  PerCategory<DFiber> bc(b);
  auto e = exponential(bc, bc.delta(2), bc.delta(2));
  auto gs = bc.global_sections(e.obj);
  std::vector<PerCategory<DFiber>::Morphism> distinct;
  for (const auto& g : gs) {
    bool seen = false;
    for (const auto& d : distinct) seen = seen || bc.equal(g, d);
    if (!seen) distinct.push_back(g);
  }
  o.require(distinct.size() == 4, "Gamma(D2^D2) has " + std::to_string(distinct.size()) + " elements");
  if (o.ok) o.detail = std::to_string(runs) + " shapes; Gamma(D2^D2) = 4";
  return o;
}

// 10. companions, conjoints and duality on every preorder with at most 3 points.
Result distributors() {
  Result o;
  std::vector<UOrd> us;
  for (std::size_t n = 1; n <= 3; ++n)
    realiz::testing::for_each_rel(n, n, [&](const Rel& r) {
      if (is_reflexive(r) && is_transitive(r)) us.push_back(from_preorder(FinSet::range("P", n), r));
    });
  std::size_t maps = 0;
  for (const auto& a : us) {
    o.require(dual_audit(a), "duality");
    for (const auto& b : us)
      for_each_function(a.size(0), b.size(0), [&](const FinFun& g) {
        MonotoneMap f{{0}, {g}};
        if (!is_monotone(a, b, f)) return true;
        ++maps;
        Distributor c = companion(a, b, f), k = conjoint(a, b, f);
        o.require(adjunction_audit(c, k), "companion -| conjoint");
        auto s = adjoint_search(c, k);
        o.require(s.verdict == Verdict::Pass && s.map && dist_equiv(companion(a, b, *s.map), c) &&
                      dist_equiv(conjoint(a, b, *s.map), k),
                  "adjoint_search round trip: " + s.detail);
        return o.ok;
      });
  }
  if (o.ok) o.detail = std::to_string(us.size()) + " preorders, " + std::to_string(maps) + " monotone maps";
  return o;
}

std::string run(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  std::array<char, 4096> buf;
  for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) out.append(buf.data(), n);
  pclose(p);
  return out;
}

// 11. byte-identical suite output across runs and worker counts.
Result determinism() {
  Result o;
  std::size_t files = 0;
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(REALIZ_INSTANCE_DIR))
    if (e.path().extension() == ".json") paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    const std::string base = std::string(REALIZ_CLI) + " suite --format json '" + path.string() + "'";
    std::string first = run(base + " --jobs 1");
    o.require(first.size() > 2 && first.front() == '[', path.filename().string() + ": no JSON output");
    for (int k = 0; k < 2; ++k) o.require(run(base + " --jobs 1") == first, path.filename().string() + ": runs differ");
    o.require(run(base + " --jobs 4") == first, path.filename().string() + ": 1 vs 4 workers differ");
    ++files;
  }
  o.require(files >= 5, "fewer than five bundled instances");
  if (o.ok) o.detail = std::to_string(files) + " instances";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"pca axioms", pca_axioms},
      {"uord semantics", uord_semantics},
      {"D-monad", d_monad},
      {"existential primality", primality},
      {"relational completeness", relational_completeness},
      {"pca round trip", pca_round_trip},
      {"topos exactness", topos_exactness},
      {"total connectedness and double negation", total_connectedness},
      {"exponentials", exponentials},
      {"distributors", distributors},
      {"determinism", determinism},
  };
  int failed = 0;
  std::vector<std::size_t> pick;
  for (int a = 1; a < argc; ++a) pick.push_back(std::stoul(argv[a]));
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!pick.empty() && std::find(pick.begin(), pick.end(), k + 1) == pick.end()) continue;
    auto start = std::chrono::steady_clock::now();
    Result o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %2zu %s  [%s]  %.1fs\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str(), s);
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
