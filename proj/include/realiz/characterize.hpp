#pragma once

#include <string>
#include <vector>

#include "realiz/dlogic.hpp"
#include "realiz/effective.hpp"
#include "realiz/fiber.hpp"
#include "realiz/meets.hpp"
#include "realiz/pca.hpp"
#include "realiz/relcomp.hpp"
#include "realiz/report.hpp"
#include "realiz/uord.hpp"

namespace realiz {

namespace detail {

inline void record_in(Report& rep, const char* module, const char* id, const char* law, const std::string& bad,
                      std::string detail = {}) {
  if (bad.empty())
    rep.pass(module, id, law, std::move(detail));
  else
    rep.fail(module, id, law, bad);
}

inline std::vector<DPred> all_preds(const DFiber& f, std::size_t n) {
  std::vector<DPred> out;
  f.for_each_pred(n, [&](const DPred& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

}  // namespace detail

// Residuation of the synthesized implication, the adjunction of the
// synthesized universal quantifier with reindexing, and the combined law
// u*chi & phi |- psi iff chi |- forall_u (phi => psi), for index sets of
// size <= max_n.
inline Report synth_audit(const DFiber& f, std::size_t max_n = 2) {
  Report rep;
  if (!f.relcomp()) {
    rep.not_applicable("relcomp", "synth-residuation", "chi & phi |- psi iff chi |- phi => psi",
                       "no relational completeness data");
    return rep;
  }
  std::string res, mate, comb;
  std::size_t cases = 0;
  for (std::size_t n = 0; n <= max_n && res.empty(); ++n) {
    auto ps = detail::all_preds(f, n);
    IndexMap id = FinFun::identity(n).table;
    for (const auto& phi : ps)
      for (const auto& psi : ps) {
        if (!res.empty()) break;
        DPred imp = f.forall_implies(phi, psi, id, n);
        for (const auto& chi : ps) {
          ++cases;
          if (f.entails(f.meet(chi, phi), psi) != f.entails(chi, imp)) {
            res = "chi=" + f.describe(chi) + " phi=" + f.describe(phi) + " psi=" + f.describe(psi);
            break;
          }
        }
      }
  }
  for (std::size_t m = 0; m <= max_n; ++m)
    for (std::size_t n = 0; n <= max_n; ++n) {
      auto pm = detail::all_preds(f, m), pn = detail::all_preds(f, n);
      for_each_function(m, n, [&](const FinFun& u) {
        for (const auto& phi : pm) {
          DPred all = f.forall_along(phi, u.table, n);
          for (const auto& chi : pn)
            if (mate.empty() && f.entails(f.reindex(chi, u.table), phi) != f.entails(chi, all))
              mate = "u=" + describe_map(u) + " phi=" + f.describe(phi) + " chi=" + f.describe(chi);
        }
        if (m <= 1 || n <= 1)
          for (const auto& phi : pm)
            for (const auto& psi : pm) {
              DPred fi = f.forall_implies(phi, psi, u.table, n);
              for (const auto& chi : pn)
                if (comb.empty() && f.entails(f.meet(f.reindex(chi, u.table), phi), psi) != f.entails(chi, fi))
                  comb = "u=" + describe_map(u) + " phi=" + f.describe(phi) + " psi=" + f.describe(psi) +
                         " chi=" + f.describe(chi);
            }
        return mate.empty() && comb.empty();
      });
    }
  detail::record_in(rep, "relcomp", "synth-residuation", "chi & phi |- psi iff chi |- phi => psi", res,
                    std::to_string(cases) + " triples");
  detail::record_in(rep, "relcomp", "synth-forall-mate", "u* chi |- phi iff chi |- forall_u phi", mate);
  detail::record_in(rep, "relcomp", "synth-forall-implies", "u* chi & phi |- psi iff chi |- forall_u (phi => psi)",
                    comb);
  return rep;
}

// Synthesized and Heyting-lifted connectives agree up to mutual entailment.
inline Report heyting_agreement_audit(const HeytingAlgebra& h, std::size_t max_n = 2) {
  Report rep;
  UOrd u = h.as_uord();
  MeetData m = h.as_meets(u);
  DFiber synth(u, m), lifted(u, m);
  synth.with_relcomp(semilattice_relcomp(u));
  lifted.with_heyting(h);
  std::string imp, all;
  for (std::size_t n = 0; n <= max_n && imp.empty(); ++n) {
    auto ps = detail::all_preds(synth, n);
    for (const auto& phi : ps)
      for (const auto& psi : ps)
        if (imp.empty() && !equivalent(synth, synth.implies(phi, psi), lifted.implies(phi, psi)))
          imp = "phi=" + synth.describe(phi) + " psi=" + synth.describe(psi);
  }
  for (std::size_t mm = 0; mm <= max_n; ++mm)
    for (std::size_t n = 0; n <= max_n; ++n) {
      auto ps = detail::all_preds(synth, mm);
      for_each_function(mm, n, [&](const FinFun& fn) {
        for (const auto& phi : ps)
          if (all.empty() &&
              !equivalent(synth, synth.forall_along(phi, fn.table, n), lifted.forall_along(phi, fn.table, n)))
            all = "u=" + describe_map(fn) + " phi=" + synth.describe(phi);
        return all.empty();
      });
    }
  detail::record_in(rep, "relcomp", "heyting-implies", "synthesized => agrees with the Heyting lift", imp);
  detail::record_in(rep, "relcomp", "heyting-forall", "synthesized forall agrees with the Heyting lift", all);
  return rep;
}

// Conditions for the fiber D(u) to be generated by the singleton images of
// the generic predicates: connectives, primality, meet closure, modesty,
// existential generation, and gamma = support.
inline Report characterization_audit(const DFiber& f, std::size_t bound = 3) {
  Report rep;
  const char* mod = "relcomp";
  const UOrd& u = f.uord();
  const MeetData& m = f.meets();
  std::vector<DPred> gens;
  for (std::size_t i = 0; i < u.num_sorts(); ++i) gens.push_back(f.y(generic_predicate(u, i)));

  // (a)
  Report frame = frame_audit(f, 1);
  if (!frame.all_pass()) {
    rep.fail(mod, "char-connectives", "top, meets, exists, implies, forall", frame.first_failure()->id);
  } else if (!f.has_implication()) {
    rep.fail(mod, "char-connectives", "top, meets, exists, implies, forall", "no implication or universal quantifier");
  } else {
    std::string bad;
    auto ps = detail::all_preds(f, 1);
    for (const auto& phi : ps)
      for (const auto& psi : ps) {
        if (!bad.empty()) break;
        DPred imp = f.implies(phi, psi);
        for (const auto& chi : ps)
          if (f.entails(f.meet(chi, phi), psi) != f.entails(chi, imp)) {
            bad = "residuation at chi=" + f.describe(chi) + " phi=" + f.describe(phi) + " psi=" + f.describe(psi);
            break;
          }
      }
    detail::record_in(rep, mod, "char-connectives", "top, meets, exists, implies, forall", bad);
  }

  // (b)
  std::string bad;
  for (const auto& g : gens) {
    auto pr = is_prime(f, g);
    if (pr.verdict != Verdict::Pass && bad.empty()) bad = f.describe(g) + ": " + pr.detail;
  }
  detail::record_in(rep, mod, "char-prime", "generators are existentially prime", bad);

  // (c) y(a) & y(b) = y(a & b), and top = y(top)
  bad.clear();
  for (std::size_t i = 0; i < u.num_sorts(); ++i)
    for (std::size_t j = 0; j < u.num_sorts(); ++j) {
      Predicate pi{i, {}}, pj{j, {}}, pij{m.star_of(i, j), {}};
      for (std::size_t a = 0; a < u.size(i); ++a)
        for (std::size_t b = 0; b < u.size(j); ++b) {
          pi.values.push_back(a);
          pj.values.push_back(b);
          pij.values.push_back(m.meet(u, i, j, a, b));
        }
      if (bad.empty() && !equivalent(f, f.meet(f.y(pi), f.y(pj)), f.y(pij)))
        bad = "meet of generators at sorts " + u.sorts[i] + "," + u.sorts[j];
    }
  if (bad.empty() && !equivalent(f, f.top(1), f.y(Predicate{m.unit, {m.top}}))) bad = "top is not a generator image";
  detail::record_in(rep, mod, "char-meet-closure", "generated predicates are closed under finite meets", bad);

  // (d)
  bad.clear();
  bool bounded = false;
  for (std::size_t i = 0; i < u.num_sorts(); ++i) {
    auto r = check_modest(u, generic_predicate(u, i), bound);
    if (r.kind == Modesty::NotModest && bad.empty()) bad = u.sorts[i] + ": " + r.witness;
    if (r.kind == Modesty::ModestWithinBound) bounded = true;
  }
  if (!bad.empty())
    rep.fail(mod, "char-modest", "generators are modest", bad);
  else if (bounded)
    rep.unknown(mod, "char-modest", "generators are modest", "no counterexample with spans of size <= " + std::to_string(bound));
  else
    rep.pass(mod, "char-modest", "generators are modest", "functional instance");

  // (e) every predicate is exists along a projection of a generator reindexing
  bad.clear();
  std::size_t cases = 0;
  for (std::size_t n = 0; n <= 2 && bad.empty(); ++n)
    f.for_each_pred(n, [&](const DPred& p) {
      ++cases;
      auto d = f.prime_decompose(p);
      Predicate pre{p.sort, {}};
      for (auto v : d.prime.vals) pre.values.push_back(static_cast<std::size_t>(std::countr_zero(v)));
      DPred via = f.exists_along(f.y(pre), d.proj, n);
      if (!equivalent(f, via, p)) {
        bad = f.describe(p);
        return false;
      }
      return true;
    });
  detail::record_in(rep, mod, "char-exists-generation", "every predicate is an existential image of generators", bad,
                    std::to_string(cases) + " predicates");

  // (f)
  bad.clear();
  cases = 0;
  std::size_t n = 0;
  while (n < 3) {
    std::size_t count = 1;
    for (std::size_t k = 0; k <= n; ++k) count *= std::size_t{1} << u.max_carrier();
    if (count > 200000) break;
    ++n;
  }
  for (std::size_t k = 0; k <= n && bad.empty(); ++k)
    f.for_each_pred(k, [&](const DPred& p) {
      ++cases;
      if (f.gamma(p) != f.support(p)) {
        bad = f.describe(p);
        return false;
      }
      return true;
    });
  detail::record_in(rep, mod, "char-gamma-support", "global sections agree with support", bad,
                    std::to_string(cases) + " predicates, |M| <= " + std::to_string(n));

  if (u.num_sorts() == 1)
    rep.pass(mod, "char-single-generator", "generated by a single predicate", "one sort");
  else
    rep.not_applicable(mod, "char-single-generator", "generated by a single predicate",
                       std::to_string(u.num_sorts()) + " generator sorts");
  return rep;
}

// The same conditions for the effective instance, by bounded evaluation.
inline Report characterization_audit(const EffectiveUord& eu, std::size_t budget = 50) {
  Report rep;
  const char* mod = "relcomp";
  auto ex = extract_pca(eu);
  Report ax = check_typed_pca(ex.pca, budget, eu.fuel);
  if (ax.overall() == Verdict::Pass)
    rep.pass(mod, "char-connectives", "top, meets, exists, implies, forall", "extracted pca axioms hold on samples");
  else if (ax.overall() == Verdict::Fail)
    rep.fail(mod, "char-connectives", "top, meets, exists, implies, forall", ax.first_failure()->witness);
  else
    rep.unknown(mod, "char-connectives", "top, meets, exists, implies, forall", "fuel exhausted on some samples");
  rep.pass(mod, "char-prime", "generators are existentially prime", "the generic predicate is singleton-valued");

  auto xs = eu.pca.enumerate(detail::per_axis(budget, 2));
  std::size_t undecided = 0;
  for (const auto& a : xs)
    for (const auto& b : xs)
      if (!eu.wedge(a, b).is_defined()) ++undecided;
  if (undecided == 0)
    rep.pass(mod, "char-meet-closure", "generated predicates are closed under finite meets",
             std::to_string(xs.size() * xs.size()) + " sampled wedges defined");
  else
    rep.unknown(mod, "char-meet-closure", "generated predicates are closed under finite meets",
                std::to_string(undecided) + " wedges exhausted fuel");
  rep.pass(mod, "char-modest", "generators are modest", "base relations are graphs of deterministic application");
  rep.unknown(mod, "char-exists-generation", "every predicate is an existential image of generators",
              "predicates over an infinite carrier are not enumerable");
  std::size_t missing = 0;
  for (const auto& a : eu.pca.enumerate(budget))
    if (!eu.designated_certificate(a)) ++missing;
  if (missing == 0)
    rep.pass(mod, "char-gamma-support", "global sections agree with support",
             std::to_string(budget) + " sampled values designated");
  else
    rep.unknown(mod, "char-gamma-support", "global sections agree with support",
                std::to_string(missing) + " values without a certificate within fuel");
  rep.pass(mod, "char-single-generator", "generated by a single predicate", "one sort");
  return rep;
}

}  // namespace realiz
