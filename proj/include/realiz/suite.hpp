#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "realiz/characterize.hpp"
#include "realiz/dlogic.hpp"
#include "realiz/effective.hpp"
#include "realiz/instance.hpp"
#include "realiz/meets.hpp"
#include "realiz/pca.hpp"
#include "realiz/relcomp.hpp"
#include "realiz/report.hpp"
#include "realiz/topos_audit.hpp"
#include "realiz/udist.hpp"
#include "realiz/uord.hpp"

namespace realiz {

struct SuiteOptions {
  std::size_t fuel = 10000;
  std::size_t max_carrier = 12;
  std::size_t span_bound = 3;
  std::size_t jobs = 1;
  std::size_t samples = 100;
};

using Audit = std::function<Report()>;

// Runs the audits on up to `jobs` threads. Each audit's checks are stamped
// with its running time; the merged report is ordered by (module, id) and
// then by audit order, independent of scheduling.
inline Report run_audits(const std::vector<Audit>& audits, std::size_t jobs) {
  std::vector<Report> out(audits.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < audits.size();) {
      Stopwatch w;
      Report r = audits[k]();
      double ms = w.ms();
      for (auto& c : r.checks) c.elapsed_ms = ms;
      out[k] = std::move(r);
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, audits.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  Report all;
  for (const auto& r : out) all.merge(r);
  std::stable_sort(all.checks.begin(), all.checks.end(), [](const Check& a, const Check& b) {
    return std::tie(a.module, a.id) < std::tie(b.module, b.id);
  });
  return all;
}

// The Heyting algebra presented by a one-sorted instance whose base is a
// single partial order, if it is one.
inline std::optional<HeytingAlgebra> heyting_source(const UOrd& u) {
  if (u.num_sorts() != 1 || u.bases(0, 0).size() != 1) return std::nullopt;
  const Rel& leq = u.bases(0, 0)[0];
  for (std::size_t a = 0; a < u.size(0); ++a)
    for (std::size_t b = 0; b < u.size(0); ++b)
      if (a != b && leq.get(a, b) && leq.get(b, a)) return std::nullopt;
  try {
    return HeytingAlgebra::from_order(u.carriers[0].elements, leq);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

// Finite frames whose sheaf topos is totally connected.
inline bool top_join_prime(const HeytingAlgebra& h) {
  for (std::size_t a = 0; a < h.size(); ++a)
    for (std::size_t b = 0; b < h.size(); ++b)
      if (h.j(a, b) == h.top && a != h.top && b != h.top) return false;
  return true;
}

// Renames the checks of r into another module with an id prefix.
inline Report relabel(Report r, const std::string& module, const std::string& prefix) {
  for (auto& c : r.checks) {
    c.module = module;
    c.id = prefix + c.id;
  }
  return r;
}

// Kleene inequality for bracket abstraction on seeded random terms of
// depth <= 4 over K, S and the abstracted variable.
inline Report abstraction_audit(std::size_t cases, std::size_t fuel, std::uint64_t seed = 1) {
  Report rep;
  SkPca p;
  std::mt19937_64 rng(seed);
  std::vector<TermPtr> atoms{Term::var("x"), Term::constant(p.k(), "K"), Term::constant(p.s(), "S"), Term::var("x")};
  auto args = p.enumerate(32);
  std::size_t defined = 0, budget = 0;
  std::string bad;
  for (std::size_t n = 0; n < cases && bad.empty(); ++n) {
    TermPtr t = random_term(rng, atoms, 4);
    TermPtr ab = abstract_closed({"x"}, t);
    const SkElem& a = args[n % args.size()];
    auto rhs = eval_fuel(p, substitute(t, "x", Term::constant(a)), fuel);
    if (rhs.kind == OutcomeKind::Budget) {
      ++budget;
      continue;
    }
    ++defined;
    // the abstract performs more steps than the term itself
    auto lhs = eval_fuel(p, Term::app(ab, Term::constant(a)), fuel * 16);
    if (!lhs.is_defined() || !sk_equal(lhs.value, rhs.value))
      bad = "t=" + show_term(t) + " a=" + sk_show(a);
  }
  std::string detail = std::to_string(defined) + " defined cases, " + std::to_string(budget) + " beyond fuel";
  if (!bad.empty())
    rep.fail("pca", "abstraction-kleene", "(\\*x. t) a extends t[a/x]", bad);
  else
    rep.pass("pca", "abstraction-kleene", "(\\*x. t) a extends t[a/x]", detail);
  return rep;
}

inline std::vector<Audit> effective_audits(const SuiteOptions& o) {
  std::vector<Audit> a;
  const std::size_t fuel = o.fuel, samples = o.samples;
  a.push_back([=] { return check_typed_pca(sk_typed(SkPca(), fuel), samples, fuel); });
  a.push_back([=] { return abstraction_audit(samples, fuel); });
  a.push_back([=] {
    EffectiveUord eu(fuel);
    auto ex = extract_pca(eu);
    Report r = relabel(check_typed_pca(ex.pca, samples / 2, fuel), "relcomp", "extract-");
    r.merge(relabel(check_sub_pca(ex.sub, samples / 2, fuel), "relcomp", "extract-"));
    return r;
  });
  a.push_back([=] {
    SkPca p;
    auto e = eval_fuel(p, parse_term("\\*x y. x y"), fuel);
    ApplicativeMorphism id{[](const SkElem& x, const SkElem& y) { return sk_equal(x, y); },
                           [](const SkElem& x) { return std::vector<SkElem>{x}; }, e.value};
    auto m = applicative_to_meetmap(p, id, samples / 2, fuel);
    Report r = m.report;
    if (m.meetmap) r.merge(relabel(meetmap_to_applicative(p, *m.meetmap, samples / 2, fuel).report, "pca", "roundtrip-"));
    return r;
  });
  a.push_back([=] { return characterization_audit(EffectiveUord(fuel), samples / 2); });
  return a;
}

inline std::vector<Audit> finite_audits(const Instance& in, const SuiteOptions& o) {
  std::vector<Audit> a;
  const UOrd& u = in.uord;
  if (u.max_carrier() > o.max_carrier)
    throw InstanceError("carrier of size " + std::to_string(u.max_carrier()) + " exceeds --max-carrier");
  const std::size_t small = u.max_carrier() <= 4 ? 3 : 2;
  a.push_back([u, small] {
    Report r = validate_uord(u);
    if (r.all_pass()) r.merge(semantics_audit(u, small));
    return r;
  });
  if (!in.meets) return a;
  const MeetData m = *in.meets;
  a.push_back([u, m, small] {
    Report r = verify_meets(u, m);
    r.merge(injectivity_check(u, m));
    r.merge(meet_predicate_audit(u, m, small));
    auto d = designated_truth_values(u, m);
    std::string s;
    for (std::size_t i = 0; i < d.size(); ++i) {
      s += (i ? "; " : "") + u.sorts[i] + ": {";
      for (std::size_t k = 0; k < d[i].size(); ++k) s += (k ? "," : "") + u.carriers[i].elements[d[i][k]];
      s += "}";
    }
    r.pass("meets", "designated", "designated truth values", s);
    return r;
  });
  a.push_back([u] { return monad_audit(u); });

  std::optional<RcData> rc = in.rc;
  if (!rc) {
    auto s = search_relcomp(u, m);
    rc = s.found;
  }
  DFiber f(u, m);
  if (rc) f.with_relcomp(*rc);
  const std::size_t span = o.span_bound;
  a.push_back([f, u, m, span] {
    Report r = frame_audit(f, 2);
    r.merge(frobenius_rectangle(u, m));
    r.merge(geometric_inclusion_audit(u, m));
    std::string bad;
    for (std::size_t i = 0; i < u.num_sorts(); ++i) {
      auto pr = is_prime(f, f.y(generic_predicate(u, i)), std::min<std::size_t>(span, 2));
      if (pr.verdict != Verdict::Pass && bad.empty()) bad = u.sorts[i] + ": " + pr.detail;
    }
    if (bad.empty())
      r.pass("dlogic", "prime-generators", "singleton images are existentially prime");
    else
      r.fail("dlogic", "prime-generators", "singleton images are existentially prime", bad);
    return r;
  });
  a.push_back([in, u, m] {
    Report r;
    if (in.rc) {
      r = check_relcomp(u, m, *in.rc);
    } else {
      auto s = search_relcomp(u, m);
      if (s.found)
        r.pass("relcomp", "relcomp-search", "an arrow and application exist", "found");
      else
        r.fail("relcomp", "relcomp-search", "an arrow and application exist", s.witness);
    }
    return r;
  });
  if (rc) {
    const std::size_t synth_n = u.max_carrier() <= 4 ? 2 : 1;
    a.push_back([f, synth_n] { return synth_audit(f, synth_n); });
    if (auto h = heyting_source(u)) a.push_back([h = *h, synth_n] { return heyting_agreement_audit(h, synth_n); });
    if (is_functional_uord(u)) {
      a.push_back([f, span] { return characterization_audit(f, span); });
    } else {
      a.push_back([] {
        Report r;
        r.not_applicable("relcomp", "characterization", "conditions for a relative realizability fiber",
                         "the instance is not functional, so its generators cannot be modest");
        return r;
      });
    }
  }

  // topos audits over the fiber the instance selects
  if (in.fiber == "heyting") {
    auto h = heyting_source(u);
    if (!h) throw InstanceError("fiber \"heyting\" needs one sort whose base is a single Heyting order");
    const std::size_t c = h->size() <= 3 ? 3 : 2;
    a.push_back([h = *h, c] {
      HeytingFiber hf(h);
      PerCategory<HeytingFiber> cat(hf);
      auto o1 = sample_objects(cat, 1, 3), o2 = sample_objects(cat, 2, 4);
      std::vector<PerCategory<HeytingFiber>::Object> objs = o1;
      objs.insert(objs.end(), o2.begin(), o2.end());
      Report r = category_audit(cat, objs);
      r.merge(limits_audit(cat, o1, o2));
      r.merge(factorization_audit(cat, objs));
      r.merge(exactness_audit(cat, objs));
      r.merge(reconstruction_audit(cat, c, 2));
      r.merge(assemblies_audit(cat, 2));
      if (top_join_prime(h)) {
        r.merge(delta_audit(cat, c));
        r.merge(total_connectedness_audit(hf, c, 2));
        r.merge(notnot_audit(cat, c, objs));
      } else {
        r.not_applicable("topos", "total-connectedness", "delta, pi and not-not laws of a totally connected fiber",
                         "the top element is a join of smaller elements");
      }
      r.merge(exponential_audit(cat, cat.delta(2), cat.delta(2), cat.delta(2)));
      return r;
    });
  } else if (rc && u.max_carrier() <= 2) {
    a.push_back([f] {
      PerCategory<DFiber> cat(f);
      auto o1 = sample_objects(cat, 1, 3), o2 = sample_objects(cat, 2, 3);
      std::vector<PerCategory<DFiber>::Object> objs = o1;
      objs.push_back(o2[0]);
      if (o2.size() > 1) objs.push_back(o2[1]);
      Report r = category_audit(cat, objs);
      r.merge(limits_audit(cat, o1, {o1[0], o2[0]}));
      r.merge(factorization_audit(cat, objs));
      r.merge(exactness_audit(cat, objs));
      r.merge(delta_audit(cat, 2));
      r.merge(reconstruction_audit(cat, 2, 1));
      r.merge(total_connectedness_audit(f, 3, 2));
      r.merge(notnot_audit(cat, 3, objs));
      r.merge(assemblies_audit(cat, 2));
      r.merge(gamma_audit(cat, 2));
      r.merge(tracking_audit(cat, objs));
      r.merge(exponential_audit(cat, cat.delta(2), cat.delta(2), cat.delta(2)));
      return r;
    });
  }

  a.push_back([in, u] {
    Report r = dual_audit(u);
    MonotoneMap id = MonotoneMap::identity(u);
    r.merge(relabel(adjunction_audit(companion(u, u, id), conjoint(u, u, id)), "udist", "identity-"));
    for (const auto& [name, d] : in.dists) {
      auto v = distributor_violation(d);
      if (v)
        r.fail("udist", "valid-" + name, "distributor closure", *v);
      else
        r.pass("udist", "valid-" + name, "distributor closure");
    }
    for (const auto& [gn, g] : in.dists)
      for (const auto& [hn, h] : in.dists) {
        if (gn == hn) continue;
        auto s = adjoint_search(g, h);
        r.add("udist", "adjoint-" + gn + "-" + hn, "an adjunction between the distributors", s.verdict, {}, s.detail);
      }
    return r;
  });
  return a;
}

inline Report run_suite(const Instance& in, const SuiteOptions& o) {
  return run_audits(in.effective() ? effective_audits(o) : finite_audits(in, o), o.jobs);
}

}  // namespace realiz
