#include <gtest/gtest.h>

#include "realiz/exponential.hpp"
#include "realiz/topos_audit.hpp"
#include "support.hpp"

using namespace realiz;

namespace {

using HCat = PerCategory<HeytingFiber>;
using DCat = PerCategory<DFiber>;

HeytingFiber chain3() { return HeytingFiber(HeytingAlgebra::chain(3)); }

std::string first_bad(const Report& r) {
  const Check* c = r.first_failure();
  return c ? c->id + ": " + c->witness : "";
}

// Objects with carrier at most 2 sampled over the fiber, plus Delta objects.
template <class Cat>
std::vector<typename Cat::Object> small_objects(const Cat& cat) {
  auto out = sample_objects(cat, 1, 3);
  auto two = sample_objects(cat, 2, 3);
  out.insert(out.end(), two.begin(), two.end());
  out.push_back(cat.delta(2));
  return out;
}

}  // namespace

TEST(PerCategory, IdentityIsAMorphism) {
  HeytingFiber f = chain3();
  HCat cat(f);
  for (const auto& a : small_objects(cat)) {
    ASSERT_TRUE(cat.is_object(a));
    EXPECT_TRUE(cat.is_morphism(cat.identity(a)));
  }
}

TEST(PerCategory, MultivaluedRelationIsRejected) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto d2 = cat.delta(2);
  HCat::Morphism m{d2, d2, cat.fiber().top(4)};
  auto v = cat.morphism_violation(m);
  ASSERT_TRUE(v.has_value());
  EXPECT_NE(v->find("singval"), std::string::npos) << *v;
}

TEST(PerCategory, IdentityIsNeutralAndCompositionAssociates) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto d1 = cat.delta(1), d2 = cat.delta(2);
  auto hs = cat.hom(d2, d2);
  ASSERT_FALSE(hs.empty());
  for (const auto& m : hs) {
    EXPECT_TRUE(cat.equal(cat.compose(cat.identity(d2), m), m));
    EXPECT_TRUE(cat.equal(cat.compose(m, cat.identity(d2)), m));
  }
  auto into = cat.hom(d1, d2);
  for (const auto& a : into)
    for (const auto& b : hs)
      for (const auto& c : hs) {
        auto left = cat.compose(cat.compose(a, b), c), right = cat.compose(a, cat.compose(b, c));
        ASSERT_TRUE(cat.equal(left, right));
      }
}

TEST(PerCategory, DeltaIsFullAndFaithful) {
  HeytingFiber f = chain3();
  HCat cat(f);
  for (std::size_t m = 0; m <= 2; ++m)
    for (std::size_t n = 0; n <= 2; ++n) {
      std::size_t expected = 1;
      for (std::size_t k = 0; k < m; ++k) expected *= n;
      EXPECT_EQ(cat.hom(cat.delta(m), cat.delta(n)).size(), expected) << m << "->" << n;
    }
}

TEST(PerCategory, ProductWithTerminalProjectsIsomorphically) {
  HeytingFiber f = chain3();
  HCat cat(f);
  for (const auto& a : small_objects(cat)) {
    auto p = cat.product(a, cat.terminal());
    EXPECT_TRUE(cat.is_morphism(p.p1));
    EXPECT_TRUE(cat.is_iso(p.p1)) << cat.describe(a);
  }
}

TEST(PerCategory, ProductMediatorIsUnique) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto x = cat.delta(1);
  auto objs = sample_objects(cat, 2, 3);
  objs.push_back(cat.delta(2));
  for (const auto& a : objs)
    for (const auto& b : {cat.delta(1), cat.delta(2)}) {
      auto p = cat.product(a, b);
      auto pairs = cat.hom(x, p.obj);
      for (const auto& g : cat.hom(x, a))
        for (const auto& h : cat.hom(x, b)) {
          std::size_t found = 0;
          for (const auto& k : pairs)
            if (cat.equal(cat.compose(k, p.p1), g) && cat.equal(cat.compose(k, p.p2), h)) {
              ++found;
              EXPECT_TRUE(cat.equal(k, cat.pair(p, g, h)));
            }
          EXPECT_EQ(found, 1u);
        }
    }
}

TEST(PerCategory, EqualizerOfEqualMapsIsIso) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto d2 = cat.delta(2);
  for (const auto& m : cat.hom(d2, d2)) {
    auto e = cat.equalizer(m, m);
    EXPECT_TRUE(cat.is_iso(e.incl));
  }
}

TEST(PerCategory, FactorizationRecomposes) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto objs = small_objects(cat);
  for (const auto& a : objs)
    for (const auto& b : {cat.delta(2), objs[1]})
      for (const auto& m : cat.hom(a, b)) {
        auto fz = cat.factorize(m);
        EXPECT_TRUE(cat.is_surj(fz.cover));
        EXPECT_TRUE(cat.is_iso(fz.iso));
        EXPECT_TRUE(cat.is_inj(fz.mono));
        EXPECT_TRUE(cat.equal(cat.compose(cat.compose(fz.cover, fz.iso), fz.mono), m));
      }
}

TEST(PerCategory, MonoFactorsThroughIsoCover) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto m = cat.delta_map(FinFun(3, {0, 2}));
  ASSERT_TRUE(cat.is_inj(m));
  EXPECT_FALSE(cat.is_surj(m));
  EXPECT_TRUE(cat.is_iso(cat.factorize(m).cover));
}

TEST(PerCategory, DeltaOfSurjectionIsCover) {
  HeytingFiber f = chain3();
  HCat cat(f);
  for_each_function(3, 2, [&](const FinFun& g) {
    bool onto = true;
    for (std::size_t k = 0; k < 2; ++k) onto = onto && std::find(g.table.begin(), g.table.end(), k) != g.table.end();
    EXPECT_EQ(cat.is_surj(cat.delta_map(g)), onto);
    return true;
  });
}

TEST(PerCategory, SubobjectsNeedStrictPredicates) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto a = sample_objects(cat, 2, 3).back();
  EXPECT_TRUE(cat.is_iso(cat.subobject(a, cat.ex(a))));
  HCat::Object half{2, cat.fiber().constant(4, 1)};
  half.rho.v = {1, 0, 0, 1};
  ASSERT_TRUE(cat.is_object(half));
  HCat::Pred loose{{2, 2}};
  EXPECT_TRUE(cat.strict_violation(half, loose).has_value());
  EXPECT_THROW(cat.subobject(half, loose), std::invalid_argument);
}

TEST(PerCategory, QuotientByOwnEqualityIsIso) {
  HeytingFiber f = chain3();
  HCat cat(f);
  for (const auto& a : small_objects(cat)) {
    ASSERT_FALSE(cat.quotient_violation(a, a.rho).has_value());
    EXPECT_TRUE(cat.is_iso(cat.quotient(a, a.rho)));
  }
}

TEST(PerCategory, KernelPairOfQuotientRecoversRelation) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto d2 = cat.delta(2);
  HCat::Pred all = cat.fiber().top(4);
  ASSERT_FALSE(cat.quotient_violation(d2, all).has_value());
  auto q = cat.quotient(d2, all);
  EXPECT_TRUE(cat.is_surj(q));
  EXPECT_FALSE(cat.is_inj(q));
  EXPECT_EQ(cat.kernel_pair(q), all);
  EXPECT_EQ(cat.Pi(q.dst).count, 1u);
}

TEST(PerCategory, GlobalSectionsOfDelta) {
  HeytingFiber f = chain3();
  HCat cat(f);
  for (std::size_t m = 0; m <= 3; ++m) EXPECT_EQ(cat.global_sections(cat.delta(m)).size(), m);
  HCat::Object empty{2, cat.fiber().bottom(4)};
  EXPECT_TRUE(cat.global_sections(empty).empty());
}

TEST(PerCategory, AssemblyOfTopIsDelta) {
  HeytingFiber f = chain3();
  HCat cat(f);
  for (std::size_t m = 0; m <= 3; ++m) EXPECT_EQ(cat.assembly(cat.fiber().top(m)).rho, cat.delta(m).rho);
}

TEST(PerCategory, AssembliesAreSeparatedWithPiTheSupport) {
  HeytingFiber f = chain3();
  HCat cat(f);
  f.for_each_pred(3, [&](const HPred& phi) {
    auto a = cat.assembly(phi);
    EXPECT_TRUE(cat.is_object(a));
    auto supp = f.support(phi);
    EXPECT_EQ(cat.Pi(a).count, static_cast<std::size_t>(std::count(supp.begin(), supp.end(), true)));
    EXPECT_TRUE(cat.is_iso(cat.separated_reflection(a)));
    return true;
  });
}

TEST(PerCategory, PiPreservesProducts) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto objs = small_objects(cat);
  for (const auto& a : objs)
    for (const auto& b : objs)
      EXPECT_EQ(cat.Pi(cat.product(a, b).obj).count, cat.Pi(a).count * cat.Pi(b).count);
}

TEST(PerCategory, DeltaSubsetPreservesBottomAndImplication) {
  HeytingFiber f = chain3();
  for (std::size_t n = 0; n <= 3; ++n) {
    EXPECT_EQ(delta_subset(f, std::vector<bool>(n, false)), f.bottom(n));
    for (unsigned u = 0; u < (1u << n); ++u)
      for (unsigned v = 0; v < (1u << n); ++v) {
        std::vector<bool> U(n), V(n), imp(n);
        for (std::size_t k = 0; k < n; ++k) {
          U[k] = u >> k & 1;
          V[k] = v >> k & 1;
          imp[k] = !U[k] || V[k];
        }
        EXPECT_EQ(delta_subset(f, imp), f.implies(delta_subset(f, U), delta_subset(f, V)));
      }
  }
}

TEST(PerCategory, TrackingRoundTrip) {
  DFiber f = heyting_d_fiber(HeytingAlgebra::chain(2));
  DCat cat(f);
  auto d2 = cat.delta(2);
  auto maps = cat.hom(d2, d2);
  ASSERT_EQ(maps.size(), 4u);
  for (const auto& m : maps) {
    auto t = cat.tracking(m);
    ASSERT_TRUE(t.has_value());
    EXPECT_TRUE(cat.tracks(m, *t));
    EXPECT_TRUE(cat.equal(cat.from_tracking(d2, d2, *t), m));
  }
}

TEST(PerCategory, PrimeNormalizationIsIsomorphic) {
  HeytingFiber f(HeytingAlgebra::boolean(2));
  HCat cat(f);
  for (const auto& a : small_objects(cat)) {
    auto n = prime_normalize(cat, a);
    ASSERT_TRUE(cat.is_object(n.obj));
    EXPECT_TRUE(cat.is_iso(n.iso)) << cat.describe(a);
    for (auto x : cat.ex(n.obj).v)
      EXPECT_TRUE(x == f.algebra().bot || f.algebra().is_join_prime(x));
  }
}

TEST(Exponential, DeltaTwoToDeltaTwoHasFourGlobalSections) {
  DFiber f = heyting_d_fiber(HeytingAlgebra::chain(1));
  DCat cat(f);
  auto e = exponential(cat, cat.delta(2), cat.delta(2));
  ASSERT_TRUE(cat.is_object(e.obj));
  EXPECT_TRUE(cat.is_morphism(e.eval));
  EXPECT_EQ(cat.Pi(e.obj).count, 4u);
  auto gs = cat.global_sections(e.obj);
  std::vector<DCat::Morphism> distinct;
  for (const auto& g : gs) {
    bool seen = false;
    for (const auto& d : distinct) seen = seen || cat.equal(g, d);
    if (!seen) distinct.push_back(g);
  }
  EXPECT_EQ(distinct.size(), 4u);
}

TEST(Exponential, TransposeInvertsUncurry) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto d2 = cat.delta(2);
  auto e = exponential(cat, d2, d2);
  for (const auto& a : {cat.delta(1), d2}) {
    auto prod = cat.product(a, d2);
    for (const auto& m : cat.hom(prod.obj, d2)) {
      auto h = transpose(cat, e, a, m);
      ASSERT_TRUE(h.has_value());
      EXPECT_TRUE(cat.equal(uncurry(cat, e, a, *h), m));
    }
  }
}

TEST(Exponential, CarrierBoundIsEnforced) {
  HeytingFiber f = chain3();
  HCat cat(f);
  EXPECT_THROW(exponential(cat, cat.delta(4), cat.delta(2)), std::invalid_argument);
  EXPECT_THROW(exponential(cat, cat.delta(2), cat.delta(2), 1), std::invalid_argument);
}

TEST(ToposAudit, HeytingFiberPassesEveryAudit) {
  HeytingFiber f = chain3();
  HCat cat(f);
  auto o1 = sample_objects(cat, 1, 3), o2 = sample_objects(cat, 2, 3);
  auto objs = o1;
  objs.insert(objs.end(), o2.begin(), o2.end());
  Report r = category_audit(cat, objs);
  r.merge(limits_audit(cat, o1, o2));
  r.merge(factorization_audit(cat, objs));
  r.merge(exactness_audit(cat, objs));
  r.merge(delta_audit(cat, 3));
  r.merge(reconstruction_audit(cat, 3, 2));
  r.merge(total_connectedness_audit(f, 3, 2));
  r.merge(notnot_audit(cat, 3, objs));
  r.merge(assemblies_audit(cat, 2));
  r.merge(exponential_audit(cat, cat.delta(2), cat.delta(2), cat.delta(2)));
  EXPECT_TRUE(r.all_pass()) << first_bad(r);
}

TEST(ToposAudit, DFiberPassesEveryAudit) {
  DFiber f = heyting_d_fiber(HeytingAlgebra::chain(2));
  DCat cat(f);
  auto o1 = sample_objects(cat, 1, 3), o2 = sample_objects(cat, 2, 3);
  auto objs = o1;
  objs.push_back(o2[0]);
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
  EXPECT_TRUE(r.all_pass()) << first_bad(r);
  EXPECT_NE(exponential_audit(cat, cat.delta(2), cat.delta(2), cat.delta(2)).overall(), Verdict::Fail);
}

TEST(ToposAudit, TotalConnectednessFailsWhenTopIsAJoin) {
  HeytingFiber f(HeytingAlgebra::boolean(2));
  EXPECT_EQ(total_connectedness_audit(f, 2, 2).overall(), Verdict::Fail);
}
