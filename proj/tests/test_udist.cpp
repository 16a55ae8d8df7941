#include <gtest/gtest.h>

#include "realiz/udist.hpp"
#include "support.hpp"

using namespace realiz;

namespace {

// Adds the missing composites until the base family is closed on both sides.
Distributor close(Distributor d) {
  while (distributor_violation(d))
    for (std::size_t j = 0; j < d.dst.num_sorts(); ++j)
      for (std::size_t i = 0; i < d.src.num_sorts(); ++i) {
        auto bases = d.at(j, i);
        for (const auto& h : bases) {
          for (std::size_t i2 = 0; i2 < d.src.num_sorts(); ++i2)
            for (const auto& r : d.src.bases(i, i2)) d.add(j, i2, compose(h, r));
          for (std::size_t j2 = 0; j2 < d.dst.num_sorts(); ++j2)
            for (const auto& s : d.dst.bases(j2, j)) d.add(j2, i, compose(s, h));
        }
      }
  return d;
}

Distributor random_dist(std::mt19937_64& rng, const UOrd& a, const UOrd& b, std::size_t seeds = 2) {
  Distributor d(a, b);
  for (std::size_t k = 0; k < seeds; ++k) d.add(0, 0, realiz::testing::random_rel(rng, b.size(0), a.size(0)));
  return close(d);
}

std::vector<UOrd> small_uords() {
  return {chain(1), chain(2), chain(3), discrete(FinSet::range("D", 2)),
          from_preorder(FinSet::range("V", 3), Rel::identity(3) | Rel::graph(FinFun(3, {2, 2, 2})))};
}

std::vector<MonotoneMap> monotone_maps(const UOrd& a, const UOrd& b) {
  std::vector<MonotoneMap> out;
  for_each_function(a.size(0), b.size(0), [&](const FinFun& g) {
    MonotoneMap m{{0}, {g}};
    if (is_monotone(a, b, m)) out.push_back(m);
    return true;
  });
  return out;
}

MonotoneMap then(const MonotoneMap& f, const MonotoneMap& g) {
  MonotoneMap h;
  for (std::size_t i = 0; i < f.sort_map.size(); ++i) {
    const FinFun& gi = g.fns[f.sort_map[i]];
    std::vector<std::size_t> t;
    for (auto x : f.fns[i].table) t.push_back(gi(x));
    h.sort_map.push_back(g.sort_map[f.sort_map[i]]);
    h.fns.emplace_back(gi.dst_size, t);
  }
  return h;
}

Predicate pred(std::size_t sort, std::vector<std::size_t> v) { return {sort, std::move(v)}; }

// Whether the indexed action of g is contained in that of h on index sets up to max_m.
bool action_below(const Distributor& g, const Distributor& h, std::size_t max_m) {
  const std::size_t B = g.dst.size(0), A = g.src.size(0);
  for (std::size_t m = 0; m <= max_m; ++m) {
    bool ok = true;
    for_each_function(m, B, [&](const FinFun& psi) {
      for_each_function(m, A, [&](const FinFun& phi) {
        if (ufam_dist(g, pred(0, psi.table), pred(0, phi.table)) && !ufam_dist(h, pred(0, psi.table), pred(0, phi.table)))
          ok = false;
        return ok;
      });
      return ok;
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace

TEST(Distributor, IdentityIsClosedAndNeutral) {
  std::mt19937_64 rng(7);
  for (const auto& a : small_uords()) {
    EXPECT_FALSE(distributor_violation(identity_dist(a)).has_value());
    for (const auto& b : small_uords())
      for (int k = 0; k < 3; ++k) {
        Distributor g = random_dist(rng, a, b);
        ASSERT_FALSE(distributor_violation(g).has_value());
        EXPECT_TRUE(dist_equiv(dist_compose(identity_dist(a), g), g));
        EXPECT_TRUE(dist_equiv(dist_compose(g, identity_dist(b)), g));
      }
  }
}

TEST(Distributor, UnclosedFamilyIsReported) {
  Distributor d(chain(2), chain(2));
  Rel r(2, 2);
  r.set(1, 0);
  d.add(0, 0, r);
  auto v = distributor_violation(d);
  ASSERT_TRUE(v.has_value());
  EXPECT_NE(v->find("leaves the component"), std::string::npos);
}

TEST(Distributor, WrongShapeThrows) {
  Distributor d(chain(2), chain(3));
  EXPECT_THROW(d.add(0, 0, Rel(2, 3)), std::invalid_argument);
  EXPECT_THROW(dist_compose(d, identity_dist(chain(2))), std::invalid_argument);
}

TEST(Distributor, CompositionAssociates) {
  std::mt19937_64 rng(11);
  auto us = small_uords();
  for (int k = 0; k < 60; ++k) {
    const UOrd &a = us[rng() % us.size()], &b = us[rng() % us.size()], &c = us[rng() % us.size()],
               &d = us[rng() % us.size()];
    Distributor g = random_dist(rng, a, b), h = random_dist(rng, b, c), l = random_dist(rng, c, d);
    Distributor left = dist_compose(dist_compose(g, h), l), right = dist_compose(g, dist_compose(h, l));
    EXPECT_FALSE(distributor_violation(left).has_value());
    EXPECT_TRUE(dist_equiv(left, right));
  }
}

TEST(Distributor, OrderIsAPreorderAndCompositionIsMonotone) {
  std::mt19937_64 rng(13);
  UOrd a = chain(2), b = chain(3);
  std::vector<Distributor> ds;
  for (int k = 0; k < 12; ++k) ds.push_back(random_dist(rng, a, b, 1 + k % 3));
  for (const auto& g : ds) {
    EXPECT_TRUE(dist_leq(g, g));
    for (const auto& h : ds)
      for (const auto& l : ds)
        if (dist_leq(g, h) && dist_leq(h, l)) {
          EXPECT_TRUE(dist_leq(g, l));
        }
  }
  Distributor post = random_dist(rng, b, a);
  for (const auto& g : ds)
    for (const auto& h : ds)
      if (dist_leq(g, h)) {
        EXPECT_TRUE(dist_leq(dist_compose(g, post), dist_compose(h, post)));
        EXPECT_TRUE(dist_leq(dist_compose(post, g), dist_compose(post, h)));
      }
}

TEST(Distributor, CompanionOfIdentityIsIdentity) {
  for (const auto& a : small_uords()) {
    auto id = MonotoneMap::identity(a);
    EXPECT_TRUE(dist_equiv(companion(a, a, id), identity_dist(a)));
    EXPECT_TRUE(dist_equiv(conjoint(a, a, id), identity_dist(a)));
  }
}

TEST(Distributor, CompanionsCompose) {
  auto us = small_uords();
  for (const auto& a : us)
    for (const auto& b : us)
      for (const auto& c : {chain(2), chain(3)})
        for (const auto& f : monotone_maps(a, b))
          for (const auto& g : monotone_maps(b, c)) {
            Distributor two = dist_compose(companion(a, b, f), companion(b, c, g));
            ASSERT_TRUE(dist_equiv(two, companion(a, c, then(f, g))));
            Distributor back = dist_compose(conjoint(b, c, g), conjoint(a, b, f));
            ASSERT_TRUE(dist_equiv(back, conjoint(a, c, then(f, g))));
          }
}

TEST(Distributor, CompanionIsLeftAdjointToConjoint) {
  std::size_t maps = 0;
  for (const auto& a : small_uords())
    for (const auto& b : small_uords())
      for (const auto& f : monotone_maps(a, b)) {
        Distributor g = companion(a, b, f), h = conjoint(a, b, f);
        EXPECT_FALSE(distributor_violation(g).has_value());
        EXPECT_FALSE(distributor_violation(h).has_value());
        Report r = adjunction_audit(g, h);
        EXPECT_TRUE(r.all_pass()) << r.first_failure()->witness;
        ++maps;
      }
  EXPECT_GT(maps, 50u);
}

TEST(Distributor, NonMonotoneMapIsRefusedAndBreaksAdjunction) {
  UOrd a = chain(2);
  MonotoneMap swap{{0}, {FinFun(2, {1, 0})}};
  EXPECT_TRUE(monotone_violation(a, a, swap).has_value());
  EXPECT_FALSE(adjunction_audit(companion(a, a, swap), conjoint(a, a, swap)).all_pass());
}

TEST(Distributor, ProductWithOnePointIdentity) {
  std::mt19937_64 rng(17);
  UOrd one = chain(1);
  for (const auto& a : small_uords())
    for (const auto& b : {chain(2), chain(3)}) {
      Distributor g = random_dist(rng, a, b);
      Distributor p = dist_product(g, identity_dist(one));
      EXPECT_FALSE(distributor_violation(p).has_value());
      Distributor back =
          dist_compose(dist_compose(detail::iso_dist(a, product({a, one})), p), detail::iso_dist(product({b, one}), b));
      EXPECT_TRUE(dist_equiv(back, g));
    }
}

TEST(Distributor, ProductBaseCountsMultiply) {
  UOrd a = chain(2), b = discrete(FinSet::range("D", 2));
  ASSERT_EQ(identity_dist(b).at(0, 0).size(), 1u);
  Distributor g2(b, b);
  Rel x(2, 2), y(2, 2);
  x.set(0, 0);
  y.set(1, 1);
  g2.add(0, 0, x);
  g2.add(0, 0, y);
  Distributor p = dist_product(g2, identity_dist(a));
  EXPECT_EQ(p.at(0, 0).size(), g2.at(0, 0).size() * identity_dist(a).at(0, 0).size());
  Distributor q = dist_product(g2, g2);
  EXPECT_EQ(q.at(0, 0).size(), 4u);
}

TEST(Distributor, ProductIsMonotone) {
  std::mt19937_64 rng(19);
  UOrd a = chain(2);
  for (int k = 0; k < 20; ++k) {
    Distributor g = random_dist(rng, a, a, 1), h = random_dist(rng, a, a, 1), l = random_dist(rng, a, a, 2);
    Distributor gh = close([&] {
      Distributor u = g;
      for (const auto& r : h.at(0, 0)) u.add(0, 0, r);
      return u;
    }());
    ASSERT_TRUE(dist_leq(g, gh));
    EXPECT_TRUE(dist_leq(dist_product(g, l), dist_product(gh, l)));
    EXPECT_TRUE(dist_leq(dist_product(l, g), dist_product(l, gh)));
  }
}

TEST(Distributor, DualityTriangles) {
  for (const auto& a : small_uords()) {
    Report r = dual_audit(a);
    EXPECT_TRUE(r.all_pass()) << a.carriers[0].name << ": " << (r.first_failure() ? r.first_failure()->witness : "");
  }
  EXPECT_TRUE(dual_audit(realiz::testing::bundled("diamond").uord).all_pass());
}

TEST(Distributor, AdjointSearchRecoversTheMap) {
  for (const auto& a : small_uords())
    for (const auto& b : small_uords())
      for (const auto& f : monotone_maps(a, b)) {
        auto s = adjoint_search(companion(a, b, f), conjoint(a, b, f));
        ASSERT_EQ(s.verdict, Verdict::Pass) << s.detail;
        ASSERT_TRUE(s.map.has_value());
        EXPECT_TRUE(dist_equiv(companion(a, b, *s.map), companion(a, b, f)));
      }
}

TEST(Distributor, AdjointSearchRejectsNonAdjointPairs) {
  UOrd a = chain(2);
  Distributor top(a, a);
  Rel all(2, 2);
  all.set(0, 0);
  all.set(0, 1);
  all.set(1, 0);
  all.set(1, 1);
  top.add(0, 0, all);
  auto s = adjoint_search(top, top);
  EXPECT_EQ(s.verdict, Verdict::Fail);
  EXPECT_FALSE(s.detail.empty());
}

TEST(Distributor, IndexedActionIsFaithfulOnSmallCarriers) {
  std::mt19937_64 rng(23);
  std::vector<UOrd> us{chain(1), chain(2), discrete(FinSet::range("D", 2))};
  std::size_t related = 0, unrelated = 0;
  for (const auto& a : us)
    for (const auto& b : us)
      for (int k = 0; k < 8; ++k) {
        Distributor g = random_dist(rng, a, b, 1 + k % 2), h = random_dist(rng, a, b, 1 + k % 2);
        bool leq = dist_leq(g, h);
        ASSERT_EQ(leq, action_below(g, h, a.size(0) * b.size(0)));
        ++(leq ? related : unrelated);
      }
  EXPECT_GT(related, 0u);
  EXPECT_GT(unrelated, 0u);
}

TEST(Distributor, OrderImpliesActionInclusionOnThreePoints) {
  std::mt19937_64 rng(29);
  for (const auto& a : {chain(3), small_uords().back()})
    for (int k = 0; k < 10; ++k) {
      Distributor g = random_dist(rng, a, a, 1), h = close([&] {
        Distributor u = g;
        u.add(0, 0, realiz::testing::random_rel(rng, 3, 3));
        return u;
      }());
      ASSERT_TRUE(dist_leq(g, h));
      EXPECT_TRUE(action_below(g, h, 2));
    }
}
