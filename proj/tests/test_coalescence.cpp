#include <gtest/gtest.h>

#include <random>

#include "gapjohn/coalescence.hpp"
#include "gapjohn/errors.hpp"
#include "gapjohn/lattice.hpp"

using namespace gapjohn;

namespace {

CosetProgression gap1(const AmbientGroup& g, std::vector<Rational> dims, std::vector<std::int64_t> steps) {
  Gap gp;
  gp.dims = std::move(dims);
  for (auto s : steps) gp.steps.push_back(g.element({s}));
  return CosetProgression(g, gp);
}

// l-fold sumset of Image(P) by repeated addition.
FiniteSet fold(const CosetProgression& p, int l) {
  const FiniteSet a = image(p);
  FiniteSet acc = a;
  for (int i = 1; i < l; ++i) acc = sumset(acc, a);
  return acc;
}

void expect_sandwich(const CosetProgression& p, int l, const CoalescenceResult& r) {
  const FiniteSet lp = fold(p, l);
  EXPECT_TRUE(image(r.q).is_subset_of(lp));
  FiniteSet kq = image(r.q);
  const FiniteSet q = kq;
  for (std::int64_t i = 1; i < r.k_factor; ++i) kq = sumset(kq, q);
  EXPECT_TRUE(lp.is_subset_of(kq));
  EXPECT_TRUE(is_proper(r.q).proper);
  EXPECT_TRUE(r.same_group);
  EXPECT_LE(r.q.rank(), p.rank());
  EXPECT_LE(r.depth, p.rank());
}

}  // namespace

TEST(Coalesce, ProperInZ) {
  auto z = AmbientGroup::integers();
  auto p = gap1(z, {1}, {1});
  auto r = coalesce(p, 10);
  EXPECT_EQ(r.q, p.dilate(10));
  EXPECT_EQ(r.k_factor, 1);
  EXPECT_EQ(r.levels.size(), 1u);
  EXPECT_EQ(r.levels[0].action, "proper");
  expect_sandwich(p, 10, r);
}

TEST(Coalesce, RankZero) {
  auto g = AmbientGroup::cyclic(6);
  CosetProgression p(g, Gap{}, subgroup_generated(FiniteSet(g, std::vector<GroupElement>{g.element({2})})));
  auto r = coalesce(p, 7);
  EXPECT_EQ(r.q, p);
  EXPECT_EQ(r.k_factor, 1);
  EXPECT_TRUE(r.k_within_bound);
}

TEST(Coalesce, CyclicSix) {
  auto g = AmbientGroup::cyclic(6);
  auto p = gap1(g, {1}, {1});
  auto r = coalesce(p, 10);
  ASSERT_FALSE(r.levels.empty());
  // 2-proper but not 4-proper.
  EXPECT_EQ(r.levels[0].k, 1);
  EXPECT_EQ(image(r.q).size(), 6u);
  EXPECT_EQ(fold(p, 10).size(), 6u);
  EXPECT_EQ(r.k_factor, 1);
  expect_sandwich(p, 10, r);
}

TEST(Coalesce, ImproperInZ) {
  auto z = AmbientGroup::integers();
  auto p = gap1(z, {2, 2}, {1, 3});
  for (int l : {1, 3, 8, 20}) {
    auto r = coalesce(p, l);
    expect_sandwich(p, l, r);
    EXPECT_TRUE(r.k_within_bound);
  }
}

TEST(Coalesce, RandomSandwiches) {
  std::mt19937 rng(51);
  std::uniform_int_distribution<int> dim(1, 3), coord(-6, 6), rank(1, 2), ll(1, 12), pick(0, 2);
  for (int trial = 0; trial < 30; ++trial) {
    AmbientGroup g;
    switch (pick(rng)) {
      case 0: g = AmbientGroup::integers(); break;
      case 1: g = AmbientGroup::cyclic(10); break;
      default: g = AmbientGroup(1, {3}); break;
    }
    Gap gp;
    for (int i = rank(rng); i > 0; --i) {
      gp.dims.push_back(dim(rng));
      std::vector<std::int64_t> c(g.arity());
      for (auto& x : c) x = coord(rng);
      gp.steps.push_back(g.element(c));
    }
    CosetProgression p(g, gp);
    const int l = ll(rng);
    auto r = coalesce(p, l);
    expect_sandwich(p, l, r);
  }
}

TEST(SubgroupLattice, Equality) {
  auto z = AmbientGroup::integers();
  EXPECT_TRUE(same_subgroup(z, {z.element({2}), z.element({3})}, {z.element({1})}));
  EXPECT_FALSE(same_subgroup(z, {z.element({2}), z.element({4})}, {z.element({1})}));
  auto g = AmbientGroup(1, {4});
  EXPECT_TRUE(in_subgroup(g, {g.element({1, 1})}, g.element({4, 0})));
  EXPECT_FALSE(in_subgroup(g, {g.element({1, 1})}, g.element({1, 0})));
}

TEST(CoalescenceBound, SmallValues) {
  EXPECT_EQ(coalescence_bound(0), 1);
  // 16^{3/4} = 8.
  EXPECT_EQ(coalescence_bound(1), 8);
}
