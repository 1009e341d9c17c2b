#include <gtest/gtest.h>

#include <random>

#include "gapjohn/covering.hpp"
#include "gapjohn/errors.hpp"

using namespace gapjohn;

namespace {

CosetProgression gap1(const AmbientGroup& g, std::vector<Rational> dims, std::vector<std::int64_t> steps) {
  Gap gp;
  gp.dims = std::move(dims);
  for (auto s : steps) gp.steps.push_back(g.element({s}));
  return CosetProgression(g, gp);
}

// Union of x + tile over translates, built directly.
FiniteSet cover_union(const std::vector<GroupElement>& xs, const FiniteSet& tile) {
  const AmbientGroup& g = tile.group();
  std::vector<GroupElement> out;
  for (const auto& x : xs)
    for (const auto& s : tile) out.push_back(g.add(x, s));
  return FiniteSet(g, out);
}

}  // namespace

TEST(DoublingCover, IntervalExample) {
  auto z = AmbientGroup::integers();
  auto p = gap1(z, {1}, {1});
  auto c = doubling_cover(p, 3);
  // [-3,3] by translates of [-1,1].
  EXPECT_EQ(c.count, 3u);
  EXPECT_EQ(c.bound, 13);
  EXPECT_TRUE(c.within_bound);
  EXPECT_TRUE(image(p, 3).is_subset_of(cover_union(c.translates, image(p))));
  EXPECT_EQ(doubling_cover(p, 1).count, 1u);
}

TEST(DoublingCover, Box) {
  auto z = AmbientGroup::integers(2);
  Gap gp{{2, 1}, {z.element({1, 0}), z.element({0, 1})}};
  CosetProgression p(z, gp);
  auto c = doubling_cover(p, 2);
  EXPECT_LE(c.count, 81u);
  EXPECT_TRUE(c.within_bound);
  EXPECT_TRUE(c.size_inequality_holds.value_or(false));
  EXPECT_TRUE(image(p, 2).is_subset_of(cover_union(c.translates, image(p))));
}

TEST(DoublingCover, RequiresTAtLeastOne) {
  auto z = AmbientGroup::integers();
  EXPECT_THROW(doubling_cover(gap1(z, {1}, {1}), Rational(1, 2)), PreconditionError);
}

TEST(DoublingCover, RandomWithinBound) {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> dim(1, 3), coord(-5, 5), rank(1, 2), tt(1, 3);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = trial % 2 ? AmbientGroup::integers() : AmbientGroup::cyclic(17);
    Gap gp;
    for (int i = rank(rng); i > 0; --i) {
      gp.dims.push_back(dim(rng));
      gp.steps.push_back(g.element({coord(rng)}));
    }
    CosetProgression p(g, gp);
    const Rational t = tt(rng);
    auto c = doubling_cover(p, t);
    EXPECT_TRUE(c.within_bound);
    EXPECT_TRUE(image(p, t).is_subset_of(cover_union(c.translates, image(p))));
  }
}

TEST(RuzsaCover, SameProgression) {
  auto z = AmbientGroup::integers();
  auto p = gap1(z, {2}, {1});
  auto c = ruzsa_cover(p, p, 1, 3);
  EXPECT_EQ(c.covering_set, "Image(Q_2)");
  EXPECT_TRUE(c.within_bound);
  EXPECT_TRUE(image(p, 3).is_subset_of(cover_union(c.translates, image(p, 2))));
}

TEST(RuzsaCover, RankZeroQ) {
  auto z = AmbientGroup::integers();
  auto p = gap1(z, {3}, {1});
  CosetProgression q(z, Gap{});
  auto c = ruzsa_cover(p, q, 1, 1);
  // Q = {0}: one translate per point of the target.
  EXPECT_EQ(c.count, image(p).size());
  EXPECT_TRUE(c.within_bound);
}

TEST(RuzsaCover, SmallerInterval) {
  auto z = AmbientGroup::integers();
  auto p = gap1(z, {10}, {1});
  auto q = gap1(z, {2}, {1});
  auto c = ruzsa_cover(p, q, 1, 1);
  // Disjoint 5-element blocks in [-10,10] lie in [-12,12]: at most 25/5.
  EXPECT_LE(c.count, 5u);
  EXPECT_TRUE(c.within_bound);
  EXPECT_TRUE(image(p).is_subset_of(cover_union(c.translates, image(q, 2))));
}

TEST(RuzsaCover, QMustLieInPt) {
  auto z = AmbientGroup::integers();
  EXPECT_THROW(ruzsa_cover(gap1(z, {1}, {1}), gap1(z, {5}, {1}), 1, 1), PreconditionError);
}
