#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "gapjohn/errors.hpp"
#include "gapjohn/polytope.hpp"

using namespace gapjohn;

namespace {

RationalVector vec(std::initializer_list<Rational> xs) { return RationalVector(xs); }

SymmetricPolytope random_polytope(std::mt19937& rng, std::size_t d, int extra) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> rhs(1, 4);
  std::vector<SymmetricConstraint> cs;
  for (std::size_t i = 0; i < d; ++i) {
    RationalVector a(d);
    a[i] = 1;
    cs.push_back({a, Rational(rhs(rng))});
  }
  for (int k = 0; k < extra; ++k) {
    RationalVector a(d);
    for (auto& x : a) x = coef(rng);
    if (std::all_of(a.begin(), a.end(), [](const Rational& x) { return x == 0; })) continue;
    cs.push_back({a, Rational(rhs(rng))});
  }
  return SymmetricPolytope(d, cs);
}

}  // namespace

TEST(Polytope, Membership) {
  auto box = SymmetricPolytope::cube(2);
  EXPECT_TRUE(box.contains(vec({1, 1})));
  EXPECT_FALSE(box.contains(vec({Rational(3, 2), 0})));
  auto cross = SymmetricPolytope::cross_polytope(2);
  EXPECT_FALSE(cross.contains(vec({1, 1})));
  EXPECT_TRUE(cross.contains(vec({Rational(1, 2), Rational(-1, 2)})));
}

TEST(Polytope, MembershipAgreesWithConstraintScan) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> c(-8, 8);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<SymmetricConstraint> raw;
    for (int k = 0; k < 4; ++k) raw.push_back({vec({c(rng), c(rng)}), Rational(1 + trial % 5)});
    raw.push_back({vec({1, 0}), 3});
    raw.push_back({vec({0, 1}), 3});
    SymmetricPolytope b(2, raw);
    for (int s = 0; s < 20; ++s) {
      RationalVector x = vec({fraction(c(rng), 3), fraction(c(rng), 3)});
      bool expect = true;
      for (const auto& con : raw) {
        Rational v = dot(con.a, x);
        if (v > con.b || -v > con.b) expect = false;
      }
      EXPECT_EQ(b.contains(x), expect);
      RationalVector nx = x;
      for (auto& y : nx) y = -y;
      EXPECT_EQ(b.contains(nx), b.contains(x));
    }
  }
}

TEST(Polytope, Unbounded) {
  EXPECT_THROW(SymmetricPolytope(2, {{vec({1, 0}), 1}}), PreconditionError);
  EXPECT_THROW(SymmetricPolytope(1, {{vec({1}), 0}}), PreconditionError);
}

TEST(Polytope, DilateTransform) {
  EXPECT_EQ(SymmetricPolytope::cube(2).dilate(2), SymmetricPolytope::cube(2, 2));
  auto b = SymmetricPolytope::cross_polytope(2);
  EXPECT_EQ(b.transform(RationalMatrix::identity(2)), b);
  EXPECT_THROW(b.transform(RationalMatrix(2, 2)), PreconditionError);
}

TEST(Polytope, TransformMapsVertices) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto b = random_polytope(rng, 2, 2);
    RationalMatrix u(2, 2);
    u(0, 0) = 2;
    u(0, 1) = 1;
    u(1, 0) = trial % 3;
    u(1, 1) = 3;
    auto tb = b.transform(u);
    std::vector<RationalVector> mapped;
    for (const auto& v : b.vertices()) mapped.push_back(u * v);
    auto got = tb.vertices();
    std::sort(mapped.begin(), mapped.end());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(mapped, got);
    EXPECT_EQ(tb.volume(), b.volume() * abs(determinant(u)));
  }
}

TEST(Polytope, Projection) {
  EXPECT_EQ(SymmetricPolytope::cube(2).project(), SymmetricPolytope::cube(1));
  EXPECT_EQ(SymmetricPolytope::cross_polytope(2).project(), SymmetricPolytope::cube(1));
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto b = random_polytope(rng, 2 + trial % 3, 3);
    EXPECT_EQ(b.dilate(Rational(5, 3)).project(), b.project().dilate(Rational(5, 3)));
    // Every projected vertex lies in the shadow and every shadow vertex is
    // the projection of some vertex of b.
    auto shadow = b.project();
    std::vector<RationalVector> dropped;
    for (const auto& v : b.vertices()) {
      RationalVector w(v.begin(), v.end() - 1);
      EXPECT_TRUE(shadow.contains(w));
      dropped.push_back(w);
    }
    for (const auto& w : shadow.vertices()) {
      EXPECT_NE(std::find(dropped.begin(), dropped.end(), w), dropped.end());
    }
  }
}

TEST(Polytope, Volume) {
  for (std::size_t d = 1; d <= 4; ++d) EXPECT_EQ(SymmetricPolytope::cube(d).volume(), Rational(1 << d));
  EXPECT_EQ(SymmetricPolytope::cross_polytope(2).volume(), 2);
  EXPECT_EQ(SymmetricPolytope::cross_polytope(3).volume(), Rational(4, 3));
  EXPECT_THROW(SymmetricPolytope::cube(5).volume(), PreconditionError);
}

TEST(Polytope, VolumeMatchesMonteCarlo) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    auto b = random_polytope(rng, 3, 3);
    auto box = b.bounding_box();
    std::vector<double> w;
    double box_vol = 1;
    for (const auto& x : box) {
      w.push_back(x.get_d());
      box_vol *= 2 * x.get_d();
    }
    std::uniform_real_distribution<double> u(-1, 1);
    const int samples = 1'000'000;
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
      bool in = true;
      double x[3] = {u(rng) * w[0], u(rng) * w[1], u(rng) * w[2]};
      for (const auto& c : b.constraints()) {
        double v = c.a[0].get_d() * x[0] + c.a[1].get_d() * x[1] + c.a[2].get_d() * x[2];
        if (std::abs(v) > c.b.get_d()) {
          in = false;
          break;
        }
      }
      hits += in;
    }
    const double est = box_vol * hits / samples;
    EXPECT_NEAR(est / b.volume().get_d(), 1.0, 0.01);
  }
}

TEST(Ellipsoid, SquareGivesDisk) {
  const double eps = 0.01;
  auto e = inscribed_ellipsoid(SymmetricPolytope::cube(2), eps);
  EXPECT_NEAR(e.shape(0, 0).get_d(), 1.0, 0.05);
  EXPECT_NEAR(e.shape(0, 1).get_d(), 0.0, 0.02);
  EXPECT_LE(e.rho, (1 + eps) * std::sqrt(2.0));
  EXPECT_TRUE(e.within_contract);
}

TEST(Ellipsoid, InclusionsExactOnRandomBodies) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t d = 1 + trial % 3;
    auto b = random_polytope(rng, d, 2 + trial % 3);
    auto e = inscribed_ellipsoid(b);
    // E in B: for each facet a, max over E of <a,x> is sqrt(a^T Q^{-1} a) <= 1.
    auto qinv = inverse(e.shape);
    ASSERT_TRUE(qinv);
    for (const auto& c : b.constraints()) EXPECT_LE(bilinear(c.a, *qinv, c.a), c.b * c.b);
    // B in rho E on vertices.
    for (const auto& v : b.vertices()) EXPECT_LE(bilinear(v, e.shape, v), e.rho_squared);
  }
}
