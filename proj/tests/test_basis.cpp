#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "strat/basis.hpp"
#include "strat/quadrature.hpp"

using namespace strat;

TEST(Interval, RejectsEmptyOrReversed) {
  EXPECT_THROW(Interval(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Interval(2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Interval(0.0, INFINITY), std::invalid_argument);
  const Interval iv(2.5, 3.75);
  EXPECT_DOUBLE_EQ(iv.length(), 1.25);
  EXPECT_TRUE(iv.contains(2.5));
  EXPECT_TRUE(iv.contains(3.75));
  EXPECT_FALSE(iv.contains(3.76));
}

TEST(Basis, ParsesNames) {
  EXPECT_EQ(parse_basis("legendre"), BasisKind::legendre);
  EXPECT_EQ(parse_basis("trigonometric"), BasisKind::trigonometric);
  EXPECT_EQ(parse_basis("trig"), BasisKind::trigonometric);
  EXPECT_FALSE(parse_basis("fourier").has_value());
}

TEST(Basis, LegendrePolynomialValues) {
  EXPECT_DOUBLE_EQ(legendre_p(2, 0.5), -0.125);
  EXPECT_DOUBLE_EQ(legendre_p(3, 0.5), -0.4375);
  for (int n = 0; n <= 20; ++n) EXPECT_NEAR(legendre_p(n, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(legendre_p(5, -1.0), -1.0, 1e-14);
}

TEST(Basis, DocumentedValues) {
  EXPECT_DOUBLE_EQ(eval_phi(BasisKind::legendre, 0, 0.37, Interval(0, 1)), 1.0);
  EXPECT_NEAR(eval_phi(BasisKind::legendre, 1, 1.0, Interval(0, 2)), 0.0, 1e-15);
  EXPECT_NEAR(eval_phi(BasisKind::trigonometric, 1, 0.0, Interval(0, 1)), 0.0, 1e-15);
  // P_2(1) = 1 evaluated directly: (3x^2 - 1)/2 at x = 1.
  const double p2_at_one = (3.0 * 1.0 * 1.0 - 1.0) / 2.0;
  EXPECT_NEAR(eval_phi(BasisKind::legendre, 2, 1.0, Interval(0, 1)), std::sqrt(5.0) * p2_at_one, 1e-14);
}

TEST(Basis, TrigonometricConvention) {
  const Interval iv(0.0, 2.0);
  const double x = 0.3;
  EXPECT_NEAR(eval_phi(BasisKind::trigonometric, 0, x, iv), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(eval_phi(BasisKind::trigonometric, 3, x, iv), std::sin(2.0 * M_PI * 2.0 * x / 2.0), 1e-14);
  EXPECT_NEAR(eval_phi(BasisKind::trigonometric, 4, x, iv), std::cos(2.0 * M_PI * 2.0 * x / 2.0), 1e-14);
}

TEST(Basis, ErrorCases) {
  EXPECT_THROW(eval_phi(BasisKind::legendre, -1, 0.5, Interval(0, 1)), std::invalid_argument);
  EXPECT_THROW(eval_phi(BasisKind::legendre, 0, 1.5, Interval(0, 1)), std::domain_error);
  EXPECT_THROW(eval_phi(BasisKind::trigonometric, 2, -0.1, Interval(0, 1)), std::domain_error);
}

TEST(Basis, VectorEvaluationMatchesScalar) {
  const Interval iv(2.5, 3.75);
  for (BasisKind kind : {BasisKind::legendre, BasisKind::trigonometric}) {
    for (double x : {2.5, 2.9, 3.1, 3.75}) {
      const Eigen::VectorXd all = eval_phi_all(kind, 25, x, iv);
      for (int j = 0; j <= 25; ++j) EXPECT_EQ(all[j], eval_phi(kind, j, x, iv)) << j;
    }
  }
}

TEST(Basis, Orthonormality) {
  constexpr int max_j = 20;
  for (const Interval& iv : {Interval(0, 1), Interval(-1.0, 2.5)}) {
    for (BasisKind kind : {BasisKind::legendre, BasisKind::trigonometric}) {
      // Legendre products have degree <= 40; the trigonometric rule has 256 nodes.
      const auto rule = kind == BasisKind::legendre
                            ? gauss_rule(max_j + 1, iv)
                            : composite_rule(gauss_legendre_reference<double>(16), 16, iv.start(), iv.end());
      for (int i = 0; i <= max_j; ++i) {
        for (int j = 0; j <= max_j; ++j) {
          const double g = rule.integrate([&](double x) { return eval_phi(kind, i, x, iv) * eval_phi(kind, j, x, iv); });
          EXPECT_NEAR(g, i == j ? 1.0 : 0.0, 1e-10) << i << "," << j;
        }
      }
    }
  }
}

TEST(Basis, AffineInvariance) {
  const Interval iv(1.5, 4.0);
  const Interval unit(0.0, 1.0);
  for (BasisKind kind : {BasisKind::legendre, BasisKind::trigonometric}) {
    for (int j = 0; j <= 20; ++j) {
      for (double x : {1.5, 2.0, 3.3, 4.0}) {
        const double expected = eval_phi(kind, j, (x - iv.start()) / iv.length(), unit) / std::sqrt(iv.length());
        const double got = eval_phi(kind, j, x, iv);
        EXPECT_NEAR(got, expected, 1e-12 * std::max(1.0, std::abs(expected))) << j << " " << x;
      }
    }
  }
}

TEST(Basis, LegendreEndpointValue) {
  const Interval iv(-0.5, 0.7);
  for (int j = 0; j <= 20; ++j) {
    const double expected = std::sqrt((2.0 * j + 1.0) / iv.length());
    EXPECT_NEAR(eval_phi(BasisKind::legendre, j, iv.end(), iv), expected, 1e-12 * expected);
  }
}
