#include <cmath>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "strat/coefficients.hpp"
#include "strat/errors.hpp"
#include "strat/quadrature.hpp"

using namespace strat;

namespace {

// Independent reference: nested Gauss rules on [t, x] for every level, built
// from eval_phi and the weight polynomials only.
double nested_gauss(BasisKind basis, const WeightSpec& spec, const Interval& iv, const std::vector<int>& j, int nodes = 40) {
  const auto ref = gauss_legendre_reference<double>(nodes);
  std::function<double(int, double)> level = [&](int l, double x) -> double {
    if (l < 0) return 1.0;
    const auto rule = map_rule(ref, iv.start(), x);
    return rule.integrate([&](double s) { return spec[l](s, iv) * eval_phi(basis, j[l], s, iv) * level(l - 1, s); });
  };
  return level(spec.multiplicity() - 1, iv.end());
}

std::vector<WeightSpec> sample_specs(int k) {
  std::vector<WeightSpec> out;
  if (k == 1) {
    for (int l = 0; l <= 3; ++l) out.push_back(WeightSpec({monomial_weight(l)}));
    out.push_back(WeightSpec({WeightPoly({0.5, -2.0, 1.0})}));
  } else if (k == 2) {
    out.push_back(WeightSpec({monomial_weight(0), monomial_weight(0)}));
    out.push_back(WeightSpec({monomial_weight(1), monomial_weight(0)}));
    out.push_back(WeightSpec({monomial_weight(0), monomial_weight(2)}));
    out.push_back(WeightSpec({WeightPoly({1.0, 1.0}), WeightPoly({0.3, 0.0, -1.0})}));
  } else {
    out.push_back(WeightSpec({monomial_weight(0), monomial_weight(0), monomial_weight(0)}));
    out.push_back(WeightSpec({monomial_weight(1), monomial_weight(0), monomial_weight(2)}));
  }
  return out;
}

void for_each_index(int k, int max_j, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  while (true) {
    f(idx);
    int l = k - 1;
    while (l >= 0 && idx[l] == max_j) idx[l--] = 0;
    if (l < 0) return;
    ++idx[l];
  }
}

const Interval kUnit(0.0, 1.0);
const Interval kShifted(2.5, 3.75);

}  // namespace

TEST(Coefficients, DocumentedLegendreValues) {
  for (const Interval& iv : {kUnit, kShifted}) {
    const double len = iv.length();
    const std::vector<int> e0 = {0}, e1 = {1}, e00 = {0, 0};
    const std::vector<int> j0 = {0}, j1 = {1}, j00 = {0, 0}, j11 = {1, 1};
    EXPECT_NEAR(compute_coeff(BasisKind::legendre, monomial_spec(e0), iv, j0), std::sqrt(len), 1e-14);
    EXPECT_NEAR(compute_coeff(BasisKind::legendre, monomial_spec(e1), iv, j0), -std::pow(len, 1.5) / 2.0, 1e-14);
    EXPECT_NEAR(compute_coeff(BasisKind::legendre, monomial_spec(e1), iv, j1), -std::pow(len, 1.5) / (2.0 * std::sqrt(3.0)), 1e-14);
    EXPECT_NEAR(compute_coeff(BasisKind::legendre, monomial_spec(e00), iv, j00), len / 2.0, 1e-14);
    EXPECT_NEAR(compute_coeff(BasisKind::legendre, monomial_spec(e00), iv, j11), 0.0, 1e-14);
  }
}

TEST(Coefficients, DocumentedTrigValue) {
  const std::vector<int> e1 = {1}, j1 = {1};
  for (const Interval& iv : {kUnit, kShifted}) {
    EXPECT_NEAR(compute_coeff(BasisKind::trigonometric, monomial_spec(e1), iv, j1),
                std::pow(iv.length(), 1.5) * std::sqrt(2.0) / (2.0 * M_PI), 1e-12);
  }
}

TEST(Coefficients, OracleEquivalenceLegendre) {
  for (int k = 1; k <= 3; ++k) {
    for (const auto& spec : sample_specs(k)) {
      for (const Interval& iv : {kUnit, kShifted}) {
        for_each_index(k, 4, [&](const std::vector<int>& j) {
          EXPECT_NEAR(compute_coeff(BasisKind::legendre, spec, iv, j), nested_gauss(BasisKind::legendre, spec, iv, j, 20), 2e-8);
        });
      }
    }
  }
}

TEST(Coefficients, OracleEquivalenceTrigonometric) {
  for (int k = 1; k <= 3; ++k) {
    for (const auto& spec : sample_specs(k)) {
      for_each_index(k, 4, [&](const std::vector<int>& j) {
        EXPECT_NEAR(compute_coeff(BasisKind::trigonometric, spec, kShifted, j),
                    nested_gauss(BasisKind::trigonometric, spec, kShifted, j, 30), 2e-8);
      });
    }
  }
}

// Tensor-product midpoint rule with the simplex indicator inside the
// integrand; the discontinuity limits it to O(1/n), so the bound is loose.
TEST(Coefficients, IndicatorQuadratureSanity) {
  const WeightSpec spec({monomial_weight(1), monomial_weight(0)});
  constexpr int n = 400;
  for_each_index(2, 3, [&](const std::vector<int>& j) {
    double sum = 0.0;
    const double h = kUnit.length() / n;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const std::vector<double> pts = {(a + 0.5) * h, (b + 0.5) * h};
        sum += eval_K_star(spec, pts, kUnit) * eval_phi(BasisKind::legendre, j[0], pts[0], kUnit) *
               eval_phi(BasisKind::legendre, j[1], pts[1], kUnit);
      }
    }
    EXPECT_NEAR(sum * h * h, compute_coeff(BasisKind::legendre, spec, kUnit, j), 1e-2);
  });
}

TEST(Coefficients, TensorMatchesPointwise) {
  const WeightSpec spec({monomial_weight(1), monomial_weight(0), monomial_weight(2)});
  const std::vector<int> orders = {3, 2, 4};
  for (BasisKind basis : {BasisKind::legendre, BasisKind::trigonometric}) {
    const auto tensor = compute_tensor(basis, spec, kShifted, orders);
    EXPECT_EQ(tensor.data().size(), 4 * 3 * 5);
    for (int a = 0; a <= 3; ++a) {
      for (int b = 0; b <= 2; ++b) {
        for (int c = 0; c <= 4; ++c) {
          const std::vector<int> j = {a, b, c};
          EXPECT_EQ(tensor(j), compute_coeff(basis, spec, kShifted, j));
        }
      }
    }
  }
}

TEST(Coefficients, TensorIndependentOfThreads) {
  const std::vector<int> exps = {0, 1};
  const std::vector<int> orders = {12, 12};
  for (BasisKind basis : {BasisKind::legendre, BasisKind::trigonometric}) {
    const auto one = compute_tensor(basis, monomial_spec(exps), kUnit, orders, 1);
    const auto four = compute_tensor(basis, monomial_spec(exps), kUnit, orders, 4);
    EXPECT_EQ(one.data(), four.data());
  }
}

TEST(Coefficients, DocumentedTensors) {
  const std::vector<int> e0 = {0}, o2 = {2};
  const auto t1 = compute_tensor(BasisKind::legendre, monomial_spec(e0), kUnit, o2);
  EXPECT_NEAR(t1({0}), 1.0, 1e-15);
  EXPECT_NEAR(t1({1}), 0.0, 1e-15);
  EXPECT_NEAR(t1({2}), 0.0, 1e-15);

  const std::vector<int> e00 = {0, 0}, o22 = {2, 2};
  const auto t2 = compute_tensor(BasisKind::legendre, monomial_spec(e00), kShifted, o22);
  const double len = kShifted.length();
  for (int i = 1; i <= 2; ++i) {
    EXPECT_NEAR(t2({i - 1, i}), len / (2.0 * std::sqrt(4.0 * i * i - 1.0)), 1e-14);
    EXPECT_NEAR(t2({i, i - 1}), -len / (2.0 * std::sqrt(4.0 * i * i - 1.0)), 1e-14);
  }

  const std::vector<int> e12 = {1, 2}, o00 = {0, 0}, j00 = {0, 0};
  const auto t0 = compute_tensor(BasisKind::legendre, monomial_spec(e12), kShifted, o00);
  EXPECT_EQ(t0.data().size(), 1);
  EXPECT_EQ(t0({0, 0}), compute_coeff(BasisKind::legendre, monomial_spec(e12), kShifted, j00));
}

TEST(Coefficients, ParsevalPartialSums) {
  const std::vector<int> e00 = {0, 0};
  for (const Interval& iv : {kUnit, kShifted}) {
    const double len = iv.length();
    constexpr int max_p = 60;
    const std::vector<int> orders = {max_p, max_p};
    const auto tensor = compute_tensor(BasisKind::legendre, monomial_spec(e00), iv, orders);
    double previous = 0.0;
    for (int p = 0; p <= max_p; ++p) {
      double sum = 0.0;
      for (int a = 0; a <= p; ++a) {
        for (int b = 0; b <= p; ++b) sum += tensor({a, b}) * tensor({a, b});
      }
      // Off-diagonal pairs contribute (L^2/4) sum_{i<=p} 2/(4i^2-1) = (L^2/2) p/(2p+1).
      EXPECT_NEAR(sum, len * len / 4.0 + len * len / 2.0 * p / (2.0 * p + 1.0), 1e-12) << p;
      EXPECT_GE(sum, previous - 1e-12);
      EXPECT_LE(sum, len * len / 2.0 + 1e-12);
      previous = sum;
    }
  }
}

TEST(Coefficients, ScalingExponents) {
  // Monomial weights of total degree D over k levels scale as L^(k/2 + D).
  const std::vector<std::vector<int>> cases = {{1}, {2}, {3}, {0, 0}, {0, 1}, {2, 0}, {1, 1, 0}};
  for (const auto& exps : cases) {
    const auto spec = monomial_spec(exps);
    int degree = 0;
    for (int e : exps) degree += e;
    const double expected = exps.size() / 2.0 + degree;
    const std::vector<int> j(exps.size(), 0);
    const double small = compute_coeff(BasisKind::legendre, spec, Interval(0.0, 1.0), j);
    const double large = compute_coeff(BasisKind::legendre, spec, Interval(0.0, 3.0), j);
    EXPECT_NEAR(std::log(large / small) / std::log(3.0), expected, 1e-12);
  }
}

TEST(Coefficients, HighOrderLegendreStaysAccurate) {
  // The tensor at p = 256 must keep the I00 pattern.
  const std::vector<int> e00 = {0, 0};
  const std::vector<int> orders = {256, 256};
  const auto tensor = compute_tensor(BasisKind::legendre, monomial_spec(e00), kUnit, orders);
  double err = 0.0;
  for (int a = 0; a <= 256; ++a) {
    for (int b = 0; b <= 256; ++b) {
      double expected = 0.0;
      if (a == 0 && b == 0) expected = 0.5;
      if (b == a + 1) expected = 0.5 / std::sqrt(4.0 * b * b - 1.0);
      if (a == b + 1) expected = -0.5 / std::sqrt(4.0 * a * a - 1.0);
      err = std::max(err, std::abs(tensor({a, b}) - expected));
    }
  }
  EXPECT_LT(err, 1e-12);
}

TEST(Coefficients, Errors) {
  const std::vector<int> e0 = {0};
  const std::vector<int> too_high = {kMaxLegendreIndex + 1};
  EXPECT_THROW(compute_coeff(BasisKind::legendre, monomial_spec(e0), kUnit, too_high), capability_error);
  const std::vector<int> negative = {-1};
  EXPECT_THROW(compute_coeff(BasisKind::legendre, monomial_spec(e0), kUnit, negative), std::invalid_argument);
  const std::vector<int> wrong_rank = {0, 0};
  EXPECT_THROW(compute_coeff(BasisKind::legendre, monomial_spec(e0), kUnit, wrong_rank), std::invalid_argument);
}
