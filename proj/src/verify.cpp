#include "strat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "strat/coefficients.hpp"
#include "strat/oracle.hpp"
#include "strat/quadrature.hpp"
#include "strat/sampler.hpp"

namespace strat {

namespace {

const double kPi = std::numbers::pi;

std::string describe(double max_error, double tolerance) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "max error %.3e (tolerance %.1e)", max_error, tolerance);
  return buf;
}

CheckResult bounded(std::string name, double max_error, double tolerance) {
  return {std::move(name), max_error <= tolerance, describe(max_error, tolerance)};
}

const Interval kIntervals[] = {Interval(0.0, 1.0), Interval(2.5, 3.75)};

std::string label(const std::string& what, const Interval& iv) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " on [%g, %g]", iv.start(), iv.end());
  return what + buf;
}

double coeff(BasisKind basis, std::initializer_list<int> exps, const Interval& iv, std::initializer_list<int> index) {
  const std::vector<int> e(exps);
  const std::vector<int> j(index);
  return compute_coeff(basis, monomial_spec(e), iv, j);
}

void golden(std::vector<CheckResult>& out) {
  for (const auto& iv : kIntervals) {
    const double len = iv.length();
    const std::vector<std::vector<double>> single = {
        {std::sqrt(len)},
        {-std::pow(len, 1.5) / 2.0, -std::pow(len, 1.5) / (2.0 * std::sqrt(3.0))},
        {std::pow(len, 2.5) / 3.0, std::pow(len, 2.5) * std::sqrt(3.0) / 6.0, std::pow(len, 2.5) / (6.0 * std::sqrt(5.0))},
        {-std::pow(len, 3.5) / 4.0, -std::pow(len, 3.5) * 3.0 * std::sqrt(3.0) / 20.0, -std::pow(len, 3.5) / (4.0 * std::sqrt(5.0)),
         -std::pow(len, 3.5) / (20.0 * std::sqrt(7.0))},
    };
    for (int l = 0; l < 4; ++l) {
      double err = 0.0;
      for (int j = 0; j <= 6; ++j) {
        const double expected = j < static_cast<int>(single[l].size()) ? single[l][j] : 0.0;
        err = std::max(err, std::abs(coeff(BasisKind::legendre, {l}, iv, {j}) - expected));
      }
      out.push_back(bounded(label("legendre I" + std::to_string(l), iv), err, 1e-10));
    }

    double err = std::abs(coeff(BasisKind::legendre, {0, 0}, iv, {0, 0}) - len / 2.0);
    for (int i = 1; i <= 10; ++i) {
      const double magnitude = len / (2.0 * std::sqrt(4.0 * i * i - 1.0));
      err = std::max(err, std::abs(coeff(BasisKind::legendre, {0, 0}, iv, {i - 1, i}) - magnitude));
      err = std::max(err, std::abs(coeff(BasisKind::legendre, {0, 0}, iv, {i, i - 1}) + magnitude));
      err = std::max(err, std::abs(coeff(BasisKind::legendre, {0, 0}, iv, {i, i})));
    }
    out.push_back(bounded(label("legendre I00", iv), err, 1e-10));

    double err1 = std::abs(coeff(BasisKind::trigonometric, {1}, iv, {0}) + std::pow(len, 1.5) / 2.0);
    double err2 = std::abs(coeff(BasisKind::trigonometric, {2}, iv, {0}) - std::pow(len, 2.5) / 3.0);
    double err00 = std::abs(coeff(BasisKind::trigonometric, {0, 0}, iv, {0, 0}) - len / 2.0);
    for (int r = 1; r <= 10; ++r) {
      err1 = std::max(err1, std::abs(coeff(BasisKind::trigonometric, {1}, iv, {2 * r - 1}) -
                                     std::sqrt(2.0) * std::pow(len, 1.5) / (2.0 * kPi * r)));
      err1 = std::max(err1, std::abs(coeff(BasisKind::trigonometric, {1}, iv, {2 * r})));
      err2 = std::max(err2, std::abs(coeff(BasisKind::trigonometric, {2}, iv, {2 * r - 1}) +
                                     std::pow(len, 2.5) / (std::sqrt(2.0) * kPi * r)));
      err2 = std::max(err2, std::abs(coeff(BasisKind::trigonometric, {2}, iv, {2 * r}) -
                                     std::pow(len, 2.5) / (std::sqrt(2.0) * kPi * kPi * r * r)));
      const double pair = len / (2.0 * kPi * r);
      err00 = std::max(err00, std::abs(coeff(BasisKind::trigonometric, {0, 0}, iv, {2 * r, 2 * r - 1}) - pair));
      err00 = std::max(err00, std::abs(coeff(BasisKind::trigonometric, {0, 0}, iv, {2 * r - 1, 2 * r}) + pair));
      err00 = std::max(err00, std::abs(coeff(BasisKind::trigonometric, {0, 0}, iv, {2 * r - 1, 0}) - std::sqrt(2.0) * pair));
      err00 = std::max(err00, std::abs(coeff(BasisKind::trigonometric, {0, 0}, iv, {0, 2 * r - 1}) + std::sqrt(2.0) * pair));
    }
    out.push_back(bounded(label("trigonometric I1", iv), err1, 1e-9));
    out.push_back(bounded(label("trigonometric I2", iv), err2, 1e-9));
    out.push_back(bounded(label("trigonometric I00", iv), err00, 1e-9));
  }
}

void orthonormality(std::vector<CheckResult>& out) {
  constexpr int max_j = 30;
  for (const auto& iv : kIntervals) {
    for (BasisKind basis : {BasisKind::legendre, BasisKind::trigonometric}) {
      const auto rule = basis == BasisKind::legendre
                            ? gauss_rule(max_j + 1, iv)
                            : composite_rule(gauss_legendre_reference<double>(16), max_j + 1, iv.start(), iv.end());
      Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(max_j + 1, max_j + 1);
      for (Eigen::Index q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd phi = eval_phi_all(basis, max_j, rule.nodes[q], iv);
        gram += rule.weights[q] * phi * phi.transpose();
      }
      const double err = (gram - Eigen::MatrixXd::Identity(max_j + 1, max_j + 1)).cwiseAbs().maxCoeff();
      out.push_back(bounded(label(std::string(to_string(basis)) + " gram matrix", iv), err, 1e-12));

      double coeff_err = 0.0;
      for (int j = 0; j <= 8; ++j) {
        const double expected = j == 0 ? std::sqrt(iv.length()) : 0.0;
        coeff_err = std::max(coeff_err, std::abs(coeff(basis, {0}, iv, {j}) - expected));
      }
      out.push_back(bounded(label(std::string(to_string(basis)) + " I0 coefficients", iv), coeff_err, 1e-12));
    }
  }
}

void trace(std::vector<CheckResult>& out) {
  for (const auto& iv : kIntervals) {
    const std::vector<int> exps = {0, 0};
    const IntegralSpec spec(monomial_spec(exps), {1, 1}, BasisKind::legendre, iv);
    const std::vector<int> full = {50, 50};
    const auto tensor = compute_tensor(BasisKind::legendre, spec.weights, iv, full);
    double err = 0.0;
    for (int p : {0, 1, 5, 50}) {
      const auto orders = TruncationOrders::uniform(2, p);
      const ExpansionRef x{spec, tensor, orders};
      err = std::max(err, std::abs(truncated_moment(std::span(&x, 1)) - iv.length() / 2.0));
    }
    out.push_back(bounded(label("E[I00], equal components", iv), err, 1e-12));
  }
}

void partitions(std::vector<CheckResult>& out) {
  bool counts_ok = true;
  std::string detail = "k <= 8 counts match k!/(2^r r!(k-2r)!)";
  for (int k = 0; k <= 8; ++k) {
    for (int r = 0; 2 * r <= k; ++r) {
      double expected = std::tgamma(k + 1.0) / (std::pow(2.0, r) * std::tgamma(r + 1.0) * std::tgamma(k - 2.0 * r + 1.0));
      const auto got = enumerate_pair_partitions(k, r).size();
      if (static_cast<double>(got) != std::round(expected)) {
        counts_ok = false;
        detail = "count mismatch at k=" + std::to_string(k) + ", r=" + std::to_string(r);
      }
    }
  }
  out.push_back({"pair partition counts", counts_ok, detail});

  auto pairs_of = [](int k, int r) {
    std::vector<std::vector<std::pair<int, int>>> got;
    for (const auto& part : enumerate_pair_partitions(k, r)) got.push_back(part.pairs);
    return got;
  };
  const std::vector<std::vector<std::pair<int, int>>> full = {{{1, 2}, {3, 4}}, {{1, 3}, {2, 4}}, {{1, 4}, {2, 3}}};
  const std::vector<std::vector<std::pair<int, int>>> single = {{{1, 2}}, {{1, 3}}, {{1, 4}}, {{2, 3}}, {{2, 4}}, {{3, 4}}};
  auto same = [](auto a, auto b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  };
  out.push_back({"k=4 two-pair list", same(pairs_of(4, 2), full), "{12,34} {13,24} {14,23}"});
  out.push_back({"k=4 one-pair list", same(pairs_of(4, 1), single), "{12} {13} {14} {23} {24} {34}"});
}

void fastpath(std::vector<CheckResult>& out, unsigned threads) {
  const Interval iv(0.0, 1.0);
  constexpr int tables = 20;
  struct Case {
    ClosedForm form;
    int p;
    double tolerance;
  };
  const Case cases[] = {
      {ClosedForm::I0, 10, 1e-10},   {ClosedForm::I1, 10, 1e-10},  {ClosedForm::I2, 10, 1e-10},
      {ClosedForm::I3, 10, 1e-10},   {ClosedForm::I00, 10, 1e-10}, {ClosedForm::I01, 50, 5e-9},
      {ClosedForm::I10, 50, 5e-9},   {ClosedForm::I02, 50, 5e-9},  {ClosedForm::I20, 50, 5e-9},
      {ClosedForm::I11, 50, 5e-9},   {ClosedForm::I1t, 20, 1e-10}, {ClosedForm::I2t, 20, 1e-10},
      {ClosedForm::I00t, 20, 1e-10},
  };
  for (const auto& c : cases) {
    const int k = closed_form_multiplicity(c.form);
    const BasisKind basis = closed_form_basis(c.form);
    const std::vector<int> components = k == 1 ? std::vector<int>{1} : std::vector<int>{1, 2};
    const IntegralSpec spec(monomial_spec(closed_form_exponents(c.form)), components, basis, iv);
    const std::vector<int> orders(static_cast<std::size_t>(k), c.p);
    const auto tensor = compute_tensor(basis, spec.weights, iv, orders, threads);
    const TableFactory factory(2, c.p, basis, iv, 20240601);
    double err = 0.0;
    for (int s = 0; s < tables; ++s) {
      const auto table = factory(static_cast<std::uint64_t>(s));
      const double generic = sample_truncated(spec, tensor, table, TruncationOrders(orders));
      const double closed = sample_closed_form(c.form, table, iv, c.p, components);
      err = std::max(err, std::abs(generic - closed));
    }
    out.push_back(bounded(std::string(to_string(c.form)) + " closed form vs tensor at p=" + std::to_string(c.p), err,
                          c.tolerance));
  }
}

}  // namespace

std::vector<std::string> suite_names() { return {"golden", "orthonormality", "trace", "partitions", "fastpath", "all"}; }

std::vector<CheckResult> run_suite(std::string_view name, unsigned threads) {
  std::vector<CheckResult> out;
  const bool all = name == "all";
  bool known = all;
  if (all || name == "golden") {
    golden(out);
    known = true;
  }
  if (all || name == "orthonormality") {
    orthonormality(out);
    known = true;
  }
  if (all || name == "trace") {
    trace(out);
    known = true;
  }
  if (all || name == "partitions") {
    partitions(out);
    known = true;
  }
  if (all || name == "fastpath") {
    fastpath(out, threads);
    known = true;
  }
  if (!known) throw std::invalid_argument("unknown verification suite: " + std::string(name));
  return out;
}

}  // namespace strat
