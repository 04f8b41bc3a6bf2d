#include "strat/coefficients.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "strat/errors.hpp"
#include "strat/legendre_series.hpp"
#include "strat/parallel.hpp"
#include "strat/quadrature.hpp"

namespace strat {

CoeffTensor::CoeffTensor(BasisKind basis, WeightSpec spec, Interval iv, std::vector<int> orders, Eigen::VectorXd data)
    : basis_(basis), spec_(std::move(spec)), iv_(iv), orders_(std::move(orders)), data_(std::move(data)) {
  if (static_cast<int>(orders_.size()) != spec_.multiplicity()) {
    throw std::invalid_argument("tensor orders must match the weight multiplicity");
  }
  strides_.assign(orders_.size(), 1);
  std::size_t total = 1;
  for (std::size_t l = orders_.size(); l-- > 0;) {
    if (orders_[l] < 0) throw std::invalid_argument("truncation orders must be non-negative");
    strides_[l] = total;
    total *= static_cast<std::size_t>(orders_[l]) + 1;
  }
  if (static_cast<std::size_t>(data_.size()) != total) {
    throw std::invalid_argument("tensor data size differs from the product of (p_l + 1)");
  }
  if (!data_.allFinite()) throw std::invalid_argument("tensor entries must be finite");
}

std::size_t CoeffTensor::offset(std::span<const int> index) const {
  if (index.size() != orders_.size()) throw std::invalid_argument("multi-index length differs from multiplicity");
  std::size_t off = 0;
  for (std::size_t l = 0; l < index.size(); ++l) {
    if (index[l] < 0 || index[l] > orders_[l]) throw std::out_of_range("multi-index outside tensor orders");
    off += static_cast<std::size_t>(index[l]) * strides_[l];
  }
  return off;
}

namespace {

using Series = LegendreSeries<double>;

void check_index(const WeightSpec& spec, std::span<const int> index) {
  if (static_cast<int>(index.size()) != spec.multiplicity()) {
    throw std::invalid_argument("multi-index length differs from multiplicity");
  }
  for (int j : index) {
    if (j < 0) throw std::invalid_argument("basis indices must be non-negative");
  }
}

// ---------------------------------------------------------------------------
// Legendre branch. Functions of s in [t, T] are Legendre series in
// x = 2 (s - t) / L - 1, so u = s - t = L (x + 1) / 2.

Series times_offset(const Series& f, double len) { return (0.5 * len) * (f.times_x() + f); }

Series apply_weight(const WeightPoly& w, const Series& f, double len) {
  const auto& c = w.coeffs();
  Series acc = c[w.degree()] * f;
  for (int d = w.degree() - 1; d >= 0; --d) acc = times_offset(acc, len) + c[d] * f;
  return acc;
}

// int_t^s phi_j(x) g(x) dx given g * P_j.
Series integrate_against_phi(const Series& g_times_pj, int j, double len) {
  return (0.5 * len * std::sqrt((2.0 * j + 1.0) / len)) * g_times_pj.antiderivative();
}

// int_t^T phi_j(s) g(s) ds.
double project_on_phi(const Series& g, int j, double len) { return g.coeff(j) * std::sqrt(len / (2.0 * j + 1.0)); }

void check_legendre_cap(std::span<const int> bounds) {
  for (int j : bounds) {
    if (j > kMaxLegendreIndex) {
      throw capability_error("Legendre index " + std::to_string(j) + " exceeds the supported maximum " +
                             std::to_string(kMaxLegendreIndex));
    }
  }
}

double legendre_coeff(const WeightSpec& spec, const Interval& iv, std::span<const int> index) {
  check_legendre_cap(index);
  const double len = iv.length();
  const int k = spec.multiplicity();
  Series inner = Series::constant(1.0);
  for (int l = 0; l + 1 < k; ++l) {
    const Series g = apply_weight(spec[l], inner, len);
    const int j = index[l];
    Series product;
    for_each_times_legendre(g, j, [&](int n, const Series& q) {
      if (n == j) product = q;
    });
    inner = integrate_against_phi(product, j, len);
  }
  return project_on_phi(apply_weight(spec[k - 1], inner, len), index[k - 1], len);
}

class LegendreTensorBuilder {
 public:
  LegendreTensorBuilder(const WeightSpec& spec, const Interval& iv, std::span<const int> orders, std::vector<std::size_t> strides,
                        Eigen::VectorXd& out)
      : spec_(spec), len_(iv.length()), orders_(orders), strides_(std::move(strides)), out_(out) {}

  // Mirrors legendre_coeff step for step so every entry is bit-identical to it.
  void descend(int level, const Series& inner, std::size_t base) const {
    const Series g = apply_weight(spec_[level], inner, len_);
    if (level + 1 == spec_.multiplicity()) {
      for (int j = 0; j <= orders_[level]; ++j) out_[static_cast<Eigen::Index>(base + j * strides_[level])] = project_on_phi(g, j, len_);
      return;
    }
    for_each_times_legendre(g, orders_[level], [&](int n, const Series& q) {
      descend(level + 1, integrate_against_phi(q, n, len_), base + n * strides_[level]);
    });
  }

  // First-level antiderivatives, one per j_1; the subtrees below them are independent.
  std::vector<Series> first_level() const {
    std::vector<Series> firsts;
    const Series g = apply_weight(spec_[0], Series::constant(1.0), len_);
    for_each_times_legendre(g, orders_[0], [&](int n, const Series& q) { firsts.push_back(integrate_against_phi(q, n, len_)); });
    return firsts;
  }

 private:
  const WeightSpec& spec_;
  double len_;
  std::span<const int> orders_;
  std::vector<std::size_t> strides_;
  Eigen::VectorXd& out_;
};

// ---------------------------------------------------------------------------
// Trigonometric branch: nested composite Gauss quadrature.

constexpr int kPointsPerPanel = 16;
constexpr int kMaxPanels = 1 << 12;
constexpr double kPanelTolerance = 1e-12;

const QuadratureRule<double>& panel_reference() {
  static const QuadratureRule<double> rule = gauss_legendre_reference<double>(kPointsPerPanel);
  return rule;
}

class NestedQuadrature {
 public:
  NestedQuadrature(BasisKind basis, const WeightSpec& spec, const Interval& iv, std::span<const int> index, int panels)
      : basis_(basis), spec_(spec), iv_(iv), index_(index), panels_(panels), width_(iv.length() / panels) {
    const int k = spec.multiplicity();
    prefix_.assign(static_cast<std::size_t>(k) + 1, std::vector<double>(static_cast<std::size_t>(panels) + 1, 0.0));
    const auto& ref = panel_reference();
    for (int level = 1; level <= k; ++level) {
      auto& acc = prefix_[level];
      for (int q = 0; q < panels; ++q) {
        const double lo = panel_start(q);
        const double hi = q + 1 == panels ? iv.end() : panel_start(q + 1);
        const auto rule = map_rule(ref, lo, hi);
        double sum = 0.0;
        for (Eigen::Index i = 0; i < rule.size(); ++i) sum += rule.weights[i] * integrand(level, rule.nodes[i]);
        acc[q + 1] = acc[q] + sum;
      }
    }
  }

  double result() const { return prefix_.back().back(); }

 private:
  double panel_start(int q) const { return iv_.start() + width_ * q; }

  // psi_l(x) phi_{j_l}(x) F_{l-1}(x)
  double integrand(int level, double x) const {
    const int l = level - 1;
    return spec_[l](x, iv_) * eval_phi(basis_, index_[l], x, iv_) * partial(level - 1, x);
  }

  // F_level(s) = int_t^s integrand(level, .)
  double partial(int level, double s) const {
    if (level == 0) return 1.0;
    int q = static_cast<int>((s - iv_.start()) / width_);
    q = std::clamp(q, 0, panels_ - 1);
    const double lo = panel_start(q);
    double value = prefix_[level][q];
    if (s > lo) {
      const auto rule = map_rule(panel_reference(), lo, s);
      for (Eigen::Index i = 0; i < rule.size(); ++i) value += rule.weights[i] * integrand(level, rule.nodes[i]);
    }
    return value;
  }

  BasisKind basis_;
  const WeightSpec& spec_;
  const Interval& iv_;
  std::span<const int> index_;
  int panels_;
  double width_;
  std::vector<std::vector<double>> prefix_;
};

double quadrature_coeff(BasisKind basis, const WeightSpec& spec, const Interval& iv, std::span<const int> index) {
  int max_j = 0;
  for (int j : index) max_j = std::max(max_j, j);
  // Start with about one oscillation per panel.
  int panels = 1;
  while (panels < (max_j + 1) / 2 && panels < kMaxPanels) panels *= 2;
  double previous = NestedQuadrature(basis, spec, iv, index, panels).result();
  while (panels < kMaxPanels) {
    panels *= 2;
    const double current = NestedQuadrature(basis, spec, iv, index, panels).result();
    if (std::abs(current - previous) < kPanelTolerance) return current;
    previous = current;
  }
  return previous;
}

}  // namespace

double compute_coeff(BasisKind basis, const WeightSpec& spec, const Interval& iv, std::span<const int> index) {
  check_index(spec, index);
  if (basis == BasisKind::legendre) return legendre_coeff(spec, iv, index);
  return quadrature_coeff(basis, spec, iv, index);
}

CoeffTensor compute_tensor(BasisKind basis, const WeightSpec& spec, const Interval& iv, std::span<const int> orders,
                           unsigned threads) {
  check_index(spec, orders);
  std::vector<int> order_vec(orders.begin(), orders.end());
  const int k = spec.multiplicity();
  std::vector<std::size_t> strides(static_cast<std::size_t>(k), 1);
  std::size_t total = 1;
  for (int l = k - 1; l >= 0; --l) {
    strides[l] = total;
    total *= static_cast<std::size_t>(orders[l]) + 1;
  }
  Eigen::VectorXd data(static_cast<Eigen::Index>(total));

  if (basis == BasisKind::legendre) {
    check_legendre_cap(orders);
    LegendreTensorBuilder builder(spec, iv, order_vec, strides, data);
    if (k == 1) {
      builder.descend(0, Series::constant(1.0), 0);
    } else {
      const auto firsts = builder.first_level();
      parallel_for(firsts.size(), threads, [&](std::size_t n) { builder.descend(1, firsts[n], n * strides[0]); });
    }
  } else {
    parallel_for(total, threads, [&](std::size_t flat) {
      std::vector<int> index(static_cast<std::size_t>(k));
      std::size_t rest = flat;
      for (int l = 0; l < k; ++l) {
        index[l] = static_cast<int>(rest / strides[l]);
        rest %= strides[l];
      }
      data[static_cast<Eigen::Index>(flat)] = quadrature_coeff(basis, spec, iv, index);
    });
  }
  return CoeffTensor(basis, spec, iv, std::move(order_vec), std::move(data));
}

}  // namespace strat
