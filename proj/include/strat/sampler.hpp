#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "strat/basis.hpp"
#include "strat/coefficients.hpp"
#include "strat/kernel.hpp"

namespace strat {

/// zeta_j^{(i)} for components i = 0..m and indices j = 0..max_j.
///
/// Row 0 is deterministic: int_t^T phi_j(s) ds (the w^{(0)}_s = s component).
/// Rows 1..m hold independent standard normal draws.
struct GaussianTable {
  int m = 0;
  int max_j = 0;
  BasisKind basis = BasisKind::legendre;
  Interval iv{0.0, 1.0};
  std::uint64_t seed = 0;
  Eigen::MatrixXd values;

  double operator()(int component, int j) const { return values(component, j); }
};

/// int_t^T phi_j(s) ds for j = 0..max_j, by Gauss quadrature.
Eigen::VectorXd deterministic_row(BasisKind basis, int max_j, const Interval& iv);

/// Draws tables of one shape for many streams, computing row 0 once.
class TableFactory {
 public:
  TableFactory(int m, int max_j, BasisKind basis, const Interval& iv, std::uint64_t seed);

  /// Random rows come from KeyedNormal(seed) at (stream, i, j).
  GaussianTable operator()(std::uint64_t stream) const;

 private:
  int m_;
  int max_j_;
  BasisKind basis_;
  Interval iv_;
  std::uint64_t seed_;
  Eigen::VectorXd row0_;
};

/// Single table from TableFactory(m, max_j, basis, iv, seed)(stream).
GaussianTable draw_table(int m, int max_j, BasisKind basis, const Interval& iv, std::uint64_t seed,
                         std::uint64_t stream = 0);

/// Table with caller-supplied random rows; row 0 is filled deterministically.
GaussianTable make_table(BasisKind basis, const Interval& iv, const Eigen::MatrixXd& random_rows, std::uint64_t seed = 0);

/// One iterated Stratonovich integral: weights, Wiener components
/// (i_1, ..., i_k) with 0 meaning ds, basis and interval.
struct IntegralSpec {
  WeightSpec weights;
  std::vector<int> indices;
  BasisKind basis = BasisKind::legendre;
  Interval iv{0.0, 1.0};

  IntegralSpec(WeightSpec weights, std::vector<int> indices, BasisKind basis, Interval iv);

  int multiplicity() const { return weights.multiplicity(); }
  int max_component() const;
};

struct TruncationOrders {
  std::vector<int> p;

  explicit TruncationOrders(std::vector<int> orders);
  static TruncationOrders uniform(int k, int order) { return TruncationOrders(std::vector<int>(static_cast<std::size_t>(k), order)); }

  int max() const;
};

enum class SummationOrder {
  last_index_outermost,   // j_k in the outer loop
  first_index_outermost,  // j_1 in the outer loop
};

/// sum_{j_1<=p_1} ... sum_{j_k<=p_k} C_{j_k...j_1} prod_l zeta^{(i_l)}_{j_l},
/// accumulated with Neumaier compensation in a fixed order.
double sample_truncated(const IntegralSpec& spec, const CoeffTensor& tensor, const GaussianTable& table,
                        const TruncationOrders& orders,
                        SummationOrder order = SummationOrder::last_index_outermost);

/// Printed closed-form expansions.
enum class ClosedForm { I0, I1, I2, I3, I00, I01, I10, I02, I20, I11, I1t, I2t, I00t };

/// Throws std::invalid_argument for unknown names.
ClosedForm parse_closed_form(std::string_view name);
std::string_view to_string(ClosedForm form);
BasisKind closed_form_basis(ClosedForm form);
int closed_form_multiplicity(ClosedForm form);
/// Monomial exponents (l_1, ..., l_k) of the integral a closed form expands.
std::vector<int> closed_form_exponents(ClosedForm form);

/// Closed-form expansion truncated to the terms whose basis indices are all
/// <= p, so it agrees with sample_truncated at uniform order p. Chained forms
/// reuse the sub-integrals they reference at the same p.
/// `components` holds (i_1) or (i_1, i_2).
double sample_closed_form(ClosedForm form, const GaussianTable& table, const Interval& iv, int p,
                          std::span<const int> components);
double sample_closed_form(std::string_view name, const GaussianTable& table, const Interval& iv, int p,
                          std::span<const int> components);

/// n rows, one fresh table per row (stream = row index); column c holds
/// sample_truncated(specs[c], tensors[c], table, orders[c]).
Eigen::MatrixXd sample_batch(std::span<const IntegralSpec> specs, std::span<const CoeffTensor> tensors, int m,
                             std::span<const TruncationOrders> orders, std::uint64_t seed, int n, unsigned threads = 1);

}  // namespace strat
