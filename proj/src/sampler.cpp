#include "strat/sampler.hpp"

#include <algorithm>
#include <stdexcept>

#include "strat/compensated_sum.hpp"
#include "strat/parallel.hpp"
#include "strat/quadrature.hpp"
#include "strat/rng.hpp"

namespace strat {

Eigen::VectorXd deterministic_row(BasisKind basis, int max_j, const Interval& iv) {
  if (max_j < 0) throw std::invalid_argument("max_j must be non-negative");
  // Legendre integrands are polynomials of degree <= max_j; trigonometric ones
  // get a 16-point panel per half period of the highest frequency.
  const auto rule = basis == BasisKind::legendre
                        ? gauss_rule(max_j / 2 + 1, iv)
                        : composite_rule(gauss_legendre_reference<double>(16), max_j + 1, iv.start(), iv.end());
  Eigen::VectorXd row = Eigen::VectorXd::Zero(max_j + 1);
  for (Eigen::Index q = 0; q < rule.size(); ++q) row += rule.weights[q] * eval_phi_all(basis, max_j, rule.nodes[q], iv);
  return row;
}

GaussianTable make_table(BasisKind basis, const Interval& iv, const Eigen::MatrixXd& random_rows, std::uint64_t seed) {
  GaussianTable table;
  table.m = static_cast<int>(random_rows.rows());
  table.max_j = static_cast<int>(random_rows.cols()) - 1;
  if (table.max_j < 0) throw std::invalid_argument("table needs at least one column");
  table.basis = basis;
  table.iv = iv;
  table.seed = seed;
  table.values.resize(table.m + 1, table.max_j + 1);
  table.values.row(0) = deterministic_row(basis, table.max_j, iv).transpose();
  table.values.bottomRows(table.m) = random_rows;
  return table;
}

TableFactory::TableFactory(int m, int max_j, BasisKind basis, const Interval& iv, std::uint64_t seed)
    : m_(m), max_j_(max_j), basis_(basis), iv_(iv), seed_(seed) {
  if (m < 1) throw std::invalid_argument("table needs at least one Wiener component");
  if (max_j < 0) throw std::invalid_argument("max_j must be non-negative");
  row0_ = deterministic_row(basis, max_j, iv);
}

GaussianTable TableFactory::operator()(std::uint64_t stream) const {
  const KeyedNormal normal(seed_);
  GaussianTable table;
  table.m = m_;
  table.max_j = max_j_;
  table.basis = basis_;
  table.iv = iv_;
  table.seed = seed_;
  table.values.resize(m_ + 1, max_j_ + 1);
  table.values.row(0) = row0_.transpose();
  for (int i = 1; i <= m_; ++i) {
    for (int j = 0; j <= max_j_; ++j) table.values(i, j) = normal(stream, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  }
  return table;
}

GaussianTable draw_table(int m, int max_j, BasisKind basis, const Interval& iv, std::uint64_t seed, std::uint64_t stream) {
  return TableFactory(m, max_j, basis, iv, seed)(stream);
}

IntegralSpec::IntegralSpec(WeightSpec w, std::vector<int> idx, BasisKind b, Interval interval)
    : weights(std::move(w)), indices(std::move(idx)), basis(b), iv(interval) {
  if (static_cast<int>(indices.size()) != weights.multiplicity()) {
    throw std::invalid_argument("component indices must match the weight multiplicity");
  }
  for (int i : indices) {
    if (i < 0) throw std::invalid_argument("component indices must be non-negative");
  }
}

int IntegralSpec::max_component() const { return *std::max_element(indices.begin(), indices.end()); }

TruncationOrders::TruncationOrders(std::vector<int> orders) : p(std::move(orders)) {
  if (p.empty()) throw std::invalid_argument("truncation orders must not be empty");
  for (int v : p) {
    if (v < 0) throw std::invalid_argument("truncation orders must be non-negative");
  }
}

int TruncationOrders::max() const { return *std::max_element(p.begin(), p.end()); }

namespace {

void check_compatible(const IntegralSpec& spec, const CoeffTensor& tensor, const GaussianTable& table,
                      const TruncationOrders& orders) {
  if (tensor.basis() != spec.basis || !(tensor.interval() == spec.iv) || !(tensor.weights() == spec.weights)) {
    throw std::invalid_argument("coefficient tensor provenance does not match the integral");
  }
  if (table.basis != spec.basis || !(table.iv == spec.iv)) {
    throw std::invalid_argument("gaussian table basis or interval does not match the integral");
  }
  if (static_cast<int>(orders.p.size()) != spec.multiplicity()) {
    throw std::invalid_argument("truncation orders must match the multiplicity");
  }
  for (int l = 0; l < spec.multiplicity(); ++l) {
    if (orders.p[l] > tensor.orders()[l]) throw std::invalid_argument("truncation order exceeds the tensor orders");
  }
  if (orders.max() > table.max_j) throw std::invalid_argument("gaussian table has too few columns");
  if (spec.max_component() > table.m) throw std::invalid_argument("gaussian table has too few components");
}

struct TruncatedSum {
  const CoeffTensor& tensor;
  std::vector<const double*> rows;
  std::vector<std::size_t> strides;
  std::vector<int> bounds;
  std::vector<int> axis_order;
  CompensatedSum sum;

  void run(std::size_t depth, double prefix, std::size_t offset) {
    const int axis = axis_order[depth];
    const double* z = rows[axis];
    const std::size_t stride = strides[axis];
    if (depth + 1 == axis_order.size()) {
      const double* c = tensor.data().data();
      for (int j = 0; j <= bounds[axis]; ++j) sum.add(prefix * z[j] * c[offset + j * stride]);
      return;
    }
    for (int j = 0; j <= bounds[axis]; ++j) run(depth + 1, prefix * z[j], offset + j * stride);
  }
};

}  // namespace

double sample_truncated(const IntegralSpec& spec, const CoeffTensor& tensor, const GaussianTable& table,
                        const TruncationOrders& orders, SummationOrder order) {
  check_compatible(spec, tensor, table, orders);
  const int k = spec.multiplicity();
  // Row-major storage keeps each table row contiguous only in the transpose;
  // copy the used rows out once.
  std::vector<Eigen::VectorXd> copies;
  copies.reserve(static_cast<std::size_t>(k));
  TruncatedSum acc{tensor, {}, {}, orders.p, {}, {}};
  for (int l = 0; l < k; ++l) {
    copies.emplace_back(table.values.row(spec.indices[l]).transpose());
    acc.strides.push_back(tensor.stride(l));
  }
  for (int l = 0; l < k; ++l) acc.rows.push_back(copies[l].data());
  for (int l = 0; l < k; ++l) acc.axis_order.push_back(order == SummationOrder::last_index_outermost ? k - 1 - l : l);
  acc.run(0, 1.0, 0);
  return acc.sum.value();
}

Eigen::MatrixXd sample_batch(std::span<const IntegralSpec> specs, std::span<const CoeffTensor> tensors, int m,
                             std::span<const TruncationOrders> orders, std::uint64_t seed, int n, unsigned threads) {
  if (specs.size() != tensors.size() || specs.size() != orders.size()) {
    throw std::invalid_argument("specs, tensors and orders must have equal length");
  }
  if (n < 0) throw std::invalid_argument("sample count must be non-negative");
  if (specs.empty()) return Eigen::MatrixXd(n, 0);
  int max_j = 0;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    if (specs[c].basis != specs[0].basis || !(specs[c].iv == specs[0].iv)) {
      throw std::invalid_argument("batched integrals must share basis and interval");
    }
    if (specs[c].max_component() > m) throw std::invalid_argument("integral uses a component above m");
    max_j = std::max(max_j, orders[c].max());
  }
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(specs.size()));
  const TableFactory factory(m, max_j, specs[0].basis, specs[0].iv, seed);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
    const auto table = factory(row);
    for (std::size_t c = 0; c < specs.size(); ++c) {
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = sample_truncated(specs[c], tensors[c], table, orders[c]);
    }
  });
  return out;
}

}  // namespace strat
