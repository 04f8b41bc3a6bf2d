#include <stdexcept>

#include "strat/compensated_sum.hpp"
#include "strat/errors.hpp"
#include "strat/oracle.hpp"

namespace strat {

namespace {

constexpr int kMaxMomentMultiplicity = 8;

// A truncated expansion with its deterministic (component 0) axes summed
// against row 0, leaving a row-major tensor over the random axes.
struct RandomPart {
  std::vector<int> components;
  std::vector<int> orders;
  std::vector<std::size_t> strides;
  Eigen::VectorXd data;
};

RandomPart contract_deterministic(const ExpansionRef& x, const Eigen::VectorXd& row0) {
  const auto& spec = x.spec;
  const int k = spec.multiplicity();
  RandomPart part;
  std::vector<int> random_axes;
  for (int l = 0; l < k; ++l) {
    if (spec.indices[l] != 0) {
      random_axes.push_back(l);
      part.components.push_back(spec.indices[l]);
      part.orders.push_back(x.orders.p[l]);
    }
  }
  const std::size_t n_random = random_axes.size();
  part.strides.assign(n_random, 1);
  std::size_t size = 1;
  for (std::size_t a = n_random; a-- > 0;) {
    part.strides[a] = size;
    size *= static_cast<std::size_t>(part.orders[a] + 1);
  }

  std::vector<CompensatedSum> acc(size);
  std::vector<int> index(static_cast<std::size_t>(k), 0);
  while (true) {
    double weight = x.tensor(index);
    std::size_t target = 0;
    std::size_t a = 0;
    for (int l = 0; l < k; ++l) {
      if (spec.indices[l] == 0) {
        weight *= row0[index[l]];
      } else {
        target += static_cast<std::size_t>(index[l]) * part.strides[a++];
      }
    }
    acc[target].add(weight);
    int l = k - 1;
    while (l >= 0 && index[l] == x.orders.p[l]) index[l--] = 0;
    if (l < 0) break;
    ++index[l];
  }
  part.data.resize(static_cast<Eigen::Index>(size));
  for (std::size_t i = 0; i < size; ++i) part.data[static_cast<Eigen::Index>(i)] = acc[i].value();
  return part;
}

void check_factor(const ExpansionRef& x, const ExpansionRef& first) {
  const auto& spec = x.spec;
  if (x.tensor.basis() != spec.basis || !(x.tensor.interval() == spec.iv) || !(x.tensor.weights() == spec.weights)) {
    throw std::invalid_argument("coefficient tensor provenance does not match the integral");
  }
  if (spec.basis != first.spec.basis || !(spec.iv == first.spec.iv)) {
    throw std::invalid_argument("moment factors must share basis and interval");
  }
  if (static_cast<int>(x.orders.p.size()) != spec.multiplicity()) {
    throw std::invalid_argument("truncation orders must match the multiplicity");
  }
  for (int l = 0; l < spec.multiplicity(); ++l) {
    if (x.orders.p[l] > x.tensor.orders()[l]) throw std::invalid_argument("truncation order exceeds the tensor orders");
  }
}

}  // namespace

double truncated_moment(std::span<const ExpansionRef> factors) {
  if (factors.empty() || factors.size() > 2) throw std::invalid_argument("moments take one or two factors");
  int total = 0;
  int max_order = 0;
  for (const auto& f : factors) {
    check_factor(f, factors[0]);
    total += f.spec.multiplicity();
    max_order = std::max(max_order, f.orders.max());
  }
  if (total > kMaxMomentMultiplicity) throw capability_error("moment product multiplicity exceeds 8");

  const Eigen::VectorXd row0 = deterministic_row(factors[0].spec.basis, max_order, factors[0].spec.iv);
  std::vector<RandomPart> parts;
  for (const auto& f : factors) parts.push_back(contract_deterministic(f, row0));

  // Random axes of all factors, numbered 1..n as enumerate_pair_partitions expects.
  struct Axis {
    std::size_t part;
    std::size_t slot;
  };
  std::vector<Axis> axes;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    for (std::size_t a = 0; a < parts[f].components.size(); ++a) axes.push_back({f, a});
  }
  const int n = static_cast<int>(axes.size());
  if (n % 2 != 0) return 0.0;
  auto component = [&](int axis) { return parts[axes[axis].part].components[axes[axis].slot]; };
  auto order = [&](int axis) { return parts[axes[axis].part].orders[axes[axis].slot]; };

  CompensatedSum total_sum;
  for (const auto& matching : enumerate_pair_partitions(n, n / 2)) {
    // Each pair ties two axes to one shared index variable.
    std::vector<int> variable_of(static_cast<std::size_t>(n));
    std::vector<int> bound;
    bool alive = true;
    for (const auto& [a, b] : matching.pairs) {
      if (component(a - 1) != component(b - 1)) {
        alive = false;
        break;
      }
      variable_of[a - 1] = variable_of[b - 1] = static_cast<int>(bound.size());
      bound.push_back(std::min(order(a - 1), order(b - 1)));
    }
    if (!alive) continue;

    std::vector<int> value(bound.size(), 0);
    while (true) {
      double term = 1.0;
      for (std::size_t f = 0; f < parts.size(); ++f) {
        std::size_t offset = 0;
        for (int axis = 0; axis < n; ++axis) {
          if (axes[axis].part == f) offset += static_cast<std::size_t>(value[variable_of[axis]]) * parts[f].strides[axes[axis].slot];
        }
        term *= parts[f].data[static_cast<Eigen::Index>(offset)];
      }
      total_sum.add(term);
      int v = static_cast<int>(bound.size()) - 1;
      while (v >= 0 && value[v] == bound[v]) value[v--] = 0;
      if (v < 0) break;
      ++value[v];
    }
  }
  return total_sum.value();
}

double truncated_mean_square_difference(const ExpansionRef& x, const ExpansionRef& y) {
  const ExpansionRef xx[] = {x, x};
  const ExpansionRef xy[] = {x, y};
  const ExpansionRef yy[] = {y, y};
  return truncated_moment(xx) - 2.0 * truncated_moment(xy) + truncated_moment(yy);
}

}  // namespace strat
