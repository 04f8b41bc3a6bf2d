#include "strat/oracle.hpp"

#include <stdexcept>

#include "strat/errors.hpp"
#include "strat/quadrature.hpp"
#include "strat/rng.hpp"

namespace strat {

MeshPath uniform_path(const Interval& iv, int steps, int m, std::uint64_t seed, std::uint64_t stream) {
  if (steps < 1) throw std::invalid_argument("mesh needs at least one step");
  if (m < 0) throw std::invalid_argument("component count must be non-negative");
  MeshPath path;
  path.mesh.resize(steps + 1);
  for (int j = 0; j < steps; ++j) path.mesh[j] = iv.start() + iv.length() * j / steps;
  path.mesh[steps] = iv.end();
  path.increments.resize(m + 1, steps);
  const KeyedNormal normal(seed);
  for (int j = 0; j < steps; ++j) {
    const double dt = path.mesh[j + 1] - path.mesh[j];
    path.increments(0, j) = dt;
    const double scale = std::sqrt(dt);
    for (int i = 1; i <= m; ++i) path.increments(i, j) = scale * normal(stream, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  }
  return path;
}

MeshPath coarsen(const MeshPath& fine, int factor) {
  if (factor < 1 || fine.steps() % factor != 0) throw std::invalid_argument("coarsening factor must divide the step count");
  const int steps = fine.steps() / factor;
  MeshPath coarse;
  coarse.mesh.resize(steps + 1);
  for (int j = 0; j <= steps; ++j) coarse.mesh[j] = fine.mesh[j * factor];
  coarse.increments = Eigen::MatrixXd::Zero(fine.increments.rows(), steps);
  for (int j = 0; j < steps; ++j) {
    coarse.increments(0, j) = coarse.mesh[j + 1] - coarse.mesh[j];
    for (Eigen::Index i = 1; i < fine.increments.rows(); ++i) {
      double sum = 0.0;
      for (int s = 0; s < factor; ++s) sum += fine.increments(i, j * factor + s);
      coarse.increments(i, j) = sum;
    }
  }
  return coarse;
}

namespace {

void check_path(const IntegralSpec& spec, const MeshPath& path) {
  if (!(path.interval() == spec.iv)) throw std::invalid_argument("mesh path does not cover the integral's interval");
  if (spec.max_component() > path.components()) throw std::invalid_argument("mesh path lacks a required component");
}

// Same as discretize_ito without the interval check, for reduced specs.
double ito_sum(const WeightSpec& weights, std::span<const int> indices, const MeshPath& path) {
  const int n = path.steps();
  const Interval iv = path.interval();
  // below[j] = nested sum of levels < l over indices strictly below j.
  Eigen::VectorXd below = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd level(n);
  for (int l = 0; l < weights.multiplicity(); ++l) {
    for (int j = 0; j < n; ++j) level[j] = weights[l](path.mesh[j], iv) * path.increments(indices[l], j) * below[j];
    if (l + 1 == weights.multiplicity()) break;
    double running = 0.0;
    for (int j = 0; j < n; ++j) {
      below[j] = running;
      running += level[j];
    }
  }
  return level.sum();
}

}  // namespace

double discretize_ito(const IntegralSpec& spec, const MeshPath& path) {
  check_path(spec, path);
  return ito_sum(spec.weights, spec.indices, path);
}

double strat_reference(const IntegralSpec& spec, const MeshPath& path) {
  check_path(spec, path);
  const int k = spec.multiplicity();
  if (k >= 4) throw capability_error("Stratonovich reference supports multiplicity k <= 3");
  double value = ito_sum(spec.weights, spec.indices, path);
  if (k == 1) return value;

  const auto& idx = spec.indices;
  if (k == 2) {
    if (idx[0] == idx[1] && idx[0] != 0) {
      const WeightPoly merged = spec.weights[0] * spec.weights[1];
      const auto rule = gauss_rule(merged.degree() / 2 + 1, spec.iv);
      value += 0.5 * rule.integrate([&](double s) { return merged(s, spec.iv); });
    }
    return value;
  }

  // k == 3: pairs (1,2) and (2,3).
  for (int s = 0; s + 1 < k; ++s) {
    if (idx[s] != idx[s + 1] || idx[s] == 0) continue;
    std::vector<WeightPoly> weights;
    std::vector<int> indices;
    for (int l = 0; l < k; ++l) {
      if (l == s) {
        weights.push_back(spec.weights[s] * spec.weights[s + 1]);
        indices.push_back(0);
        ++l;
      } else {
        weights.push_back(spec.weights[l]);
        indices.push_back(idx[l]);
      }
    }
    value += 0.5 * ito_sum(WeightSpec(std::move(weights)), indices, path);
  }
  return value;
}

GaussianTable coupled_table(const MeshPath& path, int max_j, BasisKind basis) {
  const Interval iv = path.interval();
  const int m = path.components();
  if (m < 1) throw std::invalid_argument("coupled table needs a Wiener component");
  Eigen::MatrixXd phi(max_j + 1, path.steps());
  for (int l = 0; l < path.steps(); ++l) phi.col(l) = eval_phi_all(basis, max_j, path.mesh[l], iv);
  const Eigen::MatrixXd rows = path.increments.bottomRows(m) * phi.transpose();
  return make_table(basis, iv, rows);
}

namespace {

void partitions_from(std::vector<int>& remaining, int pairs_left, int singles_left, PairPartition& current,
                     std::vector<PairPartition>& out) {
  if (remaining.empty()) {
    out.push_back(current);
    return;
  }
  const int first = remaining.front();
  if (singles_left > 0) {
    std::vector<int> rest(remaining.begin() + 1, remaining.end());
    current.singles.push_back(first);
    partitions_from(rest, pairs_left, singles_left - 1, current, out);
    current.singles.pop_back();
  }
  if (pairs_left > 0) {
    for (std::size_t partner = 1; partner < remaining.size(); ++partner) {
      std::vector<int> rest;
      for (std::size_t q = 1; q < remaining.size(); ++q) {
        if (q != partner) rest.push_back(remaining[q]);
      }
      current.pairs.emplace_back(first, remaining[partner]);
      partitions_from(rest, pairs_left - 1, singles_left, current, out);
      current.pairs.pop_back();
    }
  }
}

}  // namespace

std::vector<PairPartition> enumerate_pair_partitions(int k, int r) {
  if (k < 0 || r < 0 || 2 * r > k) throw std::invalid_argument("need 0 <= 2r <= k");
  std::vector<int> items(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) items[i] = i + 1;
  std::vector<PairPartition> out;
  PairPartition current;
  partitions_from(items, r, k - 2 * r, current, out);
  return out;
}

}  // namespace strat
