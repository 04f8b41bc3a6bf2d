#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "strat/basis.hpp"
#include "strat/coefficients.hpp"
#include "strat/sampler.hpp"

namespace strat {

/// Discretized Wiener path on a mesh t = tau_0 < ... < tau_N = T.
///
/// increments is (m+1) x N: row 0 holds the mesh steps tau_{j+1} - tau_j,
/// rows 1..m the Wiener increments.
struct MeshPath {
  Eigen::VectorXd mesh;
  Eigen::MatrixXd increments;

  int steps() const { return static_cast<int>(increments.cols()); }
  int components() const { return static_cast<int>(increments.rows()) - 1; }
  Interval interval() const { return Interval(mesh[0], mesh[mesh.size() - 1]); }
};

/// Uniform mesh with N(0, dtau) increments drawn from KeyedNormal(seed) at
/// (stream, component, step).
MeshPath uniform_path(const Interval& iv, int steps, int m, std::uint64_t seed, std::uint64_t stream);

/// Every `factor`-th mesh point; Wiener increments are summed over the merged steps.
MeshPath coarsen(const MeshPath& fine, int factor);

/// Prelimit Ito sum: sum over j_1 < ... < j_k of prod psi_l(tau_{j_l}) dw^{(i_l)}_{tau_{j_l}},
/// with left-endpoint weights.
double discretize_ito(const IntegralSpec& spec, const MeshPath& path);

/// Ito sum plus the Ito-to-Stratonovich corrections, k <= 3. Each correction
/// merges a pair of equal nonzero neighbouring components into a ds-integral
/// with weight psi_s psi_{s+1}; for k = 2 it is the exact deterministic
/// integral, for k = 3 it is evaluated by discretize_ito.
/// Throws capability_error for k >= 4.
double strat_reference(const IntegralSpec& spec, const MeshPath& path);

/// Table coupled to the path: zeta_j^{(i)} = sum_l phi_j(tau_l) dw^{(i)}_l for
/// i >= 1, row 0 deterministic.
GaussianTable coupled_table(const MeshPath& path, int max_j, BasisKind basis);

/// Partition of {1, ..., k} into unordered pairs and singles.
struct PairPartition {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> singles;
};

/// All partitions of {1, ..., k} into r pairs and k - 2r singles;
/// there are k! / (2^r r! (k-2r)!) of them.
std::vector<PairPartition> enumerate_pair_partitions(int k, int r);

/// A truncated expansion as a random variable.
struct ExpansionRef {
  const IntegralSpec& spec;
  const CoeffTensor& tensor;
  const TruncationOrders& orders;
};

/// Exact E[X] (one factor) or E[X Y] (two factors) of truncated expansions.
/// Gaussian products are reduced with Isserlis pairings over the random
/// positions; row-0 factors are deterministic. Throws capability_error when
/// the total multiplicity exceeds 8.
double truncated_moment(std::span<const ExpansionRef> factors);

/// E[(X - Y)^2] from truncated_moment.
double truncated_mean_square_difference(const ExpansionRef& x, const ExpansionRef& y);

}  // namespace strat
