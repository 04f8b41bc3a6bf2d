#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "strat/sampler.hpp"

namespace strat {

/// dX = a(X) dt + sum_j b_j(X) o dW_j in the Stratonovich sense on [0, horizon].
struct SdeProblem {
  std::string name;
  int dimension = 1;
  int noises = 1;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
  /// d x m matrix whose column j is b_j.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> diffusion;
  /// (b_{j1} . grad) b_{j2}, components 1-based.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, int, int)> diffusion_derivative;
  Eigen::VectorXd initial_state;
  double horizon = 1.0;
};

/// Scalar geometric Brownian motion dX = 1.5 X dt + X o dW, X_0 = 1, T = 1.
SdeProblem geometric_brownian();
/// Two-dimensional linear system with two non-commuting noises.
SdeProblem linear_2d();
/// dX = -X dt with a single zero-valued noise.
SdeProblem decay_ode();

/// "gbm", "linear2d" or "ode"; std::invalid_argument otherwise.
SdeProblem problem_by_name(std::string_view name);
std::vector<std::string> problem_names();

enum class Scheme { euler, milstein };
Scheme parse_scheme(std::string_view name);
std::string_view to_string(Scheme scheme);

/// One step on the interval covered by `table` (Legendre basis). Euler uses
/// the Ito drift a + 1/2 sum_j (b_j . grad) b_j and dW = sqrt(h) zeta_0;
/// Milstein adds sum_{j1, j2} (b_{j1} . grad) b_{j2} I*_{(00)}^{(j1 j2)} from the
/// closed form at order p.
Eigen::VectorXd advance(const SdeProblem& problem, Scheme scheme, const Eigen::VectorXd& x, const GaussianTable& table,
                        int p);

/// Final state after `steps` uniform steps; step n draws its table from
/// stream path_step_stream(0, n).
Eigen::VectorXd integrate(const SdeProblem& problem, Scheme scheme, int steps, std::uint64_t seed, int p = 10);

/// Noise of one path on a uniform level: per step the m x (p+1) Legendre
/// coefficients of the Wiener components (row i-1 for component i) and the
/// Wiener increments. Column 0 of zeta equals dw / sqrt(h).
struct NoiseLevel {
  int steps = 0;
  double h = 0.0;
  std::vector<Eigen::MatrixXd> zeta;
  std::vector<Eigen::VectorXd> dw;
};

/// Independent N(0, 1) coefficients from KeyedNormal(seed) at
/// (path_step_stream(path, n), i, j).
NoiseLevel fresh_level(int m, int p, int steps, double horizon, std::uint64_t seed, std::uint32_t path);

/// transfer[s](j, i) = integral over half s of phi_j(parent) phi_i(half) for a
/// step split in two; lower triangular and independent of the step length.
std::array<Eigen::MatrixXd, 2> legendre_transfer(int p);

/// Merges adjacent step pairs. Coefficients up to p are the exact projections
/// of the same path; increments are sums of the fine increments.
NoiseLevel coarsen_level(const NoiseLevel& fine, const std::array<Eigen::MatrixXd, 2>& transfer);

struct ConvergenceLevel {
  int steps;
  double h;
  double rms_error;
};

struct ConvergenceResult {
  std::vector<ConvergenceLevel> levels;
  int reference_steps;
  double slope;
};

/// RMS terminal error of each ladder level (at least four) against the same scheme at 16x the
/// finest level, over n_paths coupled paths. Coarse tables are exact Legendre
/// projections of the reference-level noise, so coarse Wiener increments are
/// sums of fine ones. The slope is the least-squares fit of log error on log h.
ConvergenceResult convergence_study(const SdeProblem& problem, Scheme scheme, std::vector<int> ladder, int n_paths,
                                    std::uint64_t seed, int p = 10, unsigned threads = 1);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace strat
