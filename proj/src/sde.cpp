#include "strat/sde.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "strat/parallel.hpp"
#include "strat/quadrature.hpp"
#include "strat/rng.hpp"

namespace strat {

SdeProblem geometric_brownian() {
  const double mu = 1.5;
  const double sigma = 1.0;
  SdeProblem p;
  p.name = "gbm";
  p.dimension = 1;
  p.noises = 1;
  p.drift = [mu](const Eigen::VectorXd& x) -> Eigen::VectorXd { return mu * x; };
  p.diffusion = [sigma](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return sigma * x; };
  p.diffusion_derivative = [sigma](const Eigen::VectorXd& x, int, int) -> Eigen::VectorXd { return sigma * sigma * x; };
  p.initial_state = Eigen::VectorXd::Ones(1);
  p.horizon = 1.0;
  return p;
}

SdeProblem linear_2d() {
  Eigen::Matrix2d a;
  a << -0.5, 0.2, 0.1, -0.3;
  Eigen::Matrix2d b1;
  b1 << 0.2, 0.4, 0.0, 0.1;
  Eigen::Matrix2d b2;
  b2 << 0.1, 0.0, 0.3, 0.2;
  const std::vector<Eigen::Matrix2d> b = {b1, b2};
  SdeProblem p;
  p.name = "linear2d";
  p.dimension = 2;
  p.noises = 2;
  p.drift = [a](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; };
  p.diffusion = [b](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    Eigen::MatrixXd out(2, 2);
    out.col(0) = b[0] * x;
    out.col(1) = b[1] * x;
    return out;
  };
  // b_j(x) = B_j x, so (b_{j1} . grad) b_{j2} = B_{j2} B_{j1} x.
  p.diffusion_derivative = [b](const Eigen::VectorXd& x, int j1, int j2) -> Eigen::VectorXd {
    return b[j2 - 1] * (b[j1 - 1] * x);
  };
  p.initial_state = Eigen::Vector2d(1.0, 0.5);
  p.horizon = 1.0;
  return p;
}

SdeProblem decay_ode() {
  SdeProblem p;
  p.name = "ode";
  p.dimension = 1;
  p.noises = 1;
  p.drift = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return -x; };
  p.diffusion = [](const Eigen::VectorXd&) -> Eigen::MatrixXd { return Eigen::MatrixXd::Zero(1, 1); };
  p.diffusion_derivative = [](const Eigen::VectorXd&, int, int) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(1); };
  p.initial_state = Eigen::VectorXd::Ones(1);
  p.horizon = 1.0;
  return p;
}

std::vector<std::string> problem_names() { return {"gbm", "linear2d", "ode"}; }

SdeProblem problem_by_name(std::string_view name) {
  if (name == "gbm") return geometric_brownian();
  if (name == "linear2d") return linear_2d();
  if (name == "ode") return decay_ode();
  throw std::invalid_argument("unknown SDE problem: " + std::string(name));
}

Scheme parse_scheme(std::string_view name) {
  if (name == "euler") return Scheme::euler;
  if (name == "milstein") return Scheme::milstein;
  throw std::invalid_argument("unknown scheme: " + std::string(name));
}

std::string_view to_string(Scheme scheme) { return scheme == Scheme::euler ? "euler" : "milstein"; }

Eigen::VectorXd advance(const SdeProblem& problem, Scheme scheme, const Eigen::VectorXd& x, const GaussianTable& table,
                        int p) {
  const double h = table.iv.length();
  const double root_h = std::sqrt(h);
  const int m = problem.noises;
  Eigen::VectorXd dw(m);
  for (int j = 0; j < m; ++j) dw[j] = root_h * table(j + 1, 0);

  Eigen::VectorXd next = x + problem.diffusion(x) * dw;
  if (scheme == Scheme::euler) {
    Eigen::VectorXd drift = problem.drift(x);
    for (int j = 1; j <= m; ++j) drift += 0.5 * problem.diffusion_derivative(x, j, j);
    return next + h * drift;
  }
  next += h * problem.drift(x);
  for (int j1 = 1; j1 <= m; ++j1) {
    for (int j2 = 1; j2 <= m; ++j2) {
      const int components[2] = {j1, j2};
      next += problem.diffusion_derivative(x, j1, j2) * sample_closed_form(ClosedForm::I00, table, table.iv, p, components);
    }
  }
  return next;
}

NoiseLevel fresh_level(int m, int p, int steps, double horizon, std::uint64_t seed, std::uint32_t path) {
  const KeyedNormal normal(seed);
  NoiseLevel level;
  level.steps = steps;
  level.h = horizon / steps;
  const double root_h = std::sqrt(level.h);
  level.zeta.reserve(static_cast<std::size_t>(steps));
  level.dw.reserve(static_cast<std::size_t>(steps));
  for (int n = 0; n < steps; ++n) {
    const std::uint64_t stream = path_step_stream(path, static_cast<std::uint32_t>(n));
    Eigen::MatrixXd z(m, p + 1);
    for (int i = 1; i <= m; ++i) {
      for (int j = 0; j <= p; ++j) z(i - 1, j) = normal(stream, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
    level.dw.push_back(root_h * z.col(0));
    level.zeta.push_back(std::move(z));
  }
  return level;
}

std::array<Eigen::MatrixXd, 2> legendre_transfer(int p) {
  const Interval parent(0.0, 2.0);
  const std::array<Interval, 2> halves = {Interval(0.0, 1.0), Interval(1.0, 2.0)};
  std::array<Eigen::MatrixXd, 2> out;
  for (int s = 0; s < 2; ++s) {
    const auto rule = gauss_rule(p + 1, halves[s]);
    out[s] = Eigen::MatrixXd::Zero(p + 1, p + 1);
    for (Eigen::Index q = 0; q < rule.size(); ++q) {
      out[s] += rule.weights[q] * eval_phi_all(BasisKind::legendre, p, rule.nodes[q], parent) *
                eval_phi_all(BasisKind::legendre, p, rule.nodes[q], halves[s]).transpose();
    }
  }
  return out;
}

NoiseLevel coarsen_level(const NoiseLevel& fine, const std::array<Eigen::MatrixXd, 2>& transfer) {
  NoiseLevel coarse;
  coarse.steps = fine.steps / 2;
  coarse.h = 2.0 * fine.h;
  const double root_h = std::sqrt(coarse.h);
  for (int n = 0; n < coarse.steps; ++n) {
    const auto& left = fine.zeta[2 * n];
    const auto& right = fine.zeta[2 * n + 1];
    Eigen::MatrixXd z = left * transfer[0].transpose() + right * transfer[1].transpose();
    Eigen::VectorXd dw = fine.dw[2 * n] + fine.dw[2 * n + 1];
    z.col(0) = dw / root_h;
    coarse.zeta.push_back(std::move(z));
    coarse.dw.push_back(std::move(dw));
  }
  return coarse;
}

namespace {

class PathIntegrator {
 public:
  PathIntegrator(const SdeProblem& problem, Scheme scheme, int p)
      : problem_(problem), scheme_(scheme), p_(p),
        unit_row0_(deterministic_row(BasisKind::legendre, p, Interval(0.0, 1.0))) {}

  Eigen::VectorXd run(const NoiseLevel& level) const {
    Eigen::VectorXd x = problem_.initial_state;
    GaussianTable table;
    table.m = problem_.noises;
    table.max_j = p_;
    table.basis = BasisKind::legendre;
    table.values.resize(problem_.noises + 1, p_ + 1);
    table.values.row(0) = std::sqrt(level.h) * unit_row0_.transpose();
    for (int n = 0; n < level.steps; ++n) {
      const double start = problem_.horizon * n / level.steps;
      const double end = problem_.horizon * (n + 1) / level.steps;
      table.iv = Interval(start, end);
      table.values.bottomRows(problem_.noises) = level.zeta[static_cast<std::size_t>(n)];
      x = advance(problem_, scheme_, x, table, p_);
    }
    return x;
  }

 private:
  const SdeProblem& problem_;
  Scheme scheme_;
  int p_;
  Eigen::VectorXd unit_row0_;
};

}  // namespace

Eigen::VectorXd integrate(const SdeProblem& problem, Scheme scheme, int steps, std::uint64_t seed, int p) {
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (p < 0) throw std::invalid_argument("truncation order must be non-negative");
  const NoiseLevel level = fresh_level(problem.noises, p, steps, problem.horizon, seed, 0);
  return PathIntegrator(problem, scheme, p).run(level);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult convergence_study(const SdeProblem& problem, Scheme scheme, std::vector<int> ladder, int n_paths,
                                    std::uint64_t seed, int p, unsigned threads) {
  if (ladder.size() < 4) throw std::invalid_argument("ladder needs at least four levels");
  if (n_paths < 1) throw std::invalid_argument("need at least one path");
  if (p < 0) throw std::invalid_argument("truncation order must be non-negative");
  std::sort(ladder.begin(), ladder.end());
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] < 1) throw std::invalid_argument("ladder step counts must be positive");
    if (i > 0) {
      const int ratio = ladder[i] / ladder[i - 1];
      if (ladder[i] % ladder[i - 1] != 0 || ratio < 2 || (ratio & (ratio - 1)) != 0) {
        throw std::invalid_argument("ladder levels must differ by powers of two");
      }
    }
  }
  const int reference_steps = 16 * ladder.back();
  const auto transfer = legendre_transfer(p);
  const PathIntegrator integrator(problem, scheme, p);

  // squared[path][level]
  Eigen::MatrixXd squared(n_paths, static_cast<Eigen::Index>(ladder.size()));
  parallel_for(static_cast<std::size_t>(n_paths), threads, [&](std::size_t path) {
    NoiseLevel level = fresh_level(problem.noises, p, reference_steps, problem.horizon, seed, static_cast<std::uint32_t>(path));
    const Eigen::VectorXd reference = integrator.run(level);
    for (std::size_t li = ladder.size(); li-- > 0;) {
      while (level.steps > ladder[li]) level = coarsen_level(level, transfer);
      squared(static_cast<Eigen::Index>(path), static_cast<Eigen::Index>(li)) = (integrator.run(level) - reference).squaredNorm();
    }
  });

  ConvergenceResult result;
  result.reference_steps = reference_steps;
  std::vector<double> hs, errors;
  for (std::size_t li = 0; li < ladder.size(); ++li) {
    const double h = problem.horizon / ladder[li];
    const double rms = std::sqrt(squared.col(static_cast<Eigen::Index>(li)).mean());
    result.levels.push_back({ladder[li], h, rms});
    hs.push_back(h);
    errors.push_back(rms);
  }
  result.slope = log_log_slope(hs, errors);
  return result;
}

}  // namespace strat
