#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "report.hpp"
#include "strat/coefficients.hpp"
#include "strat/errors.hpp"
#include "strat/oracle.hpp"
#include "strat/parallel.hpp"
#include "strat/sampler.hpp"
#include "strat/sde.hpp"
#include "strat/verify.hpp"

namespace {

using stratcli::Cell;
using stratcli::Report;

constexpr std::uint64_t kDefaultSeed = 20240611;

// Thrown for input the parser accepted but the command cannot use.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string output;
  unsigned threads = 1;
};

std::uint64_t resolve_seed(const Globals& g) {
  if (g.seed) return *g.seed;
  const char* env = std::getenv("STRAT_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  std::uint64_t value = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto res = std::from_chars(env, end, value);
  if (res.ec != std::errc() || res.ptr != end) throw UsageError("STRAT_SEED is not an unsigned integer");
  return value;
}

// Every option of the subcommand with its effective value. Output-only
// settings (threads, output path) are global and left out so that they do not
// change the document.
std::vector<std::pair<std::string, std::string>> collect_flags(const CLI::App& sub) {
  std::vector<std::pair<std::string, std::string>> flags;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) {
        if (!value.empty()) value += ' ';
        value += r;
      }
    } else {
      value = opt->get_default_str();
    }
    std::string name = opt->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    flags.emplace_back(name, value);
  }
  return flags;
}

strat::BasisKind basis_from(const std::string& name) {
  const auto kind = strat::parse_basis(name);
  if (!kind) throw UsageError("unknown basis: " + name);
  return *kind;
}

strat::Interval make_interval(const std::vector<double>& v) {
  if (v.size() != 2) throw UsageError("--interval takes two values");
  return strat::Interval(v[0], v[1]);
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    int value = 0;
    const auto res = std::from_chars(text.data() + pos, text.data() + comma, value);
    if (res.ec != std::errc() || res.ptr != text.data() + comma) {
      throw UsageError(std::string("malformed ") + what + ": " + text);
    }
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

// --- coeffs ---------------------------------------------------------------

struct CoeffsArgs {
  std::string basis = "legendre";
  std::vector<int> exps = {0};
  std::vector<double> interval = {0.0, 1.0};
  std::vector<int> orders = {2};
  std::string cache;
};

Report run_coeffs(const CoeffsArgs& a, unsigned threads) {
  const auto basis = basis_from(a.basis);
  const int k = static_cast<int>(a.exps.size());
  if (k < 1 || k > 4) throw UsageError("--exps takes 1 to 4 exponents");
  for (int e : a.exps) {
    if (e < 0) throw UsageError("exponents must be non-negative");
  }
  std::vector<int> orders = a.orders;
  if (orders.size() == 1) orders.assign(static_cast<std::size_t>(k), orders[0]);
  if (static_cast<int>(orders.size()) != k) throw UsageError("--orders needs one value or one per exponent");
  for (int p : orders) {
    if (p < 0) throw UsageError("orders must be non-negative");
  }
  const auto iv = make_interval(a.interval);
  const auto spec = strat::monomial_spec(a.exps);
  const auto tensor = a.cache.empty() ? strat::compute_tensor(basis, spec, iv, orders, threads)
                                      : strat::cached_tensor(basis, spec, iv, orders, a.cache, threads);

  Report report;
  for (int l = 1; l <= k; ++l) report.columns.push_back("j" + std::to_string(l));
  report.columns.push_back("value");
  std::vector<int> index(static_cast<std::size_t>(k), 0);
  while (true) {
    std::vector<Cell> row;
    for (int j : index) row.emplace_back(static_cast<std::int64_t>(j));
    row.emplace_back(tensor(index));
    report.rows.push_back(std::move(row));
    int l = k - 1;
    while (l >= 0 && index[l] == orders[l]) index[l--] = 0;
    if (l < 0) break;
    ++index[l];
  }
  return report;
}

// --- sample ---------------------------------------------------------------

struct SampleArgs {
  std::vector<std::string> specs;
  int order = 10;
  int n = 1000;
  std::string basis = "legendre";
  std::vector<double> interval = {0.0, 1.0};
};

Report run_sample(const SampleArgs& a, std::uint64_t seed, unsigned threads) {
  const auto basis = basis_from(a.basis);
  const auto iv = make_interval(a.interval);
  if (a.order < 0) throw UsageError("--order must be non-negative");
  if (a.n < 0) throw UsageError("--n must be non-negative");
  std::vector<strat::IntegralSpec> specs;
  std::vector<strat::CoeffTensor> tensors;
  std::vector<strat::TruncationOrders> orders;
  int m = 1;
  for (const auto& text : a.specs) {
    const auto at = text.find('@');
    if (at == std::string::npos) throw UsageError("--spec must look like EXPS@COMPONENTS, e.g. 0,0@1,2");
    const auto exps = parse_int_list(text.substr(0, at), "exponents");
    const auto comps = parse_int_list(text.substr(at + 1), "components");
    if (exps.size() != comps.size()) throw UsageError("--spec needs one component per exponent: " + text);
    if (exps.size() > 4) throw UsageError("--spec supports at most 4 levels");
    for (int e : exps) {
      if (e < 0) throw UsageError("exponents must be non-negative");
    }
    specs.emplace_back(strat::monomial_spec(exps), comps, basis, iv);
    m = std::max(m, specs.back().max_component());
    orders.push_back(strat::TruncationOrders::uniform(static_cast<int>(exps.size()), a.order));
    tensors.push_back(strat::compute_tensor(basis, specs.back().weights, iv, orders.back().p, threads));
  }
  const auto values = strat::sample_batch(specs, tensors, m, orders, seed, a.n, threads);

  Report report;
  report.columns = a.specs;
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    std::vector<Cell> row;
    for (Eigen::Index c = 0; c < values.cols(); ++c) row.emplace_back(values(r, c));
    report.rows.push_back(std::move(row));
  }
  return report;
}

// --- verify ---------------------------------------------------------------

Report run_verify(const std::string& suite, unsigned threads, bool& all_passed) {
  Report report;
  report.columns = {"check", "passed", "detail"};
  all_passed = true;
  for (const auto& r : strat::run_suite(suite, threads)) {
    all_passed = all_passed && r.passed;
    report.rows.push_back({r.name, r.passed, r.detail});
  }
  return report;
}

// --- converge -------------------------------------------------------------

struct ConvergeArgs {
  std::string integral = "I00";
  std::vector<int> indices;
  std::vector<int> ladder = {1, 2, 4, 8, 16};
  int pref = 128;
  int n = 10000;
  std::vector<double> interval = {0.0, 1.0};
};

Report run_converge(const ConvergeArgs& a, std::uint64_t seed, unsigned threads) {
  const auto form = strat::parse_closed_form(a.integral);
  const auto basis = strat::closed_form_basis(form);
  const int k = strat::closed_form_multiplicity(form);
  std::vector<int> indices = a.indices;
  if (indices.empty()) indices = k == 1 ? std::vector<int>{1} : std::vector<int>{1, 2};
  if (static_cast<int>(indices.size()) != k) throw UsageError("--indices needs one component per level");
  for (int i : indices) {
    if (i < 1) throw UsageError("--indices are Wiener components, 1 or larger");
  }
  if (a.ladder.empty()) throw UsageError("--ladder must not be empty");
  for (int p : a.ladder) {
    if (p < 0 || p >= a.pref) throw UsageError("ladder orders must lie in [0, pref)");
  }
  if (a.n < 2) throw UsageError("--n must be at least 2");
  const auto iv = make_interval(a.interval);

  const strat::IntegralSpec spec(strat::monomial_spec(strat::closed_form_exponents(form)), indices, basis, iv);
  const auto reference_orders = strat::TruncationOrders::uniform(k, a.pref);
  const auto tensor = strat::compute_tensor(basis, spec.weights, iv, reference_orders.p, threads);
  std::vector<strat::TruncationOrders> ladder_orders;
  for (int p : a.ladder) ladder_orders.push_back(strat::TruncationOrders::uniform(k, p));

  const int m = spec.max_component();
  const strat::TableFactory factory(m, a.pref, basis, iv, seed);
  const auto levels = static_cast<Eigen::Index>(a.ladder.size());
  Eigen::MatrixXd squared(a.n, levels);
  strat::parallel_for(static_cast<std::size_t>(a.n), threads, [&](std::size_t r) {
    const auto table = factory(r);
    const double full = strat::sample_truncated(spec, tensor, table, reference_orders);
    for (Eigen::Index l = 0; l < levels; ++l) {
      const double d = full - strat::sample_truncated(spec, tensor, table, ladder_orders[static_cast<std::size_t>(l)]);
      squared(static_cast<Eigen::Index>(r), l) = d * d;
    }
  });

  Report report;
  report.columns = {"p", "p_ref", "mse", "std_error", "exact"};
  const strat::ExpansionRef reference{spec, tensor, reference_orders};
  for (Eigen::Index l = 0; l < levels; ++l) {
    const auto col = squared.col(l);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(a.n - 1);
    const strat::ExpansionRef truncated{spec, tensor, ladder_orders[static_cast<std::size_t>(l)]};
    report.rows.push_back({static_cast<std::int64_t>(a.ladder[static_cast<std::size_t>(l)]),
                           static_cast<std::int64_t>(a.pref), mean, std::sqrt(var / a.n),
                           strat::truncated_mean_square_difference(reference, truncated)});
  }
  return report;
}

// --- sde ------------------------------------------------------------------

struct SdeArgs {
  std::string problem = "gbm";
  std::string scheme = "milstein";
  std::vector<int> ladder = {16, 32, 64, 128, 256, 512};
  int n = 500;
  int order = 10;
};

Report run_sde(const SdeArgs& a, std::uint64_t seed, unsigned threads) {
  const auto problem = strat::problem_by_name(a.problem);
  const auto scheme = strat::parse_scheme(a.scheme);
  const auto result = strat::convergence_study(problem, scheme, a.ladder, a.n, seed, a.order, threads);
  Report report;
  report.columns = {"steps", "h", "rms_error", "reference_steps", "slope"};
  for (const auto& level : result.levels) {
    report.rows.push_back({static_cast<std::int64_t>(level.steps), level.h, level.rms_error,
                           static_cast<std::int64_t>(result.reference_steps), result.slope});
  }
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated Stratonovich integrals: coefficients, sampling, checks and SDE demos", "stratint"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed (default: $STRAT_SEED, else 20240611)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", g.output, "Write to this file instead of standard output");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u));

  CoeffsArgs coeffs;
  auto* c = app.add_subcommand("coeffs", "Fourier coefficients C_{j_k...j_1}");
  c->add_option("--basis", coeffs.basis, "legendre or trigonometric");
  c->add_option("--exps", coeffs.exps, "Weight exponents l_1,...,l_k")->delimiter(',');
  c->add_option("--interval", coeffs.interval, "Interval t T")->expected(2);
  c->add_option("--orders", coeffs.orders, "Truncation order per axis (one value broadcasts)")->delimiter(',');
  c->add_option("--cache", coeffs.cache, "Coefficient cache file");

  SampleArgs sample;
  auto* s = app.add_subcommand("sample", "Joint samples of truncated expansions");
  s->add_option("--spec", sample.specs, "Integral as EXPS@COMPONENTS, e.g. 0,0@1,2 (repeatable)")->required();
  s->add_option("--order", sample.order, "Truncation order");
  s->add_option("--n", sample.n, "Number of samples");
  s->add_option("--basis", sample.basis, "legendre or trigonometric");
  s->add_option("--interval", sample.interval, "Interval t T")->expected(2);

  std::string suite;
  auto* v = app.add_subcommand("verify", "Run a verification suite");
  v->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(strat::suite_names()));

  ConvergeArgs converge;
  auto* cv = app.add_subcommand("converge", "Mean-square truncation error against a high-order reference");
  cv->add_option("--integral", converge.integral, "Closed-form name, e.g. I00 or I00t");
  cv->add_option("--indices", converge.indices, "Wiener components (default 1 or 1,2)")->delimiter(',');
  cv->add_option("--ladder", converge.ladder, "Truncation orders p")->delimiter(',');
  cv->add_option("--pref", converge.pref, "Reference truncation order");
  cv->add_option("--n", converge.n, "Number of samples");
  cv->add_option("--interval", converge.interval, "Interval t T")->expected(2);

  SdeArgs sde;
  auto* sd = app.add_subcommand("sde", "Strong convergence study of Euler or Milstein");
  sd->add_option("--problem", sde.problem, "gbm, linear2d or ode");
  sd->add_option("--scheme", sde.scheme, "euler or milstein");
  sd->add_option("--ladder", sde.ladder, "Step counts")->delimiter(',');
  sd->add_option("--n", sde.n, "Number of paths");
  sd->add_option("--order", sde.order, "Truncation order of the double integrals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  int status = 0;
  Report report;
  try {
    const std::uint64_t seed = resolve_seed(g);
    const CLI::App* sub = app.get_subcommands().front();
    if (sub == c) {
      report = run_coeffs(coeffs, g.threads);
    } else if (sub == s) {
      report = run_sample(sample, seed, g.threads);
    } else if (sub == v) {
      bool passed = true;
      report = run_verify(suite, g.threads, passed);
      status = passed ? 0 : 1;
    } else if (sub == cv) {
      report = run_converge(converge, seed, g.threads);
    } else {
      report = run_sde(sde, seed, g.threads);
    }
    report.seed = seed;
    report.command = sub->get_name();
    report.flags = collect_flags(*sub);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const strat::capability_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream text;
  if (g.format == "json") {
    stratcli::write_json(report, text);
  } else {
    stratcli::write_csv(report, text);
  }
  if (g.output.empty()) {
    std::cout << text.str();
    std::cout.flush();
  } else {
    std::ofstream out(g.output, std::ios::binary | std::ios::trunc);
    out << text.str();
    if (!out) {
      std::cerr << "error: cannot write " << g.output << '\n';
      return 2;
    }
  }
  return status;
}
