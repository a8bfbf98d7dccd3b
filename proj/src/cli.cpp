#include "estimability/cli.hpp"

#include "estimability/diagnostics.hpp"
#include "estimability/errors.hpp"
#include "estimability/finite_maps.hpp"
#include "estimability/fredholm.hpp"
#include "estimability/io.hpp"
#include "estimability/regularization.hpp"
#include "estimability/robustness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

namespace estimability::cli {

namespace {

constexpr std::size_t kMaxFiniteBound = 5;
constexpr long kMaxRegularizedGrid = 4096;

struct Outputs {
  std::string out_path;
  std::string csv_path;
};

void emit_json(const io::JsonObject &report, const Outputs &outputs, std::ostream &out) {
  if (outputs.out_path.empty()) {
    out << report.dump() << '\n';
    return;
  }
  std::ofstream file(outputs.out_path);
  if (!file)
    throw InvalidInput("cannot write '" + outputs.out_path + "'");
  file << report.dump() << '\n';
}

void emit_csv(const std::vector<std::string> &header, const std::vector<Vector> &columns,
              const Outputs &outputs) {
  if (outputs.csv_path.empty())
    return;
  std::ofstream file(outputs.csv_path);
  if (!file)
    throw InvalidInput("cannot write '" + outputs.csv_path + "'");
  io::write_csv(file, header, columns);
}

io::JsonObject report_to_json(const DiagnosisReport &r) {
  io::JsonObject json;
  json.set("identifiable", r.identifiable)
      .set("numerical_rank", r.numerical_rank)
      .set("sigma_max", r.sigma_max)
      .set("sigma_min", r.sigma_min)
      .set("condition_number", r.condition_number)
      .set("stability_constant", r.stability_constant)
      .set("classification", std::string(to_string(r.classification)))
      .set("spectrum", r.spectrum);
  if (r.decay_exponent)
    json.set("decay_exponent", *r.decay_exponent);
  else
    json.set("decay_exponent", io::JsonValue(io::Null{}));
  return json;
}

std::vector<double> parse_probes(const std::string &spec, bool symmetric) {
  std::vector<std::string> parts;
  std::string_view rest = spec;
  for (;;) {
    const auto colon = rest.find(':');
    parts.emplace_back(rest.substr(0, colon));
    if (colon == std::string_view::npos)
      break;
    rest = rest.substr(colon + 1);
  }
  if (parts.size() != 3)
    throw InvalidInput("--probes must be min:max:count");
  auto number = [](const std::string &s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
      throw InvalidInput("invalid number '" + s + "' in --probes");
    return v;
  };
  const double lo = number(parts[0]);
  const double hi = number(parts[1]);
  const double count_value = number(parts[2]);
  if (count_value < 1 || count_value != std::floor(count_value) || count_value > 100000)
    throw InvalidInput("--probes count must be a positive integer");
  const auto count = static_cast<int>(count_value);
  if (lo == 0.0 || hi == 0.0 || (lo < 0.0) != (hi < 0.0))
    throw InvalidInput("log-spaced --probes need min and max of the same sign, both nonzero");

  const double sign = lo < 0.0 ? -1.0 : 1.0;
  const double log_lo = std::log10(std::abs(lo));
  const double log_hi = std::log10(std::abs(hi));
  std::vector<double> probes;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    probes.push_back(sign * std::pow(10.0, log_lo + t * (log_hi - log_lo)));
  }
  if (symmetric) {
    const auto n = probes.size();
    for (std::size_t i = 0; i < n; ++i)
      probes.push_back(-probes[i]);
  }
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

int run_analyze(const std::string &matrix_path, std::optional<double> rtol, double kappa,
                const std::string &param_path, const Outputs &outputs, std::ostream &out) {
  const auto a = io::read_matrix_file(matrix_path);
  auto json = report_to_json(diagnose(a, rtol, kappa));
  if (!param_path.empty()) {
    const auto q = io::read_matrix_file(param_path);
    json.set("parameter_identifiable", linear_parameter_identifiable(a, q, rtol));
  }
  emit_json(json, outputs, out);
  return kSuccess;
}

struct SolveOptions {
  std::string matrix_path;
  std::string data_path;
  std::string method = "none";
  std::optional<double> lambda;
  std::optional<long> k;
  std::optional<double> noise;
  double tau = 1.0;
};

int run_solve(const SolveOptions &o, const Outputs &outputs, std::ostream &out) {
  const auto a = io::read_matrix_file(o.matrix_path);
  const auto d = io::read_vector_file(o.data_path);
  if (d.size() != a.rows())
    throw InvalidInput("data has " + std::to_string(d.size()) + " entries but the matrix has " +
                       std::to_string(a.rows()) + " rows");

  io::JsonObject json;
  json.set("method", o.method);
  Vector solution;
  const auto factors = svd(a);
  if (o.method == "none") {
    if (o.lambda || o.k || o.noise)
      throw InvalidInput("--method none takes no --lambda, --k or --noise");
    solution = pseudoinverse(factors) * d;
    json.set("parameter", io::JsonValue(io::Null{}));
  } else if (o.method == "tikhonov") {
    if (o.k)
      throw InvalidInput("--k applies to --method tsvd");
    if (o.lambda.has_value() == o.noise.has_value())
      throw InvalidInput("--method tikhonov needs exactly one of --lambda or --noise");
    double lambda = 0.0;
    if (o.noise) {
      lambda = discrepancy_select(a, d, *o.noise, o.tau);
      json.set("parameter_selection", "discrepancy");
    } else {
      lambda = *o.lambda;
    }
    solution = tikhonov_solve(factors, d, lambda);
    json.set("parameter", lambda);
  } else if (o.method == "tsvd") {
    if (o.lambda || o.noise)
      throw InvalidInput("--method tsvd takes --k only");
    if (!o.k)
      throw InvalidInput("--method tsvd needs --k");
    solution = tsvd_solve(factors, d, *o.k);
    json.set("parameter", *o.k);
  } else {
    throw InvalidInput("unknown method '" + o.method + "'");
  }

  json.set("residual", (a.apply(solution) - d).norm())
      .set("solution_norm", solution.norm())
      .set("solution", solution);
  emit_csv({}, {solution}, outputs);
  emit_json(json, outputs, out);
  return kSuccess;
}

struct FredholmOptions {
  long n = 1000;
  int n_osc = 8;
  std::optional<double> lambda;
  std::optional<double> noise;
};

int run_fredholm(const FredholmOptions &o, const Outputs &outputs, std::ostream &out) {
  const auto result = run_instability_experiment(o.n, o.n_osc);

  const Grid grid(o.n);
  const Vector clean = fredholm_rhs(grid);
  const Vector perturbed = fredholm_rhs(grid, o.n_osc);
  const Vector recovered = cumulative_solve(perturbed, grid.h());
  const Vector analytic = analytic_perturbed_solution(grid, o.n_osc);

  io::JsonObject json;
  json.set("n", o.n)
      .set("n_osc", o.n_osc)
      .set("delta", result.delta)
      .set("rhs_dev", result.rhs_dev)
      .set("sol_dev", result.sol_dev)
      .set("amplification", result.amplification)
      .set("analytic_sup_error", (recovered - analytic).cwiseAbs().maxCoeff());

  std::vector<std::string> header{"y", "F_unperturbed", "F_perturbed", "f_recovered",
                                  "f_analytic"};
  std::vector<Vector> columns{grid.points(), clean, perturbed, recovered, analytic};

  if (o.lambda || o.noise) {
    if (o.n > kMaxRegularizedGrid)
      throw InvalidInput("regularized fredholm-demo runs a dense SVD; use --n <= " +
                         std::to_string(kMaxRegularizedGrid));
    const auto k = heaviside_operator(o.n);
    double lambda = 0.0;
    if (o.noise) {
      lambda = discrepancy_select(k, perturbed, *o.noise);
      json.set("parameter_selection", "discrepancy");
    } else {
      lambda = *o.lambda;
    }
    const Vector regularized = tikhonov_solve(k, perturbed, lambda);
    json.set("lambda", lambda)
        .set("regularized_sup_deviation", (regularized.array() - 1.0).abs().maxCoeff());
    header.emplace_back("f_regularized");
    columns.push_back(regularized);
  }

  emit_csv(header, columns, outputs);
  emit_json(json, outputs, out);
  return kSuccess;
}

int run_influence(const std::string &path, const std::string &functional,
                  const std::string &probes, bool symmetric, const Outputs &outputs,
                  std::ostream &out) {
  const auto f = io::read_distribution_file(path);
  const auto t = Functional::parse(functional);
  const auto points = parse_probes(probes, symmetric);
  const auto profile = influence_profile(t, f, points);

  io::JsonObject json;
  json.set("functional", t.name()).set("value", evaluate(t, f));
  if (profile.gross_error_sensitivity)
    json.set("gross_error_sensitivity", *profile.gross_error_sensitivity);
  else
    json.set("gross_error_sensitivity", "unbounded");
  json.set("unbounded_flag", profile.unbounded_flag)
      .set("asymptotic_variance", profile.asymptotic_variance);

  const Eigen::Map<const Vector> probe_column(profile.probe_points.data(),
                                              static_cast<Eigen::Index>(points.size()));
  const Eigen::Map<const Vector> value_column(profile.values.data(),
                                              static_cast<Eigen::Index>(points.size()));
  emit_csv({"y", "influence"}, {probe_column, value_column}, outputs);
  emit_json(json, outputs, out);
  return kSuccess;
}

int run_finite_check(std::size_t max_domain, std::size_t max_codomain, const Outputs &outputs,
                     std::ostream &out) {
  if (max_domain < 1 || max_codomain < 1 || max_domain > kMaxFiniteBound ||
      max_codomain > kMaxFiniteBound)
    throw InvalidInput("--max-domain and --max-codomain must lie in [1, " +
                       std::to_string(kMaxFiniteBound) + "]");
  const auto r = run_equivalence_checks(max_domain, max_codomain);
  io::JsonObject json;
  json.set("max_domain", r.max_domain)
      .set("max_codomain", r.max_codomain)
      .set("fisher_maps_checked", r.fisher_maps_checked)
      .set("fisher_counterexamples", r.fisher_counterexamples)
      .set("parameter_pairs_checked", r.parameter_pairs_checked)
      .set("parameter_disagreements", r.parameter_disagreements)
      .set("generalized_inverse_failures", r.generalized_inverse_failures)
      .set("counterexamples", r.counterexamples());
  emit_json(json, outputs, out);
  return kSuccess;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Identifiability and estimability diagnostics for inverse problems",
               "estimability"};
  app.require_subcommand(1);

  Outputs outputs;
  auto add_out = [&](CLI::App *sub) {
    sub->add_option("--out", outputs.out_path, "Write the JSON report here instead of stdout");
  };
  auto add_csv = [&](CLI::App *sub) {
    sub->add_option("--csv", outputs.csv_path, "Write tabular output to this CSV file");
  };

  std::string matrix_path, param_path;
  std::optional<double> rtol;
  double kappa = kDefaultKappaThreshold;
  auto *analyze = app.add_subcommand("analyze", "Classify a linear forward mapping");
  analyze->add_option("matrix", matrix_path, "Matrix CSV")->required();
  analyze->add_option("--rtol", rtol, "Relative rank tolerance");
  analyze->add_option("--kappa-threshold", kappa, "Condition number regarded as ill-conditioned")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--param", param_path, "Parameter map CSV to test for identifiability");
  add_out(analyze);

  SolveOptions solve_opts;
  auto *solve = app.add_subcommand("solve", "Solve A·θ = d with optional regularization");
  solve->add_option("matrix", solve_opts.matrix_path, "Matrix CSV")->required();
  solve->add_option("data", solve_opts.data_path, "Data vector CSV")->required();
  solve->add_option("--method", solve_opts.method, "tikhonov, tsvd or none")
      ->check(CLI::IsMember({"tikhonov", "tsvd", "none"}));
  solve->add_option("--lambda", solve_opts.lambda, "Tikhonov weight");
  solve->add_option("--k", solve_opts.k, "TSVD truncation level");
  solve->add_option("--noise", solve_opts.noise, "Noise level; selects lambda by discrepancy");
  solve->add_option("--tau", solve_opts.tau, "Discrepancy safety factor (>= 1)");
  add_out(solve);
  add_csv(solve);

  FredholmOptions fredholm_opts;
  auto *fredholm = app.add_subcommand("fredholm-demo", "Heaviside-kernel instability experiment");
  fredholm->add_option("--n", fredholm_opts.n, "Grid size")->check(CLI::Range(2L, 20000L));
  fredholm->add_option("--n-osc", fredholm_opts.n_osc, "Oscillation count (delta = 1/(2 n_osc pi))")
      ->check(CLI::PositiveNumber);
  auto *lambda_opt = fredholm->add_option("--lambda", fredholm_opts.lambda, "Tikhonov weight");
  auto *noise_opt =
      fredholm->add_option("--noise", fredholm_opts.noise, "Noise level for discrepancy selection");
  lambda_opt->excludes(noise_opt);
  add_out(fredholm);
  add_csv(fredholm);

  std::string dist_path, functional = "mean", probes = "10:1000000:11";
  bool symmetric = false;
  auto *influence = app.add_subcommand("influence", "Influence function profile of a functional");
  influence->add_option("distribution", dist_path, "CSV of location,weight rows")->required();
  influence->add_option("--functional", functional, "mean, median or trimmed:<frac>");
  influence->add_option("--probes", probes, "min:max:count, log-spaced");
  influence->add_flag("--symmetric", symmetric, "Also probe the negated points");
  add_out(influence);
  add_csv(influence);

  std::size_t max_domain = 4, max_codomain = 4;
  auto *finite = app.add_subcommand("finite-check", "Exhaustive finite-map equivalence checks");
  finite->add_option("--max-domain", max_domain, "Largest domain size");
  finite->add_option("--max-codomain", max_codomain, "Largest codomain size");
  add_out(finite);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (analyze->parsed())
      return run_analyze(matrix_path, rtol, kappa, param_path, outputs, out);
    if (solve->parsed())
      return run_solve(solve_opts, outputs, out);
    if (fredholm->parsed())
      return run_fredholm(fredholm_opts, outputs, out);
    if (influence->parsed())
      return run_influence(dist_path, functional, probes, symmetric, outputs, out);
    if (finite->parsed())
      return run_finite_check(max_domain, max_codomain, outputs, out);
  } catch (const InvalidInput &e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalFailure &e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kInputError;
}

} // namespace estimability::cli
