#include "estimability/diagnostics.hpp"
#include "estimability/errors.hpp"
#include "estimability/finite_maps.hpp"
#include "estimability/fredholm.hpp"
#include "estimability/linop.hpp"
#include "estimability/regularization.hpp"
#include "estimability/robustness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace estimability;

namespace {

using Rtol = std::optional<double>;

EmpiricalDistribution make_distribution(const std::vector<double> &locations,
                                        std::optional<std::vector<double>> weights) {
  if (!weights)
    return EmpiricalDistribution::uniform(locations);
  if (weights->size() != locations.size())
    throw InvalidInput("locations and weights differ in length");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < locations.size(); ++i)
    atoms.push_back({locations[i], (*weights)[i]});
  return EmpiricalDistribution::normalized(std::move(atoms));
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Identifiability and estimability diagnostics";

  auto error = py::register_exception<Error>(m, "EstimabilityError", PyExc_RuntimeError);
  auto invalid = py::register_exception<InvalidInput>(m, "InvalidInput", error.ptr());
  py::register_exception<CompositionError>(m, "CompositionError", invalid.ptr());
  py::register_exception<NoSolution>(m, "NoSolution", invalid.ptr());
  py::register_exception<ParseError>(m, "ParseError", invalid.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", error.ptr());

  // finite maps
  py::class_<FiniteMap>(m, "FiniteMap")
      .def(py::init<std::size_t, std::size_t, std::vector<std::size_t>>(), py::arg("domain_size"),
           py::arg("codomain_size"), py::arg("table"))
      .def_static("identity", &FiniteMap::identity)
      .def_static("parse", &parse_finite_map)
      .def_property_readonly("domain_size", &FiniteMap::domain_size)
      .def_property_readonly("codomain_size", &FiniteMap::codomain_size)
      .def_property_readonly("table", &FiniteMap::table)
      .def("__call__", &FiniteMap::operator())
      .def("__eq__", [](const FiniteMap &a, const FiniteMap &b) { return a == b; })
      .def("__repr__", [](const FiniteMap &f) { return "FiniteMap('" + format_finite_map(f) + "')"; })
      .def("__str__", &format_finite_map);

  m.def("compose", &compose, py::arg("outer"), py::arg("inner"));
  m.def("is_injective", &is_injective);
  m.def("is_surjective", &is_surjective);
  m.def("is_idempotent", &is_idempotent);
  m.def("restrict_to_range", &restrict_to_range);
  m.def("construct_inner_inverse", &construct_inner_inverse);
  m.def("verify_inner_inverse", &verify_inner_inverse, py::arg("p"), py::arg("g"));
  m.def("verify_outer_inverse", &verify_outer_inverse, py::arg("p"), py::arg("g"));
  m.def("promote_to_generalized", &promote_to_generalized, py::arg("p"), py::arg("g"));
  m.def("fisher_consistent_estimator", &fisher_consistent_estimator);
  m.def("parameter_identifiable_standard", &parameter_identifiable_standard, py::arg("p"),
        py::arg("q"));
  m.def("parameter_identifiable_sections", &parameter_identifiable_sections, py::arg("p"),
        py::arg("q"));
  m.def("enumerate_sections", &enumerate_sections);
  m.def(
      "run_equivalence_checks",
      [](std::size_t max_domain, std::size_t max_codomain) {
        const auto r = run_equivalence_checks(max_domain, max_codomain);
        py::dict d;
        d["max_domain"] = r.max_domain;
        d["max_codomain"] = r.max_codomain;
        d["fisher_maps_checked"] = r.fisher_maps_checked;
        d["fisher_counterexamples"] = r.fisher_counterexamples;
        d["parameter_pairs_checked"] = r.parameter_pairs_checked;
        d["parameter_disagreements"] = r.parameter_disagreements;
        d["generalized_inverse_failures"] = r.generalized_inverse_failures;
        d["counterexamples"] = r.counterexamples();
        return d;
      },
      py::arg("max_domain") = 4, py::arg("max_codomain") = 4);

  // linear operators
  py::class_<SvdFactors>(m, "SvdFactors")
      .def_readonly("left_vectors", &SvdFactors::left_vectors)
      .def_readonly("singular_values", &SvdFactors::singular_values)
      .def_readonly("right_vectors", &SvdFactors::right_vectors)
      .def_readonly("rank_tolerance", &SvdFactors::rank_tolerance)
      .def_readonly("discarded_values", &SvdFactors::discarded_values)
      .def_property_readonly("rank", &SvdFactors::rank)
      .def("full_spectrum", &SvdFactors::full_spectrum);

  m.def("svd", [](const Matrix &a, Rtol rtol) { return svd(DenseOperator(a), rtol); },
        py::arg("a"), py::arg("rtol") = py::none());
  m.def("pseudoinverse",
        [](const Matrix &a, Rtol rtol) { return pseudoinverse(DenseOperator(a), rtol).matrix(); },
        py::arg("a"), py::arg("rtol") = py::none());
  m.def("hat_operator",
        [](const Matrix &a, Rtol rtol) { return hat_operator(DenseOperator(a), rtol).matrix(); },
        py::arg("a"), py::arg("rtol") = py::none());
  m.def("model_resolution",
        [](const Matrix &a, Rtol rtol) { return model_resolution(DenseOperator(a), rtol).matrix(); },
        py::arg("a"), py::arg("rtol") = py::none());
  m.def("null_space_basis",
        [](const Matrix &a, Rtol rtol) { return null_space_basis(DenseOperator(a), rtol); },
        py::arg("a"), py::arg("rtol") = py::none());
  m.def("is_identifiable_linear",
        [](const Matrix &a, Rtol rtol) { return is_identifiable_linear(DenseOperator(a), rtol); },
        py::arg("a"), py::arg("rtol") = py::none());
  m.def(
      "linear_parameter_identifiable",
      [](const Matrix &p, const Matrix &q, Rtol rtol) {
        return linear_parameter_identifiable(DenseOperator(p), DenseOperator(q), rtol);
      },
      py::arg("p"), py::arg("q"), py::arg("rtol") = py::none());

  // diagnostics
  py::class_<DiagnosisReport>(m, "DiagnosisReport")
      .def_readonly("identifiable", &DiagnosisReport::identifiable)
      .def_readonly("numerical_rank", &DiagnosisReport::numerical_rank)
      .def_readonly("sigma_max", &DiagnosisReport::sigma_max)
      .def_readonly("sigma_min", &DiagnosisReport::sigma_min)
      .def_readonly("condition_number", &DiagnosisReport::condition_number)
      .def_readonly("stability_constant", &DiagnosisReport::stability_constant)
      .def_property_readonly("classification",
                             [](const DiagnosisReport &r) { return std::string(to_string(r.classification)); })
      .def_readonly("spectrum", &DiagnosisReport::spectrum)
      .def_readonly("decay_exponent", &DiagnosisReport::decay_exponent);

  m.def(
      "diagnose",
      [](const Matrix &a, Rtol rtol, double kappa) { return diagnose(DenseOperator(a), rtol, kappa); },
      py::arg("a"), py::arg("rtol") = py::none(), py::arg("kappa_threshold") = kDefaultKappaThreshold);
  m.def(
      "stability_bound_check",
      [](const Matrix &a, const Vector &t1, const Vector &t2) {
        const auto b = stability_bound_check(DenseOperator(a), t1, t2);
        return py::make_tuple(b.lhs, b.rhs, b.holds);
      },
      py::arg("a"), py::arg("theta1"), py::arg("theta2"));
  m.def("bounded_away_from_zero",
        [](const Matrix &a, Rtol rtol) { return bounded_away_from_zero(DenseOperator(a), rtol); },
        py::arg("a"), py::arg("rtol") = py::none());
  m.def(
      "perturbation_amplification",
      [](const Matrix &a, const Vector &d, const Vector &dp) {
        return perturbation_amplification(DenseOperator(a), d, dp);
      },
      py::arg("a"), py::arg("data"), py::arg("data_perturbed"));
  m.def("spectrum_decay", &spectrum_decay);

  // Fredholm example
  m.def("oscillation_delta", &oscillation_delta);
  m.def("grid_points", [](Eigen::Index n) { return Grid(n).points(); });
  m.def("heaviside_operator", [](Eigen::Index n) { return heaviside_operator(n).matrix(); });
  m.def("fredholm_rhs", [](Eigen::Index n, std::optional<int> n_osc) { return fredholm_rhs(Grid(n), n_osc); },
        py::arg("n"), py::arg("n_osc") = py::none());
  m.def("analytic_perturbed_solution",
        [](Eigen::Index n, int n_osc) { return analytic_perturbed_solution(Grid(n), n_osc); },
        py::arg("n"), py::arg("n_osc"));
  m.def("cumulative_solve", &cumulative_solve, py::arg("rhs"), py::arg("h"));
  m.def(
      "run_instability_experiment",
      [](Eigen::Index n, int n_osc) {
        const auto r = run_instability_experiment(n, n_osc);
        py::dict d;
        d["delta"] = r.delta;
        d["rhs_dev"] = r.rhs_dev;
        d["sol_dev"] = r.sol_dev;
        d["amplification"] = r.amplification;
        return d;
      },
      py::arg("n"), py::arg("n_osc"));

  // regularization
  m.def("tikhonov_solve",
        [](const Matrix &a, const Vector &d, double lambda) { return tikhonov_solve(DenseOperator(a), d, lambda); },
        py::arg("a"), py::arg("data"), py::arg("lam"));
  m.def("tsvd_solve",
        [](const Matrix &a, const Vector &d, Eigen::Index k) { return tsvd_solve(DenseOperator(a), d, k); },
        py::arg("a"), py::arg("data"), py::arg("k"));
  m.def("filter_factors",
        [](const Matrix &a, double lambda) { return filter_factors(svd(DenseOperator(a)), lambda); },
        py::arg("a"), py::arg("lam"));
  m.def(
      "discrepancy_select",
      [](const Matrix &a, const Vector &d, double noise, double tau) {
        return discrepancy_select(DenseOperator(a), d, noise, tau);
      },
      py::arg("a"), py::arg("data"), py::arg("noise_level"), py::arg("tau") = 1.0);
  m.def(
      "restriction_sequence",
      [](const Matrix &a, const Vector &d, const std::vector<Eigen::Index> &levels) {
        return restriction_sequence(DenseOperator(a), d, levels);
      },
      py::arg("a"), py::arg("data"), py::arg("levels"));

  // robustness; functionals are named "mean", "median" or "trimmed:<frac>"
  m.def(
      "evaluate",
      [](const std::string &t, const std::vector<double> &x, std::optional<std::vector<double>> w) {
        return evaluate(Functional::parse(t), make_distribution(x, std::move(w)));
      },
      py::arg("functional"), py::arg("locations"), py::arg("weights") = py::none());
  m.def(
      "influence_function",
      [](const std::string &t, const std::vector<double> &x, double y,
         std::optional<std::vector<double>> w) {
        return influence_function(Functional::parse(t), make_distribution(x, std::move(w)), y);
      },
      py::arg("functional"), py::arg("locations"), py::arg("y"), py::arg("weights") = py::none());
  m.def(
      "influence_profile",
      [](const std::string &t, const std::vector<double> &x, const std::vector<double> &probes,
         std::optional<std::vector<double>> w) {
        const auto p = influence_profile(Functional::parse(t), make_distribution(x, std::move(w)), probes);
        py::dict d;
        d["probe_points"] = p.probe_points;
        d["values"] = p.values;
        d["gross_error_sensitivity"] = p.gross_error_sensitivity;
        d["unbounded_flag"] = p.unbounded_flag;
        d["asymptotic_variance"] = p.asymptotic_variance;
        return d;
      },
      py::arg("functional"), py::arg("locations"), py::arg("probes"), py::arg("weights") = py::none());
  m.def(
      "sensitivity_attack",
      [](const std::vector<double> &x, double eps, double target, std::optional<std::vector<double>> w) {
        const auto a = sensitivity_attack(make_distribution(x, std::move(w)), eps, target);
        return py::make_tuple(a.y, a.achieved, a.distance);
      },
      py::arg("locations"), py::arg("eps"), py::arg("target"), py::arg("weights") = py::none());
}
