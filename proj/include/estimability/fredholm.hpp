#pragma once

// First-kind Fredholm equation with a Heaviside kernel on [0, 1]:
//   (Kf)(y) = ∫₀^y f(y') dy' = F(y)
// discretized by a right-endpoint rule on the grid y_i = i/n, i = 1..n.
// Recovering f from F is numerical differentiation, which is unstable.

#include "estimability/linop.hpp"

#include <optional>

namespace estimability {

class Grid {
public:
  /// Throws InvalidInput when n == 0.
  explicit Grid(Eigen::Index n);

  Eigen::Index n() const noexcept { return n_; }
  double h() const noexcept { return 1.0 / static_cast<double>(n_); }
  /// y_i = i·h for i = 1..n.
  const Vector &points() const noexcept { return points_; }

private:
  Eigen::Index n_;
  Vector points_;
};

struct FredholmProblem {
  Grid grid;
  DenseOperator op;
  Vector rhs;
  std::optional<double> delta;
};

/// δ = 1/(2·n_osc·π).
double oscillation_delta(int n_osc);

/// Lower-triangular K with K(i, j) = h for j ≤ i. Requires n ≥ 2.
DenseOperator heaviside_operator(Eigen::Index n);

/// F_i = y_i, or y_i + δ·sin(y_i/δ) when n_osc is given.
Vector fredholm_rhs(const Grid &grid, std::optional<int> n_osc = std::nullopt);

/// f_i = 1 + cos(y_i/δ), the exact solution for the perturbed right-hand side.
Vector analytic_perturbed_solution(const Grid &grid, int n_osc);

/// K and the (optionally perturbed) right-hand side on an n-point grid.
FredholmProblem make_problem(Eigen::Index n, std::optional<int> n_osc = std::nullopt);

/// Forward substitution for the lower-triangular operator. Throws
/// NumericalFailure on a zero or non-finite diagonal.
Vector solve_unregularized(const FredholmProblem &problem);

/// (F_i − F_{i−1})/h with F_0 = 0: the same solve without forming K.
Vector cumulative_solve(const Vector &rhs, double h);

struct InstabilityResult {
  double rhs_dev = 0.0;
  double sol_dev = 0.0;
  double amplification = 0.0;
  double delta = 0.0;
};

/// Largest h/δ for which an oscillation counts as resolved.
inline constexpr double kResolutionRatio = 0.1;

/// Sup-norm change of the right-hand side versus that of the recovered
/// solution. Throws InvalidInput unless h ≤ δ/10.
InstabilityResult run_instability_experiment(Eigen::Index n, int n_osc);

struct DensityCheck {
  double integral = 0.0;
  double min_value = 0.0;
};

/// h·Σf_i and min f_i.
DensityCheck density_constraints_check(const Vector &f, const Grid &grid);

/// r = h·Σ y_i·f_i, the mean of y under the density f.
double regression_functional(const Vector &density, const Grid &grid);

} // namespace estimability
