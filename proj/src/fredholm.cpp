#include "estimability/fredholm.hpp"

#include "estimability/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace estimability {

namespace {

void require_positive_oscillations(int n_osc) {
  if (n_osc < 1)
    throw InvalidInput("n_osc must be a positive integer, got " + std::to_string(n_osc));
}

void require_grid_length(const Vector &v, const Grid &grid) {
  if (v.size() != grid.n())
    throw InvalidInput("vector length " + std::to_string(v.size()) + " does not match grid size " +
                       std::to_string(grid.n()));
}

} // namespace

Grid::Grid(Eigen::Index n) : n_(n) {
  if (n < 1)
    throw InvalidInput("grid needs at least one point");
  points_ = Vector::LinSpaced(n, 1.0, static_cast<double>(n)) / static_cast<double>(n);
}

double oscillation_delta(int n_osc) {
  require_positive_oscillations(n_osc);
  return 1.0 / (2.0 * n_osc * std::numbers::pi);
}

DenseOperator heaviside_operator(Eigen::Index n) {
  if (n < 2)
    throw InvalidInput("Heaviside operator needs n >= 2");
  const double h = 1.0 / static_cast<double>(n);
  Matrix k = Matrix::Zero(n, n);
  k.triangularView<Eigen::Lower>().setConstant(h);
  return DenseOperator(std::move(k));
}

Vector fredholm_rhs(const Grid &grid, std::optional<int> n_osc) {
  if (!n_osc)
    return grid.points();
  const double delta = oscillation_delta(*n_osc);
  return grid.points().array() + delta * (grid.points().array() / delta).sin();
}

Vector analytic_perturbed_solution(const Grid &grid, int n_osc) {
  const double delta = oscillation_delta(n_osc);
  return 1.0 + (grid.points().array() / delta).cos();
}

FredholmProblem make_problem(Eigen::Index n, std::optional<int> n_osc) {
  Grid grid(n);
  auto op = heaviside_operator(n);
  auto rhs = fredholm_rhs(grid, n_osc);
  std::optional<double> delta;
  if (n_osc)
    delta = oscillation_delta(*n_osc);
  return {std::move(grid), std::move(op), std::move(rhs), delta};
}

Vector cumulative_solve(const Vector &rhs, double h) {
  if (!(h > 0.0))
    throw InvalidInput("grid spacing must be positive");
  Vector f(rhs.size());
  double previous = 0.0;
  for (Eigen::Index i = 0; i < rhs.size(); ++i) {
    f(i) = (rhs(i) - previous) / h;
    previous = rhs(i);
  }
  return f;
}

Vector solve_unregularized(const FredholmProblem &problem) {
  const Matrix &k = problem.op.matrix();
  if (k.rows() != k.cols() || k.rows() != problem.rhs.size())
    throw InvalidInput("Fredholm problem needs a square operator matching the right-hand side");
  if (!k.isLowerTriangular())
    throw InvalidInput("forward substitution needs a lower-triangular operator");
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    if (k(i, i) == 0.0 || !std::isfinite(k(i, i)))
      throw NumericalFailure("operator is singular: zero diagonal entry at row " +
                             std::to_string(i));
  }
  Vector f = k.triangularView<Eigen::Lower>().solve(problem.rhs);
  if (!f.allFinite())
    throw NumericalFailure("forward substitution produced non-finite values");
  return f;
}

InstabilityResult run_instability_experiment(Eigen::Index n, int n_osc) {
  const double delta = oscillation_delta(n_osc);
  if (n < 2)
    throw InvalidInput("instability experiment needs n >= 2");
  const double h = 1.0 / static_cast<double>(n);
  if (h > kResolutionRatio * delta) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "grid does not resolve the oscillation: need h <= delta/10, but h = " << h
        << " > delta/10 = " << kResolutionRatio * delta;
    throw InvalidInput(msg.str());
  }

  const Grid grid(n);
  const Vector clean = fredholm_rhs(grid);
  const Vector perturbed = fredholm_rhs(grid, n_osc);
  const Vector f_perturbed = cumulative_solve(perturbed, grid.h());

  InstabilityResult r;
  r.delta = delta;
  r.rhs_dev = (perturbed - clean).cwiseAbs().maxCoeff();
  r.sol_dev = (f_perturbed.array() - 1.0).abs().maxCoeff();
  r.amplification = r.sol_dev / r.rhs_dev;
  return r;
}

DensityCheck density_constraints_check(const Vector &f, const Grid &grid) {
  require_grid_length(f, grid);
  return {grid.h() * f.sum(), f.minCoeff()};
}

double regression_functional(const Vector &density, const Grid &grid) {
  require_grid_length(density, grid);
  return grid.h() * grid.points().dot(density);
}

} // namespace estimability
