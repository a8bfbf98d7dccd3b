#include "estimability/linop.hpp"

#include "estimability/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace estimability {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double resolve_rtol(const DenseOperator &a, std::optional<double> rtol) {
  const double value = rtol.value_or(default_rtol(a));
  if (!(value >= 0.0) || !std::isfinite(value))
    throw InvalidInput("rank tolerance must be a finite nonnegative number, got " +
                       std::to_string(value));
  return value;
}

template <typename Svd> void check_converged(const Svd &solver) {
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("singular value decomposition did not converge");
}

Eigen::Index retained_count(const Vector &sigma, double rtol) {
  if (sigma.size() == 0 || sigma(0) == 0.0)
    return 0;
  const double cutoff = rtol * sigma(0);
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > cutoff)
    ++r;
  return r;
}

} // namespace

DenseOperator::DenseOperator(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.cols() == 0)
    throw InvalidInput("operator must have at least one row and one column");
  if (!m_.allFinite())
    throw InvalidInput("operator entries must be finite");
}

DenseOperator DenseOperator::from_row_major(std::size_t rows, std::size_t cols,
                                            const std::vector<double> &entries) {
  if (entries.size() != rows * cols)
    throw InvalidInput("expected " + std::to_string(rows * cols) + " entries, got " +
                       std::to_string(entries.size()));
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entries[i * cols + j];
  return DenseOperator(std::move(m));
}

Vector DenseOperator::apply(const Vector &x) const {
  if (x.size() != m_.cols())
    throw InvalidInput("vector length " + std::to_string(x.size()) + " does not match " +
                       std::to_string(m_.cols()) + " operator columns");
  return m_ * x;
}

Vector SvdFactors::full_spectrum() const {
  Vector all(singular_values.size() + discarded_values.size());
  all << singular_values, discarded_values;
  return all;
}

double default_rtol(const DenseOperator &a) {
  return static_cast<double>(std::max(a.rows(), a.cols())) * kEps;
}

SvdFactors svd(const DenseOperator &a, std::optional<double> rtol) {
  const double tol = resolve_rtol(a, rtol);
  Eigen::BDCSVD<Matrix> solver(a.matrix(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  check_converged(solver);

  const Vector &sigma = solver.singularValues();
  const auto r = retained_count(sigma, tol);

  SvdFactors f;
  f.rank_tolerance = tol;
  f.left_vectors = solver.matrixU().leftCols(r);
  f.singular_values = sigma.head(r);
  f.right_vectors = solver.matrixV().leftCols(r);
  f.discarded_values = sigma.tail(sigma.size() - r);
  return f;
}

Matrix null_space_basis(const DenseOperator &a, std::optional<double> rtol) {
  const double tol = resolve_rtol(a, rtol);
  Eigen::BDCSVD<Matrix> solver(a.matrix(), Eigen::ComputeFullV);
  check_converged(solver);
  const auto r = retained_count(solver.singularValues(), tol);
  return solver.matrixV().rightCols(a.cols() - r);
}

Matrix pseudoinverse(const SvdFactors &f) {
  return f.right_vectors * f.singular_values.cwiseInverse().asDiagonal() *
         f.left_vectors.transpose();
}

DenseOperator pseudoinverse(const DenseOperator &a, std::optional<double> rtol) {
  const auto f = svd(a, rtol);
  if (f.rank() == 0)
    return DenseOperator(Matrix::Zero(a.cols(), a.rows()));
  return DenseOperator(pseudoinverse(f));
}

DenseOperator hat_operator(const DenseOperator &a, std::optional<double> rtol) {
  const auto f = svd(a, rtol);
  // U·Uᵀ is A·A† without forming the inverse singular values.
  if (f.rank() == 0)
    return DenseOperator(Matrix::Zero(a.rows(), a.rows()));
  return DenseOperator(f.left_vectors * f.left_vectors.transpose());
}

DenseOperator model_resolution(const DenseOperator &a, std::optional<double> rtol) {
  const auto f = svd(a, rtol);
  if (f.rank() == 0)
    return DenseOperator(Matrix::Zero(a.cols(), a.cols()));
  return DenseOperator(f.right_vectors * f.right_vectors.transpose());
}

bool is_identifiable_linear(const DenseOperator &a, std::optional<double> rtol) {
  return svd(a, rtol).rank() == a.cols();
}

bool linear_parameter_identifiable(const DenseOperator &p, const DenseOperator &q,
                                   std::optional<double> rtol) {
  if (p.cols() != q.cols())
    throw InvalidInput("P and q must act on the same parameter space (" +
                       std::to_string(p.cols()) + " vs " + std::to_string(q.cols()) +
                       " columns)");
  const Matrix basis = null_space_basis(p, rtol);
  if (basis.cols() == 0)
    return true;
  const double q_norm = svd(q, 0.0).sigma_max();
  if (q_norm == 0.0)
    return true;
  const auto dims = std::max({p.rows(), p.cols(), q.rows()});
  const double floor = 10.0 * static_cast<double>(dims) * kEps;
  const double tol = std::max(resolve_rtol(p, rtol), floor);
  return (q.matrix() * basis).cwiseAbs().maxCoeff() <= tol * q_norm;
}

} // namespace estimability
