#include "estimability/regularization.hpp"

#include "estimability/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace estimability {

namespace {

void require_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InvalidInput("lambda must be a finite nonnegative number");
}

void require_data(const SvdFactors &f, const Vector &data) {
  if (data.size() != f.left_vectors.rows())
    throw InvalidInput("data length " + std::to_string(data.size()) +
                       " does not match operator rows " + std::to_string(f.left_vectors.rows()));
  if (!data.allFinite())
    throw InvalidInput("data must be finite");
}

} // namespace

Vector tikhonov_solve(const SvdFactors &f, const Vector &data, double lambda) {
  require_lambda(lambda);
  require_data(f, data);
  const Vector coeffs = f.left_vectors.transpose() * data;
  const Vector sigma = f.singular_values;
  const Vector filtered =
      (sigma.array() / (sigma.array().square() + lambda) * coeffs.array()).matrix();
  return f.right_vectors * filtered;
}

Vector tikhonov_solve(const DenseOperator &a, const Vector &data, double lambda) {
  require_lambda(lambda);
  return tikhonov_solve(svd(a), data, lambda);
}

Vector tsvd_solve(const SvdFactors &f, const Vector &data, Eigen::Index k) {
  require_data(f, data);
  if (k < 1 || k > f.rank())
    throw InvalidInput("truncation level " + std::to_string(k) + " outside [1, " +
                       std::to_string(f.rank()) + "]");
  const Vector coeffs = f.left_vectors.leftCols(k).transpose() * data;
  return f.right_vectors.leftCols(k) *
         (coeffs.array() / f.singular_values.head(k).array()).matrix();
}

Vector tsvd_solve(const DenseOperator &a, const Vector &data, Eigen::Index k) {
  return tsvd_solve(svd(a), data, k);
}

Vector regularized_solve(const DenseOperator &a, const Vector &data,
                         const RegularizationConfig &config) {
  switch (config.method) {
  case RegularizationMethod::Tikhonov:
    return tikhonov_solve(a, data, config.lambda);
  case RegularizationMethod::Tsvd:
    return tsvd_solve(a, data, config.truncation_k);
  }
  throw InvalidInput("unknown regularization method");
}

std::vector<double> filter_factors(const SvdFactors &f, double lambda) {
  require_lambda(lambda);
  std::vector<double> phi(static_cast<std::size_t>(f.rank()));
  for (Eigen::Index i = 0; i < f.rank(); ++i) {
    const double s2 = f.singular_values(i) * f.singular_values(i);
    phi[static_cast<std::size_t>(i)] = s2 / (s2 + lambda);
  }
  return phi;
}

double tikhonov_residual(const SvdFactors &f, const Vector &data, double lambda) {
  require_lambda(lambda);
  require_data(f, data);
  const Vector coeffs = f.left_vectors.transpose() * data;
  // Part of d outside the range of A is never fitted.
  const double outside = (data - f.left_vectors * coeffs).squaredNorm();
  const Vector shrink = lambda / (f.singular_values.array().square() + lambda);
  const double inside = (shrink.array() * coeffs.array()).matrix().squaredNorm();
  return std::sqrt(outside + inside);
}

double discrepancy_select(const DenseOperator &a, const Vector &data, double noise_level,
                          double tau) {
  if (!(noise_level > 0.0) || !std::isfinite(noise_level))
    throw InvalidInput("noise level must be positive");
  if (!(tau >= 1.0) || !std::isfinite(tau))
    throw InvalidInput("tau must be at least 1");
  const auto f = svd(a);
  require_data(f, data);

  const double target = tau * noise_level;
  const double floor_residual = tikhonov_residual(f, data, 0.0);
  const double ceiling_residual = data.norm();
  if (f.rank() == 0 || target < floor_residual || target >= ceiling_residual) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "discrepancy target " << target << " is unattainable; residuals range over ["
        << floor_residual << ", " << ceiling_residual << ")";
    throw NoSolution(msg.str());
  }

  const double s2 = f.sigma_max() * f.sigma_max();
  double lo = std::log(1e-14 * s2);
  double hi = std::log(s2);
  auto residual_at = [&](double log_lambda) {
    return tikhonov_residual(f, data, std::exp(log_lambda));
  };

  if (residual_at(lo) >= target)
    return std::exp(lo);
  for (int widen = 0; residual_at(hi) < target; ++widen) {
    if (widen > 200)
      throw NumericalFailure("could not bracket the discrepancy target");
    hi += std::log(10.0);
  }

  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual_at(mid);
    if (std::abs(r - target) <= 0.01 * target)
      return std::exp(mid);
    if (r < target)
      lo = mid;
    else
      hi = mid;
  }
  throw NumericalFailure("discrepancy bisection did not converge");
}

std::vector<Vector> restriction_sequence(const DenseOperator &a, const Vector &data,
                                         const std::vector<Eigen::Index> &levels) {
  if (levels.empty())
    throw InvalidInput("restriction sequence needs at least one level");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1])
      throw InvalidInput("restriction levels must be strictly increasing");
  }
  const auto f = svd(a);
  std::vector<Vector> solutions;
  solutions.reserve(levels.size());
  for (auto k : levels)
    solutions.push_back(tsvd_solve(f, data, k));
  return solutions;
}

} // namespace estimability
