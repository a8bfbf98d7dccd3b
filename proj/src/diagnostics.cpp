#include "estimability/diagnostics.hpp"

#include "estimability/errors.hpp"

#include <cmath>
#include <limits>

namespace estimability {

std::string_view to_string(Classification c) {
  switch (c) {
  case Classification::WellPosed:
    return "WELL_POSED";
  case Classification::IllConditioned:
    return "ILL_CONDITIONED";
  case Classification::NonIdentifiable:
    return "NON_IDENTIFIABLE";
  }
  return "UNKNOWN";
}

DiagnosisReport diagnose(const DenseOperator &a, std::optional<double> rtol,
                         double kappa_threshold) {
  if (!(kappa_threshold > 1.0))
    throw InvalidInput("kappa threshold must exceed 1");
  const auto f = svd(a, rtol);

  DiagnosisReport r;
  r.numerical_rank = f.rank();
  r.identifiable = f.rank() == a.cols();
  r.sigma_max = f.sigma_max();
  r.sigma_min = f.sigma_min();
  r.condition_number =
      f.rank() > 0 ? r.sigma_max / r.sigma_min : std::numeric_limits<double>::infinity();
  r.stability_constant = r.identifiable ? r.sigma_min : 0.0;
  r.spectrum = f.full_spectrum();
  if (f.rank() >= 4)
    r.decay_exponent = spectrum_decay(f.singular_values);

  if (!r.identifiable)
    r.classification = Classification::NonIdentifiable;
  else if (r.condition_number > kappa_threshold)
    r.classification = Classification::IllConditioned;
  else
    r.classification = Classification::WellPosed;
  return r;
}

StabilityBound stability_bound_check(const DenseOperator &a, const Vector &theta1,
                                     const Vector &theta2) {
  const auto f = svd(a);
  if (f.rank() != a.cols())
    throw InvalidInput("stability bound requires an identifiable operator");
  const double theta2_norm = theta2.norm();
  const Vector image2 = a.apply(theta2);
  const double image2_norm = image2.norm();
  if (theta2_norm == 0.0 || image2_norm == 0.0)
    throw InvalidInput("stability bound needs theta2 != 0 and A·theta2 != 0");

  StabilityBound b;
  const double kappa = f.sigma_max() / f.sigma_min();
  b.lhs = (theta1 - theta2).norm() / theta2_norm;
  b.rhs = kappa * (a.apply(theta1) - image2).norm() / image2_norm;
  b.holds = b.lhs <= b.rhs * (1.0 + 1e-10);
  return b;
}

double bounded_away_from_zero(const DenseOperator &a, std::optional<double> rtol) {
  const auto f = svd(a, rtol);
  if (f.rank() != a.cols())
    throw InvalidInput("operator is not identifiable: ‖Aθ‖ ≥ c‖θ‖ holds only with c = 0");
  return f.sigma_min();
}

double perturbation_amplification(const DenseOperator &a, const Vector &data,
                                  const Vector &data_perturbed) {
  const auto f = svd(a);
  if (f.rank() != a.cols())
    throw InvalidInput("perturbation amplification requires an identifiable operator");
  if (data.size() != a.rows() || data_perturbed.size() != a.rows())
    throw InvalidInput("data length must equal the operator's row count");
  const Matrix inverse = pseudoinverse(f);
  const Vector solution = inverse * data;
  const Vector solution_perturbed = inverse * data_perturbed;

  const double data_change = (data_perturbed - data).norm();
  const double data_norm = data.norm();
  const double solution_norm = solution.norm();
  if (data_change == 0.0 || data_norm == 0.0 || solution_norm == 0.0)
    throw InvalidInput("perturbation amplification needs distinct, nonzero data with a "
                       "nonzero solution");
  return ((solution_perturbed - solution).norm() / solution_norm) / (data_change / data_norm);
}

double spectrum_decay(const Vector &spectrum) {
  if (spectrum.size() < 4)
    throw InvalidInput("spectrum decay needs at least four singular values");
  for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
    if (!(spectrum(k) > 0.0))
      throw InvalidInput("spectrum decay needs strictly positive singular values");
    if (k > 0 && spectrum(k) > spectrum(k - 1))
      throw InvalidInput("spectrum must be nonincreasing");
  }
  // Ordinary least squares on (log k, log σ_k), k = 2..n.
  const auto n = spectrum.size() - 1;
  Vector x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = std::log(static_cast<double>(i + 2));
    y(i) = std::log(spectrum(i + 1));
  }
  const double x_mean = x.mean();
  const double y_mean = y.mean();
  const Vector dx = x.array() - x_mean;
  return dx.dot(y.array().matrix() - Vector::Constant(n, y_mean)) / dx.squaredNorm();
}

} // namespace estimability
