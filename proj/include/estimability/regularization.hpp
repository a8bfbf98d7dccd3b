#pragma once

#include "estimability/linop.hpp"

#include <vector>

namespace estimability {

enum class RegularizationMethod { Tikhonov, Tsvd };

struct RegularizationConfig {
  RegularizationMethod method = RegularizationMethod::Tikhonov;
  double lambda = 0.0;         // Tikhonov only
  Eigen::Index truncation_k = 1; // TSVD only
  double tau = 1.0;            // discrepancy safety factor
};

/// argmin ‖Aθ − d‖² + λ‖θ‖², computed as V·diag(σ/(σ²+λ))·Uᵀd.
Vector tikhonov_solve(const DenseOperator &a, const Vector &data, double lambda);
Vector tikhonov_solve(const SvdFactors &factors, const Vector &data, double lambda);

/// Pseudo-inverse solve using only the k leading singular triplets.
/// Requires 1 ≤ k ≤ numerical rank.
Vector tsvd_solve(const DenseOperator &a, const Vector &data, Eigen::Index k);
Vector tsvd_solve(const SvdFactors &factors, const Vector &data, Eigen::Index k);

/// Dispatches on config.method.
Vector regularized_solve(const DenseOperator &a, const Vector &data,
                         const RegularizationConfig &config);

/// φᵢ = σᵢ²/(σᵢ²+λ).
std::vector<double> filter_factors(const SvdFactors &factors, double lambda);

/// ‖A·tikhonov_solve(A, d, λ) − d‖ without forming the solution.
double tikhonov_residual(const SvdFactors &factors, const Vector &data, double lambda);

/// Discrepancy principle: λ with ‖Aθ_λ − d‖ = tau·noise_level to 1%
/// relative, by bisection on log λ starting from [1e-14·σ_max², σ_max²].
///
/// Throws NoSolution when the target lies outside the attainable range
/// [‖(I − AA†)d‖, ‖d‖). A target that is attainable but below the residual at
/// the lower bracket end returns that end; the upper end is widened as needed.
double discrepancy_select(const DenseOperator &a, const Vector &data, double noise_level,
                          double tau = 1.0);

/// TSVD solutions at each truncation level. Levels must be strictly increasing
/// and within the numerical rank.
std::vector<Vector> restriction_sequence(const DenseOperator &a, const Vector &data,
                                         const std::vector<Eigen::Index> &levels);

} // namespace estimability
