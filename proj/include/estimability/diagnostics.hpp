#pragma once

#include "estimability/linop.hpp"

#include <optional>
#include <string_view>

namespace estimability {

enum class Classification { WellPosed, IllConditioned, NonIdentifiable };

std::string_view to_string(Classification c);

inline constexpr double kDefaultKappaThreshold = 1e8;

struct DiagnosisReport {
  bool identifiable = false;
  Eigen::Index numerical_rank = 0;
  double sigma_max = 0.0;
  /// Smallest retained singular value.
  double sigma_min = 0.0;
  /// σ_max/σ_min over the retained spectrum; +∞ when nothing is retained.
  double condition_number = 0.0;
  /// c with ‖Aθ‖ ≥ c‖θ‖, i.e. σ_min when identifiable, otherwise 0.
  double stability_constant = 0.0;
  Classification classification = Classification::NonIdentifiable;
  /// Every singular value, retained and discarded; the first numerical_rank
  /// entries are the retained ones.
  Vector spectrum;
  /// Power-law exponent of the retained spectrum; absent with fewer than
  /// four retained values.
  std::optional<double> decay_exponent;
};

/// Hadamard-style classification of A. An identifiable operator whose
/// condition number exceeds kappa_threshold is ill-conditioned: a unique
/// solution exists but is not continuous enough to be estimable in practice.
DiagnosisReport diagnose(const DenseOperator &a, std::optional<double> rtol = std::nullopt,
                         double kappa_threshold = kDefaultKappaThreshold);

struct StabilityBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// ‖θ₁−θ₂‖/‖θ₂‖ ≤ κ·‖Aθ₁−Aθ₂‖/‖Aθ₂‖ in Euclidean norms.
StabilityBound stability_bound_check(const DenseOperator &a, const Vector &theta1,
                                     const Vector &theta2);

/// The constant c = σ_min in ‖Aθ‖ ≥ c‖θ‖. Throws InvalidInput when A is not
/// identifiable.
double bounded_away_from_zero(const DenseOperator &a, std::optional<double> rtol = std::nullopt);

/// Relative change of the pseudo-inverse solution divided by the relative
/// change of the data. Never exceeds κ.
double perturbation_amplification(const DenseOperator &a, const Vector &data,
                                  const Vector &data_perturbed);

/// Least-squares slope of log σ_k against log k, skipping k = 1.
double spectrum_decay(const Vector &spectrum);

} // namespace estimability
