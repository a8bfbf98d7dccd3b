#pragma once

// Statistical functionals on weighted point masses, and their sensitivity to
// point-mass contamination (influence functions).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace estimability {

struct Atom {
  double location = 0.0;
  double weight = 0.0;

  friend bool operator==(const Atom &, const Atom &) = default;
};

class EmpiricalDistribution {
public:
  /// Throws InvalidInput when empty, when a location is not finite, when a
  /// weight is not positive, or when weights do not sum to 1 within 1e-12.
  explicit EmpiricalDistribution(std::vector<Atom> atoms);

  /// Rescales positive weights to sum to one.
  static EmpiricalDistribution normalized(std::vector<Atom> atoms);
  /// Equal weight on each sample.
  static EmpiricalDistribution uniform(const std::vector<double> &locations);

  const std::vector<Atom> &atoms() const noexcept { return atoms_; }

private:
  std::vector<Atom> atoms_;
};

enum class FunctionalKind { Mean, Median, TrimmedMean };

class Functional {
public:
  static Functional mean() { return Functional(FunctionalKind::Mean, 0.0); }
  static Functional median() { return Functional(FunctionalKind::Median, 0.0); }
  /// Throws InvalidInput unless 0 ≤ trim_fraction < 0.5.
  static Functional trimmed_mean(double trim_fraction);

  /// `mean`, `median` or `trimmed:<frac>`.
  static Functional parse(std::string_view text);

  FunctionalKind kind() const noexcept { return kind_; }
  double trim_fraction() const noexcept { return trim_; }
  std::string name() const;

private:
  Functional(FunctionalKind kind, double trim) : kind_(kind), trim_(trim) {}

  FunctionalKind kind_;
  double trim_;
};

/// Mean: Σ wᵢyᵢ. Median: smallest location whose cumulative weight reaches
/// one half. Trimmed mean: mean of the central 1 − 2α of the mass, splitting
/// boundary atoms proportionally.
double evaluate(const Functional &t, const EmpiricalDistribution &f);

/// (1 − ε)F + εΔ_y. Requires 0 < ε < 1.
EmpiricalDistribution contaminate(const EmpiricalDistribution &f, double eps, double y);

/// lim_{ε↓0} (T((1−ε)F + εΔ_y) − T(F))/ε, estimated from ε ∈ {1e-3, 1e-4,
/// 1e-5} with Richardson extrapolation. Throws NumericalFailure when the two
/// extrapolants disagree by more than 1e-3 relative.
double influence_function(const Functional &t, const EmpiricalDistribution &f, double y);

struct InfluenceProfile {
  std::vector<double> probe_points;
  std::vector<double> values;
  /// max |IF| over the probes; absent when the influence is unbounded.
  std::optional<double> gross_error_sensitivity;
  bool unbounded_flag = false;
  double asymptotic_variance = 0.0;
};

/// Influence at each probe, a growth test on the probes of largest magnitude
/// and V(T, F) = Σ wᵢ·IF(yᵢ)² over F's own atoms. Probes must be sorted.
InfluenceProfile influence_profile(const Functional &t, const EmpiricalDistribution &f,
                                   const std::vector<double> &probe_points);

struct SensitivityAttack {
  double y = 0.0;
  double achieved = 0.0;
  double distance = 0.0;
};

/// The contamination point y moving the mean of F to `target` at
/// contamination distance eps.
SensitivityAttack sensitivity_attack(const EmpiricalDistribution &f, double eps, double target);

} // namespace estimability
