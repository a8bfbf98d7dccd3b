#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace estimability {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A real rows×cols forward mapping with finite entries.
class DenseOperator {
public:
  /// Throws InvalidInput on an empty matrix or a non-finite entry.
  explicit DenseOperator(Matrix entries);

  /// Row-major construction; entries.size() must equal rows·cols.
  static DenseOperator from_row_major(std::size_t rows, std::size_t cols,
                                      const std::vector<double> &entries);

  Eigen::Index rows() const noexcept { return m_.rows(); }
  Eigen::Index cols() const noexcept { return m_.cols(); }
  const Matrix &matrix() const noexcept { return m_; }

  Vector apply(const Vector &x) const;

private:
  Matrix m_;
};

/// Thin SVD restricted to the numerically retained triplets.
struct SvdFactors {
  Matrix left_vectors;   // rows × r
  Vector singular_values; // r, nonincreasing
  Matrix right_vectors;  // cols × r
  double rank_tolerance = 0.0;
  /// Singular values at or below rank_tolerance·σ_max, nonincreasing.
  Vector discarded_values;

  Eigen::Index rank() const noexcept { return singular_values.size(); }
  double sigma_max() const noexcept { return rank() > 0 ? singular_values(0) : 0.0; }
  double sigma_min() const noexcept { return rank() > 0 ? singular_values(rank() - 1) : 0.0; }
  /// Retained followed by discarded values.
  Vector full_spectrum() const;
};

/// max(rows, cols)·machine epsilon.
double default_rtol(const DenseOperator &a);

/// Thin SVD of A. Singular values ≤ rtol·σ_max are dropped and reported in
/// discarded_values. rtol defaults to default_rtol(A).
SvdFactors svd(const DenseOperator &a, std::optional<double> rtol = std::nullopt);

/// Orthonormal basis (cols × (cols − rank)) of the numerical null space.
Matrix null_space_basis(const DenseOperator &a, std::optional<double> rtol = std::nullopt);

/// Moore–Penrose inverse V·diag(1/σ)·Uᵀ over the retained spectrum.
DenseOperator pseudoinverse(const DenseOperator &a, std::optional<double> rtol = std::nullopt);
Matrix pseudoinverse(const SvdFactors &factors);

/// A·A†, the orthogonal projector onto the range of A (the hat matrix).
DenseOperator hat_operator(const DenseOperator &a, std::optional<double> rtol = std::nullopt);

/// A†·A, the orthogonal projector onto the row space of A. Identity exactly
/// when A is injective.
DenseOperator model_resolution(const DenseOperator &a, std::optional<double> rtol = std::nullopt);

/// Numerical rank equals the number of columns.
bool is_identifiable_linear(const DenseOperator &a, std::optional<double> rtol = std::nullopt);

/// null(P) ⊆ null(q): q vanishes on an orthonormal null-space basis N of P,
/// i.e. max |(q·N)ᵢⱼ| ≤ tol·‖q‖₂. The tolerance is rtol floored at
/// 10·max(dims)·ε, the accuracy to which N itself is known.
bool linear_parameter_identifiable(const DenseOperator &p, const DenseOperator &q,
                                   std::optional<double> rtol = std::nullopt);

} // namespace estimability
