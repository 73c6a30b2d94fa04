#pragma once

#include <Eigen/Core>

#include <complex>

namespace bdl {

/// Determinant together with the product of row norms, so that |det| can be
/// judged relative to the scale of the matrix.
struct ScaledDeterminant {
  std::complex<double> det{1.0, 0.0};
  double row_norm_product = 1.0;

  /// |det| / prod_j ||row_j||; 0 for a matrix with a vanishing row.
  double scaled() const;
};

/// Pivoted LU determinant computed on the row-equilibrated matrix.
/// The 0x0 determinant is 1.
ScaledDeterminant scaled_determinant(const Eigen::MatrixXcd& m);

std::complex<double> determinant(const Eigen::MatrixXcd& m);

/// Matrix with column `col` removed.
Eigen::MatrixXcd drop_column(const Eigen::MatrixXcd& m, Eigen::Index col);

struct RankInfo {
  Eigen::Index rank = 0;
  Eigen::VectorXd singular_values;
  /// sigma_rank / sigma_{rank+1}; infinity when nothing is dropped.
  double gap = 0.0;
};

/// Numerical rank: singular values above rel_tol * max(sigma_max, reference).
/// `reference` is the size the entries would have without cancellation; with the
/// default 0 the test is relative to sigma_max alone. A zero matrix has rank 0.
RankInfo numerical_rank(const Eigen::MatrixXcd& m, double rel_tol = 1e-8, double reference = 0.0);

/// Unit right singular vector of the smallest singular value.
Eigen::VectorXcd null_vector(const Eigen::MatrixXcd& m);

/// Sine of the angle between the complex rays spanned by a and b.
double ray_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

}  // namespace bdl
