#include "bdl/linalg.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace bdl {

double ScaledDeterminant::scaled() const {
  if (row_norm_product == 0.0) return 0.0;
  return std::abs(det) / row_norm_product;
}

ScaledDeterminant scaled_determinant(const Eigen::MatrixXcd& m) {
  ScaledDeterminant out;
  if (m.rows() == 0) return out;
  Eigen::MatrixXcd scaled = m;
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    const double norm = m.row(j).norm();
    out.row_norm_product *= norm;
    if (norm > 0.0) scaled.row(j) /= norm;
  }
  if (out.row_norm_product == 0.0) {
    out.det = 0.0;
    return out;
  }
  out.det = Eigen::FullPivLU<Eigen::MatrixXcd>(scaled).determinant() * out.row_norm_product;
  return out;
}

std::complex<double> determinant(const Eigen::MatrixXcd& m) { return scaled_determinant(m).det; }

Eigen::MatrixXcd drop_column(const Eigen::MatrixXcd& m, Eigen::Index col) {
  Eigen::MatrixXcd out(m.rows(), m.cols() - 1);
  out.leftCols(col) = m.leftCols(col);
  out.rightCols(m.cols() - col - 1) = m.rightCols(m.cols() - col - 1);
  return out;
}

RankInfo numerical_rank(const Eigen::MatrixXcd& m, double rel_tol, double reference) {
  RankInfo info;
  if (m.size() == 0) {
    info.gap = std::numeric_limits<double>::infinity();
    return info;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  info.singular_values = svd.singularValues();
  const double smax = std::max(info.singular_values[0], reference);
  if (smax == 0.0) {
    info.gap = std::numeric_limits<double>::infinity();
    return info;
  }
  for (Eigen::Index i = 0; i < info.singular_values.size(); ++i)
    if (info.singular_values[i] > rel_tol * smax) info.rank = i + 1;
  if (info.rank == 0 || info.rank == info.singular_values.size()) {
    info.gap = std::numeric_limits<double>::infinity();
  } else {
    const double next = info.singular_values[info.rank];
    info.gap = next == 0.0 ? std::numeric_limits<double>::infinity() : info.singular_values[info.rank - 1] / next;
  }
  return info;
}

Eigen::VectorXcd null_vector(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().col(m.cols() - 1);
}

double ray_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  const Eigen::VectorXcd ua = a / na;
  const Eigen::VectorXcd ub = b / nb;
  return (ub - ua * ua.dot(ub)).norm();
}

}  // namespace bdl
