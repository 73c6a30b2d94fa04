#pragma once

// Homogeneous linear system M X = 0 satisfied by the scalar products
// X_k = <v| |u_k-complement>, the Omega matrix whose maximal minors solve it,
// and executable versions of the row-transformation argument showing det M = 0.

#include "bdl/core.hpp"
#include "bdl/linalg.hpp"
#include "bdl/models.hpp"

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace bdl {

class RankDeficientError : public std::runtime_error {
public:
  RankDeficientError(const std::string& what, RankInfo info) : std::runtime_error(what), info_(std::move(info)) {}
  const RankInfo& info() const { return info_; }

private:
  RankInfo info_;
};

struct SystemMatrices {
  cplx c{1.0, 0.0};
  Eigen::MatrixXcd M;      // (n+1) x (n+1)
  Eigen::MatrixXcd Omega;  // n x (n+1)
  Params vbar;             // n on-shell roots
  Params ubar;             // n+1 generic parameters
  double onshell_residual = 0.0;
  /// Set when max_j |Y(v_j|v)| exceeds the on-shell tolerance passed to build_M.
  bool onshell_warning = false;
  /// Largest |L_jk| or |Lambda(u_j|v)|: the size of M before cancellations.
  double scale = 0.0;
};

struct SolutionVector {
  Eigen::VectorXcd X;
  std::size_t norm_index = 0;  // m
  cplx norm_value{1.0, 0.0};   // X_m
};

/// L_jk = g(u_k, u_k-complement) Y(u_k|u_j-complement); 0-based j, k.
cplx l_coeff(const YModel& model, const Params& ubar, std::size_t j, std::size_t k);
Eigen::MatrixXcd build_L(const YModel& model, const Params& ubar);

/// Omega_jk = g(u_k, v_j) Y(u_k | {u_k} + v_j-complement).
Eigen::MatrixXcd build_Omega(const YModel& model, const Params& vbar, const Params& ubar);

/// Omega_jk = c / g(u_k, v) dLambda(u_k|v)/dv_j with the derivative taken analytically.
Eigen::MatrixXcd build_Omega_from_derivative(const YModel& model, const Params& vbar, const Params& ubar);

struct OmegaPaths {
  Eigen::MatrixXcd via_shifted_set;
  Eigen::MatrixXcd via_derivative;
  double max_rel_diff = 0.0;  // relative to the larger of the entries and the derivative-path summands
};
OmegaPaths build_Omega_two_paths(const YModel& model, const Params& vbar, const Params& ubar);

/// M = L - diag(Lambda(u_j|v)) together with Omega.
SystemMatrices build_M(const YModel& model, const Params& vbar, const Params& ubar, double onshell_tol = 1e-10);

/// Numerical rank of M measured against sys.scale.
RankInfo system_rank(const SystemMatrices& sys, double rel_tol = 1e-8);

/// Determinant of Omega with column ell (0-based) removed; 1 for n = 0.
cplx omega_minor(const Eigen::MatrixXcd& omega, std::size_t ell);

/// Delta(u_ell-complement) * Omega-hat_ell for every ell.
Eigen::VectorXcd minor_vector(const SystemMatrices& sys);

/// Null vector of M scaled so that X_m = Delta(u_m-complement) Delta'(v) Omega-hat_m,
/// m maximizing |Omega-hat_m|. Throws RankDeficientError unless rank(M) == n.
SolutionVector solve_X(const SystemMatrices& sys, double rank_tol = 1e-8);

/// max_j |(M X)_j| / ||X||
double lse_residual(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& X);

struct WTransformReport {
  cplx det_W{0.0, 0.0};
  cplx det_W_expected{0.0, 0.0};
  double det_rel_err = 0.0;
  /// W M against the closed form g(u_k,u_k-compl){Y(u_k|w_j-compl) - g(u_k,w_j)/g(u_k,w) Lambda(u_k|v)}.
  double closed_form_err = 0.0;
  /// ||row_{n+1}(W M)|| / ||W M||
  double last_row_ratio = 0.0;
  /// Rows j <= n of W M against g(u_k,u_k-compl)/g(w_{n+1},v_j) Omega_jk.
  double omega_rows_err = 0.0;
  /// Ray distance between the null vectors of M and of the reduced n x (n+1) system.
  double solution_ray_distance = 0.0;
  Eigen::Index rank_M = 0;
  Eigen::Index rank_reduced = 0;
  bool w_matches_v = false;
};

Eigen::MatrixXcd build_W(cplx c, const Params& ubar, const Params& wbar);

/// wbar has n+1 points; the vanishing-row and Omega-row statements need w_j = v_j for j <= n.
WTransformReport w_transform_check(const YModel& model, const Params& vbar, const Params& ubar, const Params& wbar);

struct JacobianParts {
  Eigen::VectorXcd lambda;       // Lambda(u_j|v)
  Eigen::MatrixXcd derivative;   // c g(u_j, u_j-compl) dY(t|u)/du_k at t = u_j
};

/// ubar holds the n parameters u_1..u_n (the (n+1)-th is dropped by the caller).
JacobianParts jacobian_parts(const YModel& model, const Params& vbar, const Params& ubar_n);

struct JacobianForm {
  cplx via_minor{0.0, 0.0};     // Delta(u_n) Delta'(v) Omega-hat_{n+1}
  cplx via_jacobian{0.0, 0.0};  // det(diag(Lambda) + derivative)
  double rel_diff = 0.0;
};

/// ubar has n+1 elements; the minor drops the last column.
JacobianForm jacobian_form(const YModel& model, const Params& vbar, const Params& ubar);

}  // namespace bdl
