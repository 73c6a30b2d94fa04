#include "bdl/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bdl {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_sizes(const Params& vbar, const Params& ubar) {
  if (ubar.size() != vbar.size() + 1)
    throw std::invalid_argument("scalar-product system: |ubar| must equal |vbar| + 1");
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double matrix_rel_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const double scale = std::max({max_abs(a), max_abs(b), 1e-300});
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

cplx l_coeff(const YModel& model, const Params& ubar, std::size_t j, std::size_t k) {
  const cplx uk = ubar[k];
  return g_prod(model.c(), uk, ubar.complement(k)) * y_eval(model, uk, ubar.complement(j));
}

Eigen::MatrixXcd build_L(const YModel& model, const Params& ubar) {
  const auto n1 = ubar.size();
  Eigen::MatrixXcd L(idx(n1), idx(n1));
  for (std::size_t j = 0; j < n1; ++j)
    for (std::size_t k = 0; k < n1; ++k) L(idx(j), idx(k)) = l_coeff(model, ubar, j, k);
  return L;
}

Eigen::MatrixXcd build_Omega(const YModel& model, const Params& vbar, const Params& ubar) {
  require_sizes(vbar, ubar);
  const auto n = vbar.size();
  Eigen::MatrixXcd omega(idx(n), idx(n + 1));
  for (std::size_t j = 0; j < n; ++j) {
    const Params rest = vbar.complement(j);
    for (std::size_t k = 0; k <= n; ++k) {
      const cplx uk = ubar[k];
      omega(idx(j), idx(k)) = g(model.c(), uk, vbar[j]) * y_eval(model, uk, rest.with_front(uk));
    }
  }
  return omega;
}

Eigen::MatrixXcd build_Omega_from_derivative(const YModel& model, const Params& vbar, const Params& ubar) {
  require_sizes(vbar, ubar);
  const auto n = vbar.size();
  const cplx c = model.c();
  Eigen::MatrixXcd omega(idx(n), idx(n + 1));
  for (std::size_t k = 0; k <= n; ++k) {
    const cplx uk = ubar[k];
    const cplx gp = g_prod(c, uk, vbar);
    const cplx y = y_eval(model, uk, vbar);
    for (std::size_t j = 0; j < n; ++j) {
      // d g(u, v)/d v_j = g(u, v) g(u, v_j) / c
      const cplx dg = gp * g(c, uk, vbar[j]) / c;
      const cplx dlambda = dg * y + gp * y_dv(model, uk, vbar, j);
      omega(idx(j), idx(k)) = c / gp * dlambda;
    }
  }
  return omega;
}

OmegaPaths build_Omega_two_paths(const YModel& model, const Params& vbar, const Params& ubar) {
  OmegaPaths out;
  out.via_shifted_set = build_Omega(model, vbar, ubar);
  out.via_derivative = build_Omega_from_derivative(model, vbar, ubar);
  // measured against the two summands of the derivative path, which can cancel
  const cplx c = model.c();
  for (Eigen::Index j = 0; j < out.via_shifted_set.rows(); ++j)
    for (Eigen::Index k = 0; k < out.via_shifted_set.cols(); ++k) {
      const cplx uk = ubar[static_cast<std::size_t>(k)];
      const auto jj = static_cast<std::size_t>(j);
      const double terms = std::abs(g(c, uk, vbar[jj]) * y_eval(model, uk, vbar)) +
                           std::abs(c * y_dv(model, uk, vbar, jj));
      const cplx a = out.via_shifted_set(j, k), b = out.via_derivative(j, k);
      out.max_rel_diff = std::max(out.max_rel_diff, std::abs(a - b) / std::max({std::abs(a), std::abs(b), terms, 1e-30}));
    }
  return out;
}

SystemMatrices build_M(const YModel& model, const Params& vbar, const Params& ubar, double onshell_tol) {
  require_sizes(vbar, ubar);
  SystemMatrices sys;
  sys.c = model.c();
  sys.vbar = vbar;
  sys.ubar = ubar;
  sys.M = build_L(model, ubar);
  sys.scale = max_abs(sys.M);
  for (std::size_t j = 0; j < ubar.size(); ++j) {
    const cplx lam = lambda_eval(model, ubar[j], vbar);
    sys.scale = std::max(sys.scale, std::abs(lam));
    sys.M(idx(j), idx(j)) -= lam;
  }
  sys.Omega = build_Omega(model, vbar, ubar);
  const Eigen::VectorXcd res = bethe_residual(model, vbar);
  sys.onshell_residual = res.size() == 0 ? 0.0 : res.cwiseAbs().maxCoeff();
  sys.onshell_warning = sys.onshell_residual > onshell_tol;
  return sys;
}

RankInfo system_rank(const SystemMatrices& sys, double rel_tol) { return numerical_rank(sys.M, rel_tol, sys.scale); }

cplx omega_minor(const Eigen::MatrixXcd& omega, std::size_t ell) {
  if (ell >= static_cast<std::size_t>(omega.cols())) throw std::out_of_range("omega_minor: column out of range");
  return determinant(drop_column(omega, idx(ell)));
}

Eigen::VectorXcd minor_vector(const SystemMatrices& sys) {
  const auto n1 = sys.ubar.size();
  Eigen::VectorXcd out(idx(n1));
  for (std::size_t l = 0; l < n1; ++l)
    out[idx(l)] = delta(sys.c, sys.ubar.complement(l)) * omega_minor(sys.Omega, l);
  return out;
}

SolutionVector solve_X(const SystemMatrices& sys, double rank_tol) {
  const auto n = sys.vbar.size();
  const RankInfo info = system_rank(sys, rank_tol);
  if (info.rank != idx(n)) {
    std::ostringstream msg;
    msg << "solve_X: rank(M) = " << info.rank << ", expected " << n << "; singular values";
    for (Eigen::Index i = 0; i < info.singular_values.size(); ++i) msg << ' ' << info.singular_values[i];
    msg << "; gap " << info.gap;
    throw RankDeficientError(msg.str(), info);
  }
  SolutionVector sol;
  if (n == 0) {
    sol.X = Eigen::VectorXcd::Ones(1);
    return sol;
  }
  Eigen::VectorXcd minors(idx(n + 1));
  for (std::size_t l = 0; l <= n; ++l) minors[idx(l)] = omega_minor(sys.Omega, l);
  Eigen::Index m = 0;
  minors.cwiseAbs().maxCoeff(&m);
  const auto mm = static_cast<std::size_t>(m);
  sol.norm_index = mm;
  sol.norm_value = delta(sys.c, sys.ubar.complement(mm)) * delta_prime(sys.c, sys.vbar) * minors[m];
  const Eigen::VectorXcd x = null_vector(sys.M);
  sol.X = x * (sol.norm_value / x[m]);
  return sol;
}

double lse_residual(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& X) {
  const double nx = X.norm();
  if (nx == 0.0) return 0.0;
  return (M * X).cwiseAbs().maxCoeff() / nx;
}

Eigen::MatrixXcd build_W(cplx c, const Params& ubar, const Params& wbar) {
  if (ubar.size() != wbar.size()) throw std::invalid_argument("build_W: |ubar| must equal |wbar|");
  const auto n1 = ubar.size();
  Eigen::MatrixXcd W(idx(n1), idx(n1));
  for (std::size_t k = 0; k < n1; ++k) {
    const cplx uk = ubar[k];
    const cplx common = g_prod(c, uk, ubar.complement(k)) / g_prod(c, uk, wbar);
    for (std::size_t j = 0; j < n1; ++j) W(idx(j), idx(k)) = g(c, uk, wbar[j]) * common;
  }
  return W;
}

WTransformReport w_transform_check(const YModel& model, const Params& vbar, const Params& ubar, const Params& wbar) {
  require_sizes(vbar, ubar);
  if (wbar.size() != ubar.size()) throw std::invalid_argument("w_transform_check: |wbar| must equal |ubar|");
  const auto n = vbar.size();
  const cplx c = model.c();
  WTransformReport rep;

  rep.w_matches_v = true;
  for (std::size_t j = 0; j < n; ++j) rep.w_matches_v = rep.w_matches_v && wbar[j] == vbar[j];

  const SystemMatrices sys = build_M(model, vbar, ubar);
  const Eigen::MatrixXcd W = build_W(c, ubar, wbar);
  rep.det_W = determinant(W);
  rep.det_W_expected = delta(c, ubar) / delta(c, wbar);
  rep.det_rel_err = rel_err(rep.det_W, rep.det_W_expected);

  const Eigen::MatrixXcd Mt = W * sys.M;
  Eigen::MatrixXcd closed(idx(n + 1), idx(n + 1));
  for (std::size_t j = 0; j <= n; ++j) {
    const Params wj = wbar.complement(j);
    for (std::size_t k = 0; k <= n; ++k) {
      const cplx uk = ubar[k];
      closed(idx(j), idx(k)) = g_prod(c, uk, ubar.complement(k)) *
                               (y_eval(model, uk, wj) - g(c, uk, wbar[j]) / g_prod(c, uk, wbar) * lambda_eval(model, uk, vbar));
    }
  }
  rep.closed_form_err = matrix_rel_diff(Mt, closed);
  const double mt_norm = Mt.norm();
  rep.last_row_ratio = mt_norm == 0.0 ? 0.0 : Mt.row(idx(n)).norm() / mt_norm;

  Eigen::MatrixXcd reduced(idx(n), idx(n + 1));
  Eigen::MatrixXcd omega_rows(idx(n), idx(n + 1));
  for (std::size_t k = 0; k <= n; ++k) {
    const cplx gk = g_prod(c, ubar[k], ubar.complement(k));
    for (std::size_t j = 0; j < n; ++j) {
      reduced(idx(j), idx(k)) = gk * sys.Omega(idx(j), idx(k));
      omega_rows(idx(j), idx(k)) = gk / g(c, wbar[n], vbar[j]) * sys.Omega(idx(j), idx(k));
    }
  }
  rep.omega_rows_err = n == 0 ? 0.0 : matrix_rel_diff(Mt.topRows(idx(n)), omega_rows);

  rep.rank_M = system_rank(sys).rank;
  rep.rank_reduced = numerical_rank(reduced).rank;
  rep.solution_ray_distance = n == 0 ? 0.0 : ray_distance(null_vector(sys.M), null_vector(reduced));
  return rep;
}

JacobianParts jacobian_parts(const YModel& model, const Params& vbar, const Params& ubar_n) {
  if (ubar_n.size() != vbar.size()) throw std::invalid_argument("jacobian_parts: |ubar| must equal |vbar|");
  const auto n = vbar.size();
  const cplx c = model.c();
  JacobianParts parts;
  parts.lambda.resize(idx(n));
  parts.derivative.resize(idx(n), idx(n));
  for (std::size_t j = 0; j < n; ++j) {
    const cplx uj = ubar_n[j];
    parts.lambda[idx(j)] = lambda_eval(model, uj, vbar);
    const cplx pref = c * g_prod(c, uj, ubar_n.complement(j));
    for (std::size_t k = 0; k < n; ++k) parts.derivative(idx(j), idx(k)) = pref * y_dv(model, uj, ubar_n, k);
  }
  return parts;
}

JacobianForm jacobian_form(const YModel& model, const Params& vbar, const Params& ubar) {
  require_sizes(vbar, ubar);
  const auto n = vbar.size();
  const cplx c = model.c();
  const Params head = ubar.head(n);
  JacobianForm out;
  const Eigen::MatrixXcd omega = build_Omega(model, vbar, ubar);
  out.via_minor = delta(c, head) * delta_prime(c, vbar) * omega_minor(omega, n);
  const JacobianParts parts = jacobian_parts(model, vbar, head);
  Eigen::MatrixXcd jac = parts.derivative;
  jac.diagonal() += parts.lambda;
  out.via_jacobian = determinant(jac);
  out.rel_diff = rel_err(out.via_minor, out.via_jacobian);
  return out;
}

}  // namespace bdl
