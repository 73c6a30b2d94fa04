#include "bdl/determinants.hpp"

#include "bdl/linalg.hpp"
#include "bdl/system.hpp"

#include <cmath>
#include <stdexcept>

namespace bdl {

namespace {
Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
}  // namespace

cplx izergin(const ChainSpec& spec, const Params& vbar, const Params& theta_subset) {
  const auto n = vbar.size();
  if (theta_subset.size() != n) throw std::invalid_argument("izergin: |theta_subset| must equal |vbar|");
  if (n > spec.sites()) throw std::invalid_argument("izergin: more parameters than sites");
  const cplx c = spec.c;
  const double nn = static_cast<double>(n);
  cplx out = std::pow(c, 2.0 * nn - nn * nn) * delta(c, theta_subset) * delta_prime(c, vbar);
  for (const auto& th : spec.theta)
    for (std::size_t m = 0; m < n; ++m) out *= (theta_subset[m] - th + c) * (vbar[m] - th);
  for (std::size_t nu = 0; nu < n; ++nu)
    for (std::size_t m = 0; m < n; ++m) out *= vbar[m] - theta_subset[nu] + c;
  Eigen::MatrixXcd kernel(idx(n), idx(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx d = vbar[j] - theta_subset[k];
      if (coincide(vbar[j], theta_subset[k]) || coincide(d + c, cplx(0.0)))
        throw PoleError("izergin: v_j collides with theta_k or theta_k - c");
      kernel(idx(j), idx(k)) = 1.0 / (d * (d + c));
    }
  return out * determinant(kernel);
}

int izergin_convention_power(std::size_t n, std::size_t sites) { return -2 * static_cast<int>(n * sites); }

Eigen::MatrixXcd gaudin_matrix(const YModel& model, const Params& vbar) {
  const auto n = vbar.size();
  Eigen::MatrixXcd G(idx(n), idx(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      cplx entry = y_dv(model, vbar[k], vbar, j);
      if (j == k) entry += y_dz(model, vbar[k], vbar);
      G(idx(j), idx(k)) = entry;
    }
  return G;
}

Eigen::MatrixXcd omega_gaudin_limit(const YModel& model, const Params& vbar, double eps) {
  const auto n = vbar.size();
  // u_{n+1} only feeds the dropped column; keep it away from everything.
  cplx far = 1.0;
  for (const auto& v : vbar) far += std::abs(v);
  far = cplx(3.0 * far.real(), 1.7 * far.real());
  auto at = [&](double e) {
    std::vector<cplx> u;
    for (const auto& v : vbar) u.push_back(v + e);
    u.push_back(far);
    return Eigen::MatrixXcd(build_Omega(model, vbar, Params(u)).leftCols(idx(n)));
  };
  const Eigen::MatrixXcd coarse = at(eps);
  const Eigen::MatrixXcd fine = at(eps / 10.0);
  return (10.0 * fine - coarse) / 9.0;
}

Calibration calibrate_c_power(cplx ratio, cplx c) {
  Calibration cal;
  cal.measured = ratio;
  if (std::abs(std::abs(c) - 1.0) > 1e-6) {
    cal.power = static_cast<int>(std::lround(std::log(std::abs(ratio)) / std::log(std::abs(c))));
  } else if (std::abs(std::arg(c)) > 1e-6) {
    cal.power = static_cast<int>(std::lround(std::arg(ratio) / std::arg(c)));
  }
  cal.residual = std::abs(ratio / std::pow(c, static_cast<double>(cal.power)) - 1.0);
  return cal;
}

ScalarProductResult slavnov_scalar_product(const YModel& model, const Params& vbar, const Params& ubar,
                                           std::size_t ell, int convention_power) {
  const cplx c = model.c();
  const Eigen::MatrixXcd omega = build_Omega(model, vbar, ubar);
  ScalarProductResult out;
  out.formula_id = "slavnov-minor";
  out.convention_power = convention_power;
  out.value = std::pow(c, static_cast<double>(convention_power)) * delta(c, ubar.complement(ell)) *
              delta_prime(c, vbar) * omega_minor(omega, ell);
  return out;
}

ScalarProductResult slavnov_scalar_product(const YModel& model, const Params& vbar, const Params& wbar,
                                           int convention_power) {
  if (wbar.size() != vbar.size()) throw std::invalid_argument("slavnov_scalar_product: |wbar| must equal |vbar|");
  double scale = 1.0 + std::abs(model.c());
  for (const auto& x : vbar) scale += std::abs(x);
  for (const auto& x : wbar) scale += std::abs(x);
  const Params ubar = wbar.with(cplx(2.3 * scale, -1.9 * scale));
  return slavnov_scalar_product(model, vbar, ubar, wbar.size(), convention_power);
}

cplx dual_normalization(const ChainSpec& spec, const Params& vbar) {
  cplx out = 1.0;
  for (const auto& v : vbar) out *= lambda2(spec, v);
  return out;
}

std::vector<ScalarProductResult> maba_scalar_product(const YModel& model, const TwistSpec& twist, const Params& vbar,
                                                     const Params& ubar, cplx vacuum_expectation, double onshell_tol) {
  const SystemMatrices sys = build_M(model, vbar, ubar, onshell_tol);
  if (sys.onshell_warning)
    throw std::invalid_argument("maba_scalar_product: vbar violates the Bethe equations (residual " +
                                std::to_string(sys.onshell_residual) + ")");
  const RankInfo info = system_rank(sys);
  if (info.rank != idx(vbar.size())) throw RankDeficientError("maba_scalar_product: rank(M) != S", info);
  const double S = static_cast<double>(vbar.size());
  const cplx phi = std::pow(twist.mu / twist.kappa_minus, S) * vacuum_expectation;
  const Eigen::VectorXcd minors = minor_vector(sys);
  const cplx dp = delta_prime(model.c(), vbar);
  std::vector<ScalarProductResult> out;
  for (Eigen::Index l = 0; l < minors.size(); ++l) out.push_back({phi * dp * minors[l], "maba-minor", 0});
  return out;
}

GaudinNormReport gaudin_norm_check(const SpinChainOracle& oracle, const YModel& model, const Params& vbar) {
  GaudinNormReport rep;
  const cplx c = model.c();
  rep.oracle_norm = direct_scalar_product(oracle.dual_bethe_vector(vbar), oracle.bethe_vector(vbar)) /
                    dual_normalization(oracle.spec(), vbar);
  rep.gaudin_det = determinant(gaudin_matrix(model, vbar));
  rep.prefactor = delta(c, vbar) * delta_prime(c, vbar);
  rep.ratio = rep.oracle_norm / (rep.prefactor * rep.gaudin_det);
  return rep;
}

}  // namespace bdl
