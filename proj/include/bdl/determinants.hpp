#pragma once

// Closed-form determinant representations of scalar products and their
// normalization against the brute-force oracle.

#include "bdl/core.hpp"
#include "bdl/models.hpp"
#include "bdl/oracle.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace bdl {

struct ScalarProductResult {
  cplx value{0.0, 0.0};
  std::string formula_id;
  /// The value carries the factor c^convention_power.
  int convention_power = 0;
};

/// Domain-wall partition function in the unnormalized Lax convention:
///   c^{2n-n^2} Delta(t) Delta'(v) prod_{a,mu}(t_mu - theta_a + c)(v_mu - theta_a)
///   prod_{nu,mu}(v_mu - t_nu + c) det[1/((v_j - t_k)(v_j - t_k + c))]
/// where t is the chosen subset of inhomogeneities (spin-1/2 chain).
cplx izergin(const ChainSpec& spec, const Params& vbar, const Params& theta_subset);

/// Power of c relating the normalized oracle <0|C(v) B(t)|0> to izergin(): -2nN.
int izergin_convention_power(std::size_t n, std::size_t sites);

/// [dY(v_k|v)/dv_j]_{jk}, total derivative including the first argument.
Eigen::MatrixXcd gaudin_matrix(const YModel& model, const Params& vbar);

/// Omega evaluated at u_j = v_j + eps (j <= n), extrapolated to eps -> 0 with one
/// Richardson step over eps and eps/10. Returns the n x n block (last column dropped).
Eigen::MatrixXcd omega_gaudin_limit(const YModel& model, const Params& vbar, double eps = 1e-3);

/// Result of fitting a pure power of c to a measured ratio.
struct Calibration {
  int power = 0;
  cplx measured{0.0, 0.0};
  double residual = 0.0;  // |measured / c^power - 1|
};
Calibration calibrate_c_power(cplx ratio, cplx c);

/// c^power Delta(u_ell-complement) Delta'(v) Omega-hat_ell; ell is 0-based.
ScalarProductResult slavnov_scalar_product(const YModel& model, const Params& vbar, const Params& ubar,
                                           std::size_t ell, int convention_power = 0);

/// Scalar product with the off-shell vector built on `wbar` (|wbar| = |vbar|); the
/// auxiliary u_{n+1} is placed away from every other parameter.
ScalarProductResult slavnov_scalar_product(const YModel& model, const Params& vbar, const Params& wbar,
                                           int convention_power = 0);

/// prod_j lambda2(v_j): the dual-vector normalization in which the periodic-chain
/// prefactor is a pure power of c.
cplx dual_normalization(const ChainSpec& spec, const Params& vbar);

/// X_ell for every ell: (mu/kappa_minus)^S * vacuum_expectation * Delta(u_ell-compl) Delta'(v) Omega-hat_ell,
/// with vacuum_expectation = <0| prod_j nu_21(v_j) |0> supplied by the caller.
std::vector<ScalarProductResult> maba_scalar_product(const YModel& model, const TwistSpec& twist, const Params& vbar,
                                                     const Params& ubar, cplx vacuum_expectation,
                                                     double onshell_tol = 1e-8);

struct GaudinNormReport {
  cplx oracle_norm{0.0, 0.0};      // <0|C(v) B(v)|0> / prod lambda2(v_j)
  cplx gaudin_det{0.0, 0.0};
  cplx prefactor{0.0, 0.0};        // Delta(v) Delta'(v)
  cplx ratio{0.0, 0.0};            // oracle_norm / (prefactor gaudin_det)
};

GaudinNormReport gaudin_norm_check(const SpinChainOracle& oracle, const YModel& model, const Params& vbar);

}  // namespace bdl
