#pragma once

// Transfer-matrix eigenvalue family
//   Lambda(z|v) = g(z, v) Y(z|v),   Y(z|v) = sum_p alpha_p(z) sigma_p(v)
// with the periodic XXX chain and the chain with a non-diagonal twist as
// concrete members.

#include "bdl/core.hpp"

#include <Eigen/Core>

#include <random>
#include <string>
#include <vector>

namespace bdl {

/// Physical chain data: N sites, coupling c, inhomogeneities and site spins.
struct ChainSpec {
  cplx c{1.0, 0.0};
  std::vector<cplx> theta;
  std::vector<double> spins;

  std::size_t sites() const { return theta.size(); }
  /// S = sum_i 2 s_i
  std::size_t total_spin_units() const;
  /// Throws std::invalid_argument on inconsistent data.
  void validate() const;

  /// Spin-1/2 chain with the given inhomogeneities.
  static ChainSpec spin_half(cplx c, std::vector<cplx> theta);
};

/// Entries of the twist matrix K = [[kappa_tilde, kappa_plus], [kappa_minus, kappa]]
/// together with the factorization parameters rho1, rho2, mu.
struct TwistSpec {
  cplx kappa, kappa_tilde, kappa_plus, kappa_minus;
  cplx rho1, rho2, mu;

  /// Derives rho2 and mu from the factorization constraint for a chosen rho1.
  /// Rejects rho1 == kappa_tilde and kappa_plus * kappa_minus == 0.
  static TwistSpec from_rho1(cplx kappa, cplx kappa_tilde, cplx kappa_plus, cplx kappa_minus, cplx rho1);

  /// Relative residuals of the two constraints tying rho1, rho2 and mu.
  double constraint_residual() const;

  Eigen::Matrix2cd K() const;
  Eigen::Matrix2cd A() const;
  Eigen::Matrix2cd B() const;
  Eigen::Matrix2cd D() const;
};

/// A member of the Y-function class: coefficient polynomials alpha_p(z),
/// p = 0..n, for each cardinality n up to n_max.
class YModel {
public:
  YModel(cplx c, std::vector<std::vector<Poly>> alphas_by_size, std::string name);

  cplx c() const { return c_; }
  std::size_t n_max() const { return alphas_.size() - 1; }
  const std::string& name() const { return name_; }
  /// alpha_0..alpha_n for sets of cardinality n.
  const std::vector<Poly>& alphas(std::size_t n) const;

private:
  cplx c_;
  std::vector<std::vector<Poly>> alphas_;
  std::string name_;
};

Poly lambda1_poly(const ChainSpec& spec);
Poly lambda2_poly(const ChainSpec& spec);
Poly maba_f_poly(const ChainSpec& spec);
cplx lambda1(const ChainSpec& spec, cplx z);
cplx lambda2(const ChainSpec& spec, cplx z);
cplx maba_f(const ChainSpec& spec, cplx z);

YModel periodic_model(const ChainSpec& spec, std::size_t n_max);
YModel maba_model(const ChainSpec& spec, const TwistSpec& twist, std::size_t n_max);
/// Y(z|v) = 1/g(z,v); Lambda == 1 and every Omega entry vanishes.
YModel degenerate_model(cplx c, std::size_t n_max);
/// Random member of the class: complex Gaussian coefficients, degree <= degree.
YModel random_model(cplx c, std::size_t n_max, std::size_t degree, std::mt19937_64& rng);

cplx y_eval(const YModel& model, cplx z, const Params& set);
/// sum_p |alpha_p(z)| |sigma_p(set)|: rounding scale for y_eval
double y_magnitude(const YModel& model, cplx z, const Params& set);
/// dY(z|v)/dz
cplx y_dz(const YModel& model, cplx z, const Params& set);
/// dY(z|v)/dv_j at fixed z
cplx y_dv(const YModel& model, cplx z, const Params& set, std::size_t j);

/// Product forms, evaluated without the alpha expansion.
cplx y_periodic(const ChainSpec& spec, cplx z, const Params& set);
cplx y_maba(const ChainSpec& spec, const TwistSpec& twist, cplx z, const Params& set);

/// g(z, set) Y(z|set). Throws PoleError when z hits an element of set.
cplx lambda_eval(const YModel& model, cplx z, const Params& set);

/// Finite value of Lambda(v_j|v) on an on-shell set, where the pole of
/// g(z, v_j) is cancelled by the zero Y(v_j|v) = 0:
///   c dY/dz(v_j|v) g(v_j, v_j-complement).
/// Throws PoleError if |Y(v_j|v)| exceeds onshell_tol.
cplx lambda_at_root(const YModel& model, const Params& set, std::size_t j, double onshell_tol = 1e-8);

/// [Y(v_j|v)]_j; the set is on-shell iff every entry vanishes.
Eigen::VectorXcd bethe_residual(const YModel& model, const Params& set);

}  // namespace bdl
