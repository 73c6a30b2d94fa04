#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bdl/determinants.hpp"
#include "bdl/linalg.hpp"
#include "bdl/system.hpp"
#include "fixtures.hpp"

#include <random>

using namespace bdl;

namespace {

cplx raw_product(const SpinChainOracle& o, const Params& v, const Params& u) {
  return direct_scalar_product(o.dual_bethe_vector(v), o.bethe_vector(u));
}

Params theta_subset(const ChainSpec& spec, std::size_t n) {
  return Params(std::vector<cplx>(spec.theta.begin(), spec.theta.begin() + static_cast<long>(n)));
}

}  // namespace

TEST_CASE("Izergin: n = N = 1 equals c^2 and fixes the convention power") {
  const ChainSpec spec = fx::chain(1);
  const Params v{cplx(0.6, -0.2)};
  CHECK(rel_err(izergin(spec, v, theta_subset(spec, 1)), spec.c * spec.c) < 1e-14);
  const SpinChainOracle o(spec);
  const Calibration cal =
      calibrate_c_power(raw_product(o, v, theta_subset(spec, 1)) / izergin(spec, v, theta_subset(spec, 1)), spec.c);
  CHECK(cal.power == izergin_convention_power(1, 1));
  CHECK(cal.residual < 1e-12);
}

TEST_CASE("Izergin matches the oracle for arbitrary v up to N = 4, n = 3") {
  std::mt19937_64 rng(1);
  for (std::size_t N = 1; N <= 4; ++N) {
    const ChainSpec spec = fx::chain(N);
    const SpinChainOracle o(spec);
    for (std::size_t n = 1; n <= std::min<std::size_t>(N, 3); ++n) {
      const Params t = theta_subset(spec, n);
      const Params v = fx::draw_set(rng, n, 1.5, Params(spec.theta));
      const cplx pred = izergin(spec, v, t) * std::pow(spec.c, static_cast<double>(izergin_convention_power(n, N)));
      CHECK(rel_err(raw_product(o, v, t), pred) < 1e-8);
    }
  }
}

TEST_CASE("Izergin is symmetric in v and in the inhomogeneity subset") {
  const ChainSpec spec = fx::chain(3);
  const Params v{{0.6, -0.2}, {-0.3, 0.8}, {1.1, 0.4}};
  const Params t = theta_subset(spec, 3);
  const cplx z = izergin(spec, v, t);
  CHECK(rel_err(z, izergin(spec, Params{v[2], v[0], v[1]}, t)) < 1e-10);
  CHECK(rel_err(z, izergin(spec, v, Params{t[1], t[2], t[0]})) < 1e-10);
  CHECK_THROWS_AS(izergin(spec, Params{t[0]}, Params{t[0]}), PoleError);
  CHECK_THROWS_AS(izergin(spec, v, theta_subset(spec, 2)), std::invalid_argument);
}

TEST_CASE("Gaudin matrix against finite differences") {
  const ChainSpec spec = fx::chain(2);
  const YModel m = periodic_model(spec, 1);
  const Params v{cplx(0.4, 0.3)};
  const double h = 1e-6;
  const auto y = [&](cplx x) { return y_eval(m, x, Params{x}); };
  const cplx fd = (y(v[0] + h) - y(v[0] - h)) / (2 * h);
  CHECK(rel_err(gaudin_matrix(m, v)(0, 0), fd) < 1e-6);

  std::mt19937_64 rng(2);
  const YModel r = random_model(fx::kC, 3, 4, rng);
  const Params w = fx::draw_set(rng, 3);
  const Eigen::MatrixXcd G = gaudin_matrix(r, w);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 3; ++k) {
      const cplx f = (y_eval(r, w.replaced(j, w[j] + h)[k], w.replaced(j, w[j] + h)) -
                      y_eval(r, w.replaced(j, w[j] - h)[k], w.replaced(j, w[j] - h))) /
                     (2 * h);
      CHECK(rel_err(G(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)), f) < 1e-6);
    }
}

TEST_CASE("Gaudin norm: one constant per sector, equal to c^n") {
  for (const auto& [N, n] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 1}, {3, 1}, {4, 1}, {4, 2}}) {
    const ChainSpec spec = fx::chain(N);
    const SpinChainOracle o(spec);
    const YModel m = periodic_model(spec, n);
    const auto sets = fx::roots(o, m, n);
    REQUIRE(!sets.empty());
    const cplx first = gaudin_norm_check(o, m, sets[0]).ratio;
    CHECK(rel_err(first, std::pow(spec.c, static_cast<double>(n))) < 1e-8);
    for (const auto& v : sets) {
      const GaudinNormReport rep = gaudin_norm_check(o, m, v);
      CHECK(std::abs(rep.gaudin_det) > 1e-8);
      CHECK(rel_err(rep.ratio, first) < 1e-7);
    }
  }
}

TEST_CASE("scalar product: calibration at the inhomogeneities, then predictions") {
  std::mt19937_64 rng(3);
  const ChainSpec spec = fx::chain(4);
  const SpinChainOracle o(spec);
  const YModel m = periodic_model(spec, 3);
  const auto sets = fx::roots(o, m, 2);
  REQUIRE(!sets.empty());
  const Params& v = sets[0];
  const cplx norm = dual_normalization(spec, v);

  // ubar_{n+1} = theta subset; the closed form is compared with the Izergin value
  const Params t = theta_subset(spec, 2);
  const cplx iz = izergin(spec, v, t) * std::pow(spec.c, static_cast<double>(izergin_convention_power(2, 4))) / norm;
  const ScalarProductResult at_theta = slavnov_scalar_product(m, v, t);
  const Calibration cal = calibrate_c_power(iz / at_theta.value, spec.c);
  CHECK(cal.power == 0);
  CHECK(cal.residual < 1e-8);

  // generic off-shell u: prediction with the calibrated power
  for (int draw = 0; draw < 5; ++draw) {
    const Params u = fx::draw_set(rng, 2, 1.5, v);
    const cplx oracle = raw_product(o, v, u) / norm;
    CHECK(rel_err(slavnov_scalar_product(m, v, u, cal.power).value, oracle) < 1e-8);
  }

  // approaching v reproduces the Gaudin norm
  const Params near{v[0] + 1e-7, v[1] - 1e-7};
  const GaudinNormReport g = gaudin_norm_check(o, m, v);
  CHECK(rel_err(slavnov_scalar_product(m, v, near).value, g.oracle_norm) < 1e-5);
}

TEST_CASE("scalar product is a polynomial of degree N - 1 in each u_j") {
  const ChainSpec spec = fx::chain(4);
  const SpinChainOracle o(spec);
  const YModel m = periodic_model(spec, 3);
  const auto sets = fx::roots(o, m, 2);
  REQUIRE(!sets.empty());
  const Params& v = sets[0];
  const cplx u2{-0.7, 0.9};
  std::vector<cplx> x{{0.1, 0.2}, {0.8, -0.4}, {-1.2, 0.3}, {0.5, 1.1}, {1.4, 0.6}};
  std::vector<cplx> y;
  for (const auto& xi : x) y.push_back(slavnov_scalar_product(m, v, Params{xi, u2}).value);
  // Lagrange interpolation through the first four points predicts the fifth
  cplx pred = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    cplx w = y[i];
    for (std::size_t k = 0; k < 4; ++k)
      if (k != i) w *= (x[4] - x[k]) / (x[i] - x[k]);
    pred += w;
  }
  CHECK(rel_err(pred, y[4]) < 1e-8);
}

TEST_CASE("MABA scalar products against the oracle") {
  std::mt19937_64 rng(4);
  const TwistSpec tw = fx::twist();
  for (std::size_t N = 1; N <= 3; ++N) {
    const ChainSpec spec = fx::chain(N);
    const SpinChainOracle o(spec, tw);
    const YModel m = maba_model(spec, tw, N + 1);
    const auto sets = fx::roots(o, m, N);
    REQUIRE(!sets.empty());
    for (const auto& v : sets) {
      const Params u = fx::draw_set(rng, N + 1, 1.5, v);
      const cplx vac = direct_scalar_product(o.dual_bethe_vector(v), o.vacuum());
      const auto xs = maba_scalar_product(m, tw, v, u, vac);
      REQUIRE(xs.size() == N + 1);
      Eigen::VectorXcd X(static_cast<Eigen::Index>(N + 1));
      for (std::size_t l = 0; l <= N; ++l) {
        const cplx oracle = raw_product(o, v, u.complement(l));
        CHECK(rel_err(xs[l].value, oracle) < 1e-7);
        X[static_cast<Eigen::Index>(l)] = xs[l].value;
      }
      CHECK(lse_residual(build_M(m, v, u).M, X) < 1e-8);
    }
  }
}

TEST_CASE("MABA scalar product rejects off-shell roots") {
  const ChainSpec spec = fx::chain(2);
  const TwistSpec tw = fx::twist();
  const YModel m = maba_model(spec, tw, 3);
  CHECK_THROWS_AS(maba_scalar_product(m, tw, Params{0.1, 0.5}, Params{1.0, 2.0, 3.0}, 1.0), std::invalid_argument);
}

TEST_CASE("MABA large-u limit") {
  const TwistSpec tw = fx::twist();
  const ChainSpec spec = fx::chain(2);
  const SpinChainOracle o(spec, tw);
  const YModel m = maba_model(spec, tw, 3);
  const auto sets = fx::roots(o, m, 2);
  REQUIRE(!sets.empty());
  const Params& v = sets[0];
  const cplx vac = direct_scalar_product(o.dual_bethe_vector(v), o.vacuum());
  const cplx target = std::pow(tw.mu * (tw.rho1 + tw.rho2) / tw.kappa_minus, 2.0) * vac;
  const cplx c = spec.c;
  std::vector<double> errs;
  for (double U : {1e3, 1e4, 1e5}) {
    const Params u{U, 2.0 * U, cplx(0.3, 0.2)};
    const auto xs = maba_scalar_product(m, tw, v, u, vac);
    const cplx scale = std::pow(u[0] / c, 2.0) * std::pow(u[1] / c, 2.0);
    errs.push_back(rel_err(xs[2].value / scale, target));
  }
  CHECK(errs[0] < 1e-2);
  CHECK(std::log10(errs[0] / errs[1]) > 0.9);
  CHECK(std::log10(errs[1] / errs[2]) > 0.9);
}
