#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bdl/oracle.hpp"
#include "bdl/system.hpp"
#include "fixtures.hpp"

#include <Eigen/Eigenvalues>

#include <cstdlib>
#include <random>

using namespace bdl;

TEST_CASE("Hilbert space dimensions and cap") {
  const HilbertSpace h({0.5, 1.0, 0.5});
  CHECK(h.total_dim() == 12);
  CHECK(h.site_dims() == std::vector<Eigen::Index>{2, 3, 2});
  CHECK(HilbertSpace::max_dim() == 4096);
  CHECK_THROWS_AS(HilbertSpace(std::vector<double>(13, 0.5)), DimensionError);
  setenv("BDL_MAX_DIM", "8", 1);
  CHECK_THROWS_AS(HilbertSpace({0.5, 0.5, 0.5, 0.5}), DimensionError);
  unsetenv("BDL_MAX_DIM");
}

TEST_CASE("spin-1/2 Lax operator equals ((u - theta) + c P) / c") {
  const ChainSpec spec = ChainSpec::spin_half(fx::kC, {cplx(0.3, 0.1)});
  const SpinChainOracle o(spec);
  const cplx u{0.8, -0.4}, c = spec.c, th = spec.theta[0];
  const OperatorBlock L = o.lax(0, u);
  // auxiliary index a, site index s; P|a s> = |s a>
  Eigen::Matrix4cd full = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Operator& blk = a == 0 ? (b == 0 ? L.a : L.b) : (b == 0 ? L.c : L.d);
      full.block<2, 2>(2 * a, 2 * b) = blk;
    }
  Eigen::Matrix4cd P = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 2; ++a)
    for (int s = 0; s < 2; ++s) P(2 * s + a, 2 * a + s) = 1.0;
  const Eigen::Matrix4cd expect = ((u - th) * Eigen::Matrix4cd::Identity() + c * P) / c;
  CHECK((full - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("vacuum eigenvalues reproduce lambda1 and lambda2 on mixed-spin chains") {
  ChainSpec spec{fx::kC, {cplx(0.3, 0.1), cplx(-0.4, 0.2), cplx(0.1, -0.5)}, {0.5, 1.0, 1.5}};
  const SpinChainOracle o(spec);
  const Eigen::VectorXcd vac = o.vacuum();
  for (const cplx u : {cplx(0.7, 0.2), cplx(-1.1, 0.9)}) {
    const OperatorBlock T = o.monodromy(u);
    CHECK((T.a * vac - lambda1(spec, u) * vac).norm() < 1e-12 * std::abs(lambda1(spec, u)));
    CHECK((T.d * vac - lambda2(spec, u) * vac).norm() < 1e-12 * std::abs(lambda2(spec, u)));
    CHECK((T.c * vac).norm() < 1e-12);
  }
  // single site: A and D entries on the local vacuum
  const SpinChainOracle one({fx::kC, {cplx(0.2)}, {1.0}});
  const cplx u{0.5, 0.5}, c = fx::kC;
  const OperatorBlock L = one.lax(0, u);
  CHECK(rel_err(L.a(0, 0), (u - 0.2 + c * 1.5) / c) < 1e-14);
  CHECK(rel_err(L.d(0, 0), (u - 0.2 - c * 0.5) / c) < 1e-14);
}

TEST_CASE("B operators and transfer matrices commute") {
  const SpinChainOracle o(fx::chain(3));
  const cplx u{0.4, 0.3}, v{-0.7, 0.6};
  CHECK(relative_commutator(o.creation(u), o.creation(v)) < 1e-10);
  CHECK(relative_commutator(o.transfer(u), o.transfer(v)) < 1e-10);
  const SpinChainOracle t(fx::chain(3), fx::twist());
  CHECK(relative_commutator(t.creation(u), t.creation(v)) < 1e-10);
  CHECK(relative_commutator(t.transfer(u), t.transfer(v)) < 1e-10);
}

TEST_CASE("Bethe vectors: n = 0 is the vacuum and order does not matter") {
  const SpinChainOracle o(fx::chain(3));
  CHECK((o.bethe_vector(Params{}) - o.vacuum()).norm() == 0.0);
  CHECK(direct_scalar_product(o.dual_vacuum(), o.vacuum()) == cplx(1.0));
  const Params u{{0.3, 0.2}, {-0.4, 0.5}, {0.9, -0.1}};
  const Params w{u[2], u[0], u[1]};
  const Eigen::VectorXcd a = o.bethe_vector(u), b = o.bethe_vector(w);
  CHECK((a - b).norm() < 1e-10 * a.norm());
}

TEST_CASE("twisted transfer: trace with K equals the factorized form") {
  const SpinChainOracle o(fx::chain(2), fx::twist());
  const cplx u{0.6, -0.3};
  const Operator a = o.transfer(u), b = o.transfer_via_modified(u);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("nu_12 leading asymptotics") {
  const std::size_t N = 2;
  const SpinChainOracle o(fx::chain(N), fx::twist());
  const TwistSpec tw = fx::twist();
  const cplx c = fx::kC;
  const cplx target = tw.mu / tw.kappa_minus * (tw.rho1 + tw.rho2);
  std::vector<double> errs;
  for (double z : {1e3, 1e4, 1e5}) {
    const Operator nu = o.creation(z) * std::pow(c / z, static_cast<double>(N));
    errs.push_back((nu - target * Operator::Identity(nu.rows(), nu.cols())).cwiseAbs().maxCoeff() / std::abs(target));
  }
  CHECK(errs[0] < 1e-2);
  CHECK(std::log10(errs[0] / errs[1]) > 0.9);
  CHECK(std::log10(errs[1] / errs[2]) > 0.9);
}

TEST_CASE("periodic chain: root sets match the spectrum sector by sector") {
  const ChainSpec spec = ChainSpec::spin_half(1.0, {0.3, -0.2});
  const SpinChainOracle o(spec);
  const YModel m = periodic_model(spec, 2);
  const auto sets = fx::roots(o, m, 1);
  REQUIRE(sets.size() == 1);
  const RootCheck rc = check_roots(o, m, sets[0], {{0.37, 0.21}, {-0.81, 0.52}, {1.3, -0.44}, {0.1, 0.9}, {-0.5, -0.5}});
  CHECK(rc.eigen_residual < 1e-8);
  CHECK(rc.spectrum_distance < 1e-9);

  // N = 4: C(4, n) - C(4, n - 1) highest-weight states in each sector below the equator
  const ChainSpec s4 = fx::chain(4);
  const SpinChainOracle o4(s4);
  const YModel m4 = periodic_model(s4, 2);
  CHECK(fx::roots(o4, m4, 0).size() == 1);
  CHECK(fx::roots(o4, m4, 1).size() == 3);
  CHECK(fx::roots(o4, m4, 2).size() == 2);
}

TEST_CASE("periodic chain: no physical sets beyond the equator") {
  const ChainSpec spec = fx::chain(3);
  const SpinChainOracle o(spec);
  CHECK(fx::roots(o, periodic_model(spec, 2), 2).empty());
}

TEST_CASE("twisted chain: S roots, residual small, every eigenvalue reached") {
  for (std::size_t N = 1; N <= 3; ++N) {
    const ChainSpec spec = fx::chain(N);
    const SpinChainOracle o(spec, fx::twist());
    const YModel m = maba_model(spec, fx::twist(), N);
    const auto sets = fx::roots(o, m, N);
    CHECK(sets.size() == (std::size_t{1} << N));
    for (const auto& v : sets) CHECK(bethe_residual(m, v).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(unmatched_eigenvalues(o, m, sets, {0.37, 0.21}) == 0);
  }
}

TEST_CASE("transfer action on off-shell vectors expands over the L coefficients") {
  std::mt19937_64 rng(3);
  const auto run = [&](const SpinChainOracle& o, const YModel& m, std::size_t n) {
    const Params u = fx::draw_set(rng, n + 1);
    const Eigen::MatrixXcd L = build_L(m, u);
    for (std::size_t j = 0; j <= n; ++j) {
      const Eigen::VectorXcd lhs = o.transfer(u[j]) * o.bethe_vector(u.complement(j));
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(lhs.size());
      for (std::size_t k = 0; k <= n; ++k)
        rhs += L(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * o.bethe_vector(u.complement(k));
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, lhs.cwiseAbs().maxCoeff()) < 1e-9);
    }
  };
  const ChainSpec spec = fx::chain(3);
  const SpinChainOracle periodic(spec);
  const SpinChainOracle twisted(spec, fx::twist());
  for (std::size_t n = 0; n <= 3; ++n) run(periodic, periodic_model(spec, 3), n);
  // the three-term eigenvalue describes the action only on vectors with S parameters
  run(twisted, maba_model(spec, fx::twist(), 4), 3);
  const SpinChainOracle twisted2(fx::chain(2), fx::twist());
  run(twisted2, maba_model(fx::chain(2), fx::twist(), 3), 2);
}

TEST_CASE("expectation value read both ways") {
  std::mt19937_64 rng(4);
  const ChainSpec spec = fx::chain(4);
  const SpinChainOracle o(spec);
  const YModel m = periodic_model(spec, 3);
  const auto sets = fx::roots(o, m, 2);
  REQUIRE(!sets.empty());
  const Params& v = sets[0];
  const Params u = fx::draw_set(rng, 3, 1.5, v);
  const Eigen::RowVectorXcd dual = o.dual_bethe_vector(v);
  const Eigen::MatrixXcd L = build_L(m, u);
  for (std::size_t j = 0; j < 3; ++j) {
    const cplx left = lambda_eval(m, u[j], v) * direct_scalar_product(dual, o.bethe_vector(u.complement(j)));
    cplx right = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
      right += L(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) *
               direct_scalar_product(dual, o.bethe_vector(u.complement(k)));
    CHECK(rel_err(left, right) < 1e-9);
  }
}

TEST_CASE("solver reports nothing rather than failing on an empty search") {
  const ChainSpec spec = fx::chain(2);
  RootSolverOptions opt;
  opt.seeds = 0;
  CHECK(solve_bethe_roots(periodic_model(spec, 1), 1, opt).empty());
}
