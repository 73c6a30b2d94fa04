#include "bdl/oracle.hpp"

#include "bdl/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

namespace bdl {

HilbertSpace::HilbertSpace(const std::vector<double>& spins) {
  for (double s : spins) {
    const auto d = static_cast<Eigen::Index>(std::lround(2.0 * s)) + 1;
    site_dims_.push_back(d);
    total_dim_ *= d;
    if (total_dim_ > max_dim())
      throw DimensionError("HilbertSpace: dimension exceeds cap " + std::to_string(max_dim()) +
                           " (set BDL_MAX_DIM to raise it)");
  }
}

Eigen::Index HilbertSpace::max_dim() {
  if (const char* env = std::getenv("BDL_MAX_DIM")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return static_cast<Eigen::Index>(v);
  }
  return 4096;
}

Operator HilbertSpace::embed(const Operator& op, std::size_t site) const {
  Eigen::Index before = 1;
  Eigen::Index after = 1;
  for (std::size_t i = 0; i < site_dims_.size(); ++i) {
    if (i < site) before *= site_dims_[i];
    if (i > site) after *= site_dims_[i];
  }
  const Operator left = Eigen::kroneckerProduct(Operator::Identity(before, before), op);
  return Eigen::kroneckerProduct(left, Operator::Identity(after, after));
}

SpinMatrices spin_matrices(double s) {
  const auto d = static_cast<Eigen::Index>(std::lround(2.0 * s)) + 1;
  SpinMatrices m{Operator::Zero(d, d), Operator::Zero(d, d), Operator::Zero(d, d)};
  for (Eigen::Index k = 0; k < d; ++k) {
    const double mk = s - static_cast<double>(k);
    m.sz(k, k) = mk;
    // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>; |m+1> sits at index k-1.
    if (k > 0) m.splus(k - 1, k) = std::sqrt(s * (s + 1.0) - mk * (mk + 1.0));
  }
  m.sminus = m.splus.transpose();
  return m;
}

OperatorBlock operator*(const OperatorBlock& x, const OperatorBlock& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

OperatorBlock operator*(const Eigen::Matrix2cd& k, const OperatorBlock& t) {
  return {k(0, 0) * t.a + k(0, 1) * t.c, k(0, 0) * t.b + k(0, 1) * t.d,
          k(1, 0) * t.a + k(1, 1) * t.c, k(1, 0) * t.b + k(1, 1) * t.d};
}

OperatorBlock operator*(const OperatorBlock& t, const Eigen::Matrix2cd& k) {
  return {t.a * k(0, 0) + t.b * k(1, 0), t.a * k(0, 1) + t.b * k(1, 1),
          t.c * k(0, 0) + t.d * k(1, 0), t.c * k(0, 1) + t.d * k(1, 1)};
}

SpinChainOracle::SpinChainOracle(ChainSpec spec, std::optional<TwistSpec> twist)
    : spec_(std::move(spec)), twist_(std::move(twist)), space_((spec_.validate(), spec_.spins)) {
  if (twist_ && twist_->constraint_residual() > 1e-12)
    throw std::invalid_argument("SpinChainOracle: twist parameters violate their constraint");
  for (std::size_t i = 0; i < spec_.sites(); ++i) {
    const SpinMatrices local = spin_matrices(spec_.spins[i]);
    site_ops_.push_back({space_.embed(local.sz, i), space_.embed(local.splus, i), space_.embed(local.sminus, i)});
  }
}

OperatorBlock SpinChainOracle::lax(std::size_t site, cplx u) const {
  const cplx c = spec_.c;
  const Eigen::Index dim = space_.total_dim();
  const Operator shift = (u - spec_.theta[site] + c / 2.0) * Operator::Identity(dim, dim);
  const SpinMatrices& s = site_ops_.at(site);
  return {(shift + c * s.sz) / c, s.sminus, s.splus, (shift - c * s.sz) / c};
}

OperatorBlock SpinChainOracle::monodromy(cplx u) const {
  OperatorBlock t = lax(0, u);
  for (std::size_t i = 1; i < spec_.sites(); ++i) t = lax(i, u) * t;
  return t;
}

OperatorBlock SpinChainOracle::modified_monodromy(cplx u) const {
  if (!twist_) throw std::logic_error("modified_monodromy: chain has no twist");
  return twist_->A() * monodromy(u) * twist_->B();
}

Operator SpinChainOracle::transfer(cplx u) const {
  if (!twist_) return monodromy(u).trace();
  return (twist_->K() * monodromy(u)).trace();
}

Operator SpinChainOracle::transfer_via_modified(cplx u) const {
  if (!twist_) return transfer(u);
  return (twist_->D() * modified_monodromy(u)).trace();
}

Operator SpinChainOracle::creation(cplx u) const {
  return twist_ ? modified_monodromy(u).b : monodromy(u).b;
}

Operator SpinChainOracle::annihilation(cplx u) const {
  return twist_ ? modified_monodromy(u).c : monodromy(u).c;
}

Eigen::VectorXcd SpinChainOracle::vacuum() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space_.total_dim());
  v[0] = 1.0;
  return v;
}

Eigen::RowVectorXcd SpinChainOracle::dual_vacuum() const { return vacuum().transpose(); }

Eigen::VectorXcd SpinChainOracle::bethe_vector(const Params& u) const {
  Eigen::VectorXcd psi = vacuum();
  for (const auto& x : u) psi = creation(x) * psi;
  return psi;
}

Eigen::RowVectorXcd SpinChainOracle::dual_bethe_vector(const Params& v) const {
  Eigen::RowVectorXcd phi = dual_vacuum();
  for (const auto& x : v) phi = phi * annihilation(x);
  return phi;
}

cplx direct_scalar_product(const Eigen::RowVectorXcd& dual, const Eigen::VectorXcd& state) {
  if (dual.size() != state.size()) throw std::invalid_argument("direct_scalar_product: dimension mismatch");
  return (dual * state)(0, 0);
}

double relative_commutator(const Operator& x, const Operator& y) {
  const double scale = x.norm() * y.norm();
  return scale == 0.0 ? 0.0 : (x * y - y * x).norm() / scale;
}

double default_seed_radius(const ChainSpec& spec) {
  double m = 0.0;
  for (const auto& t : spec.theta) m = std::max(m, std::abs(t));
  return 3.0 * m + 3.0 * std::abs(spec.c);
}

namespace {

Eigen::MatrixXcd bethe_jacobian(const YModel& model, const Params& v) {
  const auto n = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXcd J(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    for (Eigen::Index k = 0; k < n; ++k) J(j, k) = y_dv(model, v[jj], v, static_cast<std::size_t>(k));
    J(j, j) += y_dz(model, v[jj], v);
  }
  return J;
}

double inf_norm(const Eigen::VectorXcd& r) { return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff(); }

bool all_finite(const Params& v) {
  for (const auto& x : v)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

std::optional<Params> newton(const YModel& model, Params x, const RootSolverOptions& opt) {
  double res = inf_norm(bethe_residual(model, x));
  for (std::size_t it = 0; it < opt.max_iterations && res >= opt.residual_tol; ++it) {
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(bethe_jacobian(model, x));
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXcd step = lu.solve(bethe_residual(model, x));
    double damping = 1.0;
    Params trial;
    double trial_res = 0.0;
    for (;;) {
      trial = Params(Eigen::VectorXcd(x.values() - damping * step));
      trial_res = inf_norm(bethe_residual(model, trial));
      if (trial_res < res || damping < 1e-4) break;
      damping *= 0.5;
    }
    if (!all_finite(trial) || !std::isfinite(trial_res)) return std::nullopt;
    x = std::move(trial);
    res = trial_res;
  }
  if (res >= opt.residual_tol) return std::nullopt;
  return x;
}

Params sorted(const Params& v) {
  std::vector<cplx> xs(v.begin(), v.end());
  std::sort(xs.begin(), xs.end(), [](cplx a, cplx b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return Params(xs);
}

bool same_set(const Params& a, const Params& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol * std::max(1.0, std::abs(a[i]))) return false;
  return true;
}

}  // namespace

std::vector<Params> solve_bethe_roots(const YModel& model, std::size_t n, const RootSolverOptions& options) {
  std::vector<Params> found;
  if (n == 0) {
    found.emplace_back();
    return found;
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (std::size_t s = 0; s < options.seeds; ++s) {
    std::vector<cplx> start(n);
    for (auto& x : start) x = std::polar(options.radius * std::sqrt(unit(rng)), two_pi * unit(rng));
    auto root = newton(model, Params(start), options);
    if (!root) continue;
    if (!root->pairwise_distinct(options.min_separation)) continue;
    bool bounded = true;
    for (const auto& x : *root) bounded = bounded && std::abs(x) < options.max_modulus;
    if (!bounded) continue;
    Params key = sorted(*root);
    const bool dup = std::any_of(found.begin(), found.end(), [&](const Params& f) { return same_set(f, key, 1e-7); });
    if (!dup) found.push_back(std::move(key));
  }
  return found;
}

RootCheck check_roots(const SpinChainOracle& oracle, const YModel& model, const Params& roots,
                      const std::vector<cplx>& probes) {
  RootCheck out;
  out.roots = roots;
  out.bethe_residual = inf_norm(bethe_residual(model, roots));
  const Eigen::VectorXcd psi = oracle.bethe_vector(roots);
  double op_norms = 1.0;
  for (const auto& v : roots) op_norms *= oracle.creation(v).norm();
  const double psi_norm = psi.norm();
  out.vector_ratio = op_norms == 0.0 ? 0.0 : psi_norm / op_norms;
  if (out.vector_ratio < 1e-8) return out;
  for (const auto& z : probes) {
    const Operator t = oracle.transfer(z);
    const cplx lam = lambda_eval(model, z, roots);
    const double scale = std::max(1.0, std::abs(lam));
    out.eigen_residual = std::max(out.eigen_residual, (t * psi - lam * psi).norm() / (psi_norm * scale));
    const Eigen::VectorXcd eig = Eigen::ComplexEigenSolver<Operator>(t, false).eigenvalues();
    out.spectrum_distance = std::max(out.spectrum_distance, (eig.array() - lam).abs().minCoeff() / scale);
  }
  out.physical = out.eigen_residual < 1e-8 && out.spectrum_distance < 1e-8;
  return out;
}

std::vector<Params> physical_roots(const SpinChainOracle& oracle, const YModel& model, std::size_t n,
                                   const RootSolverOptions& options) {
  const std::vector<cplx> probes{{0.37, 0.21}, {-0.81, 0.52}, {1.3, -0.44}};
  std::vector<Params> out;
  for (auto& r : solve_bethe_roots(model, n, options))
    if (check_roots(oracle, model, r, probes).physical) out.push_back(std::move(r));
  return out;
}

std::size_t unmatched_eigenvalues(const SpinChainOracle& oracle, const YModel& model,
                                  const std::vector<Params>& root_sets, cplx z, double tol) {
  const Eigen::VectorXcd eig = Eigen::ComplexEigenSolver<Operator>(oracle.transfer(z), false).eigenvalues();
  std::vector<cplx> predicted;
  for (const auto& r : root_sets) predicted.push_back(lambda_eval(model, z, r));
  std::size_t unmatched = 0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const bool hit = std::any_of(predicted.begin(), predicted.end(), [&](cplx p) {
      return std::abs(p - eig[i]) < tol * std::max(1.0, std::abs(p));
    });
    if (!hit) ++unmatched;
  }
  return unmatched;
}

}  // namespace bdl
