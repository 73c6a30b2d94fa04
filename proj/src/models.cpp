#include "bdl/models.hpp"

#include <cmath>
#include <stdexcept>

namespace bdl {

namespace {

bool is_positive_half_integer(double s) {
  const double twice = 2.0 * s;
  return s > 0.0 && std::abs(twice - std::round(twice)) < 1e-12;
}

std::size_t twice_spin(double s) { return static_cast<std::size_t>(std::lround(2.0 * s)); }

// (-1)^p [a(z) (z - c)^{n-p} + b(z) (z + c)^{n-p}] / c^n, p = 0..n
std::vector<Poly> two_term_alphas(cplx c, std::size_t n, const Poly& a, const Poly& b) {
  std::vector<Poly> out;
  out.reserve(n + 1);
  const cplx scale = std::pow(c, -static_cast<double>(n));
  const Poly minus = Poly::linear(c);
  const Poly plus = Poly::linear(-c);
  for (std::size_t p = 0; p <= n; ++p) {
    const cplx sign = (p % 2 == 0) ? 1.0 : -1.0;
    out.push_back((sign * scale) * (a * minus.pow(n - p) + b * plus.pow(n - p)));
  }
  return out;
}

}  // namespace

std::size_t ChainSpec::total_spin_units() const {
  std::size_t s = 0;
  for (double spin : spins) s += twice_spin(spin);
  return s;
}

void ChainSpec::validate() const {
  if (std::abs(c) == 0.0) throw std::invalid_argument("ChainSpec: c must be nonzero");
  if (theta.empty()) throw std::invalid_argument("ChainSpec: at least one site is required");
  if (spins.size() != theta.size())
    throw std::invalid_argument("ChainSpec: theta and spins must have the same length");
  for (double s : spins)
    if (!is_positive_half_integer(s))
      throw std::invalid_argument("ChainSpec: spins must be positive half-integers");
  if (!Params(theta).pairwise_distinct())
    throw std::invalid_argument("ChainSpec: inhomogeneities must be pairwise distinct");
}

ChainSpec ChainSpec::spin_half(cplx c, std::vector<cplx> theta) {
  ChainSpec spec;
  spec.c = c;
  spec.spins.assign(theta.size(), 0.5);
  spec.theta = std::move(theta);
  return spec;
}

TwistSpec TwistSpec::from_rho1(cplx kappa, cplx kappa_tilde, cplx kappa_plus, cplx kappa_minus, cplx rho1) {
  if (std::abs(kappa_plus * kappa_minus) == 0.0)
    throw std::invalid_argument("TwistSpec: kappa_plus * kappa_minus must be nonzero");
  if (coincide(rho1, kappa_tilde)) throw std::invalid_argument("TwistSpec: rho1 must differ from kappa_tilde");
  TwistSpec t;
  t.kappa = kappa;
  t.kappa_tilde = kappa_tilde;
  t.kappa_plus = kappa_plus;
  t.kappa_minus = kappa_minus;
  t.rho1 = rho1;
  t.rho2 = (rho1 * kappa - kappa_plus * kappa_minus) / (rho1 - kappa_tilde);
  const cplx denom = 1.0 - t.rho1 * t.rho2 / (kappa_plus * kappa_minus);
  if (std::abs(denom) < 1e-12) throw std::invalid_argument("TwistSpec: mu is singular for this rho1");
  t.mu = 1.0 / denom;
  return t;
}

double TwistSpec::constraint_residual() const {
  const cplx quad = rho1 * rho2 - rho2 * kappa_tilde - rho1 * kappa + kappa_plus * kappa_minus;
  const double scale = std::max({std::abs(rho1 * rho2), std::abs(rho2 * kappa_tilde), std::abs(rho1 * kappa),
                                 std::abs(kappa_plus * kappa_minus), 1e-300});
  const double mu_res = rel_err(mu, 1.0 / (1.0 - rho1 * rho2 / (kappa_plus * kappa_minus)));
  return std::max(std::abs(quad) / scale, mu_res);
}

Eigen::Matrix2cd TwistSpec::K() const {
  Eigen::Matrix2cd k;
  k << kappa_tilde, kappa_plus, kappa_minus, kappa;
  return k;
}

Eigen::Matrix2cd TwistSpec::A() const {
  Eigen::Matrix2cd a;
  a << 1.0, rho2 / kappa_minus, rho1 / kappa_plus, 1.0;
  return std::sqrt(mu) * a;
}

Eigen::Matrix2cd TwistSpec::B() const {
  Eigen::Matrix2cd b;
  b << 1.0, rho1 / kappa_minus, rho2 / kappa_plus, 1.0;
  return std::sqrt(mu) * b;
}

Eigen::Matrix2cd TwistSpec::D() const {
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = kappa_tilde - rho1;
  d(1, 1) = kappa - rho2;
  return d;
}

YModel::YModel(cplx c, std::vector<std::vector<Poly>> alphas_by_size, std::string name)
    : c_(c), alphas_(std::move(alphas_by_size)), name_(std::move(name)) {
  if (std::abs(c_) == 0.0) throw std::invalid_argument("YModel: c must be nonzero");
  if (alphas_.empty()) throw std::invalid_argument("YModel: no coefficient families");
  for (std::size_t n = 0; n < alphas_.size(); ++n)
    if (alphas_[n].size() != n + 1) throw std::invalid_argument("YModel: alpha family of wrong length");
}

const std::vector<Poly>& YModel::alphas(std::size_t n) const {
  if (n >= alphas_.size())
    throw std::out_of_range("YModel '" + name_ + "': set of size " + std::to_string(n) + " exceeds n_max");
  return alphas_[n];
}

Poly lambda1_poly(const ChainSpec& spec) {
  Poly out = Poly::constant(1.0);
  for (std::size_t i = 0; i < spec.sites(); ++i)
    out = out * ((1.0 / spec.c) * Poly::linear(spec.theta[i] - spec.c * (spec.spins[i] + 0.5)));
  return out;
}

Poly lambda2_poly(const ChainSpec& spec) {
  Poly out = Poly::constant(1.0);
  for (std::size_t i = 0; i < spec.sites(); ++i)
    out = out * ((1.0 / spec.c) * Poly::linear(spec.theta[i] + spec.c * (spec.spins[i] - 0.5)));
  return out;
}

Poly maba_f_poly(const ChainSpec& spec) {
  Poly out = Poly::constant(1.0);
  for (std::size_t i = 0; i < spec.sites(); ++i) {
    const std::size_t top = twice_spin(spec.spins[i]);
    for (std::size_t k = 0; k <= top; ++k) {
      const double shift = spec.spins[i] - static_cast<double>(k) + 0.5;
      out = out * ((1.0 / spec.c) * Poly::linear(spec.theta[i] - spec.c * shift));
    }
  }
  return out;
}

cplx lambda1(const ChainSpec& spec, cplx z) {
  cplx out = 1.0;
  for (std::size_t i = 0; i < spec.sites(); ++i)
    out *= (z - spec.theta[i] + spec.c * (spec.spins[i] + 0.5)) / spec.c;
  return out;
}

cplx lambda2(const ChainSpec& spec, cplx z) {
  cplx out = 1.0;
  for (std::size_t i = 0; i < spec.sites(); ++i)
    out *= (z - spec.theta[i] - spec.c * (spec.spins[i] - 0.5)) / spec.c;
  return out;
}

cplx maba_f(const ChainSpec& spec, cplx z) {
  cplx out = 1.0;
  for (std::size_t i = 0; i < spec.sites(); ++i) {
    const std::size_t top = twice_spin(spec.spins[i]);
    for (std::size_t k = 0; k <= top; ++k)
      out *= (z - spec.theta[i] + spec.c * (spec.spins[i] - static_cast<double>(k) + 0.5)) / spec.c;
  }
  return out;
}

YModel periodic_model(const ChainSpec& spec, std::size_t n_max) {
  spec.validate();
  const Poly l1 = lambda1_poly(spec);
  const Poly l2 = lambda2_poly(spec);
  std::vector<std::vector<Poly>> alphas;
  for (std::size_t n = 0; n <= n_max; ++n) alphas.push_back(two_term_alphas(spec.c, n, l1, l2));
  return YModel(spec.c, std::move(alphas), "periodic-xxx");
}

YModel maba_model(const ChainSpec& spec, const TwistSpec& twist, std::size_t n_max) {
  spec.validate();
  const Poly l1 = (twist.kappa_tilde - twist.rho1) * lambda1_poly(spec);
  const Poly l2 = (twist.kappa - twist.rho2) * lambda2_poly(spec);
  const Poly f = (twist.rho1 + twist.rho2) * maba_f_poly(spec);
  std::vector<std::vector<Poly>> alphas;
  for (std::size_t n = 0; n <= n_max; ++n) {
    auto a = two_term_alphas(spec.c, n, l1, l2);
    a[0] += f;
    alphas.push_back(std::move(a));
  }
  return YModel(spec.c, std::move(alphas), "maba-xxx");
}

YModel degenerate_model(cplx c, std::size_t n_max) {
  std::vector<std::vector<Poly>> alphas;
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::vector<Poly> a;
    const cplx scale = std::pow(c, -static_cast<double>(n));
    for (std::size_t p = 0; p <= n; ++p) a.push_back(Poly::monomial(n - p, (p % 2 == 0 ? 1.0 : -1.0) * scale));
    alphas.push_back(std::move(a));
  }
  return YModel(c, std::move(alphas), "degenerate-ytr");
}

YModel random_model(cplx c, std::size_t n_max, std::size_t degree, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<std::vector<Poly>> alphas;
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::vector<Poly> a;
    for (std::size_t p = 0; p <= n; ++p) {
      std::vector<cplx> coeffs(degree + 1);
      for (auto& x : coeffs) x = cplx(normal(rng), normal(rng));
      a.emplace_back(std::move(coeffs));
    }
    alphas.push_back(std::move(a));
  }
  return YModel(c, std::move(alphas), "random-class");
}

cplx y_eval(const YModel& model, cplx z, const Params& set) {
  const auto& alpha = model.alphas(set.size());
  const auto sigma = esp_all(set);
  cplx out = 0.0;
  for (std::size_t p = 0; p < alpha.size(); ++p) out += alpha[p](z) * sigma[p];
  return out;
}

double y_magnitude(const YModel& model, cplx z, const Params& set) {
  const auto& alpha = model.alphas(set.size());
  const auto sigma = esp_all(set);
  double out = 0.0;
  for (std::size_t p = 0; p < alpha.size(); ++p) out += std::abs(alpha[p](z)) * std::abs(sigma[p]);
  return out;
}

cplx y_dz(const YModel& model, cplx z, const Params& set) {
  const auto& alpha = model.alphas(set.size());
  const auto sigma = esp_all(set);
  cplx out = 0.0;
  for (std::size_t p = 0; p < alpha.size(); ++p) out += alpha[p].derivative()(z) * sigma[p];
  return out;
}

cplx y_dv(const YModel& model, cplx z, const Params& set, std::size_t j) {
  const auto& alpha = model.alphas(set.size());
  const auto rest = set.complement(j);
  const auto sigma_rest = esp_all(rest);
  // d sigma_p / d v_j = sigma_{p-1}(rest)
  cplx out = 0.0;
  for (std::size_t p = 1; p < alpha.size(); ++p) out += alpha[p](z) * sigma_rest[p - 1];
  return out;
}

cplx y_periodic(const ChainSpec& spec, cplx z, const Params& set) {
  cplx first = lambda1(spec, z);
  cplx second = lambda2(spec, z);
  for (const auto& v : set) {
    first *= (z - v - spec.c) / spec.c;
    second *= (z - v + spec.c) / spec.c;
  }
  return first + second;
}

cplx y_maba(const ChainSpec& spec, const TwistSpec& twist, cplx z, const Params& set) {
  cplx first = (twist.kappa_tilde - twist.rho1) * lambda1(spec, z);
  cplx second = (twist.kappa - twist.rho2) * lambda2(spec, z);
  for (const auto& u : set) {
    first *= (z - u - spec.c) / spec.c;
    second *= (z - u + spec.c) / spec.c;
  }
  return first + second + (twist.rho1 + twist.rho2) * maba_f(spec, z);
}

cplx lambda_eval(const YModel& model, cplx z, const Params& set) {
  return g_prod(model.c(), z, set) * y_eval(model, z, set);
}

cplx lambda_at_root(const YModel& model, const Params& set, std::size_t j, double onshell_tol) {
  const cplx vj = set[j];
  const cplx y = y_eval(model, vj, set);
  if (std::abs(y) > onshell_tol)
    throw PoleError("lambda_at_root: Y(v_j|v) = " + std::to_string(std::abs(y)) + " is not zero; genuine pole");
  return model.c() * y_dz(model, vj, set) * g_prod(model.c(), vj, set.complement(j));
}

Eigen::VectorXcd bethe_residual(const YModel& model, const Params& set) {
  Eigen::VectorXcd r(static_cast<Eigen::Index>(set.size()));
  for (std::size_t j = 0; j < set.size(); ++j) r[static_cast<Eigen::Index>(j)] = y_eval(model, set[j], set);
  return r;
}

}  // namespace bdl
