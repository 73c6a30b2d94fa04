#pragma once

// Rational-R-matrix arithmetic: g(u,v) = c/(u-v), set products, the Delta
// prefactors and elementary symmetric polynomials.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bdl {

using cplx = std::complex<double>;

class PoleError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Default separation tolerance used to decide that u and v coincide.
inline double separation_tol(double u_abs, double v_abs) {
  return 1e-9 * std::max({1.0, u_abs, v_abs});
}

template <typename Scalar>
bool coincide(const Scalar& u, const Scalar& v) {
  using std::abs;
  return abs(u - v) < separation_tol(abs(u), abs(v));
}

/// Ordered list of spectral parameters.
template <typename Scalar = cplx>
class ParamSet {
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  ParamSet() = default;
  explicit ParamSet(Vector values) : values_(std::move(values)) {}
  ParamSet(std::initializer_list<Scalar> values)
      : values_(static_cast<Eigen::Index>(values.size())) {
    std::copy(values.begin(), values.end(), values_.data());
  }
  explicit ParamSet(const std::vector<Scalar>& values)
      : values_(static_cast<Eigen::Index>(values.size())) {
    std::copy(values.begin(), values.end(), values_.data());
  }

  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  bool empty() const { return values_.size() == 0; }
  const Scalar& operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  Scalar& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }
  const Vector& values() const { return values_; }
  const Scalar* begin() const { return values_.data(); }
  const Scalar* end() const { return values_.data() + values_.size(); }

  /// The set with element j removed; the order of the rest is kept.
  ParamSet complement(std::size_t j) const {
    if (j >= size()) throw std::out_of_range("ParamSet::complement: index out of range");
    Vector out(values_.size() - 1);
    for (Eigen::Index i = 0, o = 0; i < values_.size(); ++i)
      if (static_cast<std::size_t>(i) != j) out[o++] = values_[i];
    return ParamSet(std::move(out));
  }

  /// The set with x appended at the end.
  ParamSet with(const Scalar& x) const {
    Vector out(values_.size() + 1);
    out.head(values_.size()) = values_;
    out[values_.size()] = x;
    return ParamSet(std::move(out));
  }

  /// The set with x prepended.
  ParamSet with_front(const Scalar& x) const {
    Vector out(values_.size() + 1);
    out[0] = x;
    out.tail(values_.size()) = values_;
    return ParamSet(std::move(out));
  }

  /// Leading `count` elements.
  ParamSet head(std::size_t count) const {
    return ParamSet(Vector(values_.head(static_cast<Eigen::Index>(count))));
  }

  /// The set with element j replaced by x.
  ParamSet replaced(std::size_t j, const Scalar& x) const {
    ParamSet out(*this);
    out[j] = x;
    return out;
  }

  bool pairwise_distinct(double tol) const {
    using std::abs;
    for (Eigen::Index i = 0; i < values_.size(); ++i)
      for (Eigen::Index k = i + 1; k < values_.size(); ++k)
        if (abs(values_[i] - values_[k]) < tol) return false;
    return true;
  }

  bool pairwise_distinct() const {
    using std::abs;
    for (Eigen::Index i = 0; i < values_.size(); ++i)
      for (Eigen::Index k = i + 1; k < values_.size(); ++k)
        if (coincide(values_[i], values_[k])) return false;
    return true;
  }

private:
  Vector values_;
};

using Params = ParamSet<cplx>;

/// The R-matrix constant c; must be nonzero.
template <typename Scalar = cplx>
class Coupling {
public:
  explicit Coupling(Scalar c) : c_(c) {
    using std::abs;
    if (abs(c_) == 0.0) throw std::invalid_argument("Coupling: c must be nonzero");
  }
  const Scalar& value() const { return c_; }
  operator const Scalar&() const { return c_; }

private:
  Scalar c_;
};

template <typename Scalar>
Scalar g(const Scalar& c, const Scalar& u, const Scalar& v) {
  using std::abs;
  if (coincide(u, v))
    throw PoleError("g(u,v): u and v coincide (|u-v| = " + std::to_string(abs(u - v)) + ")");
  return c / (u - v);
}

template <typename Scalar>
Scalar g(const Coupling<Scalar>& c, const Scalar& u, const Scalar& v) {
  return g(c.value(), u, v);
}

/// prod_i g(u, v_i); 1 for the empty set.
template <typename Scalar>
Scalar g_prod(const Scalar& c, const Scalar& u, const ParamSet<Scalar>& set) {
  Scalar out(1);
  for (const auto& v : set) out *= g(c, u, v);
  return out;
}

/// prod_i g(v_i, u); 1 for the empty set.
template <typename Scalar>
Scalar g_prod(const Scalar& c, const ParamSet<Scalar>& set, const Scalar& u) {
  Scalar out(1);
  for (const auto& v : set) out *= g(c, v, u);
  return out;
}

/// prod_{j>k} g(u_j, u_k).
template <typename Scalar>
Scalar delta(const Scalar& c, const ParamSet<Scalar>& set) {
  Scalar out(1);
  for (std::size_t j = 0; j < set.size(); ++j)
    for (std::size_t k = 0; k < j; ++k) out *= g(c, set[j], set[k]);
  return out;
}

/// prod_{j<k} g(u_j, u_k).
template <typename Scalar>
Scalar delta_prime(const Scalar& c, const ParamSet<Scalar>& set) {
  Scalar out(1);
  for (std::size_t j = 0; j < set.size(); ++j)
    for (std::size_t k = j + 1; k < set.size(); ++k) out *= g(c, set[j], set[k]);
  return out;
}

/// Coefficients sigma_0..sigma_n of prod_i (t + v_i), highest power of t first.
template <typename Scalar>
std::vector<Scalar> esp_all(const ParamSet<Scalar>& set) {
  std::vector<Scalar> coeffs{Scalar(1)};
  coeffs.reserve(set.size() + 1);
  for (const auto& v : set) {
    coeffs.push_back(Scalar(0));
    for (std::size_t p = coeffs.size() - 1; p > 0; --p) coeffs[p] += v * coeffs[p - 1];
  }
  return coeffs;
}

/// Elementary symmetric polynomial sigma_p; zero for p < 0 or p > n.
template <typename Scalar>
Scalar esp(int p, const ParamSet<Scalar>& set) {
  if (p < 0 || p > static_cast<int>(set.size())) return Scalar(0);
  return esp_all(set)[static_cast<std::size_t>(p)];
}

/// (sigma_{p-1}(set_j), sigma_p(set_j)) so that sigma_p(set) = v_j * first + second.
/// The first entry is also d sigma_p(set) / d v_j.
template <typename Scalar>
std::pair<Scalar, Scalar> esp_recurrence_split(int p, const ParamSet<Scalar>& set, std::size_t j) {
  if (j >= set.size()) throw std::out_of_range("esp_recurrence_split: index out of range");
  const auto rest = set.complement(j);
  return {esp(p - 1, rest), esp(p, rest)};
}

/// Dense polynomial in one variable; coeffs[k] multiplies z^k.
template <typename Scalar = cplx>
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) {}
  static Polynomial constant(Scalar a) { return Polynomial({a}); }
  /// z - root
  static Polynomial linear(Scalar root) { return Polynomial({-root, Scalar(1)}); }
  static Polynomial monomial(std::size_t degree, Scalar a = Scalar(1)) {
    std::vector<Scalar> c(degree + 1, Scalar(0));
    c[degree] = a;
    return Polynomial(std::move(c));
  }

  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  Scalar operator()(const Scalar& z) const {
    Scalar acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<Scalar> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = Scalar(static_cast<double>(k)) * coeffs_[k];
    return Polynomial(std::move(d));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.coeffs_.empty() || b.coeffs_.empty()) return Polynomial();
    std::vector<Scalar> out(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[i + k] += a.coeffs_[i] * b.coeffs_[k];
    return Polynomial(std::move(out));
  }
  friend Polynomial operator*(const Scalar& s, Polynomial p) {
    for (auto& x : p.coeffs_) x *= s;
    return p;
  }
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Scalar> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Scalar(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[i] += b.coeffs_[i];
    return Polynomial(std::move(out));
  }
  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }

  /// Integer power.
  Polynomial pow(std::size_t e) const {
    Polynomial out = constant(Scalar(1));
    for (std::size_t i = 0; i < e; ++i) out = out * *this;
    return out;
  }

private:
  std::vector<Scalar> coeffs_;
};

using Poly = Polynomial<cplx>;

/// |a-b| / max(|a|, |b|, floor)
inline double rel_err(cplx a, cplx b, double floor = 1e-30) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace bdl
