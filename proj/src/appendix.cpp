#include "bdl/appendix.hpp"

#include <algorithm>
#include <stdexcept>

namespace bdl {

namespace {

// terms: largest summand on either side, so exact cancellations are not scored as noise/noise
IdentityReport report(std::string id, cplx lhs, cplx rhs, double terms = 0.0) {
  return {std::move(id), lhs, rhs, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), terms, 1e-30})};
}

void check_index(std::size_t i, std::size_t size, const char* who) {
  if (i >= size) throw std::out_of_range(std::string(who) + ": index out of range");
}

}  // namespace

IdentityReport identity_A(const YModel& model, const Params& ubar, const Params& wbar, std::size_t j, std::size_t k) {
  if (ubar.size() != wbar.size()) throw std::invalid_argument("identity_A: |ubar| must equal |wbar|");
  check_index(j, ubar.size(), "identity_A");
  check_index(k, ubar.size(), "identity_A");
  const cplx c = model.c();
  cplx lhs = 0.0;
  double terms = 0.0;
  for (std::size_t l = 0; l < ubar.size(); ++l) {
    const cplx ul = ubar[l];
    const Params rest = ubar.complement(l);
    const cplx term = g_prod(c, ul, rest) * y_eval(model, ubar[k], rest) * g(c, ul, wbar[j]) / g_prod(c, ul, wbar);
    terms = std::max(terms, std::abs(term));
    lhs += term;
  }
  return report("A", lhs, y_eval(model, ubar[k], wbar.complement(j)), terms);
}

IdentityReport identity_B(const YModel& model, const Params& ubar, const Params& vbar, std::size_t j, std::size_t k) {
  const auto s = vbar.size();
  if (ubar.size() < s) throw std::invalid_argument("identity_B: |ubar| must be at least |vbar|");
  check_index(j, s, "identity_B");
  check_index(k, s, "identity_B");
  const cplx c = model.c();
  const Params u = ubar.head(s);
  const cplx uj = u[j];
  cplx lhs = 0.0;
  double terms = 0.0;
  for (std::size_t l = 0; l < s; ++l) {
    const cplx vl = vbar[l];
    const Params rest = vbar.complement(l);
    const Params set = rest.with_front(uj);
    const cplx weight = g(c, uj, vl) * g(c, u[k], vl) * g_prod(c, rest, vl) / g_prod(c, u, vl);
    terms = std::max(terms, std::abs(weight) * y_magnitude(model, uj, set));
    lhs += weight * y_eval(model, uj, set);
  }
  cplx rhs = c * y_dv(model, uj, u, k);
  terms = std::max(terms, std::abs(rhs));
  if (j == k) {
    const cplx diag = lambda_eval(model, uj, vbar) / g_prod(c, uj, u.complement(j));
    terms = std::max(terms, std::abs(diag));
    rhs += diag;
  }
  return report("B", lhs, rhs, terms);
}

IdentityReport g_sum_A(cplx c, const Params& ubar, const Params& wbar, std::size_t j, cplx t) {
  if (ubar.size() != wbar.size()) throw std::invalid_argument("g_sum_A: |ubar| must equal |wbar|");
  check_index(j, wbar.size(), "g_sum_A");
  cplx lhs = 0.0;
  for (std::size_t l = 0; l < ubar.size(); ++l) {
    const cplx ul = ubar[l];
    lhs += g(c, ul, wbar[j]) / (t + ul) * g_prod(c, ul, ubar.complement(l)) / g_prod(c, ul, wbar);
  }
  cplx rhs = 1.0 / (t + wbar[j]);
  for (std::size_t m = 0; m < ubar.size(); ++m) rhs *= (t + wbar[m]) / (t + ubar[m]);
  return report("G-A", lhs, rhs);
}

IdentityReport g_sum_B(cplx c, const Params& ubar, const Params& vbar, std::size_t j, std::size_t k, cplx w) {
  const auto s = vbar.size();
  if (ubar.size() < s) throw std::invalid_argument("g_sum_B: |ubar| must be at least |vbar|");
  check_index(j, s, "g_sum_B");
  check_index(k, s, "g_sum_B");
  const Params u = ubar.head(s);
  cplx lhs = 0.0;
  for (std::size_t l = 0; l < s; ++l) {
    const cplx vl = vbar[l];
    lhs += g(c, u[j], vl) * g(c, u[k], vl) * g_prod(c, vbar.complement(l), vl) / g_prod(c, u, vl) * (w + u[j]) /
           (w + vl);
  }
  cplx rhs = c / (w + u[k]);
  for (std::size_t m = 0; m < s; ++m) rhs *= (w + u[m]) / (w + vbar[m]);
  if (j == k) rhs += g_prod(c, u[j], vbar) / g_prod(c, u[j], u.complement(j));
  return report("G-B", lhs, rhs);
}

RationalProduct::RationalProduct(cplx scale_, std::vector<cplx> zeros_, std::vector<cplx> poles_)
    : scale(scale_) {
  for (const auto& z : zeros_) {
    auto hit = std::find(poles_.begin(), poles_.end(), z);
    if (hit != poles_.end())
      poles_.erase(hit);
    else
      zeros.push_back(z);
  }
  poles = std::move(poles_);
  for (std::size_t a = 0; a < poles.size(); ++a)
    for (std::size_t b = a + 1; b < poles.size(); ++b)
      if (coincide(poles[a], poles[b])) throw PoleError("RationalProduct: repeated pole");
}

cplx RationalProduct::operator()(cplx z) const {
  cplx out = scale;
  for (const auto& x : zeros) out *= z - x;
  for (const auto& p : poles) out /= z - p;
  return out;
}

std::vector<cplx> RationalProduct::residues() const {
  std::vector<cplx> out;
  for (std::size_t a = 0; a < poles.size(); ++a) {
    cplx r = scale;
    for (const auto& x : zeros) r *= poles[a] - x;
    for (std::size_t b = 0; b < poles.size(); ++b)
      if (b != a) r /= poles[a] - poles[b];
    out.push_back(r);
  }
  return out;
}

double RationalProduct::residue_sum_ratio() const {
  const auto res = residues();
  cplx sum = 0.0;
  double biggest = 0.0;
  for (const auto& r : res) {
    sum += r;
    biggest = std::max(biggest, std::abs(r));
  }
  return std::abs(sum) / std::max(biggest, 1e-30);
}

RationalProduct integrand_A(const Params& ubar, const Params& wbar, std::size_t j, cplx t) {
  check_index(j, wbar.size(), "integrand_A");
  std::vector<cplx> zeros(wbar.begin(), wbar.end());
  std::vector<cplx> poles{wbar[j], -t};
  poles.insert(poles.end(), ubar.begin(), ubar.end());
  return RationalProduct(1.0, std::move(zeros), std::move(poles));
}

RationalProduct integrand_B(cplx c, const Params& ubar, const Params& vbar, std::size_t j, std::size_t k, cplx w) {
  const auto s = vbar.size();
  check_index(j, s, "integrand_B");
  check_index(k, s, "integrand_B");
  const Params u = ubar.head(s);
  std::vector<cplx> zeros(u.begin(), u.end());
  std::vector<cplx> poles{u[j], u[k], -w};
  poles.insert(poles.end(), vbar.begin(), vbar.end());
  return RationalProduct(c * (w + u[j]), std::move(zeros), std::move(poles));
}

}  // namespace bdl
