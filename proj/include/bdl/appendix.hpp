#pragma once

// Two summation identities over the Y-function class, each checked as an
// explicit sum against its closed form, plus the residue bookkeeping behind them.

#include "bdl/core.hpp"
#include "bdl/models.hpp"

#include <string>
#include <vector>

namespace bdl {

struct IdentityReport {
  std::string identity_id;
  cplx lhs{0.0, 0.0};
  cplx rhs{0.0, 0.0};
  double relative_error = 0.0;  // |lhs - rhs| over the largest of |lhs|, |rhs| and the individual summands
};

/// sum_l g(u_l, u-bar_l) Y(u_k | u-bar_l) g(u_l, w_j) / g(u_l, w-bar)  vs  Y(u_k | w-bar_j).
/// |ubar| = |wbar| = n + 1; j, k are 0-based.
IdentityReport identity_A(const YModel& model, const Params& ubar, const Params& wbar, std::size_t j, std::size_t k);

/// sum_l g(u_j, v_l) Y(u_j | {u_j, v-bar_l}) g(u_k, v_l) g(v-bar_l, v_l) / g(u-bar, v_l)
///   vs  delta_jk Lambda(u_j|v) / g(u_j, u-bar_j) + c dY(t|u-bar)/du_k at t = u_j.
/// Only the first |vbar| entries of ubar are used.
IdentityReport identity_B(const YModel& model, const Params& ubar, const Params& vbar, std::size_t j, std::size_t k);

/// Auxiliary sums in t (resp. w) and their closed forms.
IdentityReport g_sum_A(cplx c, const Params& ubar, const Params& wbar, std::size_t j, cplx t);
IdentityReport g_sum_B(cplx c, const Params& ubar, const Params& vbar, std::size_t j, std::size_t k, cplx w);

/// scale * prod(z - zeros) / prod(z - poles), after cancelling exactly equal
/// zero/pole pairs. Remaining poles must be simple.
struct RationalProduct {
  cplx scale{1.0, 0.0};
  std::vector<cplx> zeros;
  std::vector<cplx> poles;

  RationalProduct(cplx scale, std::vector<cplx> zeros, std::vector<cplx> poles);
  cplx operator()(cplx z) const;
  std::vector<cplx> residues() const;
  /// |sum of residues| / max |residue|; zero when the integrand decays like z^-2.
  double residue_sum_ratio() const;
};

/// Integrand whose residues produce the first auxiliary sum.
RationalProduct integrand_A(const Params& ubar, const Params& wbar, std::size_t j, cplx t);
/// Integrand whose residues produce the second auxiliary sum.
RationalProduct integrand_B(cplx c, const Params& ubar, const Params& vbar, std::size_t j, std::size_t k, cplx w);

}  // namespace bdl
