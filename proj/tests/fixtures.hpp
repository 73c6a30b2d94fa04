#pragma once

#include "bdl/core.hpp"
#include "bdl/models.hpp"
#include "bdl/oracle.hpp"

#include <random>
#include <vector>

namespace fx {

using bdl::cplx;
using bdl::Params;

inline const cplx kC{0.9, 0.4};

inline std::vector<cplx> thetas(std::size_t n) {
  static const std::vector<cplx> pool{{0.13, 0.05}, {-0.41, 0.22}, {0.57, -0.31}, {-0.08, -0.44}, {0.35, 0.48}};
  return {pool.begin(), pool.begin() + static_cast<long>(n)};
}

inline bdl::ChainSpec chain(std::size_t sites, cplx c = kC) { return bdl::ChainSpec::spin_half(c, thetas(sites)); }

inline bdl::TwistSpec twist() {
  return bdl::TwistSpec::from_rho1({1.3, 0.2}, {0.7, -0.4}, {0.5, 0.3}, {0.8, -0.2}, {2.1, 0.5});
}

inline cplx draw(std::mt19937_64& rng, double radius = 1.5) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

/// n parameters drawn from the square of half-width `radius`, pairwise separated.
inline Params draw_set(std::mt19937_64& rng, std::size_t n, double radius = 1.5, const Params& avoid = {}) {
  std::vector<cplx> out;
  while (out.size() < n) {
    const cplx x = draw(rng, radius);
    bool ok = true;
    for (const auto& y : out) ok = ok && std::abs(x - y) > 0.05;
    for (const auto& y : avoid) ok = ok && std::abs(x - y) > 0.05;
    if (ok) out.push_back(x);
  }
  return Params(out);
}

inline std::vector<Params> roots(const bdl::SpinChainOracle& oracle, const bdl::YModel& model, std::size_t n,
                                 std::uint64_t seed = 7) {
  bdl::RootSolverOptions opt;
  opt.seed = seed;
  opt.radius = bdl::default_seed_radius(oracle.spec());
  return bdl::physical_roots(oracle, model, n, opt);
}

}  // namespace fx
