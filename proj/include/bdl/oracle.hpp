#pragma once

// Brute-force ground truth on small chains: dense monodromy and transfer
// matrices, explicit (dual) Bethe vectors, bilinear scalar products and a
// multi-start Newton solver for the Bethe equations.

#include "bdl/core.hpp"
#include "bdl/models.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace bdl {

using Operator = Eigen::MatrixXcd;

class DimensionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Tensor product of site spaces; site 1 is the slowest index and the basis of
/// each site is ordered m = s, s-1, ..., -s so that the reference state is index 0.
class HilbertSpace {
public:
  explicit HilbertSpace(const std::vector<double>& spins);

  const std::vector<Eigen::Index>& site_dims() const { return site_dims_; }
  Eigen::Index total_dim() const { return total_dim_; }

  /// Dimension cap: 4096 unless BDL_MAX_DIM is set.
  static Eigen::Index max_dim();

  /// Identity on every site except `site`, where `op` acts.
  Operator embed(const Operator& op, std::size_t site) const;

private:
  std::vector<Eigen::Index> site_dims_;
  Eigen::Index total_dim_ = 1;
};

struct SpinMatrices {
  Operator sz, splus, sminus;
};
SpinMatrices spin_matrices(double s);

/// 2x2 auxiliary-space matrix whose entries are operators on the chain.
struct OperatorBlock {
  Operator a, b, c, d;

  friend OperatorBlock operator*(const OperatorBlock& x, const OperatorBlock& y);
  /// Constant 2x2 matrix times the block, and block times a constant matrix.
  friend OperatorBlock operator*(const Eigen::Matrix2cd& k, const OperatorBlock& t);
  friend OperatorBlock operator*(const OperatorBlock& t, const Eigen::Matrix2cd& k);
  Operator trace() const { return a + d; }
};

class SpinChainOracle {
public:
  explicit SpinChainOracle(ChainSpec spec, std::optional<TwistSpec> twist = std::nullopt);

  const ChainSpec& spec() const { return spec_; }
  const std::optional<TwistSpec>& twist() const { return twist_; }
  bool twisted() const { return twist_.has_value(); }
  const HilbertSpace& space() const { return space_; }

  /// [(u - theta + c/2) + c Sz, c S-; c S+, (u - theta + c/2) - c Sz] / c on one site.
  OperatorBlock lax(std::size_t site, cplx u) const;
  /// T(u) = L_N(u) ... L_1(u)
  OperatorBlock monodromy(cplx u) const;
  /// A T(u) B with the factorization matrices of the twist.
  OperatorBlock modified_monodromy(cplx u) const;

  /// A(u) + D(u) without twist, tr(K T(u)) with twist.
  Operator transfer(cplx u) const;
  /// tr(D A T(u) B); equals transfer(u) for a twisted chain.
  Operator transfer_via_modified(cplx u) const;

  /// B(u) without twist, nu_12(u) with twist.
  Operator creation(cplx u) const;
  /// C(u) without twist, nu_21(u) with twist.
  Operator annihilation(cplx u) const;

  Eigen::VectorXcd vacuum() const;
  Eigen::RowVectorXcd dual_vacuum() const;
  /// prod_j creation(u_j) |0>
  Eigen::VectorXcd bethe_vector(const Params& u) const;
  /// <0| prod_j annihilation(v_j)
  Eigen::RowVectorXcd dual_bethe_vector(const Params& v) const;

private:
  ChainSpec spec_;
  std::optional<TwistSpec> twist_;
  HilbertSpace space_;
  std::vector<SpinMatrices> site_ops_;  // embedded
};

/// Bilinear pairing sum_i dual_i state_i (no conjugation).
cplx direct_scalar_product(const Eigen::RowVectorXcd& dual, const Eigen::VectorXcd& state);

/// ||[X, Y]|| / (||X|| ||Y||)
double relative_commutator(const Operator& x, const Operator& y);

struct RootSolverOptions {
  std::size_t seeds = 200;
  /// Seeds are drawn uniformly from the disc of this radius.
  double radius = 3.0;
  double residual_tol = 1e-11;
  std::size_t max_iterations = 100;
  double min_separation = 1e-6;
  double max_modulus = 1e4;
  std::uint64_t seed = 0;
};

/// 3 max|theta_i| + 3|c|
double default_seed_radius(const ChainSpec& spec);

/// Damped Newton from random seeds on Y(v_j|v) = 0, j = 1..n. Returns
/// deduplicated converged sets with distinct, finite entries (sorted).
std::vector<Params> solve_bethe_roots(const YModel& model, std::size_t n, const RootSolverOptions& options);

struct RootCheck {
  Params roots;
  double bethe_residual = 0.0;
  /// ||B(v)|0>|| / prod_j ||B(v_j)||
  double vector_ratio = 0.0;
  /// max over probe points of ||T(z) psi - Lambda(z|v) psi|| / (||psi|| max(1,|Lambda|))
  double eigen_residual = 0.0;
  /// max over probe points of min_i |eig_i(T(z)) - Lambda(z|v)| / max(1,|Lambda|)
  double spectrum_distance = 0.0;
  bool physical = false;
};

/// Cross-validates a root set against the oracle: nonzero Bethe vector, eigenvector
/// of the transfer matrix, and eigenvalue present in the dense spectrum.
RootCheck check_roots(const SpinChainOracle& oracle, const YModel& model, const Params& roots,
                      const std::vector<cplx>& probes);

/// Physical root sets of cardinality n (solver + check_roots).
std::vector<Params> physical_roots(const SpinChainOracle& oracle, const YModel& model, std::size_t n,
                                   const RootSolverOptions& options);

/// Eigenvalues of transfer(z) not reproduced by Lambda(z|v) for any of the given sets.
std::size_t unmatched_eigenvalues(const SpinChainOracle& oracle, const YModel& model,
                                  const std::vector<Params>& root_sets, cplx z, double tol = 1e-8);

}  // namespace bdl
