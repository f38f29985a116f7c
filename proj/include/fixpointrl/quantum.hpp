#pragma once

#include <cstddef>

#include "fixpointrl/linalg.hpp"
#include "fixpointrl/random_stream.hpp"

namespace fixpointrl::quantum {

/// Hermitian eigendecomposition.
///
/// The matrix is first split into the connected components of its nonzero
/// pattern and each component is diagonalized on its own, so eigenvectors of
/// a block-diagonal matrix carry exact zeros outside their block (and a
/// decoupled basis state is returned as an exact unit vector). Eigenvalues
/// are sorted ascending; order inside a degenerate cluster is unspecified.
Spectrum eig_hermitian(const ComplexMatrix& h);

/// U(tau) = V diag(exp(-i tau E)) V^dagger in dimensionless units.
ComplexMatrix evolve_unitary(const Spectrum& spec, double tau);

/// Angles of one two-level rotation exp(-i b Y/2) exp(-i g Z/2) exp(-i a X/2).
struct RotationAngles {
  double alpha = 0.0;  // X generator
  double beta = 0.0;   // Y generator
  double gamma = 0.0;  // Z generator

  bool is_zero() const { return alpha == 0.0 && beta == 0.0 && gamma == 0.0; }
};

/// 2x2 block of the rotation in the ordered basis (|j>, |l>).
Eigen::Matrix2cd rotation_block(const RotationAngles& angles);

/// Full d x d rotation acting on span{|j>, |l>}, identity elsewhere.
/// Throws IndexError unless 0 <= j < l < d.
ComplexMatrix two_level_rotation(Index d, Index j, Index l,
                                 const RotationAngles& angles);

/// m <- m * R^{(j,l)} in O(d), touching only columns j and l.
/// All-zero angles leave m bitwise unchanged.
void apply_rotation_right(ComplexMatrix& m, Index j, Index l,
                          const RotationAngles& angles);

/// Single-shot projective measurement in the computational basis.
/// Consumes exactly one draw. Outcomes of zero probability are never returned.
Index measure_computational(const Eigen::Ref<const StateVector>& state,
                            RandomStream& rng);

/// Survival probability |<psi|U(tau)|psi>|^2 evaluated through the pairwise
/// spectral form 1 - 4 sum_{a<b} |c_a|^2 |c_b|^2 sin^2((E_a - E_b) tau / 2).
double survival_probability(const Spectrum& spec, const StateVector& psi,
                            double tau);

/// Check that a state is normalized; throws PreconditionError otherwise.
void require_normalized(const Eigen::Ref<const StateVector>& state,
                        const char* where);

}  // namespace fixpointrl::quantum
