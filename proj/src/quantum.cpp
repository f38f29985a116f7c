#include "fixpointrl/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "fixpointrl/errors.hpp"
#include "fixpointrl/tolerances.hpp"

namespace fixpointrl {

double hermiticity_residual(const ComplexMatrix& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const ComplexMatrix& u) {
  const ComplexMatrix gram = u.adjoint() * u;
  return (gram - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

namespace quantum {
namespace {

// Connected components of the nonzero pattern; each component sorted ascending,
// components ordered by their smallest member.
std::vector<std::vector<Index>> coupled_components(const ComplexMatrix& h) {
  const Index d = h.rows();
  std::vector<Index> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      if (h(i, j) != Complex(0.0, 0.0) || h(j, i) != Complex(0.0, 0.0)) {
        const Index a = find(i);
        const Index b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Index>> groups;
  std::vector<Index> slot(static_cast<std::size_t>(d), -1);
  for (Index i = 0; i < d; ++i) {
    const Index root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

}  // namespace

Spectrum eig_hermitian(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() < 1) {
    std::ostringstream msg;
    msg << "eig_hermitian: matrix must be square and non-empty (got " << h.rows()
        << "x" << h.cols() << ")";
    throw PreconditionError(msg.str());
  }
  const double residual = hermiticity_residual(h);
  if (residual >= tol::kHermitian) {
    std::ostringstream msg;
    msg << "eig_hermitian: matrix is not hermitian (max|H - H^dagger| = "
        << residual << ")";
    throw PreconditionError(msg.str());
  }

  const Index d = h.rows();
  std::vector<double> energies;
  energies.reserve(static_cast<std::size_t>(d));
  ComplexMatrix vectors = ComplexMatrix::Zero(d, d);
  Index column = 0;

  for (const auto& group : coupled_components(h)) {
    const auto n = static_cast<Index>(group.size());
    if (n == 1) {
      energies.push_back(h(group[0], group[0]).real());
      vectors(group[0], column++) = Complex(1.0, 0.0);
      continue;
    }
    ComplexMatrix block(n, n);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) block(a, b) = h(group[a], group[b]);
    }
    // Symmetrize away the sub-tolerance anti-hermitian part.
    block = (0.5 * (block + block.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(block);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("eig_hermitian: eigensolver did not converge");
    }
    for (Index a = 0; a < n; ++a) {
      energies.push_back(solver.eigenvalues()(a));
      for (Index b = 0; b < n; ++b) vectors(group[b], column) = solver.eigenvectors()(b, a);
      ++column;
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return energies[a] < energies[b]; });

  Spectrum spec;
  spec.energies.resize(d);
  spec.eigenvectors.resize(d, d);
  for (Index a = 0; a < d; ++a) {
    spec.energies(a) = energies[order[a]];
    spec.eigenvectors.col(a) = vectors.col(order[a]);
  }
  return spec;
}

ComplexMatrix evolve_unitary(const Spectrum& spec, double tau) {
  if (!std::isfinite(tau)) throw PreconditionError("evolve_unitary: tau must be finite");
  Eigen::VectorXcd phases(spec.dim());
  for (Index a = 0; a < spec.dim(); ++a) {
    const double angle = -tau * spec.energies(a);
    phases(a) = Complex(std::cos(angle), std::sin(angle));
  }
  return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

Eigen::Matrix2cd rotation_block(const RotationAngles& angles) {
  using namespace std::complex_literals;
  const double ca = std::cos(angles.alpha / 2), sa = std::sin(angles.alpha / 2);
  const double cb = std::cos(angles.beta / 2), sb = std::sin(angles.beta / 2);
  const Complex zj = std::polar(1.0, -angles.gamma / 2);
  const Complex zl = std::polar(1.0, angles.gamma / 2);

  Eigen::Matrix2cd rx;
  rx << ca, -1i * sa, -1i * sa, ca;
  Eigen::Matrix2cd ry;
  ry << cb, -sb, sb, cb;
  Eigen::Matrix2cd rz;
  rz << zj, 0.0, 0.0, zl;
  return ry * rz * rx;
}

namespace {

void check_pair(Index d, Index j, Index l) {
  if (j < 0 || l >= d || j >= l) {
    std::ostringstream msg;
    msg << "two-level rotation requires 0 <= j < l < d (got j=" << j << ", l=" << l
        << ", d=" << d << ")";
    throw IndexError(msg.str());
  }
}

}  // namespace

ComplexMatrix two_level_rotation(Index d, Index j, Index l,
                                 const RotationAngles& angles) {
  check_pair(d, j, l);
  ComplexMatrix r = ComplexMatrix::Identity(d, d);
  if (angles.is_zero()) return r;
  const Eigen::Matrix2cd b = rotation_block(angles);
  r(j, j) = b(0, 0);
  r(j, l) = b(0, 1);
  r(l, j) = b(1, 0);
  r(l, l) = b(1, 1);
  return r;
}

void apply_rotation_right(ComplexMatrix& m, Index j, Index l,
                          const RotationAngles& angles) {
  check_pair(m.cols(), j, l);
  if (angles.is_zero()) return;
  const Eigen::Matrix2cd b = rotation_block(angles);
  for (Index row = 0; row < m.rows(); ++row) {
    const Complex mj = m(row, j);
    const Complex ml = m(row, l);
    m(row, j) = mj * b(0, 0) + ml * b(1, 0);
    m(row, l) = mj * b(0, 1) + ml * b(1, 1);
  }
}

void require_normalized(const Eigen::Ref<const StateVector>& state,
                        const char* where) {
  const double norm2 = state.squaredNorm();
  if (!(std::abs(norm2 - 1.0) <= tol::kNormalized)) {
    std::ostringstream msg;
    msg << where << ": state is not normalized (sum |a|^2 = " << norm2 << ")";
    throw PreconditionError(msg.str());
  }
}

Index measure_computational(const Eigen::Ref<const StateVector>& state,
                            RandomStream& rng) {
  require_normalized(state, "measure_computational");
  const double target = rng.uniform01() * state.squaredNorm();
  double cumulative = 0.0;
  Index last_nonzero = 0;
  for (Index m = 0; m < state.size(); ++m) {
    const double p = std::norm(state(m));
    if (p == 0.0) continue;
    cumulative += p;
    last_nonzero = m;
    if (cumulative > target) return m;
  }
  return last_nonzero;
}

double survival_probability(const Spectrum& spec, const StateVector& psi,
                            double tau) {
  if (psi.size() != spec.dim()) {
    throw PreconditionError("survival_probability: dimension mismatch");
  }
  require_normalized(psi, "survival_probability");
  const RealVector weights = (spec.eigenvectors.adjoint() * psi).cwiseAbs2();
  double loss = 0.0;
  for (Index a = 0; a + 1 < spec.dim(); ++a) {
    for (Index b = a + 1; b < spec.dim(); ++b) {
      const double s = std::sin((spec.energies(a) - spec.energies(b)) * tau / 2);
      loss += weights(a) * weights(b) * s * s;
    }
  }
  return std::max(0.0, 1.0 - 4.0 * loss);
}

}  // namespace quantum
}  // namespace fixpointrl
