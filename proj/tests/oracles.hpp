#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's linear algebra.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "fixpointrl/linalg.hpp"
#include "fixpointrl/random_stream.hpp"

namespace fixpointrl::oracle {

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Single-site operator on qubit q of an N-qubit register (qubit 0 leftmost factor).
inline ComplexMatrix site(const ComplexMatrix& op, int q, int n) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, i == q ? op : ComplexMatrix::Identity(2, 2));
  return out;
}

/// TFIM summed term by term from Kronecker products.
inline ComplexMatrix tfim(int n, double j, double h, double k) {
  const Index d = Index{1} << n;
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int q = 0; q + 1 < n; ++q) {
    out -= j * site(pauli_z(), q, n) * site(pauli_z(), q + 1, n);
    out -= k * site(pauli_x(), q, n) * site(pauli_z(), q + 1, n);
  }
  for (int q = 0; q < n; ++q) out -= h * site(pauli_x(), q, n);
  return out;
}

/// Pairing Hamiltonian from Pauli strings:
/// sum_j (j - g/2)(I - Z_j) - (g/2) sum_{j<k} (X_j X_k + Y_j Y_k).
inline ComplexMatrix pairing(int n, double g) {
  const Index d = Index{1} << n;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < n; ++j) out += (j - g / 2.0) * (id - site(pauli_z(), j, n));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      out -= (g / 2.0) * (site(pauli_x(), j, n) * site(pauli_x(), k, n) +
                          site(pauli_y(), j, n) * site(pauli_y(), k, n));
  return out;
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
inline ComplexMatrix expm(const ComplexMatrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (norm / std::ldexp(1.0, s) > 0.25) ++s;
  const ComplexMatrix x = a / std::ldexp(1.0, s);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int n = 1; n <= 30; ++n) {
    term = term * x / static_cast<double>(n);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// Random Hermitian matrix (entries uniform, independent of the library's ensemble).
inline ComplexMatrix random_hermitian(Index d, RandomStream& rng) {
  ComplexMatrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return (a + a.adjoint()) / 2.0;
}

/// Random unitary via Gram-Schmidt on a random complex matrix.
inline ComplexMatrix random_unitary(Index d, RandomStream& rng) {
  ComplexMatrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
  for (Index c = 0; c < d; ++c) {
    for (Index p = 0; p < c; ++p) {
      const Complex proj = a.col(p).dot(a.col(c));
      a.col(c) -= proj * a.col(p);
    }
    a.col(c) /= a.col(c).norm();
  }
  return a;
}

inline StateVector random_state(Index d, RandomStream& rng) {
  StateVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v / v.norm();
}

}  // namespace fixpointrl::oracle
