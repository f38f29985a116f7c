#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace fixpointrl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Eigen-decomposition of a Hermitian matrix.
/// energies ascending; eigenvectors.col(a) belongs to energies(a).
struct Spectrum {
  RealVector energies;
  ComplexMatrix eigenvectors;

  Index dim() const { return energies.size(); }
};

/// max |H - H^dagger| elementwise.
double hermiticity_residual(const ComplexMatrix& h);
/// max |U^dagger U - I| elementwise.
double unitarity_residual(const ComplexMatrix& u);
/// max |A - B| elementwise.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace fixpointrl
