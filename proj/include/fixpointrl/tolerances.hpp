#pragma once

// Numerical tolerances shared by every module. Keep all of them here.
namespace fixpointrl::tol {

inline constexpr double kHermitian = 1e-12;       // max|H - H^dagger|
inline constexpr double kUnitary = 1e-10;         // max|U^dagger U - I|
inline constexpr double kRotationUnitary = 1e-12; // generated two-level rotations
inline constexpr double kNormalized = 1e-10;      // |sum |a|^2 - 1|
inline constexpr double kEigenResidual = 1e-8;    // |H v - E v|
inline constexpr double kOrthonormal = 1e-10;
inline constexpr double kRescaleGap = 1e-12;      // E_max - E_min below this is degenerate
inline constexpr double kRescaleEndpoint = 1e-10;
inline constexpr double kSectorCoupling = 1e-12;  // off-block element allowed in sector_restrict
inline constexpr double kVarianceClamp = 1e-10;   // negative variance radicand clamp window
inline constexpr double kDegeneracy = 1e-8;       // default eigenvalue clustering on rescaled spectra
inline constexpr double kDrift = 1e-10;           // re-orthonormalize D beyond this

}  // namespace fixpointrl::tol
