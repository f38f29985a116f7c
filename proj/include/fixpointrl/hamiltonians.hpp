#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fixpointrl/linalg.hpp"
#include "fixpointrl/random_stream.hpp"

namespace fixpointrl::models {

// Bit ordering: qubit q is bit (N - 1 - q) of a basis index, i.e. the binary
// string of the index read left to right lists qubits 0, 1, ..., N-1.

enum class ModelKind { kRandom, kTfim, kPairing };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

struct ModelParams {
  int qubits = 0;           // N (tfim, pairing); log2(d) for random when d is a power of two
  Index dim = 0;            // d of the full space
  double j_over_h = 0.0;    // tfim
  double k_over_h = 0.0;    // tfim
  double g_over_de = 0.0;   // pairing
  std::uint64_t seed = 0;   // random
};

/// Basis states of one Hamming-weight sector.
struct SectorMap {
  int qubits = 0;
  int hamming_weight = 0;
  std::vector<Index> basis_indices;  // strictly increasing
  RealVector raw_energies;           // sector spectrum before rescaling, ascending

  Index dim() const { return static_cast<Index>(basis_indices.size()); }
};

struct HamiltonianModel {
  ModelKind kind = ModelKind::kRandom;
  ModelParams params;
  ComplexMatrix raw;
  ComplexMatrix rescaled;
  Spectrum spectrum;  // of `rescaled`
  double e_min = 0.0;
  double e_max = 0.0;
  std::optional<SectorMap> sector;

  Index dim() const { return rescaled.rows(); }
  /// Map a rescaled energy back to raw units.
  double to_raw_energy(double rescaled_energy) const {
    return e_min + rescaled_energy * (e_max - e_min);
  }
};

struct Rescaled {
  ComplexMatrix h_tilde;
  double e_min = 0.0;
  double e_max = 0.0;
};

/// (H - E_min I) / (E_max - E_min). Throws DegenerateSpectrumError when
/// E_max - E_min < 1e-12.
Rescaled rescale(const ComplexMatrix& h_raw);

/// Raw Hamiltonians (no rescaling).
ComplexMatrix random_hermitian(Index d, RandomStream& rng);
ComplexMatrix tfim_matrix(int qubits, double j_over_h, double k_over_h);
ComplexMatrix pairing_matrix(int levels, double g_over_de);

HamiltonianModel build_random(Index d, RandomStream& rng);
HamiltonianModel build_tfim(int qubits, double j_over_h, double k_over_h);
HamiltonianModel build_pairing(int levels, double g_over_de);

/// Assemble a model around an arbitrary raw Hermitian matrix.
HamiltonianModel make_model(ModelKind kind, const ModelParams& params,
                            ComplexMatrix raw);

int hamming_weight(Index index);
std::uint64_t binomial(int n, int k);
SectorMap sector_map(int qubits, int weight);

/// Restrict a weight-conserving model to one Hamming-weight sector, rescaled
/// within the sector. A dimension-1 sector is returned unscaled: its spectrum
/// is {0} and e_min = e_max = the single raw energy.
HamiltonianModel sector_restrict(const HamiltonianModel& model, int weight);

/// Versioned text serialization of the raw matrix.
void write_model(std::ostream& out, const HamiltonianModel& model);
HamiltonianModel read_model(std::istream& in);

}  // namespace fixpointrl::models
