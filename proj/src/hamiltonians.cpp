#include "fixpointrl/hamiltonians.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "fixpointrl/errors.hpp"
#include "fixpointrl/quantum.hpp"
#include "fixpointrl/tolerances.hpp"

namespace fixpointrl::models {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kRandom: return "random";
    case ModelKind::kTfim: return "tfim";
    case ModelKind::kPairing: return "pairing";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "random") return ModelKind::kRandom;
  if (text == "tfim") return ModelKind::kTfim;
  if (text == "pairing") return ModelKind::kPairing;
  throw ConfigError("unknown model '" + text + "' (expected random, tfim or pairing)");
}

Rescaled rescale(const ComplexMatrix& h_raw) {
  const Spectrum spec = quantum::eig_hermitian(h_raw);
  const double e_min = spec.energies(0);
  const double e_max = spec.energies(spec.dim() - 1);
  if (e_max - e_min < tol::kRescaleGap) {
    std::ostringstream msg;
    msg << "rescale: spectral width " << (e_max - e_min)
        << " is below 1e-12, rescaling undefined";
    throw DegenerateSpectrumError(msg.str());
  }
  const Index d = h_raw.rows();
  Rescaled out;
  out.e_min = e_min;
  out.e_max = e_max;
  out.h_tilde = (h_raw - e_min * ComplexMatrix::Identity(d, d)) / (e_max - e_min);
  return out;
}

namespace {

int require_qubits(int qubits, const char* what) {
  if (qubits < 2) {
    std::ostringstream msg;
    msg << what << ": need at least 2 qubits (got " << qubits << ")";
    throw ParameterError(msg.str());
  }
  if (qubits > 16) {
    std::ostringstream msg;
    msg << what << ": " << qubits << " qubits is beyond dense simulation range";
    throw ParameterError(msg.str());
  }
  return qubits;
}

// Bit value of qubit q in basis index s.
inline int qubit_bit(Index s, int q, int qubits) {
  return static_cast<int>((s >> (qubits - 1 - q)) & 1);
}

inline Index flip_qubit(Index s, int q, int qubits) {
  return s ^ (Index{1} << (qubits - 1 - q));
}

int qubits_of_dim(Index d) {
  return std::has_single_bit(static_cast<std::uint64_t>(d))
             ? std::countr_zero(static_cast<std::uint64_t>(d))
             : 0;
}

}  // namespace

ComplexMatrix random_hermitian(Index d, RandomStream& rng) {
  if (d < 2) {
    throw ParameterError("build_random: dimension must be at least 2");
  }
  // Entries of A: real and imaginary parts independent N(0, 1/2).
  const double scale = std::sqrt(0.5);
  ComplexMatrix a(d, d);
  for (Index row = 0; row < d; ++row) {
    for (Index col = 0; col < d; ++col) {
      const double re = scale * rng.normal();
      const double im = scale * rng.normal();
      a(row, col) = Complex(re, im);
    }
  }
  return 0.5 * (a + a.adjoint());
}

ComplexMatrix tfim_matrix(int qubits, double j_over_h, double k_over_h) {
  require_qubits(qubits, "build_tfim");
  const Index d = Index{1} << qubits;
  const double h = 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Index s = 0; s < d; ++s) {
    // -J sum Z_q Z_{q+1}
    double diag = 0.0;
    for (int q = 0; q + 1 < qubits; ++q) {
      const int zq = 1 - 2 * qubit_bit(s, q, qubits);
      const int zn = 1 - 2 * qubit_bit(s, q + 1, qubits);
      diag -= j_over_h * zq * zn;
    }
    m(s, s) += diag;
    // -h sum X_q
    for (int q = 0; q < qubits; ++q) m(flip_qubit(s, q, qubits), s) -= h;
    // -K sum X_q Z_{q+1}
    for (int q = 0; q + 1 < qubits; ++q) {
      const int zn = 1 - 2 * qubit_bit(s, q + 1, qubits);
      m(flip_qubit(s, q, qubits), s) -= k_over_h * zn;
    }
  }
  return m;
}

ComplexMatrix pairing_matrix(int levels, double g_over_de) {
  require_qubits(levels, "build_pairing");
  const Index d = Index{1} << levels;
  const double g = g_over_de;
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Index s = 0; s < d; ++s) {
    // sum (eps_q - g/2)(I - Z_q), eps_q = q; (I - Z_q) = 2 n_q
    double diag = 0.0;
    for (int q = 0; q < levels; ++q) {
      diag += (static_cast<double>(q) - g / 2) * 2.0 * qubit_bit(s, q, levels);
    }
    m(s, s) = diag;
    // -(g/2) sum_{q>p} (X_q X_p + Y_q Y_p): hops a pair between levels, element -g
    for (int q = 1; q < levels; ++q) {
      for (int p = 0; p < q; ++p) {
        if (qubit_bit(s, q, levels) != qubit_bit(s, p, levels)) {
          const Index t = flip_qubit(flip_qubit(s, q, levels), p, levels);
          m(t, s) += -g;
        }
      }
    }
  }
  return m;
}

HamiltonianModel make_model(ModelKind kind, const ModelParams& params,
                            ComplexMatrix raw) {
  const Spectrum raw_spec = quantum::eig_hermitian(raw);
  const Index d = raw.rows();
  HamiltonianModel model;
  model.kind = kind;
  model.params = params;
  model.params.dim = d;
  model.e_min = raw_spec.energies(0);
  model.e_max = raw_spec.energies(d - 1);
  const double width = model.e_max - model.e_min;
  if (width < tol::kRescaleGap) {
    throw DegenerateSpectrumError("model spectrum has no width; rescaling undefined");
  }
  model.rescaled = (raw - model.e_min * ComplexMatrix::Identity(d, d)) / width;
  model.spectrum.eigenvectors = raw_spec.eigenvectors;
  model.spectrum.energies = (raw_spec.energies.array() - model.e_min) / width;
  model.raw = std::move(raw);
  return model;
}

HamiltonianModel build_random(Index d, RandomStream& rng) {
  ModelParams params;
  params.qubits = qubits_of_dim(d);
  params.seed = rng.key();
  return make_model(ModelKind::kRandom, params, random_hermitian(d, rng));
}

HamiltonianModel build_tfim(int qubits, double j_over_h, double k_over_h) {
  ModelParams params;
  params.qubits = qubits;
  params.j_over_h = j_over_h;
  params.k_over_h = k_over_h;
  return make_model(ModelKind::kTfim, params, tfim_matrix(qubits, j_over_h, k_over_h));
}

HamiltonianModel build_pairing(int levels, double g_over_de) {
  ModelParams params;
  params.qubits = levels;
  params.g_over_de = g_over_de;
  return make_model(ModelKind::kPairing, params, pairing_matrix(levels, g_over_de));
}

int hamming_weight(Index index) {
  return std::popcount(static_cast<std::uint64_t>(index));
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * static_cast<std::uint64_t>(n - k + i) / i;
  return result;
}

namespace {

// Sector block -> model. A 1x1 block is exact and is not rescaled.
HamiltonianModel make_sector_model(ModelKind kind, const ModelParams& params,
                                   ComplexMatrix block, SectorMap map) {
  HamiltonianModel out;
  if (block.rows() == 1) {
    out.kind = kind;
    out.params = params;
    out.params.dim = 1;
    out.e_min = out.e_max = block(0, 0).real();
    out.rescaled = ComplexMatrix::Zero(1, 1);
    out.spectrum.energies = RealVector::Zero(1);
    out.spectrum.eigenvectors = ComplexMatrix::Identity(1, 1);
    out.raw = std::move(block);
    map.raw_energies = RealVector::Constant(1, out.e_min);
  } else {
    out = make_model(kind, params, std::move(block));
    map.raw_energies =
        (out.spectrum.energies.array() * (out.e_max - out.e_min) + out.e_min).matrix();
  }
  out.sector = std::move(map);
  return out;
}

}  // namespace

SectorMap sector_map(int qubits, int weight) {
  if (weight < 0 || weight > qubits) {
    std::ostringstream msg;
    msg << "sector weight " << weight << " outside [0, " << qubits << "]";
    throw ParameterError(msg.str());
  }
  SectorMap map;
  map.qubits = qubits;
  map.hamming_weight = weight;
  const Index d = Index{1} << qubits;
  for (Index s = 0; s < d; ++s) {
    if (hamming_weight(s) == weight) map.basis_indices.push_back(s);
  }
  return map;
}

HamiltonianModel sector_restrict(const HamiltonianModel& model, int weight) {
  const int qubits = model.params.qubits;
  if (qubits < 1 || (Index{1} << qubits) != model.raw.rows()) {
    throw ParameterError("sector_restrict: model is not a full qubit-register model");
  }
  SectorMap map = sector_map(qubits, weight);

  const Index d = model.raw.rows();
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      if (hamming_weight(a) != hamming_weight(b) &&
          std::abs(model.raw(a, b)) > tol::kSectorCoupling) {
        std::ostringstream msg;
        msg << "sector_restrict: Hamiltonian couples weights " << hamming_weight(a)
            << " and " << hamming_weight(b) << " (|H(" << a << "," << b
            << ")| = " << std::abs(model.raw(a, b)) << ")";
        throw SymmetryViolationError(msg.str());
      }
    }
  }

  const Index n = map.dim();
  ComplexMatrix block(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) block(a, b) = model.raw(map.basis_indices[a], map.basis_indices[b]);
  }

  return make_sector_model(model.kind, model.params, std::move(block), std::move(map));
}

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_model(std::ostream& out, const HamiltonianModel& model) {
  const ModelParams& p = model.params;
  out << "fixpointrl-hamiltonian v1\n";
  out << "kind " << to_string(model.kind) << "\n";
  out << "params qubits=" << p.qubits << " j_over_h=" << fmt_double(p.j_over_h)
      << " k_over_h=" << fmt_double(p.k_over_h) << " g_over_de=" << fmt_double(p.g_over_de)
      << " seed=" << p.seed << "\n";
  if (model.sector) {
    out << "sector " << model.sector->hamming_weight << "\n";
  } else {
    out << "sector none\n";
  }
  const Index d = model.raw.rows();
  out << "dimension " << d << "\n";
  for (Index row = 0; row < d; ++row) {
    for (Index col = 0; col < d; ++col) {
      if (col) out << ' ';
      out << fmt_double(model.raw(row, col).real()) << ','
          << fmt_double(model.raw(row, col).imag());
    }
    out << '\n';
  }
}

namespace {

std::string expect_line(std::istream& in, const std::string& keyword) {
  std::string line;
  if (!std::getline(in, line)) {
    throw IoError("hamiltonian file truncated before '" + keyword + "'");
  }
  if (line.rfind(keyword + " ", 0) != 0) {
    throw IoError("hamiltonian file: expected '" + keyword + "' line, got '" + line + "'");
  }
  return line.substr(keyword.size() + 1);
}

}  // namespace

HamiltonianModel read_model(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header != "fixpointrl-hamiltonian v1") {
    throw IoError("hamiltonian file: missing 'fixpointrl-hamiltonian v1' header");
  }
  const ModelKind kind = parse_model_kind(expect_line(in, "kind"));
  ModelParams params;
  {
    std::istringstream fields(expect_line(in, "params"));
    std::string field;
    while (fields >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw IoError("hamiltonian file: bad params field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "qubits") params.qubits = std::stoi(value);
      else if (key == "j_over_h") params.j_over_h = std::stod(value);
      else if (key == "k_over_h") params.k_over_h = std::stod(value);
      else if (key == "g_over_de") params.g_over_de = std::stod(value);
      else if (key == "seed") params.seed = std::stoull(value);
      else throw IoError("hamiltonian file: unknown params key '" + key + "'");
    }
  }
  const std::string sector = expect_line(in, "sector");
  const Index d = std::stol(expect_line(in, "dimension"));
  if (d < 1) throw IoError("hamiltonian file: dimension must be positive");

  ComplexMatrix raw(d, d);
  for (Index row = 0; row < d; ++row) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("hamiltonian file: truncated matrix");
    std::istringstream entries(line);
    for (Index col = 0; col < d; ++col) {
      std::string pair;
      if (!(entries >> pair)) throw IoError("hamiltonian file: short matrix row");
      const auto comma = pair.find(',');
      if (comma == std::string::npos) throw IoError("hamiltonian file: entry '" + pair + "' is not re,im");
      raw(row, col) = Complex(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
  }

  if (sector != "none") {
    const int weight = std::stoi(sector);
    SectorMap map = sector_map(params.qubits, weight);
    if (map.dim() != d) throw IoError("hamiltonian file: sector dimension mismatch");
    return make_sector_model(kind, params, std::move(raw), std::move(map));
  }
  return make_model(kind, params, std::move(raw));
}

}  // namespace fixpointrl::models
