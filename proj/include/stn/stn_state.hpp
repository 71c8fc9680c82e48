#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "stn/mps.hpp"
#include "stn/tableau.hpp"

namespace stn {

// U = c1 * D_{d1} S_{s1} + c2 * D_{d2} S_{s2} with c1 = cos(theta) and
// c2 = e^{i alpha} sin(theta), up to a global phase.
struct TwoTermDecomposition {
  double theta = 0.0;
  double alpha = 0.0;
  BitVector d1, s1, d2, s2;
  // Phase exponents (powers of i) of each term relative to its row product.
  std::uint8_t phase1 = 0;
  std::uint8_t phase2 = 0;
  // (-1)^{d2 . (s1 + s2)}.
  int sign = 1;
  // Tableau version the decomposition was computed against.
  std::uint64_t version = 0;
};

// Frame data of a measured observable O = alpha * D_a S_b.
struct ProjectionFrame {
  std::optional<std::size_t> k;  // lowest index with a[k] = 1; empty when a = 0
  BitVector a_bits, b_bits;
  std::uint8_t alpha_phase = 0;
  // O expressed in the MPS frame (Hermitian).
  PauliString mps_operator;
};

struct StnMeasurement {
  int outcome = 1;
  double probability = 1.0;
  bool deterministic_in_frame = true;
};

// |psi> = sum_i nu_i D_i |phi>: a tableau frame plus an MPS of coefficients.
class STNState {
 public:
  STNState() = default;
  explicit STNState(std::size_t n);

  std::size_t num_qubits() const { return tableau_.num_qubits(); }
  const Tableau& tableau() const { return tableau_; }
  const MatrixProductState& mps() const { return mps_; }
  const BondTrace& trace() const { return trace_; }
  std::uint64_t version() const { return version_; }
  // Operations applied so far (the step index of the bond trace).
  std::size_t steps() const { return steps_; }
  std::size_t max_bond() const { return mps_.max_bond(); }

  void apply_clifford(CliffordGate g, std::span<const std::size_t> qubits);
  void apply_clifford(CliffordGate g, std::initializer_list<std::size_t> qubits) {
    apply_clifford(g, std::span<const std::size_t>(qubits.begin(), qubits.size()));
  }
  void apply_clifford_block(const Tableau& block, std::span<const std::size_t> operands);

  // exp(-i angle/2 axis) expanded into two tableau-row terms.
  TwoTermDecomposition decompose_rotation(const PauliString& axis, double angle) const;
  void apply_nonclifford(const TwoTermDecomposition& dec, const TruncationPolicy& policy);
  void apply_rotation(const PauliString& axis, double angle, const TruncationPolicy& policy) {
    apply_nonclifford(decompose_rotation(axis, angle), policy);
  }

  ProjectionFrame projection_frame(const PauliString& obs) const;
  double expectation(const PauliString& obs) const;

  // Projective measurement of a Hermitian Pauli, sampled or forced (+1/-1).
  StnMeasurement measure(const PauliString& obs, std::optional<int> forced, Rng& rng, const TruncationPolicy& policy);

 private:
  void record();

  Tableau tableau_;
  MatrixProductState mps_;
  BondTrace trace_;
  std::uint64_t version_ = 0;
  std::size_t steps_ = 0;
};

inline STNState stn_new(std::size_t n) { return STNState(n); }

}  // namespace stn
