#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "stn/pauli.hpp"

namespace stn {

using Rng = std::mt19937_64;

enum class CliffordGate { H, S, Sdg, X, Y, Z, CX, CZ, Swap };

std::size_t arity(CliffordGate g);
std::string to_string(CliffordGate g);

enum class RowKind { Stabilizer, Destabilizer };

struct RowSelector {
  BitVector bits;
  RowKind kind = RowKind::Stabilizer;
};

// p == i^phase * D_d * S_s with both products in ascending row order.
struct RowDecomposition {
  BitVector d;  // destabilizer rows; d[j] set iff p anticommutes with stabilizer j
  BitVector s;  // stabilizer rows; s[j] set iff p anticommutes with destabilizer j
  std::uint8_t phase = 0;
};

struct MeasureResult {
  int outcome = 1;  // +1 or -1
  bool deterministic = true;
  // Stabilizer row replaced by the observable when the outcome was random.
  std::optional<std::size_t> pivot;
};

// Stabilizer/destabilizer tableau of a stabilizer state |phi> = C|0...0>.
// Equivalently the Clifford C itself up to global phase: destabilizer j is
// C X_j C^dagger and stabilizer j is C Z_j C^dagger.
class Tableau {
 public:
  Tableau() = default;
  explicit Tableau(std::size_t n);

  std::size_t num_qubits() const { return destab_.size(); }

  const PauliString& destabilizer(std::size_t j) const { return destab_.at(j); }
  const PauliString& stabilizer(std::size_t j) const { return stab_.at(j); }
  void set_destabilizer(std::size_t j, PauliString p);
  void set_stabilizer(std::size_t j, PauliString p);

  // Conjugates every row by the gate: row <- G row G^dagger.
  void apply(CliffordGate g, std::span<const std::size_t> qubits);
  void apply(CliffordGate g, std::initializer_list<std::size_t> qubits) {
    apply(g, std::span<const std::size_t>(qubits.begin(), qubits.size()));
  }
  void h(std::size_t q);
  void s(std::size_t q);
  void sdg(std::size_t q);
  void x(std::size_t q);
  void y(std::size_t q);
  void z(std::size_t q);
  void cx(std::size_t c, std::size_t t);
  void cz(std::size_t a, std::size_t b);
  void swap(std::size_t a, std::size_t b);

  // Conjugates every row by the Clifford `block` (a tableau over k qubits)
  // acting on the listed operands: block qubit i sits on operands[i].
  void apply_clifford(const Tableau& block, std::span<const std::size_t> operands);

  // C^dagger p C: image of p in the frame where this tableau is the identity.
  PauliString conjugate_by_inverse(const PauliString& p) const;
  // C p C^dagger.
  PauliString conjugate(const PauliString& p) const;

  // Ordered product over selected rows of one kind, ascending index.
  PauliString row_product(const RowSelector& sel) const;
  // D_d * S_s.
  PauliString row_product(const BitVector& d, const BitVector& s) const;

  RowDecomposition decompose(const PauliString& p) const;

  // Aaronson-Gottesman measurement of a Hermitian Pauli observable.
  MeasureResult measure(const PauliString& obs, std::optional<int> forced, Rng& rng);

  Tableau inverse() const;

  // Pairwise commutation relations plus full symplectic rank.
  bool is_valid() const;

  bool operator==(const Tableau&) const = default;

  std::string str() const;

 private:
  void check_qubit(std::size_t q) const;

  std::vector<PauliString> destab_;
  std::vector<PauliString> stab_;
};

// Uniformly random n-qubit Clifford (modulo global phase) as its tableau.
Tableau random_clifford(std::size_t n, Rng& rng);

struct SynthGate {
  CliffordGate gate;
  std::size_t q0;
  std::size_t q1 = 0;
  bool operator==(const SynthGate&) const = default;
};

// Gate sequence over {H, S, CX} whose product is the Clifford of `t` (up to
// global phase): applying it in order to a fresh tableau reproduces `t`.
std::vector<SynthGate> synthesize_clifford(const Tableau& t);

// Frequency with which a stabilizer entry of a uniformly random Clifford has
// an X component (letter X or Y), over columns that have one anywhere.
struct XEntryStats {
  double conditional = 0.0;
  double unconditional = 0.0;
  std::size_t conditional_trials = 0;
  std::size_t unconditional_trials = 0;
};
XEntryStats sample_x_entry_stats(std::size_t n, std::size_t samples, Rng& rng);

inline Tableau tableau_new(std::size_t n) { return Tableau(n); }

}  // namespace stn
