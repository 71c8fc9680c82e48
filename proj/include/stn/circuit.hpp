#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stn/tableau.hpp"

namespace stn {

enum class GateKind {
  H,
  S,
  Sdg,
  X,
  Y,
  Z,
  CX,
  CZ,
  Swap,
  T,
  Tdg,
  Rz,
  CCZ,
  Measure,     // Z-basis measurement
  Postselect,  // Z-basis measurement forced to outcome 0
  CliffordBlock,
};

std::size_t gate_arity(GateKind k);
std::string mnemonic(GateKind k);
std::optional<GateKind> kind_from_mnemonic(std::string_view m);
bool is_clifford(GateKind k);
bool is_single_qubit_nonclifford(GateKind k);
std::optional<CliffordGate> as_clifford_gate(GateKind k);
// Rotation angle of T, Tdg and Rz about Z.
double z_rotation_angle(GateKind k, double angle);

struct Gate {
  GateKind kind = GateKind::H;
  std::vector<std::size_t> qubits;
  double angle = 0.0;                    // Rz only
  std::shared_ptr<const Tableau> block;  // CliffordBlock only

  bool operator==(const Gate& o) const;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n);

  std::size_t num_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  Circuit& add(Gate g);
  Circuit& add(GateKind k, std::vector<std::size_t> qubits, double angle = 0.0) {
    return add(Gate{k, std::move(qubits), angle, nullptr});
  }
  Circuit& add_block(std::shared_ptr<const Tableau> block, std::vector<std::size_t> operands);
  Circuit& append(const Circuit& other);

  // T, Tdg, Rz and CCZ gates (a CCZ counts once).
  std::size_t nonclifford_count() const;
  std::size_t count(GateKind k) const;

  bool operator==(const Circuit& o) const { return n_ == o.n_ && gates_ == o.gates_; }

 private:
  std::size_t n_ = 0;
  std::vector<Gate> gates_;
};

// Line-oriented text format:
//   qubits <n>
//   <mnemonic> [angle] <q0> [q1 [q2]]
// with '#' comments.  Angles are decimal radians or pi expressions such as
// pi/4, -pi/8, 3*pi/4 or 0.5*pi.
Circuit parse_circuit(std::string_view text);
std::string emit_circuit(const Circuit& c);
double parse_angle(std::string_view token);

// Replaces every clifford block by its {H, S, CX} synthesis.
Circuit expand_clifford_blocks(const Circuit& c);
// Inverse circuit; measurements are rejected.
Circuit inverse_circuit(const Circuit& c);

enum class CczDecomposition { FourT, SevenT };
std::string to_string(CczDecomposition d);
std::optional<CczDecomposition> ccz_decomposition_from_string(std::string_view s);

// CCZ on (c0, c1, target) with two ancillas starting in |0>.  anc0 is
// postselected on 0, anc1 is returned to |0>.
std::vector<Gate> ccz_four_t(std::size_t c0, std::size_t c1, std::size_t target, std::size_t anc0, std::size_t anc1);
std::vector<Gate> ccz_seven_t(std::size_t c0, std::size_t c1, std::size_t target);

// Rewrites every CCZ with the seven-T form.
Circuit expand_ccz_seven_t(const Circuit& c);

struct TDopedSpec {
  std::size_t n = 1;
  std::size_t t = 0;
  std::uint64_t seed = 0;
};

// t repetitions of [random n-qubit Clifford block, T on qubit 0].
Circuit gen_t_doped(const TDopedSpec& spec);
// gen_t_doped followed by its exact inverse.
Circuit gen_uudagger(const TDopedSpec& spec);

struct HiddenShiftSpec {
  std::size_t n = 2;               // even
  std::vector<std::uint8_t> shift;  // n bits; empty means drawn from the seed
  std::size_t ccz_count = 0;       // per oracle
  std::size_t clifford_phase_count = 0;  // Z/CZ gates per oracle; 0 means 3n
  CczDecomposition decomposition = CczDecomposition::FourT;
  std::uint64_t seed = 0;
};

struct HiddenShiftCircuit {
  Circuit circuit;
  std::vector<std::uint8_t> shift;
  // Indices of the measure gates, in data-qubit order.
  std::vector<std::size_t> measure_gates;
};

HiddenShiftCircuit gen_hidden_shift(const HiddenShiftSpec& spec);

}  // namespace stn
