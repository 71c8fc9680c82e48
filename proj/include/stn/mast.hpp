#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stn/circuit.hpp"
#include "stn/stn_state.hpp"

namespace stn {

struct DeferredMeasurement {
  std::size_t ancilla = 0;     // absolute qubit index, data_n + offset
  std::size_t data_qubit = 0;  // qubit the gadget acted on
  GateKind source = GateKind::T;
  double angle = 0.0;          // rotation angle of the gadgetized gate
  // Correction the 1 branch would need; never applied since the 0 branch is forced.
  std::string correction;
};

struct GadgetizedCircuit {
  std::size_t data_n = 0;
  std::size_t magic_t = 0;
  Circuit ops;  // over data_n + magic_t qubits
  std::vector<DeferredMeasurement> deferred;
  // Index into ops of the CX that couples each ancilla, in ancilla order.
  std::vector<std::size_t> coupling_gate;
  // Input-circuit gate index each op came from.
  std::vector<std::size_t> origin;
};

// Each T, Tdg or Rz(theta) on data qubit q becomes H(m), Rz(theta)(m),
// CX(q, m) on a fresh ancilla m with a pending Z measurement of m.
GadgetizedCircuit gadgetize(const Circuit& c);

enum class ScheduleStrategy { LeftToRight, RightToLeft, MiddleOutPairwise, Explicit };

std::string to_string(ScheduleStrategy s);
std::optional<ScheduleStrategy> schedule_from_string(std::string_view s);

struct ProjectionSchedule {
  ScheduleStrategy strategy = ScheduleStrategy::LeftToRight;
  std::vector<std::size_t> explicit_order;

  static ProjectionSchedule explicit_schedule(std::vector<std::size_t> order) {
    return {ScheduleStrategy::Explicit, std::move(order)};
  }
  // Offsets into the magic register, a permutation of 0..t-1.
  std::vector<std::size_t> order(std::size_t t) const;
};

struct RunOptions {
  TruncationPolicy policy;
  ProjectionSchedule schedule;
  // Gate index in the input circuit -> bit a measure gate must return.
  std::map<std::size_t, int> forced;
};

struct MeasurementRecord {
  std::size_t gate_index = 0;  // in the input circuit
  std::size_t qubit = 0;
  int bit = 0;
  bool operator==(const MeasurementRecord&) const = default;
};

struct RunResult {
  STNState state;
  BondTrace trace;
  std::vector<MeasurementRecord> outcomes;  // ordered by gate index
  std::size_t peak_chi = 1;
  // Peak over the deferred-projection phase (MAST only; equals 1 otherwise).
  std::size_t resolution_peak_chi = 1;
  double wall_ms = 0.0;
  std::size_t data_n = 0;
  std::size_t magic_t = 0;
};

// Forces the 0 branch of every listed ancilla in schedule order.
void resolve_deferred(STNState& state, const GadgetizedCircuit& gadget, const std::vector<std::size_t>& offsets,
                      const TruncationPolicy& policy, Rng& rng);

RunResult run_mast(const Circuit& c, const RunOptions& opts, Rng& rng);
RunResult run_stn(const Circuit& c, const RunOptions& opts, Rng& rng);

}  // namespace stn
