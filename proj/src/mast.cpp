#include "stn/mast.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <set>

#include "stn/error.hpp"

namespace stn {

std::string to_string(ScheduleStrategy s) {
  switch (s) {
    case ScheduleStrategy::LeftToRight:
      return "left-to-right";
    case ScheduleStrategy::RightToLeft:
      return "right-to-left";
    case ScheduleStrategy::MiddleOutPairwise:
      return "middle-out-pairwise";
    case ScheduleStrategy::Explicit:
      return "explicit";
  }
  return "?";
}

std::optional<ScheduleStrategy> schedule_from_string(std::string_view s) {
  if (s == "left-to-right" || s == "ltr") return ScheduleStrategy::LeftToRight;
  if (s == "right-to-left" || s == "rtl") return ScheduleStrategy::RightToLeft;
  if (s == "middle-out-pairwise" || s == "middle-out") return ScheduleStrategy::MiddleOutPairwise;
  if (s == "explicit") return ScheduleStrategy::Explicit;
  return std::nullopt;
}

std::vector<std::size_t> ProjectionSchedule::order(std::size_t t) const {
  std::vector<std::size_t> out;
  out.reserve(t);
  switch (strategy) {
    case ScheduleStrategy::LeftToRight:
      for (std::size_t i = 0; i < t; ++i) out.push_back(i);
      break;
    case ScheduleStrategy::RightToLeft:
      for (std::size_t i = t; i-- > 0;) out.push_back(i);
      break;
    case ScheduleStrategy::MiddleOutPairwise: {
      const std::size_t c = (t + 1) / 2;
      for (std::size_t j = 0; out.size() < t; ++j) {
        if (j + 1 <= c) out.push_back(c - 1 - j);
        if (c + j < t) out.push_back(c + j);
      }
      break;
    }
    case ScheduleStrategy::Explicit: {
      if (explicit_order.size() != t) throw Error(ErrorCode::kInvalidArgument, "explicit schedule length does not match ancilla count");
      std::vector<bool> seen(t, false);
      for (auto i : explicit_order) {
        if (i >= t || seen[i]) throw Error(ErrorCode::kInvalidArgument, "explicit schedule is not a permutation");
        seen[i] = true;
      }
      out = explicit_order;
      break;
    }
  }
  return out;
}

GadgetizedCircuit gadgetize(const Circuit& c) {
  GadgetizedCircuit g;
  g.data_n = c.num_qubits();
  for (const auto& gate : c.gates()) {
    if (gate.kind == GateKind::CCZ) throw Error(ErrorCode::kUnsupported, "expand CCZ gates before gadgetization");
    if (is_single_qubit_nonclifford(gate.kind)) ++g.magic_t;
  }
  g.ops = Circuit(g.data_n + g.magic_t);
  std::size_t next = g.data_n;
  const auto& gs = c.gates();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Gate& gate = gs[i];
    if (!is_single_qubit_nonclifford(gate.kind)) {
      g.ops.add(gate);
      g.origin.push_back(i);
      continue;
    }
    const std::size_t m = next++;
    const std::size_t q = gate.qubits[0];
    const double angle = z_rotation_angle(gate.kind, gate.angle);
    g.ops.add(GateKind::H, {m});
    g.ops.add(gate.kind, {m}, gate.angle);
    g.coupling_gate.push_back(g.ops.size());
    g.ops.add(GateKind::CX, {q, m});
    g.origin.insert(g.origin.end(), 3, i);
    DeferredMeasurement d;
    d.ancilla = m;
    d.data_qubit = q;
    d.source = gate.kind;
    d.angle = angle;
    if (gate.kind == GateKind::T) {
      d.correction = "s";
    } else if (gate.kind == GateKind::Tdg) {
      d.correction = "sdg";
    } else {
      char buf[48];
      std::snprintf(buf, sizeof buf, "rz %.17g", 2 * angle);
      d.correction = buf;
    }
    g.deferred.push_back(std::move(d));
  }
  return g;
}

void resolve_deferred(STNState& state, const GadgetizedCircuit& gadget, const std::vector<std::size_t>& offsets,
                      const TruncationPolicy& policy, Rng& rng) {
  for (auto off : offsets) {
    if (off >= gadget.magic_t) throw Error(ErrorCode::kInvalidArgument, "ancilla offset out of range");
    const std::size_t m = gadget.deferred[off].ancilla;
    state.measure(PauliString::single(state.num_qubits(), m, 'Z'), 1, rng, policy);
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int measure_z(STNState& st, std::size_t q, std::optional<int> forced_bit, Rng& rng, const TruncationPolicy& policy) {
  std::optional<int> forced;
  if (forced_bit) forced = *forced_bit == 0 ? 1 : -1;
  const auto m = st.measure(PauliString::single(st.num_qubits(), q, 'Z'), forced, rng, policy);
  return m.outcome == 1 ? 0 : 1;
}

std::optional<int> forced_bit_for(const Gate& g, std::size_t index, const RunOptions& opts) {
  if (g.kind == GateKind::Postselect) return 0;
  if (auto it = opts.forced.find(index); it != opts.forced.end()) {
    if (it->second != 0 && it->second != 1) throw Error(ErrorCode::kInvalidArgument, "forced bits must be 0 or 1");
    return it->second;
  }
  return std::nullopt;
}

void apply_unitary_gate(STNState& st, const Gate& g, const TruncationPolicy& policy) {
  if (auto cg = as_clifford_gate(g.kind)) {
    st.apply_clifford(*cg, g.qubits);
  } else if (g.kind == GateKind::CliffordBlock) {
    st.apply_clifford_block(*g.block, g.qubits);
  } else if (is_single_qubit_nonclifford(g.kind)) {
    st.apply_rotation(PauliString::single(st.num_qubits(), g.qubits[0], 'Z'), z_rotation_angle(g.kind, g.angle), policy);
  } else {
    throw Error(ErrorCode::kUnsupported, "gate " + mnemonic(g.kind) + " is not supported by the simulator");
  }
}

void finish(RunResult& r, STNState&& st, Clock::time_point t0) {
  std::sort(r.outcomes.begin(), r.outcomes.end(),
            [](const MeasurementRecord& a, const MeasurementRecord& b) { return a.gate_index < b.gate_index; });
  r.trace = st.trace();
  r.peak_chi = std::max<std::size_t>(1, r.trace.peak());
  r.state = std::move(st);
  r.wall_ms = ms_since(t0);
}

}  // namespace

RunResult run_stn(const Circuit& c, const RunOptions& opts, Rng& rng) {
  const auto t0 = Clock::now();
  opts.policy.validate();
  STNState st(c.num_qubits());
  RunResult r;
  r.data_n = c.num_qubits();
  const auto& gs = c.gates();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Gate& g = gs[i];
    if (g.kind == GateKind::Measure || g.kind == GateKind::Postselect) {
      const int bit = measure_z(st, g.qubits[0], forced_bit_for(g, i, opts), rng, opts.policy);
      r.outcomes.push_back({i, g.qubits[0], bit});
    } else {
      apply_unitary_gate(st, g, opts.policy);
    }
  }
  finish(r, std::move(st), t0);
  return r;
}

RunResult run_mast(const Circuit& c, const RunOptions& opts, Rng& rng) {
  const auto t0 = Clock::now();
  opts.policy.validate();
  const GadgetizedCircuit gad = gadgetize(c);
  const std::size_t total = gad.ops.num_qubits();
  STNState st(total);
  RunResult r;
  r.data_n = gad.data_n;
  r.magic_t = gad.magic_t;

  const auto& ops = gad.ops.gates();
  std::vector<std::size_t> last_touch(total, 0);
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (auto q : ops[i].qubits) last_touch[q] = i;
  std::vector<std::size_t> coupling_owner(ops.size(), gad.magic_t);
  for (std::size_t a = 0; a < gad.coupling_gate.size(); ++a) coupling_owner[gad.coupling_gate[a]] = a;

  const std::vector<std::size_t> schedule = opts.schedule.order(gad.magic_t);
  std::set<std::size_t> pending;
  auto resolve_pending = [&]() {
    std::vector<std::size_t> now;
    for (auto off : schedule)
      if (pending.count(off)) now.push_back(off);
    for (auto off : now) {
      resolve_deferred(st, gad, {off}, opts.policy, rng);
      r.resolution_peak_chi = std::max(r.resolution_peak_chi, st.max_bond());
    }
    pending.clear();
  };

  std::vector<std::size_t> deferred_meas;  // op indices
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const Gate& g = ops[i];
    if (g.kind == GateKind::Measure || g.kind == GateKind::Postselect) {
      const std::size_t q = g.qubits[0];
      if (last_touch[q] == i) {
        deferred_meas.push_back(i);
        continue;
      }
      // The qubit is reused: every pending projection must land first.
      resolve_pending();
      const std::size_t orig = gad.origin[i];
      const int bit = measure_z(st, q, forced_bit_for(g, orig, opts), rng, opts.policy);
      r.outcomes.push_back({orig, q, bit});
      continue;
    }
    apply_unitary_gate(st, g, opts.policy);
    if (coupling_owner[i] < gad.magic_t) pending.insert(coupling_owner[i]);
  }

  auto measure_deferred = [&](bool postselects) {
    for (auto i : deferred_meas) {
      const Gate& g = ops[i];
      if ((g.kind == GateKind::Postselect) != postselects) continue;
      const std::size_t orig = gad.origin[i];
      const int bit = measure_z(st, g.qubits[0], forced_bit_for(g, orig, opts), rng, opts.policy);
      r.outcomes.push_back({orig, g.qubits[0], bit});
    }
  };
  // Postselected work qubits (the four-T CCZ ancillas) go before the magic
  // ancillas; left pending they keep the AND entanglement alive through every
  // projection and inflate the bond dimension.
  measure_deferred(true);
  resolve_pending();
  measure_deferred(false);
  finish(r, std::move(st), t0);
  return r;
}

}  // namespace stn
