#include "stn/stn_state.hpp"

#include <algorithm>
#include <cmath>

#include "stn/error.hpp"

namespace stn {

namespace {

constexpr double kMinProbability = 1e-12;

cplx unit_phase(std::uint8_t p) {
  static const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPhases[p & 3u];
}

// MPS-frame image of i^phase * D_d * S_s: destabilizer j acts as X_j and
// stabilizer j as Z_j, so the image is i^phase X^d Z^s.
PauliString frame_pauli(const BitVector& d, const BitVector& s, std::uint8_t phase) {
  const std::size_t overlaps = (d & s).count();
  PauliString p(d, s, phase);
  p.add_phase(3u * static_cast<unsigned>(overlaps));  // XZ = -iY
  return p;
}

PauliString adjoint(PauliString p) {
  p.set_phase(static_cast<std::uint8_t>((4u - p.phase()) & 3u));
  return p;
}

}  // namespace

STNState::STNState(std::size_t n) : tableau_(n), mps_(MatrixProductState::zero_state(n)) {}

void STNState::record() { trace_.record(steps_, mps_.max_bond()); }

void STNState::apply_clifford(CliffordGate g, std::span<const std::size_t> qubits) {
  tableau_.apply(g, qubits);
  ++version_;
  ++steps_;
}

void STNState::apply_clifford_block(const Tableau& block, std::span<const std::size_t> operands) {
  tableau_.apply_clifford(block, operands);
  ++version_;
  ++steps_;
}

TwoTermDecomposition STNState::decompose_rotation(const PauliString& axis, double angle) const {
  if (axis.num_qubits() != num_qubits()) throw DimensionError("rotation axis length mismatch");
  if (!axis.is_hermitian()) throw Error(ErrorCode::kInvalidArgument, "rotation axis must be Hermitian");
  if (axis.is_identity()) throw Error(ErrorCode::kInvalidArgument, "rotation axis must not be the identity");
  const std::size_t n = num_qubits();
  TwoTermDecomposition dec;
  dec.d1 = BitVector(n);
  dec.s1 = BitVector(n);
  RowDecomposition r = tableau_.decompose(axis);
  dec.d2 = std::move(r.d);
  dec.s2 = std::move(r.s);
  dec.phase2 = r.phase;

  const cplx c1(std::cos(angle / 2), 0.0);
  const cplx c2(0.0, -std::sin(angle / 2));
  const double gamma = std::abs(c1) > 0 ? std::arg(c1) : 0.0;
  dec.theta = std::atan2(std::abs(c2), std::abs(c1));
  dec.alpha = std::abs(c2) > 0 ? std::arg(c2) - gamma : 0.0;

  const BitVector mix = dec.d2 & (dec.s1 ^ dec.s2);
  dec.sign = (mix.count() & 1u) ? -1 : 1;
  dec.version = version_;
  return dec;
}

void STNState::apply_nonclifford(const TwoTermDecomposition& dec, const TruncationPolicy& policy) {
  if (dec.version != version_) throw Error(ErrorCode::kStale, "decomposition was computed against an older frame");
  const std::size_t n = num_qubits();
  if (dec.d1.size() != n || dec.s1.size() != n || dec.d2.size() != n || dec.s2.size() != n)
    throw DimensionError("decomposition selector length mismatch");
  policy.validate();

  const PauliString f1 = frame_pauli(dec.d1, dec.s1, dec.phase1);
  const PauliString f2 = frame_pauli(dec.d2, dec.s2, dec.phase2);
  // c1 F1 + c2 F2 = (c1 I + c2 F2 F1^dagger) F1
  if (!f1.is_identity() || f1.phase() != 0) mps_.apply_pauli(f1);
  PauliString axis = f2 * adjoint(f1);
  if (axis.is_identity()) {
    // Both terms share one Pauli: only a global scalar remains.
    mps_.normalize();
  } else {
    mps_.apply_pauli_rotation(axis, dec.theta, dec.alpha, policy);
  }
  ++steps_;
  record();
}

ProjectionFrame STNState::projection_frame(const PauliString& obs) const {
  RowDecomposition r = tableau_.decompose(obs);
  ProjectionFrame f;
  f.mps_operator = frame_pauli(r.d, r.s, r.phase);
  if (r.d.any()) f.k = r.d.first_set();
  f.a_bits = std::move(r.d);
  f.b_bits = std::move(r.s);
  f.alpha_phase = r.phase;
  return f;
}

double STNState::expectation(const PauliString& obs) const {
  if (obs.num_qubits() != num_qubits()) throw DimensionError("observable length mismatch");
  if (!obs.is_hermitian()) throw Error(ErrorCode::kInvalidArgument, "observable must be Hermitian");
  return mps_.expectation(projection_frame(obs).mps_operator).real();
}

StnMeasurement STNState::measure(const PauliString& obs, std::optional<int> forced, Rng& rng,
                                 const TruncationPolicy& policy) {
  if (obs.num_qubits() != num_qubits()) throw DimensionError("observable length mismatch");
  if (!obs.is_hermitian()) throw Error(ErrorCode::kInvalidArgument, "observable must be Hermitian");
  if (forced && *forced != 1 && *forced != -1) throw Error(ErrorCode::kInvalidArgument, "forced outcome must be +1 or -1");
  policy.validate();

  const ProjectionFrame frame = projection_frame(obs);
  const PauliString& pt = frame.mps_operator;
  const double ev = std::clamp(mps_.expectation(pt).real(), -1.0, 1.0);
  double p_plus = (1.0 + ev) / 2.0;
  if (p_plus < kMinProbability) p_plus = 0.0;
  if (p_plus > 1.0 - kMinProbability) p_plus = 1.0;

  StnMeasurement res;
  if (forced) {
    res.outcome = *forced;
  } else {
    const double u = std::generate_canonical<double, 53>(rng);
    res.outcome = u < p_plus ? 1 : -1;
  }
  res.probability = res.outcome == 1 ? p_plus : 1.0 - p_plus;
  if (res.probability < kMinProbability)
    throw Error(ErrorCode::kImpossibleOutcome, "measurement outcome of " + obs.str() + " has vanishing probability");
  const double p = static_cast<double>(res.outcome);

  if (!frame.k) {
    // Diagonal in the frame: the tableau is unchanged and only the MPS is projected.
    res.deterministic_in_frame = true;
    if (!pt.is_identity()) {
      const auto support = pt.support();
      const std::size_t lo = support.front(), hi = support.back();
      std::vector<Eigen::Matrix2cd> f(hi - lo + 1, Eigen::Matrix2cd::Identity()), g(hi - lo + 1);
      for (std::size_t q = lo; q <= hi; ++q) g[q - lo] = pauli_matrix(pt.letter(q));
      mps_.apply_two_term(0.5, f, 0.5 * p * unit_phase(pt.phase()), g, lo, policy, false);
      mps_.normalize();
    }
  } else {
    // (I + p P)/2 followed by the frame change of the tableau update equals
    // |0><0|_k (I + p Z_k P)/sqrt(2) on the MPS.
    res.deterministic_in_frame = false;
    const std::size_t k = *frame.k;
    const PauliString q = PauliString::single(num_qubits(), k, 'Z') * pt;
    const auto support = q.support();
    const std::size_t lo = std::min(support.front(), k), hi = std::max(support.back(), k);
    Eigen::Matrix2cd p0 = Eigen::Matrix2cd::Zero();
    p0(0, 0) = 1;
    std::vector<Eigen::Matrix2cd> f(hi - lo + 1, Eigen::Matrix2cd::Identity()), g(hi - lo + 1);
    for (std::size_t j = lo; j <= hi; ++j) g[j - lo] = pauli_matrix(q.letter(j));
    f[k - lo] = p0;
    g[k - lo] = p0 * g[k - lo];
    const double r = 1.0 / std::sqrt(2.0);
    mps_.apply_two_term(r, f, r * p * unit_phase(q.phase()), g, lo, policy, false);
    mps_.normalize();
    tableau_.measure(obs, res.outcome, rng);
    ++version_;
  }
  ++steps_;
  record();
  return res;
}

}  // namespace stn
