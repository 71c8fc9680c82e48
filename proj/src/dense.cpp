#include "stn/dense.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "stn/error.hpp"

namespace stn {

namespace {

void check_size(std::size_t n) {
  if (n == 0) throw DimensionError("dense state needs at least one qubit");
  if (n > kDenseMaxQubits)
    throw Error(ErrorCode::kSizeLimit, "dense oracle is limited to " + std::to_string(kDenseMaxQubits) + " qubits, got " +
                                           std::to_string(n));
}

}  // namespace

Eigen::Matrix2cd gate_matrix_1q(GateKind k, double angle) {
  const cplx i(0, 1);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  switch (k) {
    case GateKind::H:
      m << r, r, r, -r;
      return m;
    case GateKind::S:
      m << 1, 0, 0, i;
      return m;
    case GateKind::Sdg:
      m << 1, 0, 0, -i;
      return m;
    case GateKind::X:
      m << 0, 1, 1, 0;
      return m;
    case GateKind::Y:
      m << 0, -i, i, 0;
      return m;
    case GateKind::Z:
      m << 1, 0, 0, -1;
      return m;
    case GateKind::T:
      m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
      return m;
    case GateKind::Tdg:
      m << 1, 0, 0, std::polar(1.0, -std::numbers::pi / 4);
      return m;
    case GateKind::Rz:
      m << std::polar(1.0, -angle / 2), 0, 0, std::polar(1.0, angle / 2);
      return m;
    default:
      throw Error(ErrorCode::kInvalidArgument, mnemonic(k) + " is not a single-qubit unitary");
  }
}

Eigen::Matrix4cd gate_matrix_2q(GateKind k) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  switch (k) {
    case GateKind::CX:
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
      return m;
    case GateKind::CZ:
      m(0, 0) = m(1, 1) = m(2, 2) = 1;
      m(3, 3) = -1;
      return m;
    case GateKind::Swap:
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
      return m;
    default:
      throw Error(ErrorCode::kInvalidArgument, mnemonic(k) + " is not a two-qubit unitary");
  }
}

DenseState::DenseState(std::size_t n) : n_(n) {
  check_size(n);
  amp_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  amp_[0] = 1;
}

DenseState::DenseState(std::size_t n, Eigen::VectorXcd amplitudes) : n_(n), amp_(std::move(amplitudes)) {
  check_size(n);
  if (amp_.size() != (Eigen::Index{1} << n)) throw DimensionError("amplitude vector length must be 2^n");
}

void DenseState::check(std::size_t q) const {
  if (q >= n_) throw DimensionError("qubit " + std::to_string(q) + " out of range");
}

void DenseState::apply_one_qubit(const Eigen::Matrix2cd& u, std::size_t q) {
  check(q);
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    if (i & bit) continue;
    const cplx a0 = amp_[i], a1 = amp_[i | bit];
    amp_[i] = u(0, 0) * a0 + u(0, 1) * a1;
    amp_[i | bit] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void DenseState::apply_two_qubit(const Eigen::Matrix4cd& u, std::size_t a, std::size_t b) {
  check(a);
  check(b);
  if (a == b) throw Error(ErrorCode::kInvalidArgument, "two-qubit gate operands must differ");
  const Eigen::Index ba = Eigen::Index{1} << a, bb = Eigen::Index{1} << b;
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    if ((i & ba) || (i & bb)) continue;
    const Eigen::Index idx[4] = {i, i | bb, i | ba, i | ba | bb};
    Eigen::Vector4cd v(amp_[idx[0]], amp_[idx[1]], amp_[idx[2]], amp_[idx[3]]);
    v = u * v;
    for (int k = 0; k < 4; ++k) amp_[idx[k]] = v[k];
  }
}

void DenseState::apply_ccz(std::size_t a, std::size_t b, std::size_t c) {
  check(a);
  check(b);
  check(c);
  const Eigen::Index m = (Eigen::Index{1} << a) | (Eigen::Index{1} << b) | (Eigen::Index{1} << c);
  for (Eigen::Index i = 0; i < amp_.size(); ++i)
    if ((i & m) == m) amp_[i] = -amp_[i];
}

void DenseState::apply_pauli(const PauliString& p) {
  if (p.num_qubits() != n_) throw DimensionError("Pauli length mismatch");
  Eigen::Index xm = 0, zm = 0;
  unsigned ys = 0;
  for (std::size_t q = 0; q < n_; ++q) {
    if (p.x(q)) xm |= Eigen::Index{1} << q;
    if (p.z(q)) zm |= Eigen::Index{1} << q;
    if (p.x(q) && p.z(q)) ++ys;
  }
  static const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx ph = kPhases[(p.phase() + ys) & 3u];
  Eigen::VectorXcd out(amp_.size());
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    const double sgn = (std::popcount(static_cast<std::uint64_t>(i & zm)) & 1) ? -1.0 : 1.0;
    out[i ^ xm] = ph * sgn * amp_[i];
  }
  amp_ = std::move(out);
}

void DenseState::apply_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::Swap:
      apply_two_qubit(gate_matrix_2q(g.kind), g.qubits[0], g.qubits[1]);
      return;
    case GateKind::CCZ:
      apply_ccz(g.qubits[0], g.qubits[1], g.qubits[2]);
      return;
    case GateKind::CliffordBlock:
      for (const auto& sg : synthesize_clifford(*g.block)) {
        if (sg.gate == CliffordGate::CX) {
          apply_two_qubit(gate_matrix_2q(GateKind::CX), g.qubits[sg.q0], g.qubits[sg.q1]);
        } else {
          apply_one_qubit(gate_matrix_1q(sg.gate == CliffordGate::H ? GateKind::H : GateKind::S), g.qubits[sg.q0]);
        }
      }
      return;
    case GateKind::Measure:
    case GateKind::Postselect:
      throw Error(ErrorCode::kInvalidArgument, "measurements are handled by dense_run");
    default:
      apply_one_qubit(gate_matrix_1q(g.kind, g.angle), g.qubits[0]);
  }
}

double DenseState::prob_zero(std::size_t q) const {
  check(q);
  const Eigen::Index bit = Eigen::Index{1} << q;
  double p0 = 0, tot = 0;
  for (Eigen::Index i = 0; i < amp_.size(); ++i) {
    const double w = std::norm(amp_[i]);
    tot += w;
    if (!(i & bit)) p0 += w;
  }
  return tot > 0 ? p0 / tot : 0.0;
}

double DenseState::project(std::size_t q, int bit) {
  const double p0 = prob_zero(q);
  const double p = bit == 0 ? p0 : 1.0 - p0;
  if (p < 1e-12) throw Error(ErrorCode::kImpossibleOutcome, "dense projection onto a vanishing branch");
  const Eigen::Index m = Eigen::Index{1} << q;
  for (Eigen::Index i = 0; i < amp_.size(); ++i)
    if (static_cast<bool>(i & m) != static_cast<bool>(bit)) amp_[i] = 0;
  amp_ /= amp_.norm();
  return p;
}

DenseRunResult dense_run(const Circuit& c, const std::map<std::size_t, int>& forced, Rng& rng) {
  DenseRunResult r{DenseState(c.num_qubits()), {}};
  const auto& gs = c.gates();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const Gate& g = gs[i];
    if (g.kind == GateKind::Measure || g.kind == GateKind::Postselect) {
      int bit = 0;
      if (g.kind == GateKind::Postselect) {
        bit = 0;
      } else if (auto it = forced.find(i); it != forced.end()) {
        bit = it->second;
      } else {
        const double u = std::generate_canonical<double, 53>(rng);
        bit = u < r.state.prob_zero(g.qubits[0]) ? 0 : 1;
      }
      r.state.project(g.qubits[0], bit);
      r.outcomes.emplace_back(i, bit);
    } else {
      r.state.apply_gate(g);
    }
  }
  return r;
}

DenseRunResult dense_run(const Circuit& c) {
  Rng rng(0);
  return dense_run(c, {}, rng);
}

double dense_expectation(const DenseState& s, const PauliString& obs) {
  if (obs.num_qubits() != s.num_qubits()) throw DimensionError("observable length mismatch");
  DenseState t = s;
  t.apply_pauli(obs);
  return (s.amplitudes().dot(t.amplitudes()) / s.amplitudes().squaredNorm()).real();
}

double fidelity(const DenseState& a, const DenseState& b) {
  if (a.num_qubits() != b.num_qubits()) throw DimensionError("fidelity of states with different qubit counts");
  const double na = a.amplitudes().squaredNorm(), nb = b.amplitudes().squaredNorm();
  if (na == 0 || nb == 0) return 0.0;
  return std::norm(a.amplitudes().dot(b.amplitudes())) / (na * nb);
}

DenseState stn_to_dense(const STNState& s) {
  const std::size_t n = s.num_qubits();
  check_size(n);
  const Tableau& t = s.tableau();
  // |phi> from a generic vector projected onto the stabilizer code space.
  Rng rng(0x5eed);
  DenseState phi(n);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::VectorXcd v(Eigen::Index{1} << n);
    for (auto& x : v) x = cplx(std::generate_canonical<double, 53>(rng) - 0.5, std::generate_canonical<double, 53>(rng) - 0.5);
    phi = DenseState(n, v);
    for (std::size_t j = 0; j < n; ++j) {
      DenseState sv = phi;
      sv.apply_pauli(t.stabilizer(j));
      phi.amplitudes() = (phi.amplitudes() + sv.amplitudes()) / 2.0;
    }
    if (phi.norm() > 1e-6) break;
  }
  phi.amplitudes() /= phi.norm();

  const Eigen::VectorXcd nu = s.mps().to_dense();
  Eigen::VectorXcd psi = nu[0] * phi.amplitudes();
  DenseState w = phi;
  // Gray-code walk: destabilizers commute, so D_{b ^ e_j} = D_j D_b.
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const auto j = static_cast<std::size_t>(std::countr_zero(k));
    w.apply_pauli(t.destabilizer(j));
    const std::uint64_t b = k ^ (k >> 1);
    psi += nu[static_cast<Eigen::Index>(b)] * w.amplitudes();
  }
  return DenseState(n, std::move(psi));
}

DenseState stn_to_dense_fast(const STNState& s) {
  const std::size_t n = s.num_qubits();
  check_size(n);
  DenseState out(n, s.mps().to_dense());
  for (const auto& sg : synthesize_clifford(s.tableau())) {
    if (sg.gate == CliffordGate::CX) {
      out.apply_two_qubit(gate_matrix_2q(GateKind::CX), sg.q0, sg.q1);
    } else {
      out.apply_one_qubit(gate_matrix_1q(sg.gate == CliffordGate::H ? GateKind::H : GateKind::S), sg.q0);
    }
  }
  return out;
}

DenseState restrict_to_zero_ancillas(const DenseState& s, std::size_t keep) {
  if (keep == 0 || keep > s.num_qubits()) throw DimensionError("invalid register size");
  return DenseState(keep, s.amplitudes().head(Eigen::Index{1} << keep));
}

}  // namespace stn
