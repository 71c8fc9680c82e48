#pragma once

// Test-side statevector oracle.  Gate matrices and the k-qubit apply loop are
// written out here from scratch so the library's dense module is checked
// against something it does not share code with.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "stn/circuit.hpp"
#include "stn/pauli.hpp"
#include "stn/tableau.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline const cplx I1{0.0, 1.0};

inline Mat m2(cplx a, cplx b, cplx c, cplx d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Mat pauli_letter(char c) {
  switch (c) {
    case 'X':
      return m2(0, 1, 1, 0);
    case 'Y':
      return m2(0, -I1, I1, 0);
    case 'Z':
      return m2(1, 0, 0, -1);
    default:
      return Mat::Identity(2, 2);
  }
}

inline Mat rz(double theta) { return m2(std::exp(-I1 * (theta / 2)), 0, 0, std::exp(I1 * (theta / 2))); }

// Matrix of a gate on its operands; the first operand is the most
// significant bit of the local index.
inline Mat gate_matrix(stn::GateKind k, double angle = 0.0) {
  using stn::GateKind;
  const double r = 1.0 / std::sqrt(2.0);
  const double pi = std::acos(-1.0);
  switch (k) {
    case GateKind::H:
      return m2(r, r, r, -r);
    case GateKind::S:
      return m2(1, 0, 0, I1);
    case GateKind::Sdg:
      return m2(1, 0, 0, -I1);
    case GateKind::X:
      return pauli_letter('X');
    case GateKind::Y:
      return pauli_letter('Y');
    case GateKind::Z:
      return pauli_letter('Z');
    case GateKind::T:
      return m2(1, 0, 0, std::exp(I1 * (pi / 4)));
    case GateKind::Tdg:
      return m2(1, 0, 0, std::exp(-I1 * (pi / 4)));
    case GateKind::Rz:
      return rz(angle);
    case GateKind::CX: {
      Mat m = Mat::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
      return m;
    }
    case GateKind::CZ: {
      Mat m = Mat::Identity(4, 4);
      m(3, 3) = -1;
      return m;
    }
    case GateKind::Swap: {
      Mat m = Mat::Zero(4, 4);
      m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
      return m;
    }
    case GateKind::CCZ: {
      Mat m = Mat::Identity(8, 8);
      m(7, 7) = -1;
      return m;
    }
    default:
      throw std::invalid_argument("oracle: no matrix for this gate");
  }
}

inline void apply(Vec& psi, const Mat& u, const std::vector<std::size_t>& qs) {
  const std::size_t k = qs.size();
  const std::size_t dim = std::size_t{1} << k;
  std::size_t mask = 0;
  for (auto q : qs) mask |= std::size_t{1} << q;
  std::vector<std::size_t> idx(dim);
  Vec local(static_cast<Eigen::Index>(dim));
  for (std::size_t base = 0; base < static_cast<std::size_t>(psi.size()); ++base) {
    if (base & mask) continue;
    for (std::size_t l = 0; l < dim; ++l) {
      std::size_t full = base;
      for (std::size_t j = 0; j < k; ++j)
        if ((l >> (k - 1 - j)) & 1) full |= std::size_t{1} << qs[j];
      idx[l] = full;
      local(static_cast<Eigen::Index>(l)) = psi(static_cast<Eigen::Index>(full));
    }
    const Vec out = u * local;
    for (std::size_t l = 0; l < dim; ++l) psi(static_cast<Eigen::Index>(idx[l])) = out(static_cast<Eigen::Index>(l));
  }
}

inline Vec zero_state(std::size_t n) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  v(0) = 1;
  return v;
}

inline Vec basis_state(std::size_t n, std::size_t index) {
  Vec v = Vec::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  v(static_cast<Eigen::Index>(index)) = 1;
  return v;
}

// Full 2^n x 2^n matrix; qubit q is bit q of the row index.
inline Mat pauli_matrix(const stn::PauliString& p) {
  Mat m = Mat::Identity(1, 1);
  for (std::size_t q = p.num_qubits(); q-- > 0;) {
    const Mat s = pauli_letter(p.letter(q));
    Mat next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * s;
    m = next;
  }
  return std::pow(I1, p.phase()) * m;
}

// Full unitary of a gate embedded in n qubits, built column by column.
inline Mat embed(const Mat& u, const std::vector<std::size_t>& qs, std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  Mat full(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    Vec v = basis_state(n, c);
    apply(v, u, qs);
    full.col(static_cast<Eigen::Index>(c)) = v;
  }
  return full;
}

inline double project(Vec& psi, std::size_t q, int bit) {
  double p = 0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (static_cast<int>((static_cast<std::size_t>(i) >> q) & 1) != bit)
      psi(i) = 0;
    else
      p += std::norm(psi(i));
  }
  if (p > 0) psi /= std::sqrt(p);
  return p;
}

inline double prob_bit(const Vec& psi, std::size_t q, int bit) {
  double p = 0;
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    if (static_cast<int>((static_cast<std::size_t>(i) >> q) & 1) == bit) p += std::norm(psi(i));
  return p / psi.squaredNorm();
}

struct Run {
  Vec psi;
  std::map<std::size_t, int> outcomes;  // gate index -> bit
};

inline void apply_synth(Vec& psi, const std::vector<stn::SynthGate>& gates, const std::vector<std::size_t>& operands);

// Measurements not in `forced` are sampled, never choosing a branch whose
// probability is below 1e-9.
inline Run simulate(const stn::Circuit& c, const std::map<std::size_t, int>& forced, std::mt19937_64& rng) {
  Run r{zero_state(c.num_qubits()), {}};
  const auto& gs = c.gates();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const auto& g = gs[i];
    if (g.kind == stn::GateKind::Measure || g.kind == stn::GateKind::Postselect) {
      int bit = 0;
      if (auto it = forced.find(i); it != forced.end()) {
        bit = it->second;
      } else if (g.kind == stn::GateKind::Measure) {
        const double p0 = prob_bit(r.psi, g.qubits[0], 0);
        if (p0 < 1e-9)
          bit = 1;
        else if (p0 > 1 - 1e-9)
          bit = 0;
        else
          bit = std::uniform_real_distribution<double>(0, 1)(rng) < p0 ? 0 : 1;
      }
      if (project(r.psi, g.qubits[0], bit) < 1e-12) throw std::runtime_error("oracle: impossible branch");
      r.outcomes[i] = bit;
      continue;
    }
    if (g.kind == stn::GateKind::CliffordBlock) {
      // Expanded through the synthesis, which has its own conjugation test.
      apply_synth(r.psi, stn::synthesize_clifford(*g.block), g.qubits);
      continue;
    }
    apply(r.psi, gate_matrix(g.kind, g.angle), g.qubits);
  }
  return r;
}

inline stn::GateKind kind_of(stn::CliffordGate g) {
  switch (g) {
    case stn::CliffordGate::H: return stn::GateKind::H;
    case stn::CliffordGate::S: return stn::GateKind::S;
    case stn::CliffordGate::Sdg: return stn::GateKind::Sdg;
    case stn::CliffordGate::X: return stn::GateKind::X;
    case stn::CliffordGate::Y: return stn::GateKind::Y;
    case stn::CliffordGate::Z: return stn::GateKind::Z;
    case stn::CliffordGate::CX: return stn::GateKind::CX;
    case stn::CliffordGate::CZ: return stn::GateKind::CZ;
    case stn::CliffordGate::Swap: return stn::GateKind::Swap;
  }
  return stn::GateKind::H;
}

inline void apply_synth(Vec& psi, const std::vector<stn::SynthGate>& gates, const std::vector<std::size_t>& operands) {
  for (const auto& sg : gates) {
    std::vector<std::size_t> qs{operands[sg.q0]};
    if (stn::arity(sg.gate) == 2) qs.push_back(operands[sg.q1]);
    apply(psi, gate_matrix(kind_of(sg.gate)), qs);
  }
}

// Physical state of a frame tableau C and coefficient vector nu: C|nu>, up to
// a global phase.
inline Vec materialize(const stn::Tableau& frame, const Vec& nu) {
  Vec psi = nu;
  std::vector<std::size_t> all(frame.num_qubits());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  apply_synth(psi, stn::synthesize_clifford(frame), all);
  return psi;
}

inline Run simulate(const stn::Circuit& c) {
  std::mt19937_64 rng(0);
  return simulate(c, {}, rng);
}

inline double fidelity(const Vec& a, const Vec& b) {
  return std::norm(a.dot(b)) / (a.squaredNorm() * b.squaredNorm());
}

// Amplitudes of the first `keep` qubits with the rest in |0>.
inline Vec restrict_zero(const Vec& psi, std::size_t keep) {
  return psi.head(static_cast<Eigen::Index>(std::size_t{1} << keep));
}

// Random circuit over Clifford, T-type and measurement gates.
inline stn::Circuit random_circuit(std::size_t n, std::size_t gates, std::mt19937_64& rng, bool measurements = true,
                                   std::size_t max_nonclifford = 1000) {
  using stn::GateKind;
  stn::Circuit c(n);
  std::size_t nonclifford = 0;
  const double pi = std::acos(-1.0);
  for (std::size_t i = 0; i < gates; ++i) {
    const std::size_t choice = rng() % (measurements ? 13 : 12);
    const std::size_t a = rng() % n;
    std::size_t b = rng() % n;
    if (n > 1)
      while (b == a) b = rng() % n;
    switch (choice) {
      case 0: c.add(GateKind::H, {a}); break;
      case 1: c.add(GateKind::S, {a}); break;
      case 2: c.add(GateKind::Sdg, {a}); break;
      case 3: c.add(GateKind::X, {a}); break;
      case 4: c.add(GateKind::Y, {a}); break;
      case 5: c.add(GateKind::Z, {a}); break;
      case 6: if (n > 1) c.add(GateKind::CX, {a, b}); else c.add(GateKind::H, {a}); break;
      case 7: if (n > 1) c.add(GateKind::CZ, {a, b}); else c.add(GateKind::S, {a}); break;
      case 8: if (n > 1) c.add(GateKind::Swap, {a, b}); else c.add(GateKind::H, {a}); break;
      case 9:
      case 10:
      case 11:
        if (nonclifford < max_nonclifford) {
          ++nonclifford;
          if (choice == 9) c.add(GateKind::T, {a});
          else if (choice == 10) c.add(GateKind::Tdg, {a});
          else c.add(GateKind::Rz, {a}, std::uniform_real_distribution<double>(-pi, pi)(rng));
        } else {
          c.add(GateKind::H, {a});
        }
        break;
      default: c.add(GateKind::Measure, {a}); break;
    }
  }
  return c;
}

}  // namespace oracle
