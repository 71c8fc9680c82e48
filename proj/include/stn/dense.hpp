#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "stn/circuit.hpp"
#include "stn/pauli.hpp"
#include "stn/stn_state.hpp"

namespace stn {

inline constexpr std::size_t kDenseMaxQubits = 14;

// Brute-force statevector; bit q of the amplitude index is qubit q.
class DenseState {
 public:
  DenseState() = default;
  explicit DenseState(std::size_t n);
  DenseState(std::size_t n, Eigen::VectorXcd amplitudes);

  std::size_t num_qubits() const { return n_; }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }

  void apply_one_qubit(const Eigen::Matrix2cd& u, std::size_t q);
  // Index 2*bit(a) + bit(b).
  void apply_two_qubit(const Eigen::Matrix4cd& u, std::size_t a, std::size_t b);
  void apply_ccz(std::size_t a, std::size_t b, std::size_t c);
  void apply_pauli(const PauliString& p);
  void apply_gate(const Gate& g);

  // Probability of bit value 0 on qubit q.
  double prob_zero(std::size_t q) const;
  // Projects qubit q onto `bit` and renormalizes; returns the branch probability.
  double project(std::size_t q, int bit);

  double norm() const { return amp_.norm(); }

 private:
  void check(std::size_t q) const;
  std::size_t n_ = 0;
  Eigen::VectorXcd amp_;
};

struct DenseRunResult {
  DenseState state;
  // (gate index, bit) for each measure/postselect gate, in circuit order.
  std::vector<std::pair<std::size_t, int>> outcomes;
};

// forced maps gate index to the bit a measurement must yield; unforced
// measurements are sampled from rng.
DenseRunResult dense_run(const Circuit& c, const std::map<std::size_t, int>& forced, Rng& rng);
DenseRunResult dense_run(const Circuit& c);

double dense_expectation(const DenseState& s, const PauliString& obs);
// |<a|b>|^2 / (<a|a><b|b>).
double fidelity(const DenseState& a, const DenseState& b);

// Materializes sum_i nu_i D_i |phi>, building |phi> by stabilizer projection
// and each D_i as a row product.
DenseState stn_to_dense(const STNState& s);
// Same state obtained by applying a synthesis of the frame Clifford to the
// dense MPS vector; much faster for larger n.
DenseState stn_to_dense_fast(const STNState& s);

// Amplitudes of the first `keep` qubits with all other qubits in |0>.
DenseState restrict_to_zero_ancillas(const DenseState& s, std::size_t keep);

Eigen::Matrix2cd gate_matrix_1q(GateKind k, double angle = 0.0);
Eigen::Matrix4cd gate_matrix_2q(GateKind k);

}  // namespace stn
