#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stn/pauli.hpp"

namespace stn {

using cplx = std::complex<double>;

struct TruncationPolicy {
  // 0 means unbounded.
  std::size_t chi_max = 0;
  // Singular values with s <= svd_cutoff * ||s|| are dropped.
  double svd_cutoff = 1e-12;

  static TruncationPolicy exact() { return {0, 0.0}; }
  void validate() const;
};

struct BondTrace {
  struct Sample {
    std::size_t step;
    std::size_t chi;
    bool operator==(const Sample&) const = default;
  };
  std::vector<Sample> samples;

  // Steps must be strictly increasing.
  void record(std::size_t step, std::size_t chi);
  std::size_t peak() const;
  bool operator==(const BondTrace&) const = default;
};

// Open-boundary MPS over qubits.  Site tensor i is stored as two matrices
// A_i[s] of shape (chi_{i-1}, chi_i), one per physical value s.
class MatrixProductState {
 public:
  using Site = std::array<Eigen::MatrixXcd, 2>;

  MatrixProductState() = default;
  static MatrixProductState zero_state(std::size_t n);
  static MatrixProductState product_state(const std::vector<Eigen::Vector2cd>& locals);
  // Exact MPS of a dense vector (qubit q is bit q of the index).
  static MatrixProductState from_dense(const Eigen::VectorXcd& psi, const TruncationPolicy& policy = TruncationPolicy::exact());

  std::size_t num_sites() const { return sites_.size(); }
  const Site& site(std::size_t i) const { return sites_.at(i); }
  std::optional<std::size_t> canonical_center() const { return center_; }

  // chi_i for the bond between sites i and i+1, i in [0, n-1).
  std::vector<std::size_t> bond_dims() const;
  std::size_t max_bond() const;

  void apply_one_qubit(const Eigen::Matrix2cd& u, std::size_t site);
  // Any 2x2 operator, no unitarity check and no renormalization.
  void apply_local(const Eigen::Matrix2cd& op, std::size_t site);
  // u is indexed by 2*bit(site_a) + bit(site_b).
  void apply_two_qubit(const Eigen::Matrix4cd& u, std::size_t site_a, std::size_t site_b, const TruncationPolicy& policy);

  // Applies the operator cos(theta) I + e^{i alpha} sin(theta) axis.  The axis
  // phase is included.  The result is not renormalized.
  void apply_pauli_rotation(const PauliString& axis, double theta, double alpha, const TruncationPolicy& policy);

  // Applies c1 * (F_lo ⊗ ... ⊗ F_hi) + c2 * (G_lo ⊗ ... ⊗ G_hi) as a bond-2 MPO.
  // When `unitary` is false every bond of the chain is recompressed, since a
  // projector can lower entanglement outside its support.
  void apply_two_term(cplx c1, const std::vector<Eigen::Matrix2cd>& f, cplx c2, const std::vector<Eigen::Matrix2cd>& g,
                      std::size_t lo, const TruncationPolicy& policy, bool unitary);

  // Applies each letter of p as a single-site gate, including its phase.
  void apply_pauli(const PauliString& p);

  // <psi|obs|psi> / <psi|psi>.
  cplx expectation(const PauliString& obs) const;
  double norm_squared() const;
  void normalize();

  // Projects `site` onto |outcome> and returns the branch probability before
  // projection.  Throws if that probability is below 1e-12.
  double project_site(std::size_t site, int outcome, bool renormalize, const TruncationPolicy& policy = {});

  void canonicalize(std::size_t center);
  // Left-to-right QR then right-to-left truncating SVD over the full chain.
  // Renormalizes and returns the discarded weight.
  double truncate(const TruncationPolicy& policy);

  Eigen::VectorXcd to_dense() const;

 private:
  void check_site(std::size_t i) const;
  void move_center_right(std::size_t i);
  void move_center_left(std::size_t i);
  // SVD-splits site i from site i-1; the center moves to i-1.
  double svd_left(std::size_t i, const TruncationPolicy& policy);
  void compress_range(std::size_t lo, std::size_t hi, const TruncationPolicy& policy);
  void apply_adjacent(const Eigen::Matrix4cd& u, std::size_t i, const TruncationPolicy& policy);

  std::vector<Site> sites_;
  std::optional<std::size_t> center_;
};

Eigen::Matrix2cd pauli_matrix(char letter);

}  // namespace stn
