#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stn {

// Packed bit vector; storage beyond size() is kept zero so word-wise
// popcounts and comparisons are exact.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static BitVector unit(std::size_t n, std::size_t j) {
    BitVector v(n);
    v.set(j, true);
    return v;
  }

  std::size_t size() const { return n_; }
  bool operator[](std::size_t j) const { return (words_[j >> 6] >> (j & 63)) & 1u; }
  void set(std::size_t j, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (j & 63);
    if (v) {
      words_[j >> 6] |= m;
    } else {
      words_[j >> 6] &= ~m;
    }
  }
  void flip(std::size_t j) { words_[j >> 6] ^= std::uint64_t{1} << (j & 63); }

  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  bool any() const { return !none(); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  // Lowest set index, or size() when empty.
  std::size_t first_set() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    return n_;
  }

  BitVector& operator^=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  BitVector& operator&=(const BitVector& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  bool operator==(const BitVector&) const = default;

  std::span<std::uint64_t> words() { return words_; }
  std::span<const std::uint64_t> words() const { return words_; }

  // '0'/'1' characters, index 0 first.
  std::string str() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// Parity of popcount(a & b).
bool dot(const BitVector& a, const BitVector& b);

// N-qubit Pauli operator i^phase * (sigma_0 ⊗ ... ⊗ sigma_{n-1}) with the letter at
// site j given by (x_j, z_j): (0,0) I, (1,0) X, (0,1) Z, (1,1) Y.  Y is the
// Hermitian Pauli Y = iXZ, so the operator is Hermitian iff phase is even.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n) : xs_(n), zs_(n) {}
  PauliString(BitVector xs, BitVector zs, std::uint8_t phase = 0);

  // Accepts an optional sign prefix (+, -, i, +i, -i) followed by one letter per
  // qubit from {I, _, X, Y, Z}.
  static PauliString parse(std::string_view text);
  static PauliString single(std::size_t n, std::size_t q, char letter);

  std::size_t num_qubits() const { return xs_.size(); }
  bool x(std::size_t q) const { return xs_[q]; }
  bool z(std::size_t q) const { return zs_[q]; }
  char letter(std::size_t q) const;
  void set_letter(std::size_t q, char letter);
  void set_bits(std::size_t q, bool x, bool z) {
    xs_.set(q, x);
    zs_.set(q, z);
  }

  const BitVector& xs() const { return xs_; }
  const BitVector& zs() const { return zs_; }
  BitVector& xs() { return xs_; }
  BitVector& zs() { return zs_; }

  // Exponent of i in the scalar prefactor, in [0, 4).
  std::uint8_t phase() const { return phase_; }
  void set_phase(std::uint8_t p) { phase_ = p & 3u; }
  void add_phase(unsigned p) { phase_ = static_cast<std::uint8_t>((phase_ + p) & 3u); }
  bool is_hermitian() const { return (phase_ & 1u) == 0; }
  // +1 or -1 for Hermitian strings.
  int sign() const { return phase_ == 0 ? 1 : -1; }

  bool is_identity() const { return xs_.none() && zs_.none(); }
  std::size_t weight() const;
  // Sites carrying a non-identity letter, ascending.
  std::vector<std::size_t> support() const;

  // this <- this * rhs, phase exact.
  PauliString& operator*=(const PauliString& rhs);
  friend PauliString operator*(PauliString lhs, const PauliString& rhs) { return lhs *= rhs; }

  bool commutes(const PauliString& other) const;

  bool operator==(const PauliString&) const = default;

  // e.g. "+XZ_Y", "-iZZ".
  std::string str() const;

 private:
  BitVector xs_;
  BitVector zs_;
  std::uint8_t phase_ = 0;
};

PauliString pauli_multiply(const PauliString& p, const PauliString& q);
bool pauli_commutes(const PauliString& p, const PauliString& q);

}  // namespace stn
