#include "stn/pauli.hpp"

#include <utility>

#include "stn/error.hpp"

namespace stn {

std::string BitVector::str() const {
  std::string s(n_, '0');
  for (std::size_t j = 0; j < n_; ++j)
    if ((*this)[j]) s[j] = '1';
  return s;
}

bool dot(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw DimensionError("bit vector length mismatch");
  std::uint64_t acc = 0;
  auto wa = a.words();
  auto wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) acc ^= wa[i] & wb[i];
  return std::popcount(acc) & 1;
}

PauliString::PauliString(BitVector xs, BitVector zs, std::uint8_t phase)
    : xs_(std::move(xs)), zs_(std::move(zs)), phase_(phase & 3u) {
  if (xs_.size() != zs_.size()) throw DimensionError("x and z bit vectors differ in length");
}

PauliString PauliString::parse(std::string_view text) {
  std::uint8_t phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase = static_cast<std::uint8_t>((phase + 1) & 3u);
    ++pos;
  }
  PauliString p(text.size() - pos);
  for (std::size_t q = 0; pos < text.size(); ++pos, ++q) p.set_letter(q, text[pos]);
  p.phase_ = phase;
  return p;
}

PauliString PauliString::single(std::size_t n, std::size_t q, char letter) {
  if (q >= n) throw DimensionError("qubit index out of range");
  PauliString p(n);
  p.set_letter(q, letter);
  return p;
}

char PauliString::letter(std::size_t q) const {
  static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
  return kLetters[(xs_[q] ? 1 : 0) | (zs_[q] ? 2 : 0)];
}

void PauliString::set_letter(std::size_t q, char letter) {
  switch (letter) {
    case 'I':
    case '_':
      set_bits(q, false, false);
      break;
    case 'X':
      set_bits(q, true, false);
      break;
    case 'Y':
      set_bits(q, true, true);
      break;
    case 'Z':
      set_bits(q, false, true);
      break;
    default:
      throw Error(ErrorCode::kInvalidArgument, std::string("invalid Pauli letter '") + letter + "'");
  }
}

std::size_t PauliString::weight() const {
  std::size_t w = 0;
  auto xw = xs_.words();
  auto zw = zs_.words();
  for (std::size_t i = 0; i < xw.size(); ++i) w += static_cast<std::size_t>(std::popcount(xw[i] | zw[i]));
  return w;
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < num_qubits(); ++q)
    if (xs_[q] || zs_[q]) out.push_back(q);
  return out;
}

PauliString& PauliString::operator*=(const PauliString& rhs) {
  if (rhs.num_qubits() != num_qubits()) throw DimensionError("Pauli length mismatch in multiply");
  // Two-bit counter per bit position accumulating the log_i of the per-site
  // product scalars (+1 for XY, YZ, ZX and -1 for the reversed orders).
  std::uint64_t total = 0;
  auto x1 = xs_.words();
  auto z1 = zs_.words();
  auto x2 = rhs.xs_.words();
  auto z2 = rhs.zs_.words();
  for (std::size_t i = 0; i < x1.size(); ++i) {
    const std::uint64_t old_x1 = x1[i];
    const std::uint64_t old_z1 = z1[i];
    x1[i] ^= x2[i];
    z1[i] ^= z2[i];
    const std::uint64_t x1z2 = old_x1 & z2[i];
    const std::uint64_t anti = (x2[i] & old_z1) ^ x1z2;
    const std::uint64_t minus = (x1[i] ^ z1[i] ^ x1z2) & anti;
    total += static_cast<std::uint64_t>(std::popcount(anti)) + 2u * static_cast<std::uint64_t>(std::popcount(minus));
  }
  phase_ = static_cast<std::uint8_t>((phase_ + rhs.phase_ + total) & 3u);
  return *this;
}

bool PauliString::commutes(const PauliString& other) const {
  if (other.num_qubits() != num_qubits()) throw DimensionError("Pauli length mismatch in commutation test");
  std::uint64_t acc = 0;
  auto x1 = xs_.words();
  auto z1 = zs_.words();
  auto x2 = other.xs_.words();
  auto z2 = other.zs_.words();
  for (std::size_t i = 0; i < x1.size(); ++i) acc ^= (x1[i] & z2[i]) ^ (z1[i] & x2[i]);
  return (std::popcount(acc) & 1) == 0;
}

std::string PauliString::str() const {
  static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
  std::string s = kPrefix[phase_];
  for (std::size_t q = 0; q < num_qubits(); ++q) {
    const char c = letter(q);
    s.push_back(c == 'I' ? '_' : c);
  }
  return s;
}

PauliString pauli_multiply(const PauliString& p, const PauliString& q) { return p * q; }

bool pauli_commutes(const PauliString& p, const PauliString& q) { return p.commutes(q); }

}  // namespace stn
