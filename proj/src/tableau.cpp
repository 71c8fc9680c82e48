#include "stn/tableau.hpp"

#include <algorithm>
#include <sstream>

#include "stn/error.hpp"

namespace stn {

std::size_t arity(CliffordGate g) {
  switch (g) {
    case CliffordGate::CX:
    case CliffordGate::CZ:
    case CliffordGate::Swap:
      return 2;
    default:
      return 1;
  }
}

std::string to_string(CliffordGate g) {
  switch (g) {
    case CliffordGate::H:
      return "h";
    case CliffordGate::S:
      return "s";
    case CliffordGate::Sdg:
      return "sdg";
    case CliffordGate::X:
      return "x";
    case CliffordGate::Y:
      return "y";
    case CliffordGate::Z:
      return "z";
    case CliffordGate::CX:
      return "cx";
    case CliffordGate::CZ:
      return "cz";
    case CliffordGate::Swap:
      return "swap";
  }
  return "?";
}

Tableau::Tableau(std::size_t n) {
  if (n == 0) throw DimensionError("tableau needs at least one qubit");
  destab_.reserve(n);
  stab_.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    destab_.push_back(PauliString::single(n, j, 'X'));
    stab_.push_back(PauliString::single(n, j, 'Z'));
  }
}

void Tableau::set_destabilizer(std::size_t j, PauliString p) {
  if (p.num_qubits() != num_qubits()) throw DimensionError("row length mismatch");
  destab_.at(j) = std::move(p);
}

void Tableau::set_stabilizer(std::size_t j, PauliString p) {
  if (p.num_qubits() != num_qubits()) throw DimensionError("row length mismatch");
  stab_.at(j) = std::move(p);
}

void Tableau::check_qubit(std::size_t q) const {
  if (q >= num_qubits())
    throw DimensionError("qubit " + std::to_string(q) + " out of range for " + std::to_string(num_qubits()) +
                         "-qubit tableau");
}

namespace {

template <typename F>
void for_each_row(std::vector<PauliString>& a, std::vector<PauliString>& b, F&& f) {
  for (auto& r : a) f(r);
  for (auto& r : b) f(r);
}

}  // namespace

void Tableau::h(std::size_t q) {
  check_qubit(q);
  for_each_row(destab_, stab_, [q](PauliString& r) {
    const bool x = r.x(q), z = r.z(q);
    if (x && z) r.add_phase(2);
    r.set_bits(q, z, x);
  });
}

void Tableau::s(std::size_t q) {
  check_qubit(q);
  for_each_row(destab_, stab_, [q](PauliString& r) {
    const bool x = r.x(q), z = r.z(q);
    if (x && z) r.add_phase(2);
    r.set_bits(q, x, z != x);
  });
}

void Tableau::sdg(std::size_t q) {
  check_qubit(q);
  for_each_row(destab_, stab_, [q](PauliString& r) {
    const bool x = r.x(q), z = r.z(q);
    if (x && !z) r.add_phase(2);
    r.set_bits(q, x, z != x);
  });
}

void Tableau::x(std::size_t q) {
  check_qubit(q);
  for_each_row(destab_, stab_, [q](PauliString& r) {
    if (r.z(q)) r.add_phase(2);
  });
}

void Tableau::y(std::size_t q) {
  check_qubit(q);
  for_each_row(destab_, stab_, [q](PauliString& r) {
    if (r.x(q) != r.z(q)) r.add_phase(2);
  });
}

void Tableau::z(std::size_t q) {
  check_qubit(q);
  for_each_row(destab_, stab_, [q](PauliString& r) {
    if (r.x(q)) r.add_phase(2);
  });
}

void Tableau::cx(std::size_t c, std::size_t t) {
  check_qubit(c);
  check_qubit(t);
  if (c == t) throw Error(ErrorCode::kInvalidArgument, "two-qubit gate operands must differ");
  for_each_row(destab_, stab_, [c, t](PauliString& r) {
    const bool xc = r.x(c), zc = r.z(c), xt = r.x(t), zt = r.z(t);
    if (xc && zt && (xt == zc)) r.add_phase(2);
    r.set_bits(t, xt != xc, zt);
    r.set_bits(c, xc, zc != zt);
  });
}

void Tableau::cz(std::size_t a, std::size_t b) {
  h(b);
  cx(a, b);
  h(b);
}

void Tableau::swap(std::size_t a, std::size_t b) {
  check_qubit(a);
  check_qubit(b);
  if (a == b) throw Error(ErrorCode::kInvalidArgument, "two-qubit gate operands must differ");
  for_each_row(destab_, stab_, [a, b](PauliString& r) {
    const bool xa = r.x(a), za = r.z(a);
    r.set_bits(a, r.x(b), r.z(b));
    r.set_bits(b, xa, za);
  });
}

void Tableau::apply(CliffordGate g, std::span<const std::size_t> qubits) {
  if (qubits.size() != arity(g))
    throw Error(ErrorCode::kInvalidArgument, "gate " + to_string(g) + " expects " + std::to_string(arity(g)) +
                                                 " operand(s)");
  switch (g) {
    case CliffordGate::H:
      return h(qubits[0]);
    case CliffordGate::S:
      return s(qubits[0]);
    case CliffordGate::Sdg:
      return sdg(qubits[0]);
    case CliffordGate::X:
      return x(qubits[0]);
    case CliffordGate::Y:
      return y(qubits[0]);
    case CliffordGate::Z:
      return z(qubits[0]);
    case CliffordGate::CX:
      return cx(qubits[0], qubits[1]);
    case CliffordGate::CZ:
      check_qubit(qubits[0]);
      if (qubits[0] == qubits[1]) throw Error(ErrorCode::kInvalidArgument, "two-qubit gate operands must differ");
      return cz(qubits[0], qubits[1]);
    case CliffordGate::Swap:
      return swap(qubits[0], qubits[1]);
  }
}

namespace {

// Image of the restriction of `row` to `operands` under the block Clifford,
// as a k-qubit Pauli with exact phase (the row's own phase excluded).
PauliString block_image(const Tableau& block, const PauliString& row, std::span<const std::size_t> operands) {
  const std::size_t k = block.num_qubits();
  PauliString img(k);
  unsigned ys = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const bool x = row.x(operands[i]);
    const bool z = row.z(operands[i]);
    if (x && z) ++ys;
    if (x) img *= block.destabilizer(i);
    if (z) img *= block.stabilizer(i);
  }
  img.add_phase(ys);
  return img;
}

}  // namespace

void Tableau::apply_clifford(const Tableau& block, std::span<const std::size_t> operands) {
  const std::size_t k = block.num_qubits();
  if (operands.size() != k) throw DimensionError("clifford block operand count mismatch");
  for (std::size_t i = 0; i < k; ++i) {
    check_qubit(operands[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (operands[i] == operands[j]) throw Error(ErrorCode::kInvalidArgument, "duplicate clifford block operand");
  }
  for_each_row(destab_, stab_, [&](PauliString& r) {
    PauliString img = block_image(block, r, operands);
    for (std::size_t i = 0; i < k; ++i) r.set_bits(operands[i], img.x(i), img.z(i));
    r.add_phase(img.phase());
  });
}

PauliString Tableau::conjugate(const PauliString& p) const {
  if (p.num_qubits() != num_qubits()) throw DimensionError("Pauli length mismatch");
  PauliString out(num_qubits());
  unsigned ys = 0;
  for (std::size_t q = 0; q < num_qubits(); ++q) {
    if (p.x(q) && p.z(q)) ++ys;
    if (p.x(q)) out *= destab_[q];
    if (p.z(q)) out *= stab_[q];
  }
  out.add_phase(ys + p.phase());
  return out;
}

PauliString Tableau::conjugate_by_inverse(const PauliString& p) const {
  RowDecomposition dec = decompose(p);
  // X^d Z^s with XZ = -iY on overlapping sites.
  BitVector both = dec.d & dec.s;
  PauliString out(std::move(dec.d), std::move(dec.s), dec.phase);
  out.add_phase(3u * static_cast<unsigned>(both.count()));
  return out;
}

PauliString Tableau::row_product(const RowSelector& sel) const {
  if (sel.bits.size() != num_qubits()) throw DimensionError("row selector length mismatch");
  const auto& rows = sel.kind == RowKind::Stabilizer ? stab_ : destab_;
  PauliString out(num_qubits());
  for (std::size_t j = 0; j < num_qubits(); ++j)
    if (sel.bits[j]) out *= rows[j];
  return out;
}

PauliString Tableau::row_product(const BitVector& d, const BitVector& s) const {
  PauliString out = row_product(RowSelector{d, RowKind::Destabilizer});
  out *= row_product(RowSelector{s, RowKind::Stabilizer});
  return out;
}

RowDecomposition Tableau::decompose(const PauliString& p) const {
  const std::size_t n = num_qubits();
  if (p.num_qubits() != n) throw DimensionError("Pauli length mismatch in decomposition");
  RowDecomposition dec{BitVector(n), BitVector(n), 0};
  for (std::size_t j = 0; j < n; ++j) {
    if (!p.commutes(stab_[j])) dec.d.set(j, true);
    if (!p.commutes(destab_[j])) dec.s.set(j, true);
  }
  const PauliString prod = row_product(dec.d, dec.s);
  if (prod.xs() != p.xs() || prod.zs() != p.zs())
    throw Error(ErrorCode::kInternal, "row decomposition does not reconstruct " + p.str());
  dec.phase = static_cast<std::uint8_t>((p.phase() + 4u - prod.phase()) & 3u);
  return dec;
}

MeasureResult Tableau::measure(const PauliString& obs, std::optional<int> forced, Rng& rng) {
  const std::size_t n = num_qubits();
  if (obs.num_qubits() != n) throw DimensionError("observable length mismatch");
  if (!obs.is_hermitian()) throw Error(ErrorCode::kInvalidArgument, "observable must be Hermitian");
  if (forced && *forced != 1 && *forced != -1) throw Error(ErrorCode::kInvalidArgument, "forced outcome must be +1 or -1");

  std::size_t k = n;
  for (std::size_t j = 0; j < n; ++j) {
    if (!obs.commutes(stab_[j])) {
      k = j;
      break;
    }
  }

  MeasureResult res;
  if (k == n) {
    // obs = +-S_s up to the stabilizer group, so the outcome is its sign.
    BitVector s(n);
    for (std::size_t j = 0; j < n; ++j)
      if (!obs.commutes(destab_[j])) s.set(j, true);
    const PauliString prod = row_product(RowSelector{s, RowKind::Stabilizer});
    const unsigned rel = (obs.phase() + 4u - prod.phase()) & 3u;
    res.outcome = rel == 0 ? 1 : -1;
    res.deterministic = true;
    if (forced && *forced != res.outcome)
      throw Error(ErrorCode::kContradiction, "forced outcome contradicts deterministic measurement of " + obs.str());
    return res;
  }

  int outcome = forced ? *forced : ((rng() & 1u) ? -1 : 1);
  const PauliString pivot = stab_[k];
  for (std::size_t j = 0; j < n; ++j) {
    if (j != k && !obs.commutes(stab_[j])) stab_[j] *= pivot;
    if (j != k && !obs.commutes(destab_[j])) destab_[j] *= pivot;
  }
  destab_[k] = pivot;
  PauliString s_new = obs;
  if (outcome == -1) s_new.add_phase(2);
  stab_[k] = std::move(s_new);

  res.outcome = outcome;
  res.deterministic = false;
  res.pivot = k;
  return res;
}

Tableau Tableau::inverse() const {
  const std::size_t n = num_qubits();
  Tableau inv(n);
  for (std::size_t j = 0; j < n; ++j) {
    inv.destab_[j] = conjugate_by_inverse(PauliString::single(n, j, 'X'));
    inv.stab_[j] = conjugate_by_inverse(PauliString::single(n, j, 'Z'));
  }
  return inv;
}

bool Tableau::is_valid() const {
  const std::size_t n = num_qubits();
  if (n == 0 || stab_.size() != n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!destab_[i].is_hermitian() || !stab_[i].is_hermitian()) return false;
    if (destab_[i].num_qubits() != n || stab_[i].num_qubits() != n) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!destab_[i].commutes(destab_[j])) return false;
      if (!stab_[i].commutes(stab_[j])) return false;
      if (destab_[i].commutes(stab_[j]) != (i != j)) return false;
    }
  }
  // GF(2) rank of the 2n x 2n symplectic matrix.
  std::vector<BitVector> rows;
  rows.reserve(2 * n);
  auto pack = [n](const PauliString& p) {
    BitVector v(2 * n);
    for (std::size_t q = 0; q < n; ++q) {
      v.set(q, p.x(q));
      v.set(n + q, p.z(q));
    }
    return v;
  };
  for (const auto& r : destab_) rows.push_back(pack(r));
  for (const auto& r : stab_) rows.push_back(pack(r));
  std::size_t rank = 0;
  for (std::size_t col = 0; col < 2 * n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && !rows[piv][col]) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][col]) rows[r] ^= rows[rank];
    ++rank;
  }
  return rank == 2 * n;
}

std::string Tableau::str() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < num_qubits(); ++j) os << "D" << j << " " << destab_[j].str() << "\n";
  for (std::size_t j = 0; j < num_qubits(); ++j) os << "S" << j << " " << stab_[j].str() << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Uniform sampling.  Draws an ordered symplectic basis (a_i, b_i) uniformly by
// choosing a_i uniformly among nonzero vectors of the symplectic complement of
// the pairs chosen so far and b_i uniformly among complement vectors with
// <a_i, b_i> = 1.  The group acts simply transitively on ordered symplectic
// bases, so this is exactly uniform over Sp(2n, F2); independent row signs
// then make it uniform over the Clifford group modulo phase.

namespace {

// <u, v> = 1 iff the Paulis anticommute.
bool symp(const PauliString& u, const PauliString& v) { return !u.commutes(v); }

void xor_bits(PauliString& acc, const PauliString& v) {
  acc.xs() ^= v.xs();
  acc.zs() ^= v.zs();
}

PauliString combination(const std::vector<PauliString>& basis, const BitVector& coeff, std::size_t n) {
  PauliString out(n);
  for (std::size_t l = 0; l < basis.size(); ++l)
    if (coeff[l]) xor_bits(out, basis[l]);
  return out;
}

BitVector random_bits(std::size_t len, Rng& rng) {
  BitVector v(len);
  auto words = v.words();
  for (auto& w : words) w = rng();
  if (len % 64) words.back() &= (std::uint64_t{1} << (len % 64)) - 1;
  return v;
}

// Removes the span of (a, b) (a symplectic pair) from v.
void project_out(PauliString& v, const PauliString& a, const PauliString& b) {
  const bool va = symp(v, a);
  const bool vb = symp(v, b);
  if (vb) xor_bits(v, a);
  if (va) xor_bits(v, b);
}

}  // namespace

Tableau random_clifford(std::size_t n, Rng& rng) {
  if (n == 0) throw DimensionError("random_clifford needs at least one qubit");
  Tableau out(n);
  std::vector<PauliString> basis;
  for (std::size_t j = 0; j < n; ++j) {
    basis.push_back(PauliString::single(n, j, 'X'));
    basis.push_back(PauliString::single(n, j, 'Z'));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t dim = basis.size();
    BitVector ca = random_bits(dim, rng);
    while (ca.none()) ca = random_bits(dim, rng);
    PauliString a = combination(basis, ca, n);
    PauliString b(n);
    do {
      b = combination(basis, random_bits(dim, rng), n);
    } while (!symp(a, b));

    // Symplectic Gram-Schmidt of the complement.
    std::vector<PauliString> rest;
    rest.reserve(dim);
    for (auto v : basis) {
      project_out(v, a, b);
      if (!v.is_identity()) rest.push_back(std::move(v));
    }
    std::vector<PauliString> next;
    while (!rest.empty()) {
      PauliString u = std::move(rest.back());
      rest.pop_back();
      if (u.is_identity()) continue;
      auto it = std::find_if(rest.begin(), rest.end(), [&](const PauliString& w) { return symp(u, w); });
      if (it == rest.end()) throw Error(ErrorCode::kInternal, "degenerate symplectic complement");
      PauliString w = std::move(*it);
      rest.erase(it);
      for (auto& v : rest) project_out(v, u, w);
      next.push_back(std::move(u));
      next.push_back(std::move(w));
    }
    basis = std::move(next);

    a.set_phase((rng() & 1u) ? 2 : 0);
    b.set_phase((rng() & 1u) ? 2 : 0);
    out.set_destabilizer(i, std::move(a));
    out.set_stabilizer(i, std::move(b));
  }
  return out;
}

XEntryStats sample_x_entry_stats(std::size_t n, std::size_t samples, Rng& rng) {
  XEntryStats st;
  std::size_t cond_hits = 0, uncond_hits = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const Tableau t = random_clifford(n, rng);
    const bool hit = t.stabilizer(0).x(0);
    bool column_has_x = false;
    for (std::size_t r = 0; r < n && !column_has_x; ++r) column_has_x = t.stabilizer(r).x(0);
    ++st.unconditional_trials;
    uncond_hits += hit;
    if (column_has_x) {
      ++st.conditional_trials;
      cond_hits += hit;
    }
  }
  if (st.unconditional_trials) st.unconditional = static_cast<double>(uncond_hits) / st.unconditional_trials;
  if (st.conditional_trials) st.conditional = static_cast<double>(cond_hits) / st.conditional_trials;
  return st;
}

// ---------------------------------------------------------------------------
// Synthesis.  Reduces a working copy to the identity tableau one qubit at a
// time by left-multiplying gates (g C), then returns the reversed inverses.

namespace {

class Reducer {
 public:
  explicit Reducer(Tableau t) : work_(std::move(t)) {}

  void h(std::size_t q) {
    work_.h(q);
    log_.push_back({CliffordGate::H, q});
  }
  void s(std::size_t q) {
    work_.s(q);
    log_.push_back({CliffordGate::S, q});
  }
  void cx(std::size_t c, std::size_t t) {
    work_.cx(c, t);
    log_.push_back({CliffordGate::CX, c, t});
  }

  void run() {
    const std::size_t n = work_.num_qubits();
    for (std::size_t i = 0; i < n; ++i) {
      reduce_destabilizer(i);
      reduce_stabilizer(i);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (work_.destabilizer(j).sign() < 0) {  // Z flips X_j
        s(j);
        s(j);
      }
      if (work_.stabilizer(j).sign() < 0) {  // X flips Z_j
        h(j);
        s(j);
        s(j);
        h(j);
      }
    }
    if (work_ != Tableau(n)) throw Error(ErrorCode::kInternal, "clifford synthesis did not reach identity");
  }

  std::vector<SynthGate> circuit() const {
    std::vector<SynthGate> out;
    for (auto it = log_.rbegin(); it != log_.rend(); ++it) {
      if (it->gate == CliffordGate::S) {
        out.insert(out.end(), 3, *it);
      } else {
        out.push_back(*it);
      }
    }
    return out;
  }

 private:
  void reduce_destabilizer(std::size_t i) {
    const std::size_t n = work_.num_qubits();
    for (std::size_t j = i; j < n; ++j) {
      const char l = work_.destabilizer(i).letter(j);
      if (l == 'Z') h(j);
      if (l == 'Y') s(j);  // Y -> -X
    }
    if (!work_.destabilizer(i).x(i)) {
      std::size_t j = i + 1;
      while (j < n && !work_.destabilizer(i).x(j)) ++j;
      if (j == n) throw Error(ErrorCode::kInvalidArgument, "tableau is not a valid Clifford");
      cx(j, i);
    }
    for (std::size_t j = i + 1; j < n; ++j)
      if (work_.destabilizer(i).x(j)) cx(i, j);
  }

  void reduce_stabilizer(std::size_t i) {
    const std::size_t n = work_.num_qubits();
    const char li = work_.stabilizer(i).letter(i);
    if (li == 'Y') {  // sqrt(X): fixes X, Y -> Z
      h(i);
      s(i);
      h(i);
    } else if (li != 'Z') {
      throw Error(ErrorCode::kInvalidArgument, "tableau is not a valid Clifford");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const char l = work_.stabilizer(i).letter(j);
      if (l == 'X') h(j);
      if (l == 'Y') {
        s(j);
        h(j);
      }
    }
    for (std::size_t j = i + 1; j < n; ++j)
      if (work_.stabilizer(i).z(j)) cx(j, i);
  }

  Tableau work_;
  std::vector<SynthGate> log_;
};

}  // namespace

std::vector<SynthGate> synthesize_clifford(const Tableau& t) {
  if (!t.is_valid()) throw Error(ErrorCode::kInvalidArgument, "cannot synthesize an invalid tableau");
  Reducer r(t);
  r.run();
  return r.circuit();
}

}  // namespace stn
