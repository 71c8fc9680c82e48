#include "stn/mps.hpp"

#include <algorithm>
#include <cmath>

#include "stn/error.hpp"

namespace stn {

using Eigen::MatrixXcd;

void TruncationPolicy::validate() const {
  if (!(svd_cutoff >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "svd cutoff must be non-negative");
}

void BondTrace::record(std::size_t step, std::size_t chi) {
  if (chi == 0) throw Error(ErrorCode::kInvalidArgument, "bond dimension must be positive");
  if (!samples.empty() && step <= samples.back().step)
    throw Error(ErrorCode::kInvalidArgument, "bond trace steps must be strictly increasing");
  samples.push_back({step, chi});
}

std::size_t BondTrace::peak() const {
  std::size_t p = 1;
  for (const auto& s : samples) p = std::max(p, s.chi);
  return p;
}

Eigen::Matrix2cd pauli_matrix(char letter) {
  Eigen::Matrix2cd m;
  switch (letter) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, cplx(0, -1), cplx(0, 1), 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw Error(ErrorCode::kInvalidArgument, std::string("invalid Pauli letter '") + letter + "'");
  }
  return m;
}

namespace {

constexpr double kUnitaryTol = 1e-12;
constexpr double kMinProbability = 1e-12;

template <typename M>
bool is_unitary(const M& u) {
  using Mat = Eigen::Matrix<cplx, M::RowsAtCompileTime, M::ColsAtCompileTime>;
  return ((u.adjoint() * u) - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= kUnitaryTol;
}

cplx unit_phase(std::uint8_t p) {
  static const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPhases[p & 3u];
}

// Number of singular values kept under the policy, with the relative
// discarded weight written to `discarded`.
Eigen::Index kept_count(const Eigen::VectorXd& s, const TruncationPolicy& policy, double& discarded) {
  const double total = s.squaredNorm();
  const double thresh = policy.svd_cutoff * std::sqrt(total);
  Eigen::Index k = 0;
  while (k < s.size() && s[k] > thresh) ++k;
  if (policy.chi_max > 0) k = std::min<Eigen::Index>(k, static_cast<Eigen::Index>(policy.chi_max));
  k = std::max<Eigen::Index>(k, 1);
  const double kept = s.head(k).squaredNorm();
  discarded = total > 0 ? (total - kept) / total : 0.0;
  return k;
}

// BDCSVD is faster for large blocks, but in Eigen 3.4 it can return NaNs or,
// on degenerate complex input, finite factors that do not reproduce the
// matrix.  Either way JacobiSVD is the fallback.
struct Svd {
  MatrixXcd u;
  Eigen::VectorXd s;
  MatrixXcd v;
};

constexpr double kSvdResidualTol = 1e-10;

Svd thin_svd(const MatrixXcd& m) {
  if (std::min(m.rows(), m.cols()) > 16) {
    Eigen::BDCSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Svd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    if (out.u.allFinite() && out.s.allFinite() && out.v.allFinite() &&
        (out.u * out.s.asDiagonal() * out.v.adjoint() - m).norm() <= kSvdResidualTol * m.norm())
      return out;
  }
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace

MatrixProductState MatrixProductState::zero_state(std::size_t n) {
  if (n == 0) throw DimensionError("MPS needs at least one site");
  std::vector<Eigen::Vector2cd> locals(n, Eigen::Vector2cd(1, 0));
  return product_state(locals);
}

MatrixProductState MatrixProductState::product_state(const std::vector<Eigen::Vector2cd>& locals) {
  if (locals.empty()) throw DimensionError("MPS needs at least one site");
  MatrixProductState m;
  m.sites_.resize(locals.size());
  for (std::size_t i = 0; i < locals.size(); ++i) {
    for (int s = 0; s < 2; ++s) m.sites_[i][s] = MatrixXcd::Constant(1, 1, locals[i][s]);
  }
  m.center_ = 0;
  m.normalize();
  return m;
}

MatrixProductState MatrixProductState::from_dense(const Eigen::VectorXcd& psi, const TruncationPolicy& policy) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < psi.size()) ++n;
  if (n == 0 || (Eigen::Index{1} << n) != psi.size()) throw DimensionError("dense vector length must be a power of two >= 2");
  MatrixProductState m;
  m.sites_.resize(n);
  // Row l is the left bond; column c encodes qubits i.. with qubit i lowest.
  MatrixXcd rest = psi.transpose();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Eigen::Index chil = rest.rows();
    const Eigen::Index cols = rest.cols() / 2;
    MatrixXcd g(2 * chil, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (int s = 0; s < 2; ++s) g.block(s * chil, c, chil, 1) = rest.col(s + 2 * c);
    const Svd svd = thin_svd(g);
    double discarded = 0;
    const Eigen::Index k = kept_count(svd.s, policy, discarded);
    for (int s = 0; s < 2; ++s) m.sites_[i][s] = svd.u.block(s * chil, 0, chil, k);
    rest = svd.s.head(k).asDiagonal() * svd.v.leftCols(k).adjoint();
  }
  for (int s = 0; s < 2; ++s) m.sites_[n - 1][s] = rest.col(s);
  m.center_ = n - 1;
  return m;
}

void MatrixProductState::check_site(std::size_t i) const {
  if (i >= sites_.size())
    throw DimensionError("site " + std::to_string(i) + " out of range for " + std::to_string(sites_.size()) + "-site MPS");
}

std::vector<std::size_t> MatrixProductState::bond_dims() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < sites_.size(); ++i) out.push_back(static_cast<std::size_t>(sites_[i][0].cols()));
  return out;
}

std::size_t MatrixProductState::max_bond() const {
  std::size_t m = 1;
  for (auto b : bond_dims()) m = std::max(m, b);
  return m;
}

void MatrixProductState::apply_local(const Eigen::Matrix2cd& op, std::size_t site) {
  check_site(site);
  Site& a = sites_[site];
  MatrixXcd b0 = op(0, 0) * a[0] + op(0, 1) * a[1];
  MatrixXcd b1 = op(1, 0) * a[0] + op(1, 1) * a[1];
  a[0] = std::move(b0);
  a[1] = std::move(b1);
  if (center_ && *center_ != site && !is_unitary(op)) center_.reset();
}

void MatrixProductState::apply_one_qubit(const Eigen::Matrix2cd& u, std::size_t site) {
  if (!is_unitary(u)) throw Error(ErrorCode::kInvalidArgument, "single-qubit gate is not unitary");
  apply_local(u, site);
}

void MatrixProductState::apply_pauli(const PauliString& p) {
  if (p.num_qubits() != num_sites()) throw DimensionError("Pauli length does not match MPS");
  for (std::size_t q = 0; q < num_sites(); ++q) {
    const char l = p.letter(q);
    if (l != 'I') apply_local(pauli_matrix(l), q);
  }
  if (p.phase() != 0) {
    const std::size_t c = center_.value_or(0);
    for (auto& m : sites_[c]) m *= unit_phase(p.phase());
  }
}

void MatrixProductState::move_center_right(std::size_t i) {
  Site& a = sites_[i];
  const Eigen::Index chil = a[0].rows(), chir = a[0].cols();
  MatrixXcd m(2 * chil, chir);
  m << a[0], a[1];
  Eigen::HouseholderQR<MatrixXcd> qr(m);
  const Eigen::Index k = std::min(2 * chil, chir);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(2 * chil, k);
  MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  a[0] = q.topRows(chil);
  a[1] = q.bottomRows(chil);
  for (auto& t : sites_[i + 1]) t = r * t;
  center_ = i + 1;
}

void MatrixProductState::move_center_left(std::size_t i) {
  Site& a = sites_[i];
  const Eigen::Index chil = a[0].rows(), chir = a[0].cols();
  MatrixXcd m(chil, 2 * chir);
  m << a[0], a[1];
  MatrixXcd md = m.adjoint();
  Eigen::HouseholderQR<MatrixXcd> qr(md);
  const Eigen::Index k = std::min(2 * chir, chil);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(2 * chir, k);
  MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  MatrixXcd qd = q.adjoint();
  a[0] = qd.leftCols(chir);
  a[1] = qd.rightCols(chir);
  MatrixXcd rd = r.adjoint();
  for (auto& t : sites_[i - 1]) t = t * rd;
  center_ = i - 1;
}

double MatrixProductState::svd_left(std::size_t i, const TruncationPolicy& policy) {
  Site& a = sites_[i];
  const Eigen::Index chil = a[0].rows(), chir = a[0].cols();
  MatrixXcd m(chil, 2 * chir);
  m << a[0], a[1];
  const Svd svd = thin_svd(m);
  double discarded = 0;
  const Eigen::Index k = kept_count(svd.s, policy, discarded);
  MatrixXcd vd = svd.v.leftCols(k).adjoint();
  a[0] = vd.leftCols(chir);
  a[1] = vd.rightCols(chir);
  MatrixXcd us = svd.u.leftCols(k) * svd.s.head(k).asDiagonal();
  for (auto& t : sites_[i - 1]) t = t * us;
  center_ = i - 1;
  return discarded;
}

void MatrixProductState::canonicalize(std::size_t center) {
  check_site(center);
  const std::size_t n = num_sites();
  if (!center_) {
    for (std::size_t i = 0; i < center; ++i) move_center_right(i);
    for (std::size_t i = n - 1; i > center; --i) move_center_left(i);
    center_ = center;
    return;
  }
  while (*center_ < center) move_center_right(*center_);
  while (*center_ > center) move_center_left(*center_);
}

void MatrixProductState::compress_range(std::size_t lo, std::size_t hi, const TruncationPolicy& policy) {
  center_ = lo;
  for (std::size_t i = lo; i < hi; ++i) move_center_right(i);
  for (std::size_t i = hi; i > lo; --i) svd_left(i, policy);
}

double MatrixProductState::truncate(const TruncationPolicy& policy) {
  policy.validate();
  const std::size_t n = num_sites();
  canonicalize(n - 1);
  double kept = 1.0;
  for (std::size_t i = n - 1; i > 0; --i) kept *= 1.0 - svd_left(i, policy);
  normalize();
  return 1.0 - kept;
}

void MatrixProductState::apply_adjacent(const Eigen::Matrix4cd& u, std::size_t i, const TruncationPolicy& policy) {
  canonicalize(i);
  const Site& a = sites_[i];
  const Site& b = sites_[i + 1];
  const Eigen::Index chil = a[0].rows(), chir = b[0].cols();
  MatrixXcd theta[2][2];
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) theta[s1][s2] = a[s1] * b[s2];
  MatrixXcd m = MatrixXcd::Zero(2 * chil, 2 * chir);
  for (int t1 = 0; t1 < 2; ++t1)
    for (int t2 = 0; t2 < 2; ++t2)
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2) {
          const cplx c = u(2 * t1 + t2, 2 * s1 + s2);
          if (c != cplx(0)) m.block(t1 * chil, t2 * chir, chil, chir) += c * theta[s1][s2];
        }
  const Svd svd = thin_svd(m);
  double discarded = 0;
  const Eigen::Index k = kept_count(svd.s, policy, discarded);
  MatrixXcd us = svd.u.leftCols(k) * svd.s.head(k).asDiagonal();
  MatrixXcd vd = svd.v.leftCols(k).adjoint();
  for (int t = 0; t < 2; ++t) {
    sites_[i][t] = us.middleRows(t * chil, chil);
    sites_[i + 1][t] = vd.middleCols(t * chir, chir);
  }
  center_ = i;
}

void MatrixProductState::apply_two_qubit(const Eigen::Matrix4cd& u, std::size_t site_a, std::size_t site_b,
                                         const TruncationPolicy& policy) {
  check_site(site_a);
  check_site(site_b);
  if (site_a == site_b) throw Error(ErrorCode::kInvalidArgument, "two-qubit gate sites must differ");
  if (!is_unitary(u)) throw Error(ErrorCode::kInvalidArgument, "two-qubit gate is not unitary");
  policy.validate();
  static const Eigen::Matrix4cd kSwap = (Eigen::Matrix4cd() << 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1).finished();
  Eigen::Matrix4cd g = u;
  std::size_t a = site_a, b = site_b;
  if (a > b) {
    g = kSwap * u * kSwap;
    std::swap(a, b);
  }
  for (std::size_t j = b - 1; j > a; --j) apply_adjacent(kSwap, j, policy);
  apply_adjacent(g, a, policy);
  for (std::size_t j = a + 1; j < b; ++j) apply_adjacent(kSwap, j, policy);
}

void MatrixProductState::apply_two_term(cplx c1, const std::vector<Eigen::Matrix2cd>& f, cplx c2,
                                        const std::vector<Eigen::Matrix2cd>& g, std::size_t lo,
                                        const TruncationPolicy& policy, bool unitary) {
  if (f.empty() || f.size() != g.size()) throw DimensionError("two-term operator factor lists must match and be non-empty");
  const std::size_t hi = lo + f.size() - 1;
  check_site(hi);
  policy.validate();
  canonicalize(lo);

  auto local = [](const Eigen::Matrix2cd& op, const Site& a, int t) -> MatrixXcd {
    return op(t, 0) * a[0] + op(t, 1) * a[1];
  };

  if (lo == hi) {
    const Eigen::Matrix2cd op = c1 * f[0] + c2 * g[0];
    const Site a = sites_[lo];
    for (int t = 0; t < 2; ++t) sites_[lo][t] = local(op, a, t);
  } else {
    for (std::size_t i = lo; i <= hi; ++i) {
      const Site a = sites_[i];
      const Eigen::Index r = a[0].rows(), c = a[0].cols();
      const std::size_t j = i - lo;
      for (int t = 0; t < 2; ++t) {
        MatrixXcd fa = local(f[j], a, t);
        MatrixXcd ga = local(g[j], a, t);
        MatrixXcd out;
        if (i == lo) {
          out.resize(r, 2 * c);
          out << c1 * fa, c2 * ga;
        } else if (i == hi) {
          out.resize(2 * r, c);
          out << fa, ga;
        } else {
          out = MatrixXcd::Zero(2 * r, 2 * c);
          out.topLeftCorner(r, c) = fa;
          out.bottomRightCorner(r, c) = ga;
        }
        sites_[i][t] = std::move(out);
      }
    }
  }
  center_ = lo;

  if (unitary) {
    if (hi > lo) compress_range(lo, hi, policy);
  } else {
    canonicalize(num_sites() - 1);
    for (std::size_t i = num_sites() - 1; i > 0; --i) svd_left(i, policy);
  }
}

void MatrixProductState::apply_pauli_rotation(const PauliString& axis, double theta, double alpha,
                                              const TruncationPolicy& policy) {
  if (axis.num_qubits() != num_sites()) throw DimensionError("rotation axis length does not match MPS");
  if (axis.is_identity()) throw Error(ErrorCode::kInvalidArgument, "rotation axis must not be the identity");
  const auto support = axis.support();
  const std::size_t lo = support.front(), hi = support.back();
  std::vector<Eigen::Matrix2cd> f(hi - lo + 1, Eigen::Matrix2cd::Identity());
  std::vector<Eigen::Matrix2cd> g(hi - lo + 1);
  for (std::size_t q = lo; q <= hi; ++q) g[q - lo] = pauli_matrix(axis.letter(q));
  const cplx c1 = std::cos(theta);
  const cplx c2 = std::polar(std::sin(theta), alpha) * unit_phase(axis.phase());
  // c1 I + c2 P is unitary iff Re(c1 conj(c2)) = 0 and |c1|^2 + |c2|^2 = 1
  // (for Hermitian P; otherwise fall back to the general path).
  const bool unitary = axis.is_hermitian() && std::abs(std::real(c1 * std::conj(c2))) < 1e-14;
  apply_two_term(c1, f, c2, g, lo, policy, unitary);
}

namespace {

// Left environment contraction sum_{s',s} op[s',s] A[s']^dagger L A[s].
MatrixXcd transfer(const MatrixXcd& env, const MatrixProductState::Site& a, const Eigen::Matrix2cd* op) {
  MatrixXcd out = MatrixXcd::Zero(a[0].cols(), a[0].cols());
  for (int sp = 0; sp < 2; ++sp) {
    for (int s = 0; s < 2; ++s) {
      const cplx c = op ? (*op)(sp, s) : (sp == s ? cplx(1) : cplx(0));
      if (c == cplx(0)) continue;
      out.noalias() += c * (a[sp].adjoint() * env * a[s]);
    }
  }
  return out;
}

}  // namespace

double MatrixProductState::norm_squared() const {
  if (center_) {
    const Site& a = sites_[*center_];
    return a[0].squaredNorm() + a[1].squaredNorm();
  }
  MatrixXcd env = MatrixXcd::Ones(1, 1);
  for (const auto& a : sites_) env = transfer(env, a, nullptr);
  return env(0, 0).real();
}

void MatrixProductState::normalize() {
  const double nrm = std::sqrt(norm_squared());
  if (!(nrm > 0)) throw Error(ErrorCode::kImpossibleOutcome, "cannot normalize a zero state");
  for (auto& m : sites_[center_.value_or(0)]) m /= nrm;
}

cplx MatrixProductState::expectation(const PauliString& obs) const {
  if (obs.num_qubits() != num_sites()) throw DimensionError("observable length does not match MPS");
  MatrixXcd env = MatrixXcd::Ones(1, 1);
  for (std::size_t i = 0; i < num_sites(); ++i) {
    const char l = obs.letter(i);
    if (l == 'I') {
      env = transfer(env, sites_[i], nullptr);
    } else {
      const Eigen::Matrix2cd op = pauli_matrix(l);
      env = transfer(env, sites_[i], &op);
    }
  }
  return env(0, 0) * unit_phase(obs.phase()) / norm_squared();
}

double MatrixProductState::project_site(std::size_t site, int outcome, bool renormalize, const TruncationPolicy& policy) {
  check_site(site);
  if (outcome != 0 && outcome != 1) throw Error(ErrorCode::kInvalidArgument, "projection outcome must be 0 or 1");
  const cplx z = expectation(PauliString::single(num_sites(), site, 'Z'));
  const double prob = std::clamp((1.0 + (outcome == 0 ? 1.0 : -1.0) * z.real()) / 2.0, 0.0, 1.0);
  if (prob < kMinProbability)
    throw Error(ErrorCode::kImpossibleOutcome, "projection of site " + std::to_string(site) + " onto " +
                                                   std::to_string(outcome) + " has vanishing probability");
  Eigen::Matrix2cd proj = Eigen::Matrix2cd::Zero();
  proj(outcome, outcome) = 1;
  const std::vector<Eigen::Matrix2cd> f{proj}, g{Eigen::Matrix2cd::Zero()};
  apply_two_term(1.0, f, 0.0, g, site, policy, false);
  if (renormalize) normalize();
  return prob;
}

Eigen::VectorXcd MatrixProductState::to_dense() const {
  const std::size_t n = num_sites();
  if (n > 24) throw Error(ErrorCode::kSizeLimit, "dense conversion limited to 24 sites");
  MatrixXcd v = MatrixXcd::Ones(1, 1);  // rows: index over sites < i
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index rows = v.rows();
    MatrixXcd next(2 * rows, sites_[i][0].cols());
    next.topRows(rows) = v * sites_[i][0];
    next.bottomRows(rows) = v * sites_[i][1];
    // Row s * 2^i + r, so bit i of the index is the physical value.
    v = std::move(next);
  }
  return v.col(0);
}

}  // namespace stn
