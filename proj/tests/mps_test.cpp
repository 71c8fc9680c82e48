#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stn/error.hpp"
#include "stn/mps.hpp"
#include "support/oracle.hpp"

using stn::MatrixProductState;
using stn::TruncationPolicy;

namespace {

oracle::Vec random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  oracle::Vec v(1 << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {g(rng), g(rng)};
  return v.normalized();
}

oracle::Mat random_unitary(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  oracle::Mat a(dim, dim);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<oracle::Mat> qr(a);
  return qr.householderQ() * oracle::Mat::Identity(dim, dim);
}

void expect_close(const oracle::Vec& a, const oracle::Vec& b, double tol = 1e-10) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LT((a - b).norm(), tol);
}

}  // namespace

TEST(Mps, ZeroStateIsProduct) {
  auto m = MatrixProductState::zero_state(5);
  EXPECT_EQ(m.max_bond(), 1u);
  EXPECT_EQ(m.bond_dims(), std::vector<std::size_t>(4, 1));
  expect_close(m.to_dense(), oracle::zero_state(5));
}

TEST(Mps, DenseRoundTrip) {
  std::mt19937_64 rng(31);
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto v = random_vector(n, rng);
    const auto m = MatrixProductState::from_dense(v);
    expect_close(m.to_dense(), v);
    // Generic states saturate 2^min(i+1, n-i-1).
    const auto dims = m.bond_dims();
    for (std::size_t i = 0; i + 1 < n; ++i)
      EXPECT_EQ(dims[i], std::size_t{1} << std::min(i + 1, n - i - 1)) << "n=" << n << " bond " << i;
  }
}

TEST(Mps, GhzHasBondTwo) {
  const std::size_t n = 6;
  auto m = MatrixProductState::zero_state(n);
  const auto h = oracle::gate_matrix(stn::GateKind::H);
  m.apply_one_qubit(h, 0);
  Eigen::Matrix4cd cx = oracle::gate_matrix(stn::GateKind::CX);
  for (std::size_t q = 0; q + 1 < n; ++q) m.apply_two_qubit(cx, q, q + 1, {});
  EXPECT_EQ(m.max_bond(), 2u);
  oracle::Vec ghz = oracle::Vec::Zero(1 << n);
  ghz(0) = ghz((1 << n) - 1) = 1 / std::sqrt(2.0);
  expect_close(m.to_dense(), ghz);
}

TEST(Mps, BellTruncationDiscardsHalf) {
  auto m = MatrixProductState::zero_state(2);
  m.apply_one_qubit(oracle::gate_matrix(stn::GateKind::H), 0);
  m.apply_two_qubit(oracle::gate_matrix(stn::GateKind::CX), 0, 1, {});
  ASSERT_EQ(m.max_bond(), 2u);
  const double discarded = m.truncate({1, 1e-12});
  EXPECT_NEAR(discarded, 0.5, 1e-12);
  EXPECT_EQ(m.max_bond(), 1u);
  EXPECT_NEAR(m.norm_squared(), 1.0, 1e-12);
}

TEST(Mps, TwoQubitGatesMatchOracle) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    oracle::Vec psi = oracle::zero_state(n);
    auto m = MatrixProductState::zero_state(n);
    for (int g = 0; g < 12; ++g) {
      const std::size_t a = rng() % n;
      std::size_t b = rng() % n;
      while (b == a) b = rng() % n;
      const oracle::Mat u = random_unitary(4, rng);
      m.apply_two_qubit(u, a, b, {});
      oracle::apply(psi, u, {a, b});
    }
    expect_close(m.to_dense(), psi);
  }
}

TEST(Mps, CanonicalSitesAreIsometries) {
  std::mt19937_64 rng(33);
  auto m = MatrixProductState::from_dense(random_vector(7, rng));
  m.canonicalize(3);
  ASSERT_EQ(m.canonical_center(), std::optional<std::size_t>(3));
  for (std::size_t i = 0; i < 7; ++i) {
    const auto& s = m.site(i);
    if (i < 3) {
      const oracle::Mat g = s[0].adjoint() * s[0] + s[1].adjoint() * s[1];
      EXPECT_LT((g - oracle::Mat::Identity(g.rows(), g.cols())).norm(), 1e-10) << "left site " << i;
    } else if (i > 3) {
      const oracle::Mat g = s[0] * s[0].adjoint() + s[1] * s[1].adjoint();
      EXPECT_LT((g - oracle::Mat::Identity(g.rows(), g.cols())).norm(), 1e-10) << "right site " << i;
    }
  }
}

TEST(Mps, PauliRotationMatchesExponential) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    stn::PauliString axis(n);
    for (std::size_t q = 0; q < n; ++q) axis.set_bits(q, rng() & 1, rng() & 1);
    if (axis.is_identity()) axis.set_letter(rng() % n, 'Y');
    const double theta = std::uniform_real_distribution<double>(-3, 3)(rng);
    const double alpha = (rng() & 1) ? -M_PI / 2 : M_PI / 2;  // unitary case: cos I + i sin P
    const auto v = random_vector(n, rng);
    auto m = MatrixProductState::from_dense(v);
    m.apply_pauli_rotation(axis, theta, alpha, {});
    const oracle::Mat p = oracle::pauli_matrix(axis);
    const oracle::Mat op = std::cos(theta) * oracle::Mat::Identity(1 << n, 1 << n) +
                           std::exp(oracle::I1 * alpha) * std::sin(theta) * p;
    expect_close(m.to_dense(), op * v);
  }
}

TEST(Mps, NonUnitaryTwoTermOperator) {
  // A projector (I + P)/2 on a generic state.
  std::mt19937_64 rng(35);
  const std::size_t n = 6;
  const auto v = random_vector(n, rng);
  auto m = MatrixProductState::from_dense(v);
  const auto axis = stn::PauliString::parse("IXZYXI");
  m.apply_pauli_rotation(axis, M_PI / 4, 0.0, {});
  const oracle::Mat op =
      (oracle::Mat::Identity(1 << n, 1 << n) + oracle::pauli_matrix(axis)) * (1 / std::sqrt(2.0));
  expect_close(m.to_dense(), op * v);
}

TEST(Mps, ExpectationMatchesOracle) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const auto v = random_vector(n, rng);
    const auto m = MatrixProductState::from_dense(v);
    stn::PauliString p(n);
    for (std::size_t q = 0; q < n; ++q) p.set_bits(q, rng() & 1, rng() & 1);
    const oracle::cplx expect = v.dot(oracle::pauli_matrix(p) * v);
    EXPECT_LT(std::abs(m.expectation(p) - expect), 1e-10);
  }
}

TEST(Mps, ProjectSite) {
  std::mt19937_64 rng(37);
  const std::size_t n = 5;
  const auto v = random_vector(n, rng);
  auto m = MatrixProductState::from_dense(v);
  oracle::Vec w = v;
  const double p = oracle::project(w, 2, 1);
  EXPECT_NEAR(m.project_site(2, 1, true), p, 1e-12);
  expect_close(m.to_dense(), w);
  EXPECT_THROW(m.project_site(2, 0, true), stn::Error);
}

TEST(Mps, ChiCapIsHonored) {
  std::mt19937_64 rng(38);
  auto m = MatrixProductState::zero_state(8);
  for (int g = 0; g < 40; ++g) {
    const std::size_t a = rng() % 7;
    m.apply_two_qubit(random_unitary(4, rng), a, a + 1, {3, 0.0});
    ASSERT_LE(m.max_bond(), 3u);
  }
}

TEST(Mps, PolicyAndTraceValidation) {
  EXPECT_THROW((TruncationPolicy{0, -1.0}.validate()), stn::Error);
  stn::BondTrace t;
  t.record(1, 2);
  t.record(3, 4);
  EXPECT_EQ(t.peak(), 4u);
  EXPECT_THROW(t.record(3, 1), stn::Error);
  auto m = MatrixProductState::zero_state(2);
  EXPECT_THROW(m.apply_one_qubit(2.0 * Eigen::Matrix2cd::Identity(), 0), stn::Error);
  EXPECT_THROW(m.apply_two_qubit(Eigen::Matrix4cd::Identity(), 1, 1, {}), stn::Error);
}
