#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stn/error.hpp"
#include "stn/stn_state.hpp"
#include "support/oracle.hpp"

using stn::CliffordGate;
using stn::PauliString;
using stn::STNState;

namespace {

oracle::Vec physical(const STNState& s) { return oracle::materialize(s.tableau(), s.mps().to_dense()); }

PauliString random_hermitian(std::size_t n, std::mt19937_64& rng) {
  PauliString p(n);
  for (std::size_t q = 0; q < n; ++q) p.set_bits(q, rng() & 1, rng() & 1);
  p.set_phase(static_cast<std::uint8_t>(2 * (rng() & 1)));
  return p;
}

void random_clifford_layer(STNState& s, oracle::Vec& psi, std::mt19937_64& rng, std::size_t count) {
  const std::size_t n = s.num_qubits();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t a = rng() % n;
    std::size_t b = rng() % n;
    while (n > 1 && b == a) b = rng() % n;
    switch (rng() % 4) {
      case 0:
        s.apply_clifford(CliffordGate::H, {a});
        oracle::apply(psi, oracle::gate_matrix(stn::GateKind::H), {a});
        break;
      case 1:
        s.apply_clifford(CliffordGate::S, {a});
        oracle::apply(psi, oracle::gate_matrix(stn::GateKind::S), {a});
        break;
      default:
        if (n == 1) break;
        s.apply_clifford(CliffordGate::CX, {a, b});
        oracle::apply(psi, oracle::gate_matrix(stn::GateKind::CX), {a, b});
        break;
    }
  }
}

}  // namespace

TEST(StnState, CliffordsNeverTouchTheMps) {
  std::mt19937_64 rng(41);
  STNState s(6);
  oracle::Vec psi = oracle::zero_state(6);
  const auto before = s.mps().to_dense();
  random_clifford_layer(s, psi, rng, 200);
  EXPECT_EQ(s.max_bond(), 1u);
  EXPECT_TRUE(s.trace().samples.empty());
  EXPECT_EQ(s.mps().to_dense(), before);
  EXPECT_NEAR(oracle::fidelity(physical(s), psi), 1.0, 1e-12);
}

TEST(StnState, RotationsMatchOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    STNState s(n);
    oracle::Vec psi = oracle::zero_state(n);
    for (int layer = 0; layer < 5; ++layer) {
      random_clifford_layer(s, psi, rng, 8);
      const auto axis = random_hermitian(n, rng);
      if (axis.is_identity()) continue;
      const double angle = std::uniform_real_distribution<double>(-3, 3)(rng);
      s.apply_rotation(axis, angle, {});
      const oracle::Mat p = oracle::pauli_matrix(axis);
      const oracle::Mat u = std::cos(angle / 2) * oracle::Mat::Identity(1 << n, 1 << n) -
                            oracle::I1 * std::sin(angle / 2) * p;
      psi = u * psi;
    }
    ASSERT_GT(oracle::fidelity(physical(s), psi), 1 - 1e-10) << "trial " << trial;
  }
}

TEST(StnState, ExpectationMatchesOracle) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    STNState s(n);
    oracle::Vec psi = oracle::zero_state(n);
    for (int layer = 0; layer < 4; ++layer) {
      random_clifford_layer(s, psi, rng, 6);
      const std::size_t q = rng() % n;
      s.apply_rotation(PauliString::single(n, q, 'Z'), M_PI / 4, {});
      oracle::apply(psi, oracle::gate_matrix(stn::GateKind::T), {q});
    }
    const auto obs = random_hermitian(n, rng);
    const double expect = psi.dot(oracle::pauli_matrix(obs) * psi).real();
    ASSERT_NEAR(s.expectation(obs), expect, 1e-10);
  }
}

TEST(StnState, MeasurementMatchesOracleBranches) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    STNState s(n);
    oracle::Vec psi = oracle::zero_state(n);
    random_clifford_layer(s, psi, rng, 10);
    for (int k = 0; k < 3; ++k) {
      const std::size_t q = rng() % n;
      s.apply_rotation(PauliString::single(n, q, 'Z'), 0.7, {});
      oracle::apply(psi, oracle::rz(0.7), {q});
      random_clifford_layer(s, psi, rng, 5);
    }
    const auto obs = random_hermitian(n, rng);
    if (obs.is_identity()) continue;
    const oracle::Mat p = oracle::pauli_matrix(obs);
    const double ev = psi.dot(p * psi).real();
    const double p_plus = (1 + ev) / 2;
    const int forced = p_plus > 0.5 ? 1 : -1;
    stn::Rng mrng(trial);
    const auto m = s.measure(obs, forced, mrng, {});
    ASSERT_EQ(m.outcome, forced);
    ASSERT_NEAR(m.probability, forced == 1 ? p_plus : 1 - p_plus, 1e-10);
    const oracle::Mat proj = (oracle::Mat::Identity(1 << n, 1 << n) + forced * p) / 2;
    const oracle::Vec post = proj * psi;
    ASSERT_GT(oracle::fidelity(physical(s), post), 1 - 1e-10) << "trial " << trial;
    // Repeating the measurement is deterministic with the same outcome.
    const auto again = s.measure(obs, std::nullopt, mrng, {});
    ASSERT_EQ(again.outcome, forced);
    ASSERT_NEAR(again.probability, 1.0, 1e-10);
  }
}

TEST(StnState, SampledOutcomeFrequencies) {
  // H T H|0> has <Z> = cos(pi/4); sampled +1 frequency should follow.
  std::size_t plus = 0;
  const std::size_t shots = 4000;
  stn::Rng rng(45);
  for (std::size_t i = 0; i < shots; ++i) {
    STNState s(1);
    s.apply_clifford(CliffordGate::H, {0});
    s.apply_rotation(PauliString::parse("Z"), M_PI / 4, {});
    s.apply_clifford(CliffordGate::H, {0});
    plus += s.measure(PauliString::parse("Z"), std::nullopt, rng, {}).outcome == 1;
  }
  const double p = (1 + std::cos(M_PI / 4)) / 2;
  const double sigma = std::sqrt(p * (1 - p) / shots);
  EXPECT_NEAR(static_cast<double>(plus) / shots, p, 3 * sigma);
}

TEST(StnState, ImpossibleForcedOutcomeThrows) {
  STNState s(2);
  stn::Rng rng(1);
  try {
    s.measure(PauliString::parse("ZI"), -1, rng, {});
    FAIL() << "expected an error";
  } catch (const stn::Error& e) {
    EXPECT_TRUE(e.code() == stn::ErrorCode::kImpossibleOutcome || e.code() == stn::ErrorCode::kContradiction);
  }
}

TEST(StnState, StaleDecompositionRejected) {
  STNState s(2);
  const auto dec = s.decompose_rotation(PauliString::parse("ZI"), M_PI / 4);
  s.apply_clifford(CliffordGate::H, {0});
  try {
    s.apply_nonclifford(dec, {});
    FAIL() << "expected an error";
  } catch (const stn::Error& e) {
    EXPECT_EQ(e.code(), stn::ErrorCode::kStale);
  }
}

TEST(StnState, RotationAngleDoesNotChangeTheTrace) {
  const std::size_t n = 6;
  auto run = [&](bool random_angles) {
    std::mt19937_64 skeleton(46);
    std::mt19937_64 angles(47);
    STNState s(n);
    oracle::Vec scratch = oracle::zero_state(n);
    for (int layer = 0; layer < 12; ++layer) {
      random_clifford_layer(s, scratch, skeleton, 10);
      const std::size_t q = skeleton() % n;
      const double theta = random_angles ? std::uniform_real_distribution<double>(0.1, 6.0)(angles) : M_PI / 4;
      s.apply_rotation(PauliString::single(n, q, 'Z'), theta, {});
    }
    return s.trace();
  };
  const auto t_gates = run(false);
  const auto rz_gates = run(true);
  EXPECT_EQ(t_gates.samples.size(), 12u);
  EXPECT_EQ(t_gates, rz_gates);
}
