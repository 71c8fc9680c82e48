#include <gtest/gtest.h>

#include <random>

#include "stn/dense.hpp"
#include "stn/error.hpp"
#include "stn/mast.hpp"
#include "support/oracle.hpp"

using stn::Circuit;
using stn::GateKind;

TEST(Dense, RunMatchesTestOracle) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const Circuit c = oracle::random_circuit(n, 40, rng);
    std::mt19937_64 orng(trial);
    const auto ref = oracle::simulate(c, {}, orng);
    stn::Rng drng(trial);
    const auto got = stn::dense_run(c, {ref.outcomes.begin(), ref.outcomes.end()}, drng);
    ASSERT_GT(oracle::fidelity(got.state.amplitudes(), ref.psi), 1 - 1e-12);
    for (const auto& [idx, bit] : got.outcomes) ASSERT_EQ(bit, ref.outcomes.at(idx));
  }
}

TEST(Dense, CliffordBlocksAndCcz) {
  const Circuit c = stn::gen_t_doped({4, 3, 9});
  EXPECT_GT(oracle::fidelity(stn::dense_run(c).state.amplitudes(), oracle::simulate(c).psi), 1 - 1e-12);
  Circuit ccz(3);
  for (std::size_t q = 0; q < 3; ++q) ccz.add(GateKind::H, {q});
  ccz.add(GateKind::CCZ, {0, 1, 2});
  EXPECT_GT(oracle::fidelity(stn::dense_run(ccz).state.amplitudes(), oracle::simulate(ccz).psi), 1 - 1e-12);
}

TEST(Dense, ExpectationAndProjection) {
  stn::DenseState s(2);
  s.apply_gate({GateKind::H, {0}, 0.0, nullptr});
  s.apply_gate({GateKind::CX, {0, 1}, 0.0, nullptr});
  EXPECT_NEAR(stn::dense_expectation(s, stn::PauliString::parse("ZZ")), 1.0, 1e-12);
  EXPECT_NEAR(stn::dense_expectation(s, stn::PauliString::parse("XX")), 1.0, 1e-12);
  EXPECT_NEAR(stn::dense_expectation(s, stn::PauliString::parse("ZI")), 0.0, 1e-12);
  EXPECT_NEAR(s.prob_zero(1), 0.5, 1e-12);
  EXPECT_NEAR(s.project(1, 1), 0.5, 1e-12);
  EXPECT_NEAR(s.prob_zero(0), 0.0, 1e-12);
  EXPECT_THROW(s.project(0, 0), stn::Error);
}

TEST(Dense, SizeLimit) {
  EXPECT_THROW(stn::DenseState(stn::kDenseMaxQubits + 1), stn::Error);
  Circuit big(stn::kDenseMaxQubits + 1);
  EXPECT_THROW(stn::dense_run(big), stn::Error);
}

TEST(Dense, StnMaterializationRoutesAgree) {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const Circuit c = oracle::random_circuit(n, 30, rng, false);
    stn::Rng r(trial);
    const auto run = stn::run_stn(c, {}, r);
    const auto direct = stn::stn_to_dense(run.state);
    const auto fast = stn::stn_to_dense_fast(run.state);
    const auto ref = oracle::simulate(c).psi;
    ASSERT_GT(oracle::fidelity(direct.amplitudes(), ref), 1 - 1e-10);
    ASSERT_GT(oracle::fidelity(fast.amplitudes(), ref), 1 - 1e-10);
  }
}

TEST(Dense, RestrictToZeroAncillas) {
  Circuit c(3);
  c.add(GateKind::H, {0});
  c.add(GateKind::H, {2});
  const auto full = stn::dense_run(c).state;
  const auto kept = stn::restrict_to_zero_ancillas(full, 2);
  EXPECT_EQ(kept.num_qubits(), 2u);
  EXPECT_EQ(kept.amplitudes().size(), 4);
  EXPECT_NEAR(std::abs(kept.amplitudes()(1)), 0.5, 1e-12);
}
