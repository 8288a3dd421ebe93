#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "greedex/analysis.hpp"
#include "support.hpp"

using namespace greedex;

namespace {

Trace harmonic_run(const SparseVector& f, const Dictionary& d, std::size_t steps, double t = 1.0) {
  return run(f, d, CoefficientSequence::harmonic(), WeakeningSequence::constant(t), MaxGreedy{}, steps);
}

Dictionary pm_basis(std::size_t dim) {
  std::vector<SparseVector> atoms;
  for (std::size_t i = 1; i <= dim; ++i) atoms.push_back(basis(i));
  return make_finite(atoms);
}

StepRecord forged(std::size_t m, double c, double t, double ip, double sup, double res) {
  StepRecord s;
  s.m = m;
  s.c = c;
  s.t = t;
  s.ip = ip;
  s.sup = sup;
  s.residual_norm = res;
  return s;
}

}  // namespace

TEST(EnergyIdentity, EngineTracePasses) {
  testsupport::Gen g(41);
  auto d = make_finite(testsupport::to_sparse(g.spanning_atoms(4, 7)));
  auto tr = harmonic_run(g.sparse(4, 4), d, 2000);
  auto rep = verify_energy_identity(tr, 1e-10);
  ASSERT_EQ(rep.checks.size(), 1u);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_EQ(rep.checks[0].steps_checked, 2000u);
  EXPECT_GT(rep.checks[0].worst_step, 0u);
}

TEST(EnergyIdentity, PerturbedStepFails) {
  testsupport::Gen g(42);
  auto d = make_finite(testsupport::to_sparse(g.spanning_atoms(3, 5)));
  auto tr = harmonic_run(g.sparse(3, 3), d, 100);
  tr.steps[36].residual_norm += 1e-3;
  auto rep = verify_energy_identity(tr, 1e-10);
  EXPECT_FALSE(rep.all_passed());
  EXPECT_EQ(rep.checks[0].first_failure_step, 37u);
}

TEST(EnergyIdentity, SingleStepByHand) {
  Trace tr;
  tr.initial_norm = 1.0;
  tr.steps.push_back(forged(1, 1.0, 1.0, 1.0, 1.0, 0.0));
  auto rep = verify_energy_identity(tr, 1e-10);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_EQ(rep.checks[0].worst_violation, 0.0);
}

TEST(EnergyIdentity, UnknownInitialNormSkipsFirstStep) {
  Trace tr;
  tr.initial_norm = std::numeric_limits<double>::quiet_NaN();
  tr.steps.push_back(forged(1, 1.0, 1.0, 1.0, 1.0, 123.0));
  tr.steps.push_back(forged(2, 1.0, 1.0, 123.0, 123.0, 122.0));
  auto rep = verify_energy_identity(tr, 1e-10);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_EQ(rep.checks[0].steps_skipped, 1u);
  EXPECT_EQ(rep.checks[0].steps_checked, 1u);
}

TEST(GreedyCondition, MaxGreedyHasZeroViolation) {
  auto tr = harmonic_run(SparseVector{{1, 0.3}, {3, -0.8}}, make_symmetrized_onb(), 500);
  auto rep = verify_greedy_condition(tr, 1e-12);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_EQ(rep.checks[0].worst_violation, 0.0);
}

TEST(GreedyCondition, ForgedViolation) {
  Trace tr;
  tr.initial_norm = 1.0;
  tr.steps.push_back(forged(1, 0.1, 0.5, 0.4, 1.0, 0.95));
  auto rep = verify_greedy_condition(tr, 1e-12);
  EXPECT_FALSE(rep.all_passed());
  EXPECT_NEAR(rep.checks[0].worst_violation, 0.1, 1e-15);
  EXPECT_EQ(rep.checks[0].first_failure_step, 1u);
}

TEST(Descent, RandomFiniteWithEstimatedConstant) {
  testsupport::Gen g(43);
  auto d = make_finite(testsupport::to_sparse(g.spanning_atoms(3, 8)));
  auto c = estimate_coherence(d, 100'000, 7);
  auto tr = harmonic_run(from_dense(g.gaussian(3)), d, 20'000);
  const double eps = 0.2;
  auto rep = verify_descent_inequality(tr, c, eps, 1);
  EXPECT_TRUE(rep.all_passed()) << rep.checks[0].note;
}

// +-e_i in R^d has c = 1/sqrt(d) exactly, so the check is a hard assertion.
TEST(Descent, ExactConstantOnSignedBasis) {
  testsupport::Gen g(44);
  for (std::size_t dim = 2; dim <= 5; ++dim) {
    auto d = pm_basis(dim);
    const CoherenceEstimate exact{1.0 / std::sqrt(static_cast<double>(dim)), 0, 0};
    for (int trial = 0; trial < 5; ++trial) {
      // A large target keeps |f_n| above eps / c once the window opens.
      auto x = g.gaussian(dim);
      for (auto& v : x) v *= 20.0;
      auto tr = run(from_dense(x), d, CoefficientSequence::power(0.7), WeakeningSequence::constant(0.6),
                    WeakestAdmissible{}, 5000);
      auto rep = verify_descent_inequality(tr, exact, 0.3, 1);
      EXPECT_TRUE(rep.all_passed()) << "dim " << dim << ": " << rep.checks[0].note;
      EXPECT_GT(rep.checks[0].steps_checked, 0u);
    }
  }
}

TEST(Descent, StepsBelowThresholdAreSkipped) {
  auto d = pm_basis(2);
  auto tr = harmonic_run(SparseVector{{1, 0.6}, {2, 0.8}}, d, 5000);
  auto rep = verify_descent_inequality(tr, CoherenceEstimate{std::sqrt(0.5), 0, 0}, 0.05, 1);
  EXPECT_GT(rep.checks[0].steps_skipped, 0u);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Descent, LargeEpsIsVacuous) {
  auto d = pm_basis(2);
  auto tr = harmonic_run(SparseVector{{1, 0.6}, {2, 0.8}}, d, 200);
  const CoherenceEstimate c{std::sqrt(0.5), 0, 0};
  auto rep = verify_descent_inequality(tr, c, 10.0 * c.value * tr.initial_norm, 1);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_FALSE(rep.checks[0].applicable);
  EXPECT_EQ(rep.checks[0].steps_checked, 0u);
}

TEST(Descent, EmptyWindowIsPreconditionUnmet) {
  auto d = pm_basis(2);
  auto tr = run(SparseVector{{1, 5.0}}, d, CoefficientSequence::explicit_values({1, 1, 1}),
                WeakeningSequence::constant(1.0), MaxGreedy{}, 3);
  try {
    verify_descent_inequality(tr, CoherenceEstimate{std::sqrt(0.5), 0, 0}, 0.1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionUnmet);
  }
}

TEST(BlockPartition, NotApplicableWithoutBlocks) {
  auto tr = harmonic_run(basis(1), make_symmetrized_onb(), 10);
  auto rep = verify_block_partition(tr);
  EXPECT_FALSE(rep.checks[0].applicable);
  EXPECT_TRUE(rep.all_passed());
}

TEST(BlockPartition, MissingAttributionFails) {
  Trace tr;
  tr.steps.push_back(forged(1, 1, 1, 1, 1, 1));
  tr.steps.back().block = 1;
  tr.steps.push_back(forged(2, 1, 1, 1, 1, 1));
  auto rep = verify_block_partition(tr);
  EXPECT_FALSE(rep.all_passed());
  EXPECT_EQ(rep.checks[0].first_failure_step, 2u);
}

TEST(ResidualExtrema, ConvergentOnbRun) {
  SparseVector f;
  {
    std::vector<Entry> e;
    for (unsigned i = 1; i <= 20; ++i) e.push_back({i, std::ldexp(1.0, -static_cast<int>(i))});
    f = SparseVector(std::move(e));
  }
  auto tr = harmonic_run(f, make_symmetrized_onb(), 100'000);
  auto ex = residual_extrema(tr, 0);
  ASSERT_EQ(ex.running_min.size(), tr.steps.size());
  for (std::size_t i = 1; i < ex.running_min.size(); ++i) {
    EXPECT_LE(ex.running_min[i], ex.running_min[i - 1]);
    EXPECT_GE(ex.running_max[i], ex.running_max[i - 1]);
  }
  EXPECT_LT(ex.running_min.back(), 0.05);
}

TEST(ResidualExtrema, IncompleteDictionaryIsFlat) {
  auto tr = harmonic_run(SparseVector{{1, 1.0}, {2, 1.0}}, make_finite({basis(1)}), 1000);
  auto ex = residual_extrema(tr, 500);
  EXPECT_NEAR(ex.running_min.back(), 1.0, 1e-5);
  EXPECT_NEAR(ex.running_max.back(), 1.0, 1e-5);
  EXPECT_THROW(residual_extrema(tr, 1000), Error);
}

TEST(Reports, PureFunctionsOfTrace) {
  testsupport::Gen g(45);
  auto d = make_finite(testsupport::to_sparse(g.spanning_atoms(3, 6)));
  auto tr = harmonic_run(g.sparse(3, 3), d, 300, 0.8);
  auto a = verify_energy_identity(tr, 1e-10);
  auto b = verify_energy_identity(tr, 1e-10);
  EXPECT_EQ(a.checks[0].worst_violation, b.checks[0].worst_violation);
  EXPECT_EQ(a.checks[0].worst_step, b.checks[0].worst_step);
}
