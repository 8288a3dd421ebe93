#include <gtest/gtest.h>

#include <cmath>

#include "greedex/analysis.hpp"
#include "greedex/counterexample.hpp"
#include "support.hpp"

using namespace greedex;

TEST(ChooseK, Examples) {
  EXPECT_EQ(choose_k(0.5), 2u);
  EXPECT_EQ(choose_k(0.1), 2u);
  EXPECT_EQ(choose_k(0.9), testsupport::scan_k(0.9));
  EXPECT_EQ(choose_k(0.9), 12u);
  EXPECT_THROW(choose_k(1.0), Error);
  EXPECT_THROW(choose_k(0.0), Error);
}

TEST(ChooseK, AgreesWithScanOracle) {
  for (double t = 0.01; t < 0.99; t += 0.0137) EXPECT_EQ(choose_k(t), testsupport::scan_k(t)) << t;
}

TEST(Config, Validation) {
  EXPECT_NO_THROW(make_counterexample_config(0.5, 6));
  EXPECT_THROW(make_counterexample_config(1.0, 3), Error);
  EXPECT_THROW(make_counterexample_config(-0.2, 3), Error);
  EXPECT_THROW(make_counterexample_config(0.5, 0), Error);
  EXPECT_THROW(make_counterexample_config(0.5, 3, 1u), Error);
  EXPECT_THROW(make_counterexample_config(0.9, 3, 5u), Error);  // 0.9^5 > 1/sqrt(5)
  EXPECT_NO_THROW(make_counterexample_config(0.5, 3, 5u));
}

TEST(BuildTarget, GroupStructure) {
  auto one = build_target({0.5, 2, 1});
  EXPECT_EQ(one, (SparseVector{{1, 0.25}, {2, 0.25}}));
  EXPECT_EQ(norm_squared(one), 0.125);

  auto two = build_target({0.5, 2, 2});
  EXPECT_EQ(two, (SparseVector{{1, 0.25}, {2, 0.25}, {3, 0.125}, {4, 0.125}, {5, 0.125}}));

  auto big = build_target({0.5, 2, 6});
  EXPECT_EQ(big.size(), 2u + 3 + 4 + 5 + 6 + 7);
  EXPECT_EQ(group_offset({0.5, 2, 6}, 3), 10u);
}

TEST(BuildPlan, FirstGroupByHand) {
  auto plan = build_plan({0.5, 2, 1});
  // flip: 0.25 -> -0.5 with c = 0.25 (1 + 2) = 0.75; modulus 0.5 lies in
  // [0.5/sqrt(2), 1/sqrt(2)], so a single pass.
  ASSERT_GE(plan.size(), 2u);
  EXPECT_EQ(plan.coefficients[0], 0.75);
  EXPECT_EQ(plan.coefficients[1], 0.75);
  EXPECT_EQ(plan.selections[0], AtomId::basis(1));
  EXPECT_EQ(plan.selections[1], AtomId::basis(2));
  ASSERT_EQ(plan.marks.size(), 1u);
  EXPECT_EQ(plan.marks[0].flip_passes, 1u);
  // saturation: -0.5 -> +1/sqrt(2) via -e_i, c = 0.5 + 1/sqrt(2)
  EXPECT_EQ(plan.selections[2], AtomId::basis(1, true));
  EXPECT_NEAR(plan.coefficients[2], 0.5 + 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(plan.marks[0].subnorm_one_step, 4u);
  // zeroing
  EXPECT_EQ(plan.coefficients[4], 1.0 / std::sqrt(2.0));
  EXPECT_EQ(plan.coefficients[5], 1.0 / std::sqrt(2.0));
  EXPECT_EQ(plan.selections[4], AtomId::basis(1));
  EXPECT_EQ(plan.marks[0].zeroed_step, 6u);
  EXPECT_EQ(plan.size(), 6u);
}

TEST(BuildPlan, FlipPassCountIsAnalytic) {
  // r(h): the unique r with t^(h - r) in [t/sqrt(h), 1/sqrt(h)].
  for (double t : {0.3, 0.5, 0.7, 0.9}) {
    const unsigned k = choose_k(t);
    CounterexampleConfig cfg{t, k, 4};
    auto plan = build_plan(cfg);
    for (const auto& m : plan.marks) {
      const double h = m.h;
      unsigned r = 0;
      while (std::pow(t, h - r) < t / std::sqrt(h) * (1.0 - 1e-12)) ++r;
      EXPECT_EQ(m.flip_passes, r) << "t=" << t << " h=" << m.h;
    }
  }
}

TEST(BuildPlan, CoefficientBoundsPerGroup) {
  for (double t : {0.2, 0.5, 0.8, 0.9}) {
    CounterexampleConfig cfg{t, choose_k(t), 5};
    auto plan = build_plan(cfg);
    std::vector<bool> has_exact(cfg.num_groups, false);
    for (std::size_t i = 0; i < plan.size(); ++i) {
      const unsigned j = plan.group_of_step[i];
      const double h = cfg.k + j;
      EXPECT_LE(plan.coefficients[i], 2.0 / std::sqrt(h) + 1e-12);
      EXPECT_GT(plan.coefficients[i], 0.0);
      if (plan.coefficients[i] == 1.0 / std::sqrt(h)) has_exact[j] = true;
    }
    for (unsigned j = 0; j < cfg.num_groups; ++j) EXPECT_TRUE(has_exact[j]) << "t=" << t << " group " << j;
  }
}

TEST(RunCounterexample, HalfWithFourGroups) {
  auto r = run_counterexample({0.5, 2, 4});
  ASSERT_NE(r.trace.status.outcome, Outcome::Aborted) << r.trace.status.message;
  ASSERT_EQ(r.trace.steps.size(), r.plan.size());
  auto marks = mark_reports(r);
  ASSERT_EQ(marks.size(), 4u);
  for (const auto& m : marks) {
    EXPECT_TRUE(m.reached);
    EXPECT_GE(m.residual_at_mark, 1.0 - 1e-9);
    EXPECT_NEAR(m.group_subnorm, 1.0, 1e-9);
    EXPECT_NEAR(m.residual_at_zeroed, testsupport::analytic_tail(0.5, 2, 4, m.group), 1e-9);
  }
  EXPECT_TRUE(verify_energy_identity(r.trace, 1e-10).all_passed());
  auto gc = verify_greedy_condition(r.trace, 1e-12);
  EXPECT_TRUE(gc.all_passed());
  EXPECT_LE(gc.checks[0].worst_violation, 1e-12);
}

TEST(RunCounterexample, FlipStepsSitOnTheBoundary) {
  auto r = run_counterexample({0.5, 2, 3});
  std::size_t equal_steps = 0;
  for (const auto& s : r.trace.steps) {
    if (s.ip == s.t * s.sup) ++equal_steps;
  }
  EXPECT_GT(equal_steps, 0u);
}

TEST(RunCounterexample, LiminfAndLimsupProxies) {
  auto r = run_counterexample({0.5, 2, 6});
  const auto& marks = r.plan.marks;
  auto ex = residual_extrema(r.trace, 0);
  double prev = INFINITY;
  for (const auto& m : marks) {
    const double tail = testsupport::analytic_tail(0.5, 2, 6, m.group);
    EXPECT_NEAR(ex.running_min[m.zeroed_step - 1], tail, 1e-9);
    EXPECT_LT(tail, prev);
    prev = tail;
  }
  auto after = residual_extrema(r.trace, marks.front().subnorm_one_step - 1);
  EXPECT_GE(after.running_max.back(), 1.0 - 1e-9);
  EXPECT_GE(after.running_max.front(), 1.0 - 1e-9);
}

TEST(RunCounterexample, CoefficientSumGrowsLikeSqrtH) {
  CounterexampleConfig cfg{0.5, 2, 6};
  auto plan = build_plan(cfg);
  double sum = 0.0, bound = 0.0;
  for (double c : plan.coefficients) sum += c;
  for (unsigned j = 0; j < cfg.num_groups; ++j) bound += std::sqrt(static_cast<double>(cfg.k + j));
  EXPECT_GE(sum, bound);
}

TEST(RunCounterexample, VariousWeakeningParameters) {
  for (double t : {0.1, 0.3, 0.6, 0.75, 0.9}) {
    const unsigned groups = t > 0.8 ? 3 : 5;
    auto r = run_counterexample(make_counterexample_config(t, groups));
    ASSERT_NE(r.trace.status.outcome, Outcome::Aborted) << "t=" << t << ": " << r.trace.status.message;
    for (const auto& m : mark_reports(r)) {
      EXPECT_GE(m.residual_at_mark, 1.0 - 1e-9) << "t=" << t;
      EXPECT_NEAR(m.residual_at_zeroed, m.expected_tail, 1e-9) << "t=" << t;
    }
    EXPECT_TRUE(verify_greedy_condition(r.trace, 1e-12).all_passed()) << "t=" << t;
  }
}

TEST(RunCounterexample, TruncatedBudget) {
  auto r = run_counterexample({0.5, 2, 3}, 5);
  EXPECT_EQ(r.trace.steps.size(), 5u);
  auto marks = mark_reports(r);
  EXPECT_FALSE(marks[0].reached);
  EXPECT_FALSE(marks[1].reached);
}

TEST(RunCounterexample, ExactZeroingWhereSaturationIsExact) {
  auto r = run_counterexample({0.5, 2, 6});
  for (const auto& m : r.plan.marks) {
    if (!m.exact_zeroing) continue;
    const auto off = group_offset(r.config, m.group);
    for (unsigned i = 0; i < m.h; ++i) EXPECT_EQ(r.trace.remainder.value(off + i), 0.0);
  }
}
