#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "demigron/demi_check.hpp"
#include "demigron/generators.hpp"
#include "demigron/rng.hpp"

using namespace demigron;

TEST(Counterexample, Examples) {
  auto s = counterexample_stats(0.3, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(s.demi_expectation, 0.7);
  EXPECT_EQ(s.cond_mean_given_minus1, -2.0);
  EXPECT_EQ(counterexample_stats(0.5, 1.0, 1.0).demi_expectation, 0.0);
  EXPECT_EQ(counterexample_stats(0.5, -1.0, 1.0).demi_expectation, 1.0);
}

TEST(Counterexample, RejectsDecreasingF) {
  try {
    counterexample_stats(0.3, 1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNondecreasing);
  }
}

TEST(Counterexample, NonnegativeForHalfOrLess) {
  // demisubmartingale test functions are nonnegative
  const std::vector<double> values{0.0, 0.25, 0.5, 1.0, 3.0};
  for (int i = 0; i <= 5; ++i) {
    const double p = 0.1 * i;
    for (double fm : values)
      for (double fp : values) {
        if (fm > fp) continue;
        const auto s = counterexample_stats(p, fm, fp);
        EXPECT_EQ(s.demi_expectation, -p * fm + (1.0 - p) * fp);
        EXPECT_GE(s.demi_expectation, 0.0) << p << ' ' << fm << ' ' << fp;
        EXPECT_LT(s.cond_mean_given_minus1, -1.0);
      }
  }
}

TEST(TestFamily, MembersAreMonotone) {
  const auto batch = generate_paths(GeneratorSpec::associated(0.5), 10, 2000, 3);
  const auto family = standard_family(batch);
  Substream rng(StreamSeed{77, 0});
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> s(10), t(10);
    for (int i = 0; i < 10; ++i) {
      s[i] = rng.uniform(-4.0, 4.0);
      t[i] = s[i] + rng.uniform(0.0, 2.0);
    }
    for (const auto& f : family.members) {
      if (!applicable(f, 10)) continue;
      ASSERT_LE(evaluate(f, s), evaluate(f, t) + 1e-15) << describe(f);
    }
  }
}

TEST(TestFamily, NonnegativeSubsetIsNonnegative) {
  const auto batch = generate_paths(GeneratorSpec::random_walk(), 6, 500, 3);
  const auto family = standard_family(batch).nonnegative_only();
  ASSERT_FALSE(family.members.empty());
  const std::vector<double> s(6, -100.0);
  for (const auto& f : family.members) {
    EXPECT_TRUE(is_nonnegative(f));
    if (applicable(f, 6)) {
      EXPECT_GE(evaluate(f, s), 0.0);
    }
  }
}

TEST(DemiCheck, RandomWalkPasses) {
  const auto batch = generate_paths(GeneratorSpec::random_walk(), 10, 100000, 2026);
  const auto report = check_demimartingale(batch, standard_family(batch), 0.999, DemiMode::Demi);
  EXPECT_TRUE(report.passed) << report.failures() << " failures";
}

TEST(DemiCheck, TwoPointDemisubPassesWithExactConstantCell) {
  const auto batch = generate_paths(GeneratorSpec::two_point(0.3), 2, 100000, 7);
  const auto report =
      check_demimartingale(batch, standard_family(batch).nonnegative_only(), 0.999, DemiMode::Demisub);
  EXPECT_TRUE(report.passed);
  bool found = false;
  for (const auto& row : report.rows)
    if (row.j == 1 && row.function == "const1") {
      found = true;
      EXPECT_LE(std::abs(row.estimate - 0.4), 3 * row.stderr_);
    }
  EXPECT_TRUE(found);
}

TEST(DemiCheck, TwoPointAboveHalfFails) {
  const auto batch = generate_paths(GeneratorSpec::two_point(0.6), 2, 100000, 7);
  const auto report = check_demimartingale(batch, standard_family(batch), 0.999, DemiMode::Demisub);
  EXPECT_FALSE(report.passed);
  for (const auto& row : report.rows)
    if (row.j == 1 && row.function == "const1") {
      EXPECT_LE(std::abs(row.estimate + 0.2), 3 * row.stderr_);
    }
}

TEST(DemiCheck, PassRateOnRandomWalkSeeds) {
  int passes = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto batch = generate_paths(GeneratorSpec::random_walk(), 5, 2000, seed);
    passes += check_demimartingale(batch, standard_family(batch), 0.999, DemiMode::Demi).passed;
  }
  EXPECT_GE(passes, 99);
}

TEST(DemiCheck, StoppedAssociatedSumIsDemisub) {
  const auto batch = generate_paths(GeneratorSpec::associated(0.5, {BaseLaw::Rademacher, 1.0}), 10, 50000, 12);
  const auto stopped = stopped_batch(batch, 1.0);
  const auto report =
      check_demimartingale(stopped, standard_family(stopped).nonnegative_only(), 0.999, DemiMode::Demisub);
  EXPECT_TRUE(report.passed) << report.failures() << " failures";
}

TEST(DemiCheck, NeedsThirtyPaths) {
  const auto batch = generate_paths(GeneratorSpec::random_walk(), 3, 29, 1);
  EXPECT_THROW(check_demimartingale(batch, standard_family(batch), 0.999, DemiMode::Demi), Error);
}

TEST(Association, CommonShockIncrementsPass) {
  const auto inc = increments_of(generate_paths(GeneratorSpec::associated(1.0), 5, 50000, 4));
  const auto report = check_association(inc, standard_family(inc, 0, 4), 0.999);
  EXPECT_TRUE(report.passed) << report.failures() << " failures";
}

TEST(Association, IndependentCoordinatesHaveZeroCovariance) {
  const auto inc = increments_of(generate_paths(GeneratorSpec::random_walk(), 2, 60000, 9));
  TestFunctionFamily fam;
  fam.members = {CoordinateRamp{1, 0.0, 1.0}, CoordinateRamp{2, 0.0, 1.0}};
  const auto report = check_association(inc, fam, 0.999);
  for (const auto& row : report.rows) EXPECT_LE(std::abs(row.estimate), 3 * row.stderr_) << row.function;
}

TEST(Association, NegativelyCoupledPairFails) {
  std::vector<std::vector<double>> rows;
  Substream rng(StreamSeed{3, 0});
  for (int i = 0; i < 5000; ++i) {
    const double x = rng.normal();
    rows.push_back({x, -x});
  }
  const auto batch = TrajectoryBatch::from_rows(rows);
  TestFunctionFamily fam;
  fam.members = {CoordinateRamp{1, 0.0, 1.0}, CoordinateRamp{2, 0.0, 1.0}};
  EXPECT_FALSE(check_association(batch, fam, 0.999).passed);
}
