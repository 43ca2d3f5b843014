/*
 * Copyright 2026 The fairwelfare Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fairwelfare/constraints.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fairwelfare/errors.h"
#include "fairwelfare/experiments.h"
#include "test_support.h"

namespace fairwelfare {
namespace {

using testing::Dense;
using testing::MakeAlphabets;

JointDistribution ExampleJoint(double delta, double q0, double q1) {
  const PopulationDistribution mu = BuildExample1(delta);
  return InduceJoint(mu, Policy::FromTreatmentProbabilities(mu.alphabets(),
                                                            std::vector<double>{q0, q1}));
}

FairnessConstraint Eo(double eps = 0.0) {
  return FairnessConstraint::Make(ConstraintKind::kEqualizedOdds, eps);
}

// Reference violation straight from the dense joint.
double ReferenceViolation(const Dense& p, const FairnessConstraint& c, const Alphabets& ab) {
  switch (c.kind) {
    case ConstraintKind::kEqualizedOdds: {
      double worst = 0.0;
      for (std::size_t y = 0; y < p.ny; ++y) worst = std::max(worst, p.max_tv(static_cast<int>(y)));
      return worst;
    }
    case ConstraintKind::kEqualFalseNegatives:
      return p.max_tv(static_cast<int>(ab.types.index(c.positive_label)));
    case ConstraintKind::kEqualFalsePositives:
      return p.max_tv(static_cast<int>(ab.types.index(c.negative_label)));
    case ConstraintKind::kStatisticalParity:
      return p.max_tv(-1);
  }
  return -1.0;
}

TEST(ConstraintTest, NamesRoundTrip) {
  for (ConstraintKind kind : kAllConstraintKinds) {
    EXPECT_EQ(ParseConstraintKind(ConstraintKindName(kind)), kind);
  }
  EXPECT_FALSE(ParseConstraintKind("calibration"));
}

TEST(ConstraintTest, EpsilonOutsideUnitIntervalRejected) {
  EXPECT_THROW(FairnessConstraint::Make(ConstraintKind::kStatisticalParity, -0.1),
               ConfigurationError);
  EXPECT_THROW(FairnessConstraint::Make(ConstraintKind::kStatisticalParity, 1.5),
               ConfigurationError);
}

TEST(ConstraintTest, MissingDesignatedLabelRejected) {
  const FairnessConstraint c =
      FairnessConstraint::Make(ConstraintKind::kEqualFalseNegatives, 0.0, "sick", "well");
  EXPECT_THROW(Violation(ExampleJoint(0.75, 0.0, 1.0), c), ConfigurationError);
}

TEST(ViolationTest, ConstantPolicyViolatesNothing) {
  const PopulationDistribution mu = BuildExample1(0.6);
  const std::vector<double> row{0.3, 0.7};
  const JointDistribution joint = InduceJoint(mu, Policy::Constant(mu.alphabets(), row));
  for (ConstraintKind kind : kAllConstraintKinds) {
    EXPECT_DOUBLE_EQ(Violation(joint, FairnessConstraint::Make(kind)), 0.0);
    EXPECT_TRUE(Satisfies(joint, FairnessConstraint::Make(kind)));
  }
}

TEST(ViolationTest, GroupTargetingPolicyFullyViolatesEqualizedOdds) {
  EXPECT_DOUBLE_EQ(Violation(ExampleJoint(0.75, 0.0, 1.0), Eo()), 1.0);
  EXPECT_FALSE(Satisfies(ExampleJoint(0.75, 0.0, 1.0), Eo(0.9)));
}

TEST(ViolationTest, EqualTreatmentSatisfiesEqualizedOdds) {
  for (double q : {0.0, 0.3, 1.0}) {
    EXPECT_EQ(Violation(ExampleJoint(0.75, q, q), Eo()), 0.0);
  }
  EXPECT_TRUE(Satisfies(ExampleJoint(0.75, 0.4, 0.5), Eo(0.1)));
  EXPECT_NEAR(Violation(ExampleJoint(0.75, 0.4, 0.5), Eo()), 0.1, 1e-12);
}

TEST(ViolationTest, VacuousClausesAreSkipped) {
  // Group 1 never has type 0, so the Y=0 clause compares nothing.
  const Alphabets ab = MakeAlphabets(2, 2, 2, 2);
  std::vector<double> mass(8, 0.0);
  mass[(0 * 2 + 0) * 2 + 0] = 0.25;
  mass[(0 * 2 + 1) * 2 + 0] = 0.25;
  mass[(1 * 2 + 1) * 2 + 1] = 0.5;
  const PopulationDistribution mu(ab, mass);
  const FairnessConstraint fp = FairnessConstraint::Make(ConstraintKind::kEqualFalsePositives);
  const JointDistribution joint =
      InduceJoint(mu, Policy::FromTreatmentProbabilities(ab, std::vector<double>{0.0, 1.0}));
  EXPECT_DOUBLE_EQ(Violation(joint, fp), 0.0);
  EXPECT_DOUBLE_EQ(Violation(joint, Eo()), 1.0);

  const LinearSystem rows = ConstraintRows(mu, fp);
  EXPECT_TRUE(rows.rows.empty());
}

TEST(ConstraintRowsTest, StatisticalParityWithXEqualGIsEqualTreatment) {
  const PopulationDistribution mu = BuildExample1(0.75);
  const LinearSystem sys =
      ConstraintRows(mu, FairnessConstraint::Make(ConstraintKind::kStatisticalParity));
  ASSERT_FALSE(sys.rows.empty());
  for (const LinearRow& row : sys.rows) EXPECT_EQ(row.sense, RowSense::kEqual);
  // Variables (x, d): q0 = a(1|0), q1 = a(1|1).
  EXPECT_TRUE(sys.SatisfiedBy(std::vector<double>{0.6, 0.4, 0.6, 0.4}, 1e-12));
  EXPECT_FALSE(sys.SatisfiedBy(std::vector<double>{0.6, 0.4, 0.5, 0.5}, 1e-12));
}

TEST(ConstraintRowsTest, EqualizedOddsOnTwoGroupExampleForcesEqualTreatment) {
  const LinearSystem sys = ConstraintRows(BuildExample1(0.75), Eo());
  for (double q0 : {0.0, 0.25, 0.5, 1.0})
    for (double q1 : {0.0, 0.25, 0.5, 1.0}) {
      const bool equal = q0 == q1;
      EXPECT_EQ(sys.SatisfiedBy(std::vector<double>{1 - q0, q0, 1 - q1, q1}, 1e-12), equal);
    }
}

TEST(ConstraintPropertyTest, EpsilonOneAlwaysSatisfied) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Alphabets ab = MakeAlphabets(1 + rng() % 3, 2, 1 + rng() % 3, 1 + rng() % 3);
    const JointDistribution joint =
        InduceJoint(testing::RandomPopulation(rng, ab), testing::RandomPolicy(rng, ab));
    for (ConstraintKind kind : kAllConstraintKinds) {
      EXPECT_TRUE(Satisfies(joint, FairnessConstraint::Make(kind, 1.0)));
    }
  }
}

TEST(ConstraintPropertyTest, MatchesReferenceViolation) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const Alphabets ab = MakeAlphabets(1 + rng() % 3, 2 + rng() % 2, 1 + rng() % 3, 1 + rng() % 4);
    const PopulationDistribution mu = testing::RandomPopulation(rng, ab);
    const Policy a = testing::RandomPolicy(rng, ab);
    const Dense ref(mu, a);
    const JointDistribution joint = InduceJoint(mu, a);
    for (ConstraintKind kind : kAllConstraintKinds) {
      const FairnessConstraint c = FairnessConstraint::Make(kind);
      EXPECT_NEAR(Violation(joint, c), ReferenceViolation(ref, c, ab), 1e-12);
    }
  }
}

TEST(ConstraintPropertyTest, InvariantUnderGroupAndDecisionRelabeling) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nx = 2, ny = 2, ng = 3, nd = 3;
    const Alphabets ab = MakeAlphabets(nx, ny, ng, nd);
    const PopulationDistribution mu = testing::RandomPopulation(rng, ab);
    const Policy a = testing::RandomPolicy(rng, ab);
    // Reverse group order and rotate decisions.
    std::vector<double> mass(mu.masses().size());
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t g = 0; g < ng; ++g)
          mass[(x * ny + y) * ng + (ng - 1 - g)] = mu.mass(x, y, g);
    std::vector<double> rows(nx * nd);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t d = 0; d < nd; ++d) rows[x * nd + (d + 1) % nd] = a.prob(x, d);
    const JointDistribution original = InduceJoint(mu, a);
    const JointDistribution relabeled =
        InduceJoint(PopulationDistribution(ab, mass, 1e-9), Policy(ab, rows, 1e-9));
    for (ConstraintKind kind : kAllConstraintKinds) {
      const FairnessConstraint c = FairnessConstraint::Make(kind);
      EXPECT_NEAR(Violation(original, c), Violation(relabeled, c), 1e-12);
    }
  }
}

TEST(ConstraintPropertyTest, EqualizedOddsImpliesBothErrorRateConstraints) {
  // Policies that ignore x satisfy EO; mixing in a tiny x-dependence should
  // keep the implication on the exact side.
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const Alphabets ab = MakeAlphabets(3, 2, 2, 2);
    const PopulationDistribution mu = testing::RandomPopulation(rng, ab);
    const auto row = testing::Dirichlet(rng, 2);
    const JointDistribution joint = InduceJoint(mu, Policy::Constant(ab, row));
    ASSERT_NEAR(Violation(joint, Eo()), 0.0, 1e-12);
    EXPECT_NEAR(Violation(joint, FairnessConstraint::Make(ConstraintKind::kEqualFalseNegatives)),
                0.0, 1e-12);
    EXPECT_NEAR(Violation(joint, FairnessConstraint::Make(ConstraintKind::kEqualFalsePositives)),
                0.0, 1e-12);
  }
}

// The linear rows and the TV violation describe the same feasible set,
// including for three or more decisions.
TEST(ConstraintPropertyTest, RowsAgreeWithSatisfies) {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Alphabets ab = MakeAlphabets(1 + rng() % 3, 2, 2 + rng() % 2, 2 + rng() % 3);
    const PopulationDistribution mu = testing::RandomPopulation(rng, ab);
    // Mix a constant policy with a random one so that points land on both
    // sides of the boundary.
    const Policy random = testing::RandomPolicy(rng, ab);
    const auto row = testing::Dirichlet(rng, ab.decisions.size());
    const double t = unit(rng) * 0.6;
    std::vector<double> rows(random.values().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i] = (1 - t) * row[i % row.size()] + t * random.values()[i];
    }
    const Policy a(ab, rows, 1e-9);
    const JointDistribution joint = InduceJoint(mu, a);
    for (ConstraintKind kind : kAllConstraintKinds)
      for (double eps : {0.0, 0.05, 0.15, 0.4}) {
        const FairnessConstraint c = FairnessConstraint::Make(kind, eps);
        const double v = Violation(joint, c);
        if (eps > 0 && std::abs(v - eps) < 1e-7) continue;
        if (eps == 0 && v > 0 && v < 1e-7) continue;
        EXPECT_EQ(ConstraintRows(mu, c).SatisfiedBy(a.values(), 1e-9), Satisfies(joint, c))
            << ConstraintKindName(kind) << " eps=" << eps << " violation=" << v;
        ++checked;
      }
  }
  EXPECT_GT(checked, 4000);
}

}  // namespace
}  // namespace fairwelfare
