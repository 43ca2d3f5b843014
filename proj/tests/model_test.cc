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

#include "fairwelfare/model.h"

#include <gtest/gtest.h>

#include <random>

#include "fairwelfare/errors.h"
#include "fairwelfare/experiments.h"
#include "test_support.h"

namespace fairwelfare {
namespace {

using testing::Dense;
using testing::MakeAlphabets;

Alphabets Binary() { return MakeAlphabets(2, 2, 2, 2); }

TEST(AlphabetTest, RejectsEmptyAndDuplicateLabels) {
  EXPECT_THROW(Alphabet("X", {}), ConfigurationError);
  EXPECT_THROW(Alphabet("X", {"a", "a"}), ConfigurationError);
  Alphabet a("Y", {"lo", "hi"});
  EXPECT_EQ(a.index("hi"), 1u);
  EXPECT_FALSE(a.find("mid"));
  EXPECT_THROW(a.index("mid"), ConfigurationError);
}

TEST(PopulationTest, ValidatesMass) {
  const Alphabets ab = Binary();
  EXPECT_THROW(PopulationDistribution(ab, std::vector<double>(8, 0.1)), ConfigurationError);
  std::vector<double> negative(8, 0.125);
  negative[0] = -0.125;
  negative[1] = 0.375;
  EXPECT_THROW(PopulationDistribution(ab, negative), ConfigurationError);
  EXPECT_THROW(PopulationDistribution(ab, std::vector<double>(7, 1.0 / 7)), ConfigurationError);
}

TEST(PopulationTest, GroupPriorAndUndefinedConditional) {
  const Alphabets ab = Binary();
  std::vector<double> mass(8, 0.0);
  mass[(0 * 2 + 0) * 2 + 0] = 0.5;
  mass[(1 * 2 + 1) * 2 + 0] = 0.5;
  const PopulationDistribution mu(ab, mass);
  EXPECT_DOUBLE_EQ(mu.group_prior(0), 1.0);
  EXPECT_DOUBLE_EQ(mu.group_prior(1), 0.0);
  EXPECT_EQ(mu.positive_groups(), std::vector<std::size_t>{0});
  EXPECT_DOUBLE_EQ(mu.conditional(1, 1, 0), 0.5);
  EXPECT_THROW(mu.conditional(0, 0, 1), UndefinedConditionalError);
}

TEST(PolicyTest, RowsMustBeDistributions) {
  const Alphabets ab = Binary();
  EXPECT_THROW(Policy(ab, {0.5, 0.6, 0.5, 0.5}), ConfigurationError);
  EXPECT_THROW(Policy(ab, {1.2, -0.2, 0.5, 0.5}), ConfigurationError);
  EXPECT_THROW(Policy(ab, {1.0, 0.0}), ConfigurationError);
  const Policy q = Policy::FromTreatmentProbabilities(ab, std::vector<double>{0.25, 1.0});
  EXPECT_DOUBLE_EQ(q.prob(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(q.prob(1, 1), 1.0);
}

TEST(InduceJointTest, PointMassComposesToPointMass) {
  const Alphabets ab = Binary();
  std::vector<double> mass(8, 0.0);
  mass[0] = 1.0;
  const PopulationDistribution mu(ab, mass);
  const JointDistribution joint =
      InduceJoint(mu, Policy::Deterministic(ab, std::vector<std::size_t>{0, 1}));
  EXPECT_DOUBLE_EQ(joint.mass(0, 0, 0, 0), 1.0);
  double total = 0.0;
  for (double m : joint.masses()) total += m;
  EXPECT_DOUBLE_EQ(total, 1.0);
}

TEST(InduceJointTest, TwoGroupExampleByHand) {
  const PopulationDistribution mu = BuildExample1(0.75);
  const JointDistribution joint = InduceJoint(
      mu, Policy::FromTreatmentProbabilities(mu.alphabets(), std::vector<double>{0.0, 1.0}));
  // (x, y, g, d)
  EXPECT_DOUBLE_EQ(joint.mass(1, 1, 1, 1), 0.375);
  EXPECT_DOUBLE_EQ(joint.mass(0, 0, 0, 0), 0.375);
  EXPECT_DOUBLE_EQ(joint.mass(1, 0, 1, 1), 0.125);
  EXPECT_DOUBLE_EQ(joint.mass(0, 1, 0, 0), 0.125);
  double rest = 0.0;
  for (double m : joint.masses()) rest += m;
  EXPECT_NEAR(rest - 1.0, 0.0, 1e-15);
}

TEST(InduceJointTest, UniformInputsGiveUniformJoint) {
  const Alphabets ab = Binary();
  const PopulationDistribution mu(ab, std::vector<double>(8, 0.125));
  const std::vector<double> half{0.5, 0.5};
  const JointDistribution joint = InduceJoint(mu, Policy::Constant(ab, half));
  for (double m : joint.masses()) EXPECT_DOUBLE_EQ(m, 1.0 / 16);
}

TEST(InduceJointTest, AlphabetMismatchNamesTheSet) {
  const PopulationDistribution mu(Binary(), std::vector<double>(8, 0.125));
  const Alphabets other = Alphabets::Make({"0", "1"}, {"0", "1"}, {"0", "1"}, {"no", "yes"});
  const std::vector<double> half{0.5, 0.5};
  try {
    InduceJoint(mu, Policy::Constant(other, half));
    FAIL() << "expected a configuration error";
  } catch (const ConfigurationError& e) {
    EXPECT_NE(std::string(e.what()).find("D"), std::string::npos) << e.what();
  }
}

TEST(ConditionOnGroupTest, ExampleSlice) {
  const PopulationDistribution mu = BuildExample1(0.75);
  const JointDistribution joint = InduceJoint(
      mu, Policy::FromTreatmentProbabilities(mu.alphabets(), std::vector<double>{0.0, 1.0}));
  const GroupConditional p1 = ConditionOnGroup(joint, 1);
  EXPECT_DOUBLE_EQ(p1.at(1, 1, 1), 0.75);
  EXPECT_DOUBLE_EQ(p1.at(1, 0, 1), 0.25);
  double total = 0.0;
  for (double m : p1.mass) total += m;
  EXPECT_DOUBLE_EQ(total, 1.0);
}

TEST(ConditionOnGroupTest, ZeroProbabilityGroupIsAnError) {
  const Alphabets ab = Binary();
  std::vector<double> mass(8, 0.0);
  mass[0] = 1.0;
  const JointDistribution joint = InduceJoint(
      PopulationDistribution(ab, mass), Policy::Deterministic(ab, std::vector<std::size_t>{0, 0}));
  EXPECT_THROW(ConditionOnGroup(joint, 1), UndefinedConditionalError);
}

TEST(ConditionOnGroupTest, IndependentOfGroupMatchesMarginal) {
  const Alphabets ab = Binary();
  // mu(x, y, g) = m(x, y) / 2
  const double m[4] = {0.1, 0.2, 0.3, 0.4};
  std::vector<double> mass(8);
  for (int xy = 0; xy < 4; ++xy) mass[xy * 2] = mass[xy * 2 + 1] = m[xy] / 2;
  const JointDistribution joint =
      InduceJoint(PopulationDistribution(ab, mass),
                  Policy::FromTreatmentProbabilities(ab, std::vector<double>{0.3, 0.8}));
  const Variable xyd[] = {Variable::X, Variable::Y, Variable::D};
  const Marginal marginal = MarginalOf(joint, xyd);
  for (std::size_t g = 0; g < 2; ++g) {
    const GroupConditional p = ConditionOnGroup(joint, g);
    for (std::size_t i = 0; i < p.mass.size(); ++i) EXPECT_NEAR(p.mass[i], marginal.mass[i], 1e-15);
  }
}

TEST(MarginalTest, Examples) {
  const PopulationDistribution mu = BuildExample1(0.75);
  const JointDistribution joint = InduceJoint(
      mu, Policy::FromTreatmentProbabilities(mu.alphabets(), std::vector<double>{0.0, 1.0}));
  const Variable d[] = {Variable::D};
  EXPECT_DOUBLE_EQ(MarginalOf(joint, d).mass[1], 0.5);
  const Variable xyg[] = {Variable::G, Variable::X, Variable::Y};
  const Marginal back = MarginalOf(joint, xyg);
  ASSERT_EQ(back.variables, (std::vector<Variable>{Variable::X, Variable::Y, Variable::G}));
  for (std::size_t i = 0; i < back.mass.size(); ++i) EXPECT_DOUBLE_EQ(back.mass[i], mu.masses()[i]);
  EXPECT_THROW(MarginalOf(joint, std::span<const Variable>{}), UsageError);
  const Variable twice[] = {Variable::D, Variable::D};
  EXPECT_THROW(MarginalOf(joint, twice), UsageError);
}

TEST(MarginalTest, UniformJointGivesUniformGroups) {
  const Alphabets ab = MakeAlphabets(2, 2, 3, 2);
  const PopulationDistribution mu(ab, std::vector<double>(12, 1.0 / 12));
  const std::vector<double> half{0.5, 0.5};
  const Variable g[] = {Variable::G};
  const Marginal m = MarginalOf(InduceJoint(mu, Policy::Constant(ab, half)), g);
  for (double v : m.mass) EXPECT_NEAR(v, 1.0 / 3, 1e-15);
}

TEST(ConditionalDecisionTest, Examples) {
  const PopulationDistribution mu = BuildExample1(0.75);
  const JointDistribution joint = InduceJoint(
      mu, Policy::FromTreatmentProbabilities(mu.alphabets(), std::vector<double>{0.0, 1.0}));
  EXPECT_DOUBLE_EQ(ConditionalDecisionDistribution(joint, DecisionEvent{1, 1})[1], 1.0);

  const std::vector<double> row{0.2, 0.8};
  const JointDistribution constant = InduceJoint(mu, Policy::Constant(mu.alphabets(), row));
  for (std::optional<std::size_t> y : {std::optional<std::size_t>{}, std::optional<std::size_t>{0}})
    for (std::optional<std::size_t> g : {std::optional<std::size_t>{}, std::optional<std::size_t>{1}}) {
      const auto q = ConditionalDecisionDistribution(constant, DecisionEvent{y, g});
      EXPECT_NEAR(q[1], 0.8, 1e-15);
    }
}

TEST(ConditionalDecisionTest, NullEventCarriesDescription) {
  const Alphabets ab = Binary();
  std::vector<double> mass(8, 0.0);
  mass[0] = 1.0;
  const JointDistribution joint = InduceJoint(
      PopulationDistribution(ab, mass), Policy::Deterministic(ab, std::vector<std::size_t>{0, 0}));
  try {
    ConditionalDecisionDistribution(joint, DecisionEvent{1, 0});
    FAIL();
  } catch (const UndefinedConditionalError& e) {
    EXPECT_NE(std::string(e.what()).find("Y=1"), std::string::npos) << e.what();
  }
}

TEST(TotalVariationTest, HalfL1) {
  const std::vector<double> a{0.5, 0.5, 0.0}, b{0.0, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(TotalVariation(a, b), 0.5);
  EXPECT_DOUBLE_EQ(TotalVariation(a, a), 0.0);
}

// Random instances: joint sums to 1, keeps mu as its (X, Y, G) marginal,
// matches the dense reference, and is rebuilt from group conditionals.
TEST(ModelPropertyTest, JointInvariantsOnRandomInstances) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Alphabets ab = MakeAlphabets(1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3);
    const PopulationDistribution mu = testing::RandomPopulation(rng, ab);
    const Policy a = testing::RandomPolicy(rng, ab);
    const JointDistribution joint = InduceJoint(mu, a);
    const Dense ref(mu, a);
    double total = 0.0;
    for (std::size_t i = 0; i < joint.masses().size(); ++i) {
      total += joint.masses()[i];
      EXPECT_NEAR(joint.masses()[i], ref.p[i], 1e-15);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    const Variable xyg[] = {Variable::X, Variable::Y, Variable::G};
    const Marginal m = MarginalOf(joint, xyg);
    for (std::size_t i = 0; i < m.mass.size(); ++i) EXPECT_NEAR(m.mass[i], mu.masses()[i], 1e-12);

    std::vector<double> rebuilt(joint.masses().size(), 0.0);
    const std::size_t ny = ab.types.size(), ng = ab.groups.size(), nd = ab.decisions.size();
    for (std::size_t g = 0; g < ng; ++g) {
      if (!(joint.group_probability(g) > 0.0)) continue;
      const GroupConditional pg = ConditionOnGroup(joint, g);
      for (std::size_t x = 0; x < ab.covariates.size(); ++x)
        for (std::size_t y = 0; y < ny; ++y)
          for (std::size_t d = 0; d < nd; ++d)
            rebuilt[((x * ny + y) * ng + g) * nd + d] = joint.group_probability(g) * pg.at(x, y, d);
    }
    for (std::size_t i = 0; i < rebuilt.size(); ++i) EXPECT_NEAR(rebuilt[i], joint.masses()[i], 1e-12);
  }
}

TEST(ModelPropertyTest, GroupConditionalDecisionIsPolicyRowWhenXIsG) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    const Alphabets ab = MakeAlphabets(n, 1 + rng() % 3, n, 1 + rng() % 4);
    const std::size_t ny = ab.types.size();
    std::vector<double> cells = testing::Dirichlet(rng, n * ny);
    std::vector<double> mass(n * ny * n, 0.0);
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t y = 0; y < ny; ++y) mass[(g * ny + y) * n + g] = cells[g * ny + y];
    const PopulationDistribution mu(ab, mass, 1e-9);
    const Policy a = testing::RandomPolicy(rng, ab);
    const JointDistribution joint = InduceJoint(mu, a);
    for (std::size_t g = 0; g < n; ++g) {
      const auto q = ConditionalDecisionDistribution(joint, DecisionEvent{std::nullopt, g});
      for (std::size_t d = 0; d < ab.decisions.size(); ++d) EXPECT_NEAR(q[d], a.prob(g, d), 1e-12);
    }
  }
}

}  // namespace
}  // namespace fairwelfare
