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

#include "fairwelfare/objectives.h"

#include <gtest/gtest.h>

#include <cmath>
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

PayoffTable Match() { return PayoffTable::Agreement(Example1Alphabets()); }

const char* kFamilies[] = {"identity", "power:0.5", "power:1", "log:0.5", "negpow:2", "negpow:0.3"};

TEST(PayoffTableTest, AgreementAndValidation) {
  const PayoffTable u = Match();
  EXPECT_EQ(u(0, 0), 1.0);
  EXPECT_EQ(u(0, 1), 0.0);
  EXPECT_EQ(u.min(), 0.0);
  EXPECT_EQ(u.max(), 1.0);
  const Alphabets ab = Example1Alphabets();
  EXPECT_THROW(PayoffTable(ab.decisions, ab.types, {1.0, 2.0}), ConfigurationError);
  EXPECT_THROW(PayoffTable(ab.decisions, ab.types, {1.0, 2.0, NAN, 0.0}), ConfigurationError);
  const Alphabets other = MakeAlphabets(2, 3, 2, 2);
  EXPECT_THROW(u.RequireCompatible(other), ConfigurationError);
}

TEST(PhiTest, SpecRoundTripAndBadParameters) {
  for (const char* spec : kFamilies) EXPECT_EQ(PhiFunction::Parse(spec).Spec(), spec);
  EXPECT_EQ(PhiFunction::Parse("rawls").Spec(), "rawls");
  for (const char* bad : {"power:0", "power:1.5", "log:0", "log:-1", "negpow:0", "negpow:-2",
                          "cubic", "power:", "power:x", "identity:1", ""}) {
    EXPECT_THROW(PhiFunction::Parse(bad), ConfigurationError) << bad;
  }
}

TEST(PhiTest, ValuesAndDomains) {
  EXPECT_DOUBLE_EQ(PhiFunction::Power(0.5)(0.25), 0.5);
  EXPECT_DOUBLE_EQ(PhiFunction::Log(1.0)(0.0), 0.0);
  EXPECT_DOUBLE_EQ(PhiFunction::NegativePower(2)(0.5), -4.0);
  EXPECT_TRUE(PhiFunction::Power(0.5).InDomain(0.0));
  EXPECT_FALSE(PhiFunction::Power(0.5).InDomain(-1e-9));
  EXPECT_FALSE(PhiFunction::NegativePower(2).InDomain(0.0));
  EXPECT_FALSE(PhiFunction::Log(0.5).InDomain(-0.5));
  EXPECT_TRUE(PhiFunction::Identity().InDomain(-1e9));
  EXPECT_THROW(PhiFunction::NegativePower(2)(0.0), DomainError);
}

TEST(PhiTest, StrictlyIncreasingConcaveWithMatchingDerivative) {
  for (const char* spec : kFamilies) {
    const PhiFunction phi = PhiFunction::Parse(spec);
    double prev = -INFINITY;
    for (double u = 0.05; u < 3.0; u += 0.05) {
      const double v = phi(u);
      EXPECT_GT(v, prev) << spec;
      prev = v;
      const double h = 1e-6;
      EXPECT_NEAR(phi.Derivative(u), (phi(u + h) - phi(u - h)) / (2 * h),
                  1e-5 * std::max(1.0, phi.Derivative(u)))
          << spec << " at " << u;
      // Midpoint concavity.
      EXPECT_GE(phi(u + 0.025) + 1e-12, 0.5 * (phi(u) + phi(u + 0.05))) << spec;
    }
  }
}

TEST(CertaintyEquivalentTest, Examples) {
  EXPECT_DOUBLE_EQ(CertaintyEquivalent(0.3, PhiFunction::Identity()), 0.3);
  EXPECT_NEAR(CertaintyEquivalent(0.8660, PhiFunction::Power(0.5)), 0.75, 1e-4);
  EXPECT_DOUBLE_EQ(CertaintyEquivalent(-4.0, PhiFunction::NegativePower(2)), 0.5);
  EXPECT_THROW(CertaintyEquivalent(1.0, PhiFunction::NegativePower(2)), DomainError);
  EXPECT_THROW(CertaintyEquivalent(-0.1, PhiFunction::Power(0.5)), DomainError);
  for (const char* spec : kFamilies) {
    const PhiFunction phi = PhiFunction::Parse(spec);
    for (double u : {0.1, 0.5, 2.0}) EXPECT_NEAR(CertaintyEquivalent(phi(u), phi), u, 1e-12);
  }
}

TEST(ExpectedPayoffTest, Examples) {
  EXPECT_DOUBLE_EQ(ExpectedPayoff(ExampleJoint(0.75, 0.0, 1.0), Match()), 0.75);
  const Alphabets ab = Example1Alphabets();
  const PayoffTable constant(ab.decisions, ab.types, {2.5, 2.5, 2.5, 2.5});
  EXPECT_DOUBLE_EQ(ExpectedPayoff(ExampleJoint(0.6, 0.3, 0.9), constant), 2.5);
  // Coin flip independent of Y.
  EXPECT_DOUBLE_EQ(ExpectedPayoff(ExampleJoint(0.9, 0.5, 0.5), Match()), 0.5);
}

TEST(GroupUtilityTest, Examples) {
  const JointDistribution targeted = ExampleJoint(0.75, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(GroupUtility(targeted, 0, Match()), 0.75);
  EXPECT_DOUBLE_EQ(GroupUtility(targeted, 1, Match()), 0.75);
  for (double q : {0.0, 0.2, 0.7, 1.0}) {
    const double delta = 0.75;
    const JointDistribution joint = ExampleJoint(delta, q, q);
    EXPECT_NEAR(GroupUtility(joint, 1, Match()), q * delta + (1 - q) * (1 - delta), 1e-15);
    EXPECT_NEAR(GroupUtility(joint, 0, Match()), (1 - q) * delta + q * (1 - delta), 1e-15);
  }
}

TEST(GroupUtilityTest, ZeroProbabilityGroup) {
  const Alphabets ab = Example1Alphabets();
  std::vector<double> mass(8, 0.0);
  mass[0] = 1.0;
  const JointDistribution joint = InduceJoint(
      PopulationDistribution(ab, mass), Policy::Deterministic(ab, std::vector<std::size_t>{0, 0}));
  EXPECT_THROW(GroupUtility(joint, 1, Match()), UndefinedConditionalError);
  // Welfare ignores the empty group.
  EXPECT_DOUBLE_EQ(SocialWelfare(joint, Match(), PhiFunction::Power(0.5)), 1.0);
}

TEST(SocialWelfareTest, Examples) {
  EXPECT_NEAR(SocialWelfare(ExampleJoint(0.75, 0.0, 1.0), Match(), PhiFunction::Power(0.5)),
              std::sqrt(0.75), 1e-15);
  EXPECT_NEAR(SocialWelfare(ExampleJoint(0.75, 0.5, 0.5), Match(), PhiFunction::Power(0.5)),
              std::sqrt(0.5), 1e-15);
  EXPECT_DOUBLE_EQ(SocialWelfare(ExampleJoint(0.75, 1.0, 1.0), Match(), PhiFunction::Rawls()),
                   0.25);
}

TEST(SocialWelfareTest, DomainErrorNamesGroupAndValue) {
  const Alphabets ab = Example1Alphabets();
  const PayoffTable shifted(ab.decisions, ab.types, {0.0, -1.0, -1.0, 0.0});
  try {
    SocialWelfare(ExampleJoint(0.75, 0.0, 1.0), shifted, PhiFunction::NegativePower(2));
    FAIL();
  } catch (const DomainError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("group"), std::string::npos) << what;
    EXPECT_NE(what.find("-0.25"), std::string::npos) << what;
  }
}

TEST(JensenGapTest, Examples) {
  const JointDistribution targeted = ExampleJoint(0.75, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(JensenGap(ExampleJoint(0.6, 0.2, 0.9), Match(), PhiFunction::Identity()), 0.0);
  for (const char* spec : kFamilies) {
    EXPECT_NEAR(JensenGap(targeted, Match(), PhiFunction::Parse(spec)), 0.0, 1e-15) << spec;
  }
  EXPECT_NEAR(JensenGap(ExampleJoint(0.75, 1.0, 1.0), Match(), PhiFunction::Power(0.5)),
              std::sqrt(0.5) - 0.5 * std::sqrt(0.75) - 0.5 * std::sqrt(0.25), 1e-15);
  EXPECT_NEAR(JensenGap(ExampleJoint(0.75, 1.0, 1.0), Match(), PhiFunction::Power(0.5)), 0.0241,
              1e-4);
  EXPECT_THROW(JensenGap(targeted, Match(), PhiFunction::Rawls()), DomainError);
}

TEST(GeneralizedObjectiveTest, IndicatorSemantics) {
  const FairnessConstraint eo = FairnessConstraint::Make(ConstraintKind::kEqualizedOdds);
  const UnfairnessMeasure h = ConstraintIndicator{eo};
  EXPECT_EQ(GeneralizedObjective(ExampleJoint(0.75, 0.0, 1.0), Match(), PhiFunction::Identity(), h),
            kInfeasibleObjective);
  EXPECT_EQ(EvaluateUnfairness(ExampleJoint(0.75, 0.0, 1.0), h), INFINITY);
  const JointDistribution fair = ExampleJoint(0.75, 0.3, 0.3);
  EXPECT_DOUBLE_EQ(GeneralizedObjective(fair, Match(), PhiFunction::Identity(), h),
                   ExpectedPayoff(fair, Match()));
  EXPECT_DOUBLE_EQ(EvaluateUnfairness(fair, h), 0.0);
}

TEST(ObjectivesPropertyTest, JensenRepresentationEqualsWelfare) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Alphabets ab = MakeAlphabets(1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3);
    const PopulationDistribution mu = testing::RandomPopulation(rng, ab);
    const JointDistribution joint = InduceJoint(mu, testing::RandomPolicy(rng, ab));
    const PayoffTable u = testing::RandomTable(rng, ab, 0.1, 2.0);
    for (const char* spec : kFamilies) {
      const PhiFunction phi = PhiFunction::Parse(spec);
      const UnfairnessMeasure h = JensenGapMeasure{u, phi};
      EXPECT_NEAR(GeneralizedObjective(joint, u, phi, h), SocialWelfare(joint, u, phi), 1e-12);
      EXPECT_GE(JensenGap(joint, u, phi), -1e-12);
    }
    EXPECT_NEAR(SocialWelfare(joint, u, PhiFunction::Identity()), ExpectedPayoff(joint, u), 1e-12);
  }
}

TEST(ObjectivesPropertyTest, GroupUtilitiesMatchReference) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const Alphabets ab = MakeAlphabets(1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3, 1 + rng() % 3);
    const PopulationDistribution mu = testing::RandomPopulation(rng, ab);
    const Policy a = testing::RandomPolicy(rng, ab);
    const PayoffTable u = testing::RandomTable(rng, ab, -1.0, 1.0);
    const Dense ref(mu, a);
    const JointDistribution joint = InduceJoint(mu, a);
    for (std::size_t g = 0; g < ab.groups.size(); ++g) {
      EXPECT_NEAR(GroupUtility(joint, g, u), ref.group_utility(g, u), 1e-12);
    }
  }
}

TEST(ObjectivesPropertyTest, JensenGapZeroIffGroupsEqualForStrictlyConcave) {
  // Equal group utilities: X independent of G and a policy ignoring G.
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const Alphabets ab = MakeAlphabets(2, 2, 2, 2);
    const auto xy = testing::Dirichlet(rng, 4);
    std::vector<double> mass(8);
    for (int i = 0; i < 4; ++i) mass[i * 2] = mass[i * 2 + 1] = xy[i] / 2;
    const PopulationDistribution mu(ab, mass, 1e-9);
    const JointDistribution joint = InduceJoint(mu, testing::RandomPolicy(rng, ab));
    const PayoffTable u = testing::RandomTable(rng, ab, 0.1, 1.0);
    for (const char* spec : kFamilies) {
      EXPECT_NEAR(JensenGap(joint, u, PhiFunction::Parse(spec)), 0.0, 1e-9) << spec;
    }
  }
  // Distinct utilities give a strictly positive gap.
  const JointDistribution uneven = ExampleJoint(0.75, 1.0, 1.0);
  for (const char* spec : {"power:0.5", "log:0.5", "negpow:2", "negpow:0.3"}) {
    EXPECT_GT(JensenGap(uneven, Match(), PhiFunction::Parse(spec)), 1e-6) << spec;
  }
}

TEST(ObjectivesPropertyTest, NegativePowerApproachesWorstGroup) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const Alphabets ab = MakeAlphabets(2, 2, 3, 2);
    const JointDistribution joint =
        InduceJoint(testing::RandomPopulation(rng, ab), testing::RandomPolicy(rng, ab));
    const PayoffTable u = testing::RandomTable(rng, ab, 0.1, 1.0);
    const double worst = SocialWelfare(joint, u, PhiFunction::Rawls());
    double prev = INFINITY;
    for (double gamma : {1.0, 10.0, 100.0, 1e4}) {
      const double ce = WelfareCertaintyEquivalent(joint, u, PhiFunction::NegativePower(gamma));
      EXPECT_LE(ce, prev + 1e-12);
      EXPECT_GE(ce, worst - 1e-12);
      prev = ce;
    }
    EXPECT_NEAR(prev, worst, 1e-3);
  }
}

TEST(ObjectivesPropertyTest, StableCertaintyEquivalentMatchesComposition) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const Alphabets ab = MakeAlphabets(2, 2, 2, 2);
    const JointDistribution joint =
        InduceJoint(testing::RandomPopulation(rng, ab), testing::RandomPolicy(rng, ab));
    const PayoffTable u = testing::RandomTable(rng, ab, 0.1, 1.0);
    for (const char* spec : kFamilies) {
      const PhiFunction phi = PhiFunction::Parse(spec);
      EXPECT_NEAR(WelfareCertaintyEquivalent(joint, u, phi),
                  CertaintyEquivalent(SocialWelfare(joint, u, phi), phi), 1e-12)
          << spec;
    }
  }
}

TEST(AggregateTest, CertaintyEquivalentGradientMatchesFiniteDifferences) {
  const std::vector<double> w{0.2, 0.5, 0.3};
  const std::vector<double> u{0.4, 0.9, 0.6};
  for (const char* spec : {"identity", "power:0.5", "log:0.2", "negpow:2", "negpow:50"}) {
    const PhiFunction phi = PhiFunction::Parse(spec);
    std::vector<double> grad(3);
    AggregateCertaintyEquivalentGradient(w, u, phi, grad);
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<double> up = u, down = u;
      const double h = 1e-6;
      up[k] += h;
      down[k] -= h;
      const double fd = (AggregateCertaintyEquivalent(w, up, phi) -
                         AggregateCertaintyEquivalent(w, down, phi)) / (2 * h);
      EXPECT_NEAR(grad[k], fd, 1e-6) << spec << " k=" << k;
    }
  }
}

TEST(ReachableRangeTest, ExampleAndDomainCheck) {
  const PopulationDistribution mu = BuildExample1(0.75);
  const auto range = ReachableUtilityRange(mu, Match());
  ASSERT_EQ(range.size(), 2u);
  EXPECT_DOUBLE_EQ(range[0].first, 0.25);
  EXPECT_DOUBLE_EQ(range[0].second, 0.75);
  EXPECT_NO_THROW(RequireReachableUtilitiesInDomain(mu, Match(), PhiFunction::NegativePower(2)));
  const Alphabets ab = Example1Alphabets();
  const PayoffTable zeroable(ab.decisions, ab.types, {0.0, 0.0, 1.0, 1.0});
  EXPECT_THROW(RequireReachableUtilitiesInDomain(mu, zeroable, PhiFunction::NegativePower(2)),
               DomainError);
  EXPECT_NO_THROW(RequireReachableUtilitiesInDomain(mu, zeroable, PhiFunction::Power(0.5)));
}

}  // namespace
}  // namespace fairwelfare
