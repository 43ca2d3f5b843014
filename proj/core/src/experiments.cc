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

#include "fairwelfare/experiments.h"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fairwelfare/errors.h"

namespace fairwelfare {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> TreatmentProbabilities(const Policy& policy) {
  std::vector<double> q;
  for (std::size_t x = 0; x < policy.alphabets().covariates.size(); ++x) {
    q.push_back(policy.prob(x, 1));
  }
  return q;
}

std::vector<std::string> CountingLabels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

// mass(x = g, y, g) with group j of type `own[j]` w.p. delta and of the other
// witness type otherwise.
PopulationDistribution TwoGroupPopulation(const Alphabets& ab, std::size_t y0, std::size_t y1,
                                          double delta) {
  const std::size_t ny = ab.types.size();
  std::vector<double> mass(2 * ny * 2, 0.0);
  auto at = [&](std::size_t x, std::size_t y, std::size_t g) -> double& {
    return mass[(x * ny + y) * 2 + g];
  };
  at(0, y0, 0) += 0.5 * delta;
  at(0, y1, 0) += 0.5 * (1.0 - delta);
  at(1, y1, 1) += 0.5 * delta;
  at(1, y0, 1) += 0.5 * (1.0 - delta);
  return PopulationDistribution(ab, std::move(mass));
}

double EvaluateWelfare(const PopulationDistribution& mu, const Policy& policy,
                       const WelfareDesigner& designer) {
  return SocialWelfare(InduceJoint(mu, policy), designer.utility, designer.phi);
}

std::string DescribeConstraint(const FairnessConstraint& c) {
  std::ostringstream out;
  out << ConstraintKindName(c.kind) << " epsilon=" << c.epsilon;
  return out.str();
}

std::vector<double> DirichletSample(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> out(n);
  double total = 0.0;
  for (double& v : out) {
    v = -std::log(1.0 - uniform(rng));
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace

SolveResult SolveDesigner(const PopulationDistribution& mu, const DesignerSpec& designer,
                          const SolverConfig& cfg) {
  if (const auto* co = std::get_if<ConstrainedDesigner>(&designer)) {
    return SolveConstrained(mu, co->accuracy, co->constraint, cfg);
  }
  const auto& sw = std::get<WelfareDesigner>(designer);
  return SolveSocialWelfare(mu, sw.utility, sw.phi, cfg);
}

GridCheck CheckAgainstGrid(const PopulationDistribution& mu, const DesignerSpec& designer,
                           const SolveResult& solved, const SolverConfig& cfg) {
  GridCheck check;
  if (const auto* co = std::get_if<ConstrainedDesigner>(&designer)) {
    check.oracle_objective =
        GridOracle(mu, AccuracyObjective(mu, co->accuracy, co->constraint), cfg).objective_value;
    check.bound = GridBoundConstrained(mu, co->accuracy, co->constraint, cfg.grid_resolution);
  } else {
    const auto& sw = std::get<WelfareDesigner>(designer);
    check.oracle_objective =
        GridOracle(mu, WelfareObjective(mu, sw.utility, sw.phi), cfg).objective_value;
    check.bound = GridBoundWelfare(mu, sw.utility, sw.phi, solved.policy, cfg.grid_resolution);
  }
  check.discrepancy = solved.objective_value - check.oracle_objective;
  check.within_bound = check.discrepancy >= -kSolverTolerance &&
                       check.discrepancy <= check.bound + kSolverTolerance;
  return check;
}

Alphabets Example1Alphabets() {
  return Alphabets::Make({"0", "1"}, {"0", "1"}, {"0", "1"}, {"0", "1"});
}

PopulationDistribution BuildExample1(double delta) {
  if (!(delta > 0.5 && delta < 1.0)) {
    std::ostringstream msg;
    msg << "delta must lie in the open interval (1/2, 1), got " << delta;
    throw PreconditionError(msg.str());
  }
  return TwoGroupPopulation(Example1Alphabets(), 0, 1, delta);
}

PopulationDistribution BuildUniformNeed(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw PreconditionError("delta must lie in [0, 1]");
  }
  std::vector<double> mass(8, 0.0);
  // (x, y, g) with x = g.
  mass[(0 * 2 + 1) * 2 + 0] = 0.5 * delta;
  mass[(0 * 2 + 0) * 2 + 0] = 0.5 * (1.0 - delta);
  mass[(1 * 2 + 1) * 2 + 1] = 0.5 * delta;
  mass[(1 * 2 + 0) * 2 + 1] = 0.5 * (1.0 - delta);
  return PopulationDistribution(Example1Alphabets(), std::move(mass));
}

Example1Scenario Example1Scenario::Make(double delta, PhiFunction phi, double epsilon) {
  BuildExample1(delta);
  FairnessConstraint::Make(ConstraintKind::kEqualizedOdds, epsilon);
  Example1Scenario s;
  s.delta = delta;
  s.phi = phi;
  s.epsilon = epsilon;
  return s;
}

double Example1WelfareClosedForm(double delta, double q0, double q1, const PhiFunction& phi) {
  const double u0 = (1.0 - q0) * delta + q0 * (1.0 - delta);
  const double u1 = q1 * delta + (1.0 - q1) * (1.0 - delta);
  if (phi.is_rawls()) return std::min(u0, u1);
  return 0.5 * phi(u0) + 0.5 * phi(u1);
}

Example1Report RunExample1(const Example1Scenario& scenario, const SolverConfig& cfg,
                           bool grid_check) {
  const PopulationDistribution mu = BuildExample1(scenario.delta);
  const Alphabets ab = Example1Alphabets();
  const WelfareDesigner sw{PayoffTable::Agreement(ab), scenario.phi};
  const FairnessConstraint eo =
      FairnessConstraint::Make(ConstraintKind::kEqualizedOdds, scenario.epsilon);
  const ConstrainedDesigner co{scenario.accuracy, eo};

  const SolveResult sw_result = SolveDesigner(mu, sw, cfg);
  const SolveResult co_result = SolveDesigner(mu, co, cfg);
  const JointDistribution sw_joint = InduceJoint(mu, sw_result.policy);
  const JointDistribution co_joint = InduceJoint(mu, co_result.policy);

  Example1Report report;
  report.delta = scenario.delta;
  report.phi = scenario.phi.Spec();
  report.epsilon = scenario.epsilon;
  report.sw_policy = TreatmentProbabilities(sw_result.policy);
  report.sw_welfare = SocialWelfare(sw_joint, sw.utility, sw.phi);
  report.sw_certainty_equivalent = WelfareCertaintyEquivalent(sw_joint, sw.utility, sw.phi);
  report.co_policy = TreatmentProbabilities(co_result.policy);
  report.co_accuracy = co_result.objective_value;
  report.co_welfare = SocialWelfare(co_joint, sw.utility, sw.phi);
  report.co_welfare_closed_form = Example1WelfareClosedForm(
      scenario.delta, report.co_policy[0], report.co_policy[1], scenario.phi);
  report.co_certainty_equivalent = WelfareCertaintyEquivalent(co_joint, sw.utility, sw.phi);
  report.jensen_bound = scenario.phi.is_rawls() ? 0.5 : scenario.phi(0.5);
  report.gap = report.sw_welfare - report.co_welfare;
  report.violation = Violation(sw_joint, eo);
  report.sw_satisfies_constraint = Satisfies(sw_joint, eo);
  report.co_satisfies_constraint = Satisfies(co_joint, eo);
  if (grid_check) {
    report.sw_grid = CheckAgainstGrid(mu, sw, sw_result, cfg);
    report.co_grid = CheckAgainstGrid(mu, co, co_result, cfg);
  }
  return report;
}

double DivergenceDelta(double threshold, double margin) {
  if (!(margin > 0.0)) throw ConfigurationError("margin must be positive");
  const double delta = threshold + margin;
  return delta >= 1.0 ? (threshold + 1.0) / 2.0 : delta;
}

DivergenceReport ConstructDivergentPopulation(const PayoffTable& utility,
                                              const FairnessConstraint& constraint,
                                              const PhiFunction& phi, double margin,
                                              const SolverConfig& cfg,
                                              std::optional<PayoffTable> accuracy,
                                              bool grid_check) {
  if (utility.decisions().size() != 2) {
    throw PreconditionError("the divergence construction needs exactly two decisions");
  }
  const auto witness = FindNontrivialWitness(utility);
  if (!witness) {
    throw PreconditionError(
        "utility fails nontriviality: every type ranks the two decisions the same way");
  }
  const double threshold = DivergenceThreshold(utility, witness->y0, witness->y1);
  const double delta = DivergenceDelta(threshold, margin);

  std::vector<std::string> types(utility.types().labels().begin(),
                                 utility.types().labels().end());
  std::vector<std::string> decisions(utility.decisions().labels().begin(),
                                     utility.decisions().labels().end());
  const Alphabets ab = Alphabets::Make({"0", "1"}, types, {"0", "1"}, decisions);
  const PopulationDistribution mu = TwoGroupPopulation(ab, witness->y0, witness->y1, delta);

  const WelfareDesigner sw{utility, phi};
  const ConstrainedDesigner co{accuracy ? *accuracy : utility.WithRole(PayoffRole::kAccuracy),
                               constraint};
  const SolveResult sw_result = SolveDesigner(mu, sw, cfg);
  const SolveResult co_result = SolveDesigner(mu, co, cfg);
  const JointDistribution sw_joint = InduceJoint(mu, sw_result.policy);
  const JointDistribution co_joint = InduceJoint(mu, co_result.policy);

  DivergenceReport report{mu,
                          std::string(ConstraintKindName(constraint.kind)),
                          phi.Spec(),
                          utility.types().label(witness->y0),
                          utility.types().label(witness->y1),
                          threshold,
                          delta,
                          sw_result.policy,
                          co_result.policy,
                          {},
                          0.0,
                          0.0,
                          false,
                          std::nullopt,
                          std::nullopt};
  report.sw_welfare_at_each = {EvaluateWelfare(mu, sw_result.policy, sw),
                               EvaluateWelfare(mu, co_result.policy, sw)};
  report.constraint_violation_of_sw_policy = Violation(sw_joint, constraint);
  report.tv = TotalVariation(sw_joint, co_joint);
  report.diverged = report.tv > kDisagreementThreshold;
  if (grid_check) {
    report.sw_grid = CheckAgainstGrid(mu, sw, sw_result, cfg);
    report.co_grid = CheckAgainstGrid(mu, co, co_result, cfg);
  }

  const double q0 = sw_result.policy.prob(0, 1), q1 = sw_result.policy.prob(1, 1);
  if (q0 > 1e-6 || q1 < 1.0 - 1e-6) {
    std::ostringstream msg;
    msg << "welfare optimum is (" << q0 << ", " << q1 << "), expected (0, 1) at delta "
        << delta << " above the threshold " << threshold;
    throw InternalConsistencyError(msg.str());
  }
  if (Satisfies(sw_joint, constraint)) {
    throw InternalConsistencyError("welfare optimum satisfies " + DescribeConstraint(constraint));
  }
  if (!Satisfies(co_joint, constraint)) {
    throw InternalConsistencyError("constrained optimum violates " +
                                   DescribeConstraint(constraint));
  }
  if (!report.diverged) {
    throw InternalConsistencyError("designers agree on the constructed population");
  }
  return report;
}

void SweepConfig::Validate() const {
  if (covariates == 0 || types == 0 || groups == 0 || decisions == 0) {
    throw ConfigurationError("sweep alphabet sizes must be positive");
  }
  const Alphabets ab = SweepAlphabets(*this);
  if (utility) utility->RequireCompatible(ab);
  if (accuracy) accuracy->RequireCompatible(ab);
}

Alphabets SweepAlphabets(const SweepConfig& config) {
  return Alphabets::Make(CountingLabels(config.covariates), CountingLabels(config.types),
                         CountingLabels(config.groups), CountingLabels(config.decisions));
}

SweepReport DisagreementSweep(const SweepConfig& config, const SolverConfig& cfg) {
  config.Validate();
  cfg.Validate();
  const Alphabets ab = SweepAlphabets(config);
  const WelfareDesigner sw{config.utility ? *config.utility : PayoffTable::Agreement(ab),
                           config.phi};
  const ConstrainedDesigner co{
      config.accuracy ? *config.accuracy : PayoffTable::Agreement(ab, PayoffRole::kAccuracy),
      config.constraint};
  const std::size_t cells = ab.covariates.size() * ab.types.size() * ab.groups.size();

  std::mt19937_64 rng(config.seed);
  SweepReport report;
  for (std::size_t i = 0; i < config.count; ++i) {
    SweepRow row;
    row.index = i;
    std::vector<double> mass = DirichletSample(rng, cells);
    try {
      const PopulationDistribution mu(ab, std::move(mass), kSolverTolerance);
      const SolveResult sw_result = SolveDesigner(mu, sw, cfg);
      const SolveResult co_result = SolveDesigner(mu, co, cfg);
      const JointDistribution sw_joint = InduceJoint(mu, sw_result.policy);
      const JointDistribution co_joint = InduceJoint(mu, co_result.policy);
      row.sw_policy.assign(sw_result.policy.values().begin(), sw_result.policy.values().end());
      row.co_policy.assign(co_result.policy.values().begin(), co_result.policy.values().end());
      row.tv = TotalVariation(sw_joint, co_joint);
      row.welfare_gap = sw_result.objective_value - EvaluateWelfare(mu, co_result.policy, sw);
      row.sw_violation = Violation(sw_joint, co.constraint);
      row.diverged = row.tv > kDisagreementThreshold;
      row.status = "ok";
      if (config.grid_check) {
        try {
          row.sw_grid_discrepancy = CheckAgainstGrid(mu, sw, sw_result, cfg).discrepancy;
          row.co_grid_discrepancy = CheckAgainstGrid(mu, co, co_result, cfg).discrepancy;
        } catch (const Error& e) {
          row.grid_error = e.what();
        }
      }
    } catch (const Error& e) {
      row.status = "error";
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }

  SweepAggregate& agg = report.aggregate;
  agg.count = report.rows.size();
  for (const SweepRow& row : report.rows) {
    if (row.status != "ok") {
      ++agg.errors;
      continue;
    }
    ++agg.solved;
    if (row.diverged) ++agg.diverged;
    agg.mean_tv += row.tv;
    agg.mean_welfare_gap += row.welfare_gap;
  }
  if (agg.solved > 0) {
    const double n = static_cast<double>(agg.solved);
    agg.disagreement_rate = static_cast<double>(agg.diverged) / n;
    agg.mean_tv /= n;
    agg.mean_welfare_gap /= n;
  }
  return report;
}

ComparisonReport CompareDesigners(const PopulationDistribution& mu,
                                  const ConstrainedDesigner& constrained,
                                  const WelfareDesigner& welfare, const SolverConfig& cfg,
                                  bool grid_check) {
  const SolveResult co_result = SolveDesigner(mu, constrained, cfg);
  const SolveResult sw_result = SolveDesigner(mu, welfare, cfg);
  const JointDistribution co_joint = InduceJoint(mu, co_result.policy);
  const JointDistribution sw_joint = InduceJoint(mu, sw_result.policy);

  ComparisonReport report{
      {"constrained", DescribeConstraint(constrained.constraint), co_result, std::nullopt},
      {"welfare", "phi=" + welfare.phi.Spec(), sw_result, std::nullopt}};
  report.accuracy_at_constrained = ExpectedPayoff(co_joint, constrained.accuracy);
  report.accuracy_at_welfare = ExpectedPayoff(sw_joint, constrained.accuracy);
  report.welfare_at_constrained = SocialWelfare(co_joint, welfare.utility, welfare.phi);
  report.welfare_at_welfare = SocialWelfare(sw_joint, welfare.utility, welfare.phi);
  report.welfare_gap = report.welfare_at_welfare - report.welfare_at_constrained;
  report.accuracy_gap = report.accuracy_at_constrained - report.accuracy_at_welfare;
  report.violation_of_welfare_policy = Violation(sw_joint, constrained.constraint);
  report.tv = TotalVariation(co_joint, sw_joint);
  report.diverged = report.tv > kDisagreementThreshold;
  if (grid_check) {
    report.constrained.grid = CheckAgainstGrid(mu, constrained, co_result, cfg);
    report.welfare.grid = CheckAgainstGrid(mu, welfare, sw_result, cfg);
  }
  return report;
}

AuditReport AuditPolicy(const PopulationDistribution& mu, const Policy& policy,
                        const std::optional<PayoffTable>& accuracy,
                        const std::optional<WelfareDesigner>& welfare,
                        const std::string& positive_label, const std::string& negative_label) {
  const JointDistribution joint = InduceJoint(mu, policy);
  AuditReport report;
  for (ConstraintKind kind : kAllConstraintKinds) {
    const FairnessConstraint c = FairnessConstraint::Make(kind, 0.0, positive_label,
                                                          negative_label);
    report.violations.emplace_back(std::string(ConstraintKindName(kind)), Violation(joint, c));
  }
  if (accuracy) report.accuracy = ExpectedPayoff(joint, *accuracy);
  if (welfare) {
    report.welfare = SocialWelfare(joint, welfare->utility, welfare->phi);
    if (!welfare->phi.is_rawls()) {
      report.jensen_gap = JensenGap(joint, welfare->utility, welfare->phi);
    }
    const GroupProfile profile = GroupUtilities(joint, welfare->utility);
    for (std::size_t k = 0; k < profile.groups.size(); ++k) {
      report.group_utilities.emplace_back(mu.alphabets().groups.label(profile.groups[k]),
                                          profile.utilities[k]);
    }
  }
  return report;
}

}  // namespace fairwelfare
