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

#include <algorithm>
#include <cmath>
#include <utility>

#include "fairwelfare/errors.h"

namespace fairwelfare {
namespace {

constexpr std::size_t kMaxSubsetDecisions = 16;

// Probability of the event within group g under the joint.
double EventGroupMass(const JointDistribution& joint, const DecisionEvent& event,
                      std::size_t g) {
  const Alphabets& ab = joint.alphabets();
  double total = 0.0;
  for (std::size_t x = 0; x < ab.covariates.size(); ++x)
    for (std::size_t y = 0; y < ab.types.size(); ++y) {
      if (event.type && *event.type != y) continue;
      for (std::size_t d = 0; d < ab.decisions.size(); ++d) total += joint.mass(x, y, g, d);
    }
  return total;
}

// w_g(x) = mu(x | event, G = g), or empty when the event has no mass in g.
std::vector<double> CovariateWeights(const PopulationDistribution& mu,
                                     const DecisionEvent& event, std::size_t g) {
  const Alphabets& ab = mu.alphabets();
  std::vector<double> w(ab.covariates.size(), 0.0);
  double total = 0.0;
  for (std::size_t x = 0; x < ab.covariates.size(); ++x)
    for (std::size_t y = 0; y < ab.types.size(); ++y) {
      if (event.type && *event.type != y) continue;
      w[x] += mu.mass(x, y, g);
    }
  for (double v : w) total += v;
  if (!(total > 0.0)) return {};
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

std::string_view ConstraintKindName(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kEqualizedOdds: return "equalized_odds";
    case ConstraintKind::kEqualFalseNegatives: return "equal_false_negatives";
    case ConstraintKind::kEqualFalsePositives: return "equal_false_positives";
    case ConstraintKind::kStatisticalParity: return "statistical_parity";
  }
  return "unknown";
}

std::optional<ConstraintKind> ParseConstraintKind(std::string_view name) {
  for (ConstraintKind k : kAllConstraintKinds) {
    if (ConstraintKindName(k) == name) return k;
  }
  return std::nullopt;
}

FairnessConstraint FairnessConstraint::Make(ConstraintKind kind, double epsilon,
                                            std::string positive_label,
                                            std::string negative_label) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ConfigurationError("constraint epsilon must lie in [0, 1], got " +
                             std::to_string(epsilon));
  }
  return FairnessConstraint{kind, epsilon, std::move(positive_label),
                            std::move(negative_label)};
}

std::vector<DecisionEvent> ConditioningEvents(const Alphabets& alphabets,
                                              const FairnessConstraint& c) {
  std::vector<DecisionEvent> events;
  switch (c.kind) {
    case ConstraintKind::kEqualizedOdds:
      for (std::size_t y = 0; y < alphabets.types.size(); ++y) {
        events.push_back(DecisionEvent{y, std::nullopt});
      }
      break;
    case ConstraintKind::kEqualFalseNegatives:
      events.push_back(DecisionEvent{alphabets.types.index(c.positive_label), std::nullopt});
      break;
    case ConstraintKind::kEqualFalsePositives:
      events.push_back(DecisionEvent{alphabets.types.index(c.negative_label), std::nullopt});
      break;
    case ConstraintKind::kStatisticalParity:
      events.push_back(DecisionEvent{});
      break;
  }
  return events;
}

double Violation(const JointDistribution& joint, const FairnessConstraint& c) {
  const Alphabets& ab = joint.alphabets();
  double worst = 0.0;
  for (DecisionEvent event : ConditioningEvents(ab, c)) {
    std::vector<std::vector<double>> conditionals;
    for (std::size_t g = 0; g < ab.groups.size(); ++g) {
      if (!(EventGroupMass(joint, event, g) > 0.0)) continue;
      event.group = g;
      conditionals.push_back(ConditionalDecisionDistribution(joint, event));
    }
    for (std::size_t i = 0; i < conditionals.size(); ++i)
      for (std::size_t j = i + 1; j < conditionals.size(); ++j)
        worst = std::max(worst, TotalVariation(conditionals[i], conditionals[j]));
  }
  if (worst < kViolationRoundoff) return 0.0;
  return std::min(worst, 1.0);
}

bool Satisfies(const JointDistribution& joint, const FairnessConstraint& c) {
  return Violation(joint, c) <= c.epsilon + kSolverTolerance;
}

double LinearSystem::MaxViolation(std::span<const double> point) const {
  if (point.size() != num_variables) throw UsageError("point has wrong dimension");
  double worst = 0.0;
  for (const LinearRow& row : rows) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < num_variables; ++i) lhs += row.coefficients[i] * point[i];
    const double excess =
        row.sense == RowSense::kEqual ? std::abs(lhs - row.rhs) : lhs - row.rhs;
    worst = std::max(worst, excess);
  }
  return worst;
}

LinearSystem ConstraintRows(const PopulationDistribution& mu,
                            const FairnessConstraint& c) {
  const Alphabets& ab = mu.alphabets();
  const std::size_t nx = ab.covariates.size();
  const std::size_t nd = ab.decisions.size();
  if (c.epsilon > 0.0 && nd > kMaxSubsetDecisions) {
    throw ConfigurationError("relaxed constraints support at most 16 decisions");
  }
  LinearSystem system;
  system.num_variables = nx * nd;

  for (DecisionEvent event : ConditioningEvents(ab, c)) {
    std::vector<std::pair<std::size_t, std::vector<double>>> weights;
    for (std::size_t g = 0; g < ab.groups.size(); ++g) {
      auto w = CovariateWeights(mu, event, g);
      if (!w.empty()) weights.emplace_back(g, std::move(w));
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
      for (std::size_t j = i + 1; j < weights.size(); ++j) {
        const auto& [g, wg] = weights[i];
        const auto& [h, wh] = weights[j];
        DecisionEvent described = event;
        const std::string where = described.Describe(ab) + ", G=" + ab.groups.label(g) +
                                  " vs G=" + ab.groups.label(h);
        if (c.epsilon == 0.0) {
          for (std::size_t d = 0; d < nd; ++d) {
            LinearRow row{std::vector<double>(system.num_variables, 0.0),
                          RowSense::kEqual, 0.0,
                          where + ", D=" + ab.decisions.label(d)};
            for (std::size_t x = 0; x < nx; ++x) row.coefficients[x * nd + d] = wg[x] - wh[x];
            system.rows.push_back(std::move(row));
          }
          continue;
        }
        // Nonempty proper subsets of D, enumerated by bitmask.
        const std::size_t full = (std::size_t{1} << nd) - 1;
        for (std::size_t mask = 1; mask < full; ++mask) {
          LinearRow row{std::vector<double>(system.num_variables, 0.0),
                        RowSense::kLessEqual, c.epsilon, where + ", D in {"};
          bool first = true;
          for (std::size_t d = 0; d < nd; ++d) {
            if (!(mask & (std::size_t{1} << d))) continue;
            row.clause += (first ? "" : ",") + ab.decisions.label(d);
            first = false;
            for (std::size_t x = 0; x < nx; ++x) row.coefficients[x * nd + d] = wg[x] - wh[x];
          }
          row.clause += "}";
          system.rows.push_back(std::move(row));
        }
      }
    }
  }
  return system;
}

}  // namespace fairwelfare
