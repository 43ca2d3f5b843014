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

#ifndef FAIRWELFARE_CONSTRAINTS_H_
#define FAIRWELFARE_CONSTRAINTS_H_

// Statistical fairness constraints: equalized odds, equal false negatives,
// equal false positives and statistical parity, together with their
// epsilon-relaxations.
//
// Each constraint compares group-conditional decision distributions
// P(D | event, G = g) across groups. The violation of a constraint is the
// largest total-variation distance between two such distributions, over all
// conditioning events and all pairs of groups for which both conditionals are
// defined. For binary D this is |E[D | event, G=g] - E[D | event, G=g']|.
// Relaxations of the false-negative, false-positive and parity constraints
// use the same total-variation scalarization as relaxed equalized odds.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairwelfare/model.h"

namespace fairwelfare {

enum class ConstraintKind {
  kEqualizedOdds,
  kEqualFalseNegatives,
  kEqualFalsePositives,
  kStatisticalParity,
};

inline constexpr ConstraintKind kAllConstraintKinds[] = {
    ConstraintKind::kEqualizedOdds, ConstraintKind::kEqualFalseNegatives,
    ConstraintKind::kEqualFalsePositives, ConstraintKind::kStatisticalParity};

// "equalized_odds", "equal_false_negatives", "equal_false_positives",
// "statistical_parity".
std::string_view ConstraintKindName(ConstraintKind kind);
std::optional<ConstraintKind> ParseConstraintKind(std::string_view name);

struct FairnessConstraint {
  ConstraintKind kind = ConstraintKind::kEqualizedOdds;
  // 0 is the exact constraint; values in (0, 1] bound the violation.
  double epsilon = 0.0;
  // Type labels playing the roles of Y=1 and Y=0 for the false-negative and
  // false-positive variants.
  std::string positive_label = "1";
  std::string negative_label = "0";

  // Throws ConfigurationError when epsilon is outside [0, 1].
  static FairnessConstraint Make(ConstraintKind kind, double epsilon = 0.0,
                                 std::string positive_label = "1",
                                 std::string negative_label = "0");

  bool operator==(const FairnessConstraint&) const = default;
};

// The conditioning events the constraint compares groups on, before the
// vacuity rule is applied. Throws ConfigurationError when a designated label
// is missing from Y.
std::vector<DecisionEvent> ConditioningEvents(const Alphabets& alphabets,
                                              const FairnessConstraint& c);

// Violations this small are accumulated roundoff and reported as 0.
inline constexpr double kViolationRoundoff = 1e-14;

// In [0, 1]. Clauses whose event has zero probability within a group are
// vacuous and skipped. Values below kViolationRoundoff are returned as 0.
double Violation(const JointDistribution& joint, const FairnessConstraint& c);

// Violation(joint, c) <= c.epsilon + kSolverTolerance.
bool Satisfies(const JointDistribution& joint, const FairnessConstraint& c);

enum class RowSense { kLessEqual, kEqual };

// sum_i coefficients[i] * a_i  (<= | =)  rhs, over the policy variables
// a(d|x) laid out in (x, d) row-major order.
struct LinearRow {
  std::vector<double> coefficients;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::string clause;
};

struct LinearSystem {
  std::size_t num_variables = 0;
  std::vector<LinearRow> rows;

  // Largest amount by which `point` violates any row (0 when feasible).
  double MaxViolation(std::span<const double> point) const;
  bool SatisfiedBy(std::span<const double> point, double tolerance) const {
    return MaxViolation(point) <= tolerance;
  }
};

// Linear description of the constraint over policy variables. For every
// non-vacuous clause (event, groups g < g') the conditional decision
// distributions are Q_g(d) = sum_x w_g(x) a(d|x) with w_g(x) = mu(x | event, g).
//   epsilon = 0: one equality Q_g(d) = Q_g'(d) per decision d.
//   epsilon > 0: sum_{d in S} (Q_g(d) - Q_g'(d)) <= epsilon for every nonempty
//                proper subset S of D, which is exactly TV(Q_g, Q_g') <= epsilon.
//                For binary D these are the two one-sided inequalities
//                |Q_g(1) - Q_g'(1)| <= epsilon.
LinearSystem ConstraintRows(const PopulationDistribution& mu,
                            const FairnessConstraint& c);

}  // namespace fairwelfare

#endif  // FAIRWELFARE_CONSTRAINTS_H_
