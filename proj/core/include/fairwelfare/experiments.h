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

#ifndef FAIRWELFARE_EXPERIMENTS_H_
#define FAIRWELFARE_EXPERIMENTS_H_

// Worked constructions comparing the two designers: the two-group example
// where they disagree, the general divergence construction for binary
// alphabets, an agreement case, and random population sweeps.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fairwelfare/constraints.h"
#include "fairwelfare/model.h"
#include "fairwelfare/objectives.h"
#include "fairwelfare/solvers.h"

namespace fairwelfare {

// Maximizes accuracy subject to a fairness constraint.
struct ConstrainedDesigner {
  PayoffTable accuracy;
  FairnessConstraint constraint;

  bool operator==(const ConstrainedDesigner&) const = default;
};

// Maximizes sum_g p_g phi(U(P_g)).
struct WelfareDesigner {
  PayoffTable utility;
  PhiFunction phi;

  bool operator==(const WelfareDesigner&) const = default;
};

using DesignerSpec = std::variant<ConstrainedDesigner, WelfareDesigner>;

SolveResult SolveDesigner(const PopulationDistribution& mu, const DesignerSpec& designer,
                          const SolverConfig& cfg);

// Solver optimum compared against the grid oracle at cfg.grid_resolution.
struct GridCheck {
  double oracle_objective = 0.0;
  // solver objective minus oracle objective; nonnegative up to tolerance.
  double discrepancy = 0.0;
  double bound = 0.0;
  bool within_bound = false;

  bool operator==(const GridCheck&) const = default;
};

GridCheck CheckAgainstGrid(const PopulationDistribution& mu, const DesignerSpec& designer,
                           const SolveResult& solved, const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Two groups, X = G, binary Y and D, u(d, y) = 1(d = y), and
// mu(Y = j | G = j) = delta with delta in (1/2, 1).

Alphabets Example1Alphabets();

// Throws PreconditionError unless delta is in the open interval (1/2, 1).
PopulationDistribution BuildExample1(double delta);

// Same alphabets, but mu(Y = 1 | G = g) = delta in both groups, so treating
// everyone is optimal for both designers. delta in [0, 1].
PopulationDistribution BuildUniformNeed(double delta);

struct Example1Scenario {
  double delta = 0.75;
  PhiFunction phi = PhiFunction::Identity();
  PayoffTable accuracy = PayoffTable::Agreement(Example1Alphabets(), PayoffRole::kAccuracy);
  // Equalized-odds relaxation for the constrained designer.
  double epsilon = 0.0;

  // Validates delta and epsilon.
  static Example1Scenario Make(double delta, PhiFunction phi, double epsilon = 0.0);
};

// Welfare of the policy treating group 0 with probability q0 and group 1
// with probability q1, in closed form:
//   1/2 phi((1 - q0) delta + q0 (1 - delta)) + 1/2 phi(q1 delta + (1 - q1)(1 - delta)).
double Example1WelfareClosedForm(double delta, double q0, double q1, const PhiFunction& phi);

struct Example1Report {
  double delta = 0.0;
  std::string phi;
  double epsilon = 0.0;

  std::vector<double> sw_policy;  // (q0, q1)
  double sw_welfare = 0.0;
  double sw_certainty_equivalent = 0.0;

  std::vector<double> co_policy;  // (q0, q1)
  double co_accuracy = 0.0;
  double co_welfare = 0.0;
  double co_welfare_closed_form = 0.0;
  double co_certainty_equivalent = 0.0;

  // phi(1/2), the upper bound on any equalized-odds policy's welfare.
  double jensen_bound = 0.0;
  double gap = 0.0;
  // Equalized-odds violation of the welfare-optimal policy.
  double violation = 0.0;
  bool sw_satisfies_constraint = false;
  bool co_satisfies_constraint = false;

  std::optional<GridCheck> sw_grid;
  std::optional<GridCheck> co_grid;

  bool operator==(const Example1Report&) const = default;
};

Example1Report RunExample1(const Example1Scenario& scenario, const SolverConfig& cfg,
                           bool grid_check = false);

// ---------------------------------------------------------------------------
// Divergence construction for binary D and G.

struct DivergenceReport {
  PopulationDistribution mu_constructed;
  std::string constraint;
  std::string phi;
  std::string y0;
  std::string y1;
  double threshold = 0.0;
  double delta_used = 0.0;
  Policy sw_policy;
  Policy co_policy;
  // Welfare at the sw policy and at the co policy.
  std::pair<double, double> sw_welfare_at_each;
  double constraint_violation_of_sw_policy = 0.0;
  double tv = 0.0;
  bool diverged = false;
  std::optional<GridCheck> sw_grid;
  std::optional<GridCheck> co_grid;
};

inline constexpr double kDefaultDivergenceMargin = 0.05;
// Induced joints further apart than this in total variation disagree.
inline constexpr double kDisagreementThreshold = 1e-6;

// delta = threshold + margin, or (threshold + 1) / 2 when that reaches 1.
double DivergenceDelta(double threshold, double margin);

// Builds the two-group population with X = G where group j has type y_j with
// probability delta (the witness types of u), solves both designers and
// checks that they disagree. The constrained designer uses `accuracy`, or u
// itself when absent. Throws PreconditionError when u is trivial or not
// binary in D, and InternalConsistencyError when the expected welfare optimum
// (q0, q1) = (0, 1) or the disagreement fails to materialize.
DivergenceReport ConstructDivergentPopulation(const PayoffTable& utility,
                                              const FairnessConstraint& constraint,
                                              const PhiFunction& phi, double margin,
                                              const SolverConfig& cfg,
                                              std::optional<PayoffTable> accuracy = std::nullopt,
                                              bool grid_check = false);

// ---------------------------------------------------------------------------
// Random populations.

struct SweepConfig {
  std::size_t covariates = 2;
  std::size_t types = 2;
  std::size_t groups = 2;
  std::size_t decisions = 2;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  // Defaults to 1(d = y) for both when absent. Must match SweepAlphabets.
  std::optional<PayoffTable> utility;
  std::optional<PayoffTable> accuracy;
  PhiFunction phi = PhiFunction::Power(0.5);
  FairnessConstraint constraint;
  bool grid_check = false;

  void Validate() const;
};

// Labels "0", "1", ... for every variable.
Alphabets SweepAlphabets(const SweepConfig& config);

struct SweepRow {
  std::size_t index = 0;
  // "ok" or "error".
  std::string status;
  std::string error;
  std::vector<double> sw_policy;
  std::vector<double> co_policy;
  double tv = 0.0;
  // Welfare at the sw policy minus welfare at the co policy.
  double welfare_gap = 0.0;
  double sw_violation = 0.0;
  bool diverged = false;
  std::optional<double> sw_grid_discrepancy;
  std::optional<double> co_grid_discrepancy;
  std::string grid_error;

  bool operator==(const SweepRow&) const = default;
};

struct SweepAggregate {
  std::size_t count = 0;
  std::size_t solved = 0;
  std::size_t errors = 0;
  std::size_t diverged = 0;
  // diverged / solved, 0 when nothing was solved.
  double disagreement_rate = 0.0;
  double mean_tv = 0.0;
  double mean_welfare_gap = 0.0;

  bool operator==(const SweepAggregate&) const = default;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  SweepAggregate aggregate;

  bool operator==(const SweepReport&) const = default;
};

// Draws config.count populations uniformly from the joint simplex
// (Dirichlet(1), seeded by config.seed) and compares the two designers on
// each. Per-row failures are recorded, not thrown.
SweepReport DisagreementSweep(const SweepConfig& config, const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Reports on a fixed population.

struct DesignerSummary {
  std::string kind;  // "constrained" or "welfare"
  std::string description;
  SolveResult result;
  std::optional<GridCheck> grid;
};

struct ComparisonReport {
  DesignerSummary constrained;
  DesignerSummary welfare;
  // Each designer's own objective evaluated at both policies.
  double accuracy_at_constrained = 0.0;
  double accuracy_at_welfare = 0.0;
  double welfare_at_constrained = 0.0;
  double welfare_at_welfare = 0.0;
  double welfare_gap = 0.0;
  double accuracy_gap = 0.0;
  double violation_of_welfare_policy = 0.0;
  double tv = 0.0;
  bool diverged = false;
};

ComparisonReport CompareDesigners(const PopulationDistribution& mu,
                                  const ConstrainedDesigner& constrained,
                                  const WelfareDesigner& welfare, const SolverConfig& cfg,
                                  bool grid_check = false);

struct AuditReport {
  // One entry per constraint kind, in kAllConstraintKinds order, at epsilon 0.
  std::vector<std::pair<std::string, double>> violations;
  std::optional<double> accuracy;
  std::optional<double> welfare;
  std::optional<double> jensen_gap;
  std::vector<std::pair<std::string, double>> group_utilities;
};

// `positive_label` and `negative_label` select the types used by the false
// negative and false positive variants.
AuditReport AuditPolicy(const PopulationDistribution& mu, const Policy& policy,
                        const std::optional<PayoffTable>& accuracy,
                        const std::optional<WelfareDesigner>& welfare,
                        const std::string& positive_label = "1",
                        const std::string& negative_label = "0");

}  // namespace fairwelfare

#endif  // FAIRWELFARE_EXPERIMENTS_H_
