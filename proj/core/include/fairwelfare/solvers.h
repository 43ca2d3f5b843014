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

#ifndef FAIRWELFARE_SOLVERS_H_
#define FAIRWELFARE_SOLVERS_H_

// Optimizers over randomized policies.
//
//  * SolveConstrained: accuracy maximization under a fairness constraint, a
//    linear program over the variables a(d|x).
//  * SolveSocialWelfare: concave welfare maximization by projected-gradient
//    ascent with multi-start; the rawls member is solved exactly as a
//    max-min linear program.
//  * GridOracle: exhaustive enumeration of policies on a uniform simplex grid,
//    used to verify the other two.
//
// Ties are broken towards the lexicographically smallest policy, comparing
// the coordinates a(d|x) for x in alphabet order and d ranging over all but
// the first decision. Equivalently, mass is kept on earlier decisions when
// that costs nothing. The grid oracle enumerates in the same order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairwelfare/constraints.h"
#include "fairwelfare/model.h"
#include "fairwelfare/objectives.h"

namespace fairwelfare {

enum class SolveStatus { kOptimal, kFallbackFeasible, kGridApproximate };

std::string_view SolveStatusName(SolveStatus status);

struct SolverConfig {
  // Subdivisions per simplex coordinate for the grid oracle.
  std::size_t grid_resolution = 50;
  double gradient_tolerance = 1e-8;
  std::size_t max_iterations = 100000;
  std::size_t multi_starts = 8;
  std::uint64_t seed = 0;

  // Throws ConfigurationError unless every field is positive.
  void Validate() const;
  bool operator==(const SolverConfig&) const = default;
};

struct SolveDiagnostics {
  // Gradient iterations of the winning start.
  std::size_t iterations = 0;
  // Norm of the projected gradient step at the returned policy.
  double gradient_norm = 0.0;
  std::size_t lp_pivots = 0;
  std::size_t winning_start = 0;
  // Starts that ran (starts outside phi's domain are skipped).
  std::size_t starts_run = 0;
  // Grid points evaluated by the oracle.
  std::uint64_t evaluations = 0;

  bool operator==(const SolveDiagnostics&) const = default;
};

struct SolveResult {
  Policy policy;
  // Accuracy for constrained solves; sum_g p_g phi(U(P_g)) for welfare solves.
  double objective_value = 0.0;
  // phi^{-1} of the welfare, for welfare solves.
  std::optional<double> certainty_equivalent;
  SolveStatus status = SolveStatus::kOptimal;
  SolveDiagnostics diagnostics;
};

// Evaluates a flattened policy, (x, d) row-major. -inf marks an infeasible
// policy.
using PolicyObjective = std::function<double(std::span<const double>)>;

// Largest grid the oracle will enumerate.
inline constexpr std::uint64_t kGridEvaluationCap = 100'000'000;

// Number of policies on the grid, saturating at UINT64_MAX.
std::uint64_t GridSize(std::size_t covariates, std::size_t decisions,
                       std::size_t resolution);

// Maximizes E_P[v(D, Y)] subject to the constraint. Never returns
// kFallbackFeasible for the shipped constraints, since every constant policy
// satisfies them.
SolveResult SolveConstrained(const PopulationDistribution& mu, const PayoffTable& accuracy,
                             const FairnessConstraint& constraint, const SolverConfig& cfg);

// Maximizes sum_{x,d} coefficients[x*|D|+d] a(d|x) subject to `extra`. When
// `extra` is infeasible, returns the policy that puts all mass on the first
// decision with status kFallbackFeasible.
SolveResult SolveLinearPolicyProgram(const PopulationDistribution& mu,
                                     std::span<const double> coefficients,
                                     const LinearSystem& extra, const SolverConfig& cfg);

// Maximizes sum_g p_g phi(U_g(a)). Throws DomainError when no start lies in
// phi's domain and SolverError when the ascent fails to converge.
SolveResult SolveSocialWelfare(const PopulationDistribution& mu, const PayoffTable& utility,
                               const PhiFunction& phi, const SolverConfig& cfg);

// max_a min_g U_g(a) as a linear program.
SolveResult SolveRawls(const PopulationDistribution& mu, const PayoffTable& utility,
                       const SolverConfig& cfg);

// Exhaustive search over policies whose rows lie on the grid with
// cfg.grid_resolution subdivisions. Throws CapacityError above
// kGridEvaluationCap. The first grid point in enumeration order wins ties.
SolveResult GridOracle(const PopulationDistribution& mu, const PolicyObjective& objective,
                       const SolverConfig& cfg);

// Oracle objectives, evaluated directly from mu without going through the
// solvers' formulations. The accuracy objective returns -inf when the
// constraint is violated beyond epsilon + kSolverTolerance.
PolicyObjective AccuracyObjective(const PopulationDistribution& mu, const PayoffTable& accuracy,
                                  std::optional<FairnessConstraint> constraint);
PolicyObjective WelfareObjective(const PopulationDistribution& mu, const PayoffTable& utility,
                                 const PhiFunction& phi);

// Worst-case distance between a grid-restricted optimum and the true optimum.
//
// Rounding a probability row to the grid moves it by at most
//   rho = floor(|D| / 2) / resolution
// in total variation. For the accuracy objective with epsilon > 0, mixing the
// optimum with the constant first-decision policy by lambda = 2 rho / epsilon
// restores enough slack for the rounded point to stay feasible, so the gap is
// at most range(v) * (rho + lambda) (range(v) once lambda >= 1, and
// range(v) * rho when epsilon = 1). For epsilon = 0 the grid gives no
// guarantee and the bound is +inf.
double GridBoundConstrained(const PopulationDistribution& mu, const PayoffTable& accuracy,
                            const FairnessConstraint& constraint, std::size_t resolution);

// For welfare, rounding moves every group utility down by at most
// range(u) * rho, so the gap is at most W(U*) - W(U* - range(u) * rho), with
// U* the optimal group utilities. +inf if the shifted utilities leave phi's
// domain.
double GridBoundWelfare(const PopulationDistribution& mu, const PayoffTable& utility,
                        const PhiFunction& phi, const Policy& optimum,
                        std::size_t resolution);

// Type labels witnessing that u is nontrivial: y1 prefers the second
// decision, y0 the first. Decisions are compared by position; |D| must be 2.
struct NontrivialWitness {
  std::size_t y0;
  std::size_t y1;
};

// First witness in alphabet order, or nullopt when every type ranks the two
// decisions the same way.
std::optional<NontrivialWitness> FindNontrivialWitness(const PayoffTable& utility);

// Smallest delta* in [1/2, 1) such that, in the two-group population with X = G
// and mu(Y = y_j | G = j) = delta, every delta > delta* makes group 1's
// utility strictly increasing in its treatment probability and group 0's
// strictly decreasing. With A = u(1,y1) - u(0,y1) and B = u(0,y0) - u(1,y0),
// delta* / (1 - delta*) = max(A/B, B/A). Throws PreconditionError unless
// A > 0 and B > 0.
double DivergenceThreshold(const PayoffTable& utility, std::size_t y0, std::size_t y1);
double DivergenceThreshold(const PayoffTable& utility, std::string_view y0_label,
                           std::string_view y1_label);

}  // namespace fairwelfare

#endif  // FAIRWELFARE_SOLVERS_H_
