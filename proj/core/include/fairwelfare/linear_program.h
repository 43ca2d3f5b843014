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

#ifndef FAIRWELFARE_LINEAR_PROGRAM_H_
#define FAIRWELFARE_LINEAR_PROGRAM_H_

// Dense two-phase simplex for the small linear programs that arise over
// policy variables (at most a few hundred columns). Bland's rule is used
// throughout, so degenerate problems such as exact fairness equalities cannot
// cycle.
//
// Lexicographic tie-breaking is done on the optimal face: after each stage,
// every nonbasic column with a strictly unfavourable reduced cost is zero in
// every optimal solution and is removed before the next stage's objective is
// optimized.

#include <cstddef>
#include <span>
#include <vector>

namespace fairwelfare {

enum class LpSense { kLessEqual, kGreaterEqual, kEqual };

struct LpConstraint {
  std::vector<double> coefficients;
  LpSense sense = LpSense::kLessEqual;
  double rhs = 0.0;
};

// maximize objective . x  subject to constraints and x >= 0.
struct LinearProgram {
  std::size_t num_variables = 0;
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;

  explicit LinearProgram(std::size_t n) : num_variables(n), objective(n, 0.0) {}
  void AddConstraint(std::vector<double> coefficients, LpSense sense, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpOptions {
  std::size_t max_pivots = 200000;
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-11;
  // Reduced costs below -face_tolerance remove a column from the optimal face.
  double face_tolerance = 1e-9;
  double pivot_tolerance = 1e-11;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t pivots = 0;
};

// Solves `lp`; when optimal, then minimizes each vector in `tie_breaks` in turn
// over the optimal face left by the previous stages. Throws SolverError when
// the pivot budget is exhausted.
LpResult SolveLinearProgram(const LinearProgram& lp,
                            std::span<const std::vector<double>> tie_breaks = {},
                            const LpOptions& options = {});

}  // namespace fairwelfare

#endif  // FAIRWELFARE_LINEAR_PROGRAM_H_
