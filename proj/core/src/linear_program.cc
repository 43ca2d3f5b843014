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

#include "fairwelfare/linear_program.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairwelfare/errors.h"

namespace fairwelfare {
namespace {

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const LpOptions& options)
      : options_(options), n_(lp.num_variables) {
    const std::size_t m = lp.constraints.size();
    // Column layout: structural | slack-or-surplus (one per inequality) |
    // artificial (one per row that needs it) | rhs.
    std::vector<LpConstraint> rows = lp.constraints;
    for (auto& row : rows) {
      if (row.rhs < 0.0) {
        for (double& c : row.coefficients) c = -c;
        row.rhs = -row.rhs;
        if (row.sense == LpSense::kLessEqual) {
          row.sense = LpSense::kGreaterEqual;
        } else if (row.sense == LpSense::kGreaterEqual) {
          row.sense = LpSense::kLessEqual;
        }
      }
    }
    std::size_t slacks = 0, artificials = 0;
    for (const auto& row : rows) {
      if (row.sense != LpSense::kEqual) ++slacks;
      if (row.sense != LpSense::kLessEqual) ++artificials;
    }
    first_artificial_ = n_ + slacks;
    cols_ = n_ + slacks + artificials;
    table_.assign(m, std::vector<double>(cols_ + 1, 0.0));
    basis_.assign(m, 0);
    allowed_.assign(cols_, true);

    std::size_t slack = n_, artificial = first_artificial_;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = rows[i];
      std::copy(row.coefficients.begin(), row.coefficients.end(), table_[i].begin());
      table_[i][cols_] = row.rhs;
      switch (row.sense) {
        case LpSense::kLessEqual:
          table_[i][slack] = 1.0;
          basis_[i] = slack++;
          break;
        case LpSense::kGreaterEqual:
          table_[i][slack++] = -1.0;
          table_[i][artificial] = 1.0;
          basis_[i] = artificial++;
          break;
        case LpSense::kEqual:
          table_[i][artificial] = 1.0;
          basis_[i] = artificial++;
          break;
      }
    }
  }

  std::size_t pivots() const { return pivots_; }

  // Phase one. Returns false when the constraints are infeasible.
  bool FindFeasibleBasis() {
    if (first_artificial_ == cols_) return true;
    std::vector<double> cost(cols_, 0.0);
    for (std::size_t j = first_artificial_; j < cols_; ++j) cost[j] = -1.0;
    Optimize(cost);
    if (Value() < -options_.feasibility_tolerance) return false;

    // Pivot zero-level artificials out of the basis; rows where that is
    // impossible are linearly dependent on the others and are dropped.
    for (std::size_t i = 0; i < table_.size();) {
      if (basis_[i] < first_artificial_) {
        ++i;
        continue;
      }
      std::size_t entering = cols_;
      double best = options_.feasibility_tolerance;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (std::abs(table_[i][j]) > best) {
          best = std::abs(table_[i][j]);
          entering = j;
        }
      }
      if (entering == cols_) {
        table_.erase(table_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      Pivot(i, entering);
      ++i;
    }
    for (std::size_t j = first_artificial_; j < cols_; ++j) allowed_[j] = false;
    return true;
  }

  // Maximizes cost . x over allowed columns. Returns false when unbounded.
  bool Optimize(const std::vector<double>& cost) {
    LoadObjective(cost);
    while (true) {
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed_[j] && z_[j] > options_.optimality_tolerance) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return true;

      std::size_t leaving = table_.size();
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < table_.size(); ++i) {
        const double a = table_[i][entering];
        if (a <= options_.pivot_tolerance) continue;
        const double ratio = std::max(table_[i][cols_], 0.0) / a;
        if (leaving == table_.size() || ratio < best_ratio - 1e-14 ||
            (ratio <= best_ratio + 1e-14 && basis_[i] < basis_[leaving])) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving == table_.size()) return false;
      Pivot(leaving, entering);
    }
  }

  // Removes nonbasic columns whose reduced cost under the last objective is
  // strictly unfavourable; they are zero throughout the optimal face.
  void RestrictToOptimalFace() {
    std::vector<bool> basic(cols_, false);
    for (std::size_t b : basis_) basic[b] = true;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!basic[j] && z_[j] < -options_.face_tolerance) allowed_[j] = false;
    }
  }

  std::vector<double> Solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (basis_[i] < n_) x[basis_[i]] = std::max(table_[i][cols_], 0.0);
    }
    return x;
  }

  std::size_t columns() const { return cols_; }

 private:
  double Value() const { return -z_[cols_]; }

  void LoadObjective(const std::vector<double>& cost) {
    z_.assign(cols_ + 1, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) z_[j] = cost[j];
    for (std::size_t i = 0; i < table_.size(); ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) z_[j] -= cb * table_[i][j];
    }
  }

  void Pivot(std::size_t r, std::size_t s) {
    if (++pivots_ > options_.max_pivots) {
      throw SolverError("simplex exceeded " + std::to_string(options_.max_pivots) +
                        " pivots");
    }
    auto& pivot_row = table_[r];
    const double p = pivot_row[s];
    for (double& v : pivot_row) v /= p;
    pivot_row[s] = 1.0;
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (i == r) continue;
      const double f = table_[i][s];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) table_[i][j] -= f * pivot_row[j];
      table_[i][s] = 0.0;
    }
    const double f = z_[s];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) z_[j] -= f * pivot_row[j];
      z_[s] = 0.0;
    }
    basis_[r] = s;
  }

  LpOptions options_;
  std::size_t n_;
  std::size_t cols_ = 0;
  std::size_t first_artificial_ = 0;
  std::vector<std::vector<double>> table_;
  std::vector<std::size_t> basis_;
  std::vector<bool> allowed_;
  std::vector<double> z_;
  std::size_t pivots_ = 0;
};

}  // namespace

void LinearProgram::AddConstraint(std::vector<double> coefficients, LpSense sense,
                                  double rhs) {
  if (coefficients.size() != num_variables) {
    throw UsageError("constraint has " + std::to_string(coefficients.size()) +
                     " coefficients, expected " + std::to_string(num_variables));
  }
  constraints.push_back(LpConstraint{std::move(coefficients), sense, rhs});
}

LpResult SolveLinearProgram(const LinearProgram& lp,
                            std::span<const std::vector<double>> tie_breaks,
                            const LpOptions& options) {
  if (lp.objective.size() != lp.num_variables) {
    throw UsageError("objective length does not match the number of variables");
  }
  Tableau tableau(lp, options);
  LpResult result;
  if (!tableau.FindFeasibleBasis()) {
    result.status = LpStatus::kInfeasible;
    result.pivots = tableau.pivots();
    return result;
  }
  auto extend = [&](std::span<const double> c, double sign) {
    std::vector<double> full(tableau.columns(), 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) full[j] = sign * c[j];
    return full;
  };
  if (!tableau.Optimize(extend(lp.objective, 1.0))) {
    result.status = LpStatus::kUnbounded;
    result.pivots = tableau.pivots();
    return result;
  }
  for (const auto& tie : tie_breaks) {
    if (tie.size() != lp.num_variables) throw UsageError("tie-break vector has wrong length");
    tableau.RestrictToOptimalFace();
    tableau.Optimize(extend(tie, -1.0));
  }
  result.status = LpStatus::kOptimal;
  result.x = tableau.Solution();
  result.objective = 0.0;
  for (std::size_t j = 0; j < lp.num_variables; ++j) {
    result.objective += lp.objective[j] * result.x[j];
  }
  result.pivots = tableau.pivots();
  return result;
}

}  // namespace fairwelfare
