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

#include "fairwelfare/solvers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fairwelfare/errors.h"
#include "fairwelfare/linear_program.h"

namespace fairwelfare {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;
constexpr std::size_t kMaxShrinks = 40;
// Entries below this are treated as exact zeros in returned policies.
constexpr double kSnap = 1e-12;
// Relative tolerance when comparing objective values of competing starts.
constexpr double kTieTolerance = 1e-12;

bool Improves(double candidate, double incumbent) {
  return candidate > incumbent + kTieTolerance * std::max(1.0, std::abs(incumbent));
}

// Euclidean projection of `row` onto the probability simplex.
void ProjectOntoSimplex(std::span<double> row) {
  std::vector<double> sorted(row.begin(), row.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) tau = t;
  }
  for (double& v : row) v = std::max(v - tau, 0.0);
}

void ProjectRows(std::span<double> flat, std::size_t nd) {
  for (std::size_t offset = 0; offset < flat.size(); offset += nd) {
    ProjectOntoSimplex(flat.subspan(offset, nd));
  }
}

// Zeroes tiny entries and renormalizes each row exactly.
Policy CleanPolicy(const Alphabets& alphabets, std::vector<double> flat) {
  const std::size_t nd = alphabets.decisions.size();
  for (std::size_t offset = 0; offset < flat.size(); offset += nd) {
    double total = 0.0;
    for (std::size_t d = 0; d < nd; ++d) {
      double& v = flat[offset + d];
      if (!(v > kSnap)) v = 0.0;
      if (v > 1.0 - kSnap) v = 1.0;
      total += v;
    }
    if (!(total > 0.0)) throw SolverError("optimizer produced an empty policy row");
    for (std::size_t d = 0; d < nd; ++d) flat[offset + d] /= total;
  }
  return Policy(alphabets, std::move(flat), kSolverTolerance);
}

// Unit vectors e_{x,d} for d >= 1, in tie-break order, padded to `width`.
std::vector<std::vector<double>> TieBreakVectors(std::size_t nx, std::size_t nd,
                                                 std::size_t width) {
  std::vector<std::vector<double>> out;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t d = 1; d < nd; ++d) {
      std::vector<double> e(width, 0.0);
      e[x * nd + d] = 1.0;
      out.push_back(std::move(e));
    }
  return out;
}

void AddSimplexRows(LinearProgram& lp, std::size_t nx, std::size_t nd) {
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<double> row(lp.num_variables, 0.0);
    for (std::size_t d = 0; d < nd; ++d) row[x * nd + d] = 1.0;
    lp.AddConstraint(std::move(row), LpSense::kEqual, 1.0);
  }
}

// U_g(a) = sum_{x,d} W_g(x,d) a(d|x) with W_g(x,d) = sum_y mu(x,y|g) u(d,y),
// restricted to groups with p_g > 0.
class WelfareProblem {
 public:
  WelfareProblem(const PopulationDistribution& mu, const PayoffTable& utility,
                 const PhiFunction& phi)
      : phi_(phi) {
    utility.RequireCompatible(mu.alphabets());
    const Alphabets& ab = mu.alphabets();
    nx_ = ab.covariates.size();
    nd_ = ab.decisions.size();
    for (std::size_t g : mu.positive_groups()) {
      weights_.push_back(mu.group_prior(g));
      std::vector<double> w(nx_ * nd_, 0.0);
      for (std::size_t x = 0; x < nx_; ++x)
        for (std::size_t d = 0; d < nd_; ++d)
          for (std::size_t y = 0; y < ab.types.size(); ++y)
            w[x * nd_ + d] += mu.conditional(x, y, g) * utility(d, y);
      coefficients_.push_back(std::move(w));
    }
  }

  std::size_t groups() const { return weights_.size(); }
  std::size_t dimension() const { return nx_ * nd_; }
  std::size_t decisions() const { return nd_; }
  std::size_t covariates() const { return nx_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> coefficients(std::size_t k) const { return coefficients_[k]; }

  void Utilities(std::span<const double> a, std::span<double> out) const {
    for (std::size_t k = 0; k < groups(); ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) s += coefficients_[k][i] * a[i];
      out[k] = s;
    }
  }

  bool InDomain(std::span<const double> utilities) const {
    return std::all_of(utilities.begin(), utilities.end(),
                       [&](double u) { return phi_.InDomain(u); });
  }

  // Ascent objective: the certainty equivalent, a strictly increasing
  // transform of the welfare with the same maximizers.
  double Value(std::span<const double> utilities) const {
    return AggregateCertaintyEquivalent(weights_, utilities, phi_);
  }

  void Gradient(std::span<const double> utilities, std::span<double> out) const {
    std::vector<double> dU(groups());
    AggregateCertaintyEquivalentGradient(weights_, utilities, phi_, dU);
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < groups(); ++k)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += dU[k] * coefficients_[k][i];
  }

  // Moves mass between decisions that no group can tell apart to the first
  // of them. Leaves every group utility unchanged.
  void MergeIndistinguishableDecisions(std::span<double> a) const {
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t d = 1; d < nd_; ++d)
        for (std::size_t e = 0; e < d; ++e) {
          bool same = true;
          for (std::size_t k = 0; k < groups() && same; ++k) {
            same = coefficients_[k][x * nd_ + d] == coefficients_[k][x * nd_ + e];
          }
          if (same) {
            a[x * nd_ + e] += a[x * nd_ + d];
            a[x * nd_ + d] = 0.0;
            break;
          }
        }
  }

 private:
  PhiFunction phi_;
  std::size_t nx_ = 0;
  std::size_t nd_ = 0;
  std::vector<double> weights_;
  std::vector<std::vector<double>> coefficients_;
};

struct AscentOutcome {
  std::vector<double> policy;
  double value = -kInf;
  std::size_t iterations = 0;
  double gradient_norm = kInf;
  bool converged = false;
};

AscentOutcome Ascend(const WelfareProblem& problem, std::vector<double> a,
                     const SolverConfig& cfg) {
  const std::size_t n = problem.dimension();
  const std::size_t nd = problem.decisions();
  std::vector<double> utilities(problem.groups()), trial_utilities(problem.groups());
  std::vector<double> gradient(n), trial(n);
  problem.Utilities(a, utilities);

  AscentOutcome out;
  double value = problem.Value(utilities);
  std::vector<double> previous_a, previous_gradient;
  std::size_t iteration = 0;
  for (; iteration < cfg.max_iterations; ++iteration) {
    problem.Gradient(utilities, gradient);
    for (std::size_t i = 0; i < n; ++i) trial[i] = a[i] + gradient[i];
    ProjectRows(trial, nd);
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += (trial[i] - a[i]) * (trial[i] - a[i]);
    norm = std::sqrt(norm);
    out.gradient_norm = norm;
    if (norm < cfg.gradient_tolerance) {
      out.converged = true;
      break;
    }

    // Barzilai-Borwein guess for the first trial step; 1 when the curvature
    // estimate is unusable.
    double step = 1.0;
    if (!previous_a.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = a[i] - previous_a[i];
        const double y = previous_gradient[i] - gradient[i];
        ss += s * s;
        sy += s * y;
      }
      if (sy > 0.0 && ss > 0.0) step = std::clamp(ss / sy, 1e-12, 1e12);
    }
    previous_a = a;
    previous_gradient = gradient;

    bool accepted = false;
    for (std::size_t shrink = 0; shrink <= kMaxShrinks; ++shrink) {
      if (shrink > 0) step *= 0.5;
      if (shrink > 0 || step != 1.0) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = a[i] + step * gradient[i];
        ProjectRows(trial, nd);
      }
      problem.Utilities(trial, trial_utilities);
      if (!problem.InDomain(trial_utilities)) continue;
      const double trial_value = problem.Value(trial_utilities);
      double slope = 0.0;
      for (std::size_t i = 0; i < n; ++i) slope += gradient[i] * (trial[i] - a[i]);
      // Roundoff allowance keeps the search from stalling a few ulps short.
      const double allowance = 4.0 * std::numeric_limits<double>::epsilon() *
                               std::max(1.0, std::abs(value));
      if (trial_value >= value + kArmijo * slope - allowance) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    a.swap(trial);
    utilities.swap(trial_utilities);
    value = problem.Value(utilities);
  }
  out.policy = std::move(a);
  out.value = value;
  out.iterations = iteration;
  return out;
}

std::vector<double> RandomStart(std::mt19937_64& rng, std::size_t nx, std::size_t nd) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> a(nx * nd);
  for (std::size_t x = 0; x < nx; ++x) {
    double total = 0.0;
    for (std::size_t d = 0; d < nd; ++d) {
      a[x * nd + d] = -std::log(1.0 - uniform(rng));
      total += a[x * nd + d];
    }
    for (std::size_t d = 0; d < nd; ++d) a[x * nd + d] /= total;
  }
  return a;
}

// Compositions of `resolution` into `parts` parts, ordered lexicographically
// by parts 1..n-1 (part 0 takes the remainder), scaled to probabilities.
std::vector<std::vector<double>> GridRows(std::size_t parts, std::size_t resolution) {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> counts(parts, 0);
  const double scale = 1.0 / static_cast<double>(resolution);
  auto emit = [&] {
    std::vector<double> row(parts);
    std::size_t used = 0;
    for (std::size_t d = 1; d < parts; ++d) used += counts[d];
    row[0] = static_cast<double>(resolution - used) * scale;
    for (std::size_t d = 1; d < parts; ++d) row[d] = static_cast<double>(counts[d]) * scale;
    rows.push_back(std::move(row));
  };
  std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t d,
                                                               std::size_t budget) {
    if (d == parts) {
      emit();
      return;
    }
    for (std::size_t k = 0; k <= budget; ++k) {
      counts[d] = k;
      recurse(d + 1, budget - k);
    }
    counts[d] = 0;
  };
  recurse(1, resolution);
  return rows;
}

double Binomial(std::size_t n, std::size_t k) {
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(out);
}

SolveResult MakeResult(Policy policy, double value) {
  return SolveResult{std::move(policy), value, std::nullopt, SolveStatus::kOptimal, {}};
}

std::string DescribeDiagnostics(const AscentOutcome& outcome, std::size_t start) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "start " << start << " stopped after " << outcome.iterations
      << " iterations with projected-gradient norm " << outcome.gradient_norm;
  return msg.str();
}

}  // namespace

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFallbackFeasible: return "fallback_feasible";
    case SolveStatus::kGridApproximate: return "grid_approximate";
  }
  return "unknown";
}

void SolverConfig::Validate() const {
  if (grid_resolution == 0) throw ConfigurationError("grid_resolution must be positive");
  if (!(gradient_tolerance > 0.0)) {
    throw ConfigurationError("gradient_tolerance must be positive");
  }
  if (max_iterations == 0) throw ConfigurationError("max_iterations must be positive");
  if (multi_starts == 0) throw ConfigurationError("multi_starts must be positive");
}

std::uint64_t GridSize(std::size_t covariates, std::size_t decisions,
                       std::size_t resolution) {
  const double per_row = Binomial(resolution + decisions - 1, decisions - 1);
  double total = 1.0;
  for (std::size_t x = 0; x < covariates; ++x) total *= per_row;
  if (total >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(total);
}

SolveResult SolveLinearPolicyProgram(const PopulationDistribution& mu,
                                     std::span<const double> coefficients,
                                     const LinearSystem& extra, const SolverConfig& cfg) {
  cfg.Validate();
  const Alphabets& ab = mu.alphabets();
  const std::size_t nx = ab.covariates.size(), nd = ab.decisions.size();
  const std::size_t n = nx * nd;
  if (coefficients.size() != n || extra.num_variables != n) {
    throw UsageError("policy program dimensions do not match the alphabets");
  }
  LinearProgram lp(n);
  std::copy(coefficients.begin(), coefficients.end(), lp.objective.begin());
  AddSimplexRows(lp, nx, nd);
  for (const LinearRow& row : extra.rows) {
    lp.AddConstraint(row.coefficients,
                     row.sense == RowSense::kEqual ? LpSense::kEqual : LpSense::kLessEqual,
                     row.rhs);
  }
  const auto ties = TieBreakVectors(nx, nd, n);
  const LpResult lp_result = SolveLinearProgram(lp, ties);

  SolveResult result = MakeResult(Policy::Deterministic(ab, std::vector<std::size_t>(nx, 0)), 0.0);
  result.diagnostics.lp_pivots = lp_result.pivots;
  switch (lp_result.status) {
    case LpStatus::kOptimal:
      result.policy = CleanPolicy(ab, lp_result.x);
      result.status = SolveStatus::kOptimal;
      break;
    case LpStatus::kInfeasible:
      result.status = SolveStatus::kFallbackFeasible;
      break;
    case LpStatus::kUnbounded:
      throw SolverError("policy program reported unbounded on a bounded feasible set");
  }
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) value += coefficients[i] * result.policy.values()[i];
  result.objective_value = value;
  return result;
}

SolveResult SolveConstrained(const PopulationDistribution& mu, const PayoffTable& accuracy,
                             const FairnessConstraint& constraint, const SolverConfig& cfg) {
  accuracy.RequireCompatible(mu.alphabets());
  const Alphabets& ab = mu.alphabets();
  const std::size_t nx = ab.covariates.size(), ny = ab.types.size(),
                    ng = ab.groups.size(), nd = ab.decisions.size();
  std::vector<double> c(nx * nd, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t d = 0; d < nd; ++d)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t g = 0; g < ng; ++g) c[x * nd + d] += mu.mass(x, y, g) * accuracy(d, y);
  return SolveLinearPolicyProgram(mu, c, ConstraintRows(mu, constraint), cfg);
}

SolveResult SolveRawls(const PopulationDistribution& mu, const PayoffTable& utility,
                       const SolverConfig& cfg) {
  cfg.Validate();
  const WelfareProblem problem(mu, utility, PhiFunction::Rawls());
  const Alphabets& ab = mu.alphabets();
  const std::size_t nx = problem.covariates(), nd = problem.decisions();
  const std::size_t n = nx * nd;
  // Variables: a(d|x) then t' = t - min(u) >= 0.
  LinearProgram lp(n + 1);
  lp.objective[n] = 1.0;
  AddSimplexRows(lp, nx, nd);
  const double floor = utility.min();
  for (std::size_t k = 0; k < problem.groups(); ++k) {
    std::vector<double> row(n + 1, 0.0);
    auto w = problem.coefficients(k);
    for (std::size_t i = 0; i < n; ++i) row[i] = -w[i];
    row[n] = 1.0;
    lp.AddConstraint(std::move(row), LpSense::kLessEqual, -floor);
  }
  const auto ties = TieBreakVectors(nx, nd, n + 1);
  const LpResult lp_result = SolveLinearProgram(lp, ties);
  if (lp_result.status != LpStatus::kOptimal) {
    throw SolverError("max-min program did not reach an optimum");
  }
  std::vector<double> flat(lp_result.x.begin(), lp_result.x.begin() + static_cast<std::ptrdiff_t>(n));
  SolveResult result = MakeResult(CleanPolicy(ab, std::move(flat)), 0.0);
  std::vector<double> utilities(problem.groups());
  problem.Utilities(result.policy.values(), utilities);
  result.objective_value = *std::min_element(utilities.begin(), utilities.end());
  result.certainty_equivalent = result.objective_value;
  result.status = SolveStatus::kOptimal;
  result.diagnostics.lp_pivots = lp_result.pivots;
  return result;
}

SolveResult SolveSocialWelfare(const PopulationDistribution& mu, const PayoffTable& utility,
                               const PhiFunction& phi, const SolverConfig& cfg) {
  if (phi.is_rawls()) return SolveRawls(mu, utility, cfg);
  cfg.Validate();
  const WelfareProblem problem(mu, utility, phi);
  const Alphabets& ab = mu.alphabets();
  const std::size_t nx = problem.covariates(), nd = problem.decisions();

  std::mt19937_64 rng(cfg.seed);
  std::optional<AscentOutcome> best;
  std::size_t best_start = 0, starts_run = 0;
  std::vector<double> utilities(problem.groups());
  for (std::size_t start = 0; start < cfg.multi_starts; ++start) {
    std::vector<double> a = start == 0
                                ? std::vector<double>(nx * nd, 1.0 / static_cast<double>(nd))
                                : RandomStart(rng, nx, nd);
    problem.Utilities(a, utilities);
    if (!problem.InDomain(utilities)) continue;
    ++starts_run;
    AscentOutcome outcome = Ascend(problem, std::move(a), cfg);
    if (!best || Improves(outcome.value, best->value)) {
      best = std::move(outcome);
      best_start = start;
    }
  }
  if (!best) {
    throw DomainError("no starting policy keeps every group utility inside the domain of phi=" +
                      phi.Spec());
  }
  if (!best->converged) {
    throw SolverError("projected-gradient ascent did not converge: " +
                      DescribeDiagnostics(*best, best_start));
  }

  problem.MergeIndistinguishableDecisions(best->policy);
  SolveResult result = MakeResult(CleanPolicy(ab, std::move(best->policy)), 0.0);
  problem.Utilities(result.policy.values(), utilities);
  result.objective_value = AggregateWelfare(problem.weights(), utilities, phi);
  result.certainty_equivalent = AggregateCertaintyEquivalent(problem.weights(), utilities, phi);
  result.status = SolveStatus::kOptimal;
  result.diagnostics.iterations = best->iterations;
  result.diagnostics.gradient_norm = best->gradient_norm;
  result.diagnostics.winning_start = best_start;
  result.diagnostics.starts_run = starts_run;
  return result;
}

SolveResult GridOracle(const PopulationDistribution& mu, const PolicyObjective& objective,
                       const SolverConfig& cfg) {
  cfg.Validate();
  const Alphabets& ab = mu.alphabets();
  const std::size_t nx = ab.covariates.size(), nd = ab.decisions.size();
  const std::uint64_t total = GridSize(nx, nd, cfg.grid_resolution);
  if (total > kGridEvaluationCap) {
    std::ostringstream msg;
    msg << "grid oracle would evaluate " << total << " policies at resolution "
        << cfg.grid_resolution << ", above the cap of " << kGridEvaluationCap
        << "; use a smaller instance or a coarser grid";
    throw CapacityError(msg.str());
  }
  const auto rows = GridRows(nd, cfg.grid_resolution);
  std::vector<std::size_t> odometer(nx, 0);
  std::vector<double> flat(nx * nd);
  for (std::size_t x = 0; x < nx; ++x) std::copy(rows[0].begin(), rows[0].end(), flat.begin() + x * nd);

  std::vector<double> best_flat = flat;
  double best_value = -kInf;
  bool found = false;
  std::uint64_t evaluations = 0;
  while (true) {
    const double value = objective(flat);
    ++evaluations;
    if (value != -kInf && (!found || Improves(value, best_value))) {
      best_value = value;
      best_flat = flat;
      found = true;
    }
    // Advance, last covariate fastest.
    std::size_t x = nx;
    while (x > 0) {
      --x;
      if (++odometer[x] < rows.size()) {
        std::copy(rows[odometer[x]].begin(), rows[odometer[x]].end(), flat.begin() + x * nd);
        break;
      }
      odometer[x] = 0;
      std::copy(rows[0].begin(), rows[0].end(), flat.begin() + x * nd);
      if (x == 0) {
        x = nx + 1;
        break;
      }
    }
    if (x == nx + 1) break;
  }
  SolveResult result = MakeResult(Policy(ab, best_flat, kSolverTolerance), best_value);
  result.status = SolveStatus::kGridApproximate;
  result.diagnostics.evaluations = evaluations;
  return result;
}

PolicyObjective AccuracyObjective(const PopulationDistribution& mu, const PayoffTable& accuracy,
                                  std::optional<FairnessConstraint> constraint) {
  accuracy.RequireCompatible(mu.alphabets());
  const Alphabets& ab = mu.alphabets();
  const std::size_t nx = ab.covariates.size(), ny = ab.types.size(),
                    ng = ab.groups.size(), nd = ab.decisions.size();
  std::vector<double> gain(nx * nd, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t g = 0; g < ng; ++g)
        for (std::size_t d = 0; d < nd; ++d) gain[x * nd + d] += mu.mass(x, y, g) * accuracy(d, y);

  // For each conditioning event, the covariate mixture defining each
  // group's conditional decision distribution.
  std::vector<std::vector<std::vector<double>>> mixtures;
  double epsilon = 1.0;
  if (constraint) {
    epsilon = constraint->epsilon;
    for (const DecisionEvent& event : ConditioningEvents(ab, *constraint)) {
      std::vector<std::vector<double>> per_group;
      for (std::size_t g = 0; g < ng; ++g) {
        std::vector<double> w(nx, 0.0);
        double total = 0.0;
        for (std::size_t x = 0; x < nx; ++x)
          for (std::size_t y = 0; y < ny; ++y)
            if (!event.type || *event.type == y) w[x] += mu.mass(x, y, g);
        for (double v : w) total += v;
        if (total > 0.0) {
          for (double& v : w) v /= total;
          per_group.push_back(std::move(w));
        }
      }
      mixtures.push_back(std::move(per_group));
    }
  }
  return [gain = std::move(gain), mixtures = std::move(mixtures), epsilon, nx,
          nd](std::span<const double> a) {
    std::vector<double> qa(nd), qb(nd);
    for (const auto& per_group : mixtures)
      for (std::size_t i = 0; i < per_group.size(); ++i)
        for (std::size_t j = i + 1; j < per_group.size(); ++j) {
          std::fill(qa.begin(), qa.end(), 0.0);
          std::fill(qb.begin(), qb.end(), 0.0);
          for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t d = 0; d < nd; ++d) {
              qa[d] += per_group[i][x] * a[x * nd + d];
              qb[d] += per_group[j][x] * a[x * nd + d];
            }
          if (TotalVariation(qa, qb) > epsilon + kSolverTolerance) return -kInf;
        }
    double value = 0.0;
    for (std::size_t i = 0; i < gain.size(); ++i) value += gain[i] * a[i];
    return value;
  };
}

PolicyObjective WelfareObjective(const PopulationDistribution& mu, const PayoffTable& utility,
                                 const PhiFunction& phi) {
  utility.RequireCompatible(mu.alphabets());
  return [mu, utility, phi](std::span<const double> a) {
    const Alphabets& ab = mu.alphabets();
    const std::size_t nx = ab.covariates.size(), ny = ab.types.size(),
                      nd = ab.decisions.size();
    std::vector<double> weights, utilities;
    for (std::size_t g : mu.positive_groups()) {
      double total = 0.0;
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
          const double m = mu.mass(x, y, g);
          if (m == 0.0) continue;
          for (std::size_t d = 0; d < nd; ++d) total += m * a[x * nd + d] * utility(d, y);
        }
      weights.push_back(mu.group_prior(g));
      utilities.push_back(total / mu.group_prior(g));
    }
    for (double u : utilities) {
      if (!phi.InDomain(u)) return -kInf;
    }
    return AggregateWelfare(weights, utilities, phi);
  };
}

double GridBoundConstrained(const PopulationDistribution& mu, const PayoffTable& accuracy,
                            const FairnessConstraint& constraint, std::size_t resolution) {
  accuracy.RequireCompatible(mu.alphabets());
  const double nd = static_cast<double>(mu.alphabets().decisions.size());
  const double rho = std::floor(nd / 2.0) / static_cast<double>(resolution);
  const double range = accuracy.max() - accuracy.min();
  if (constraint.epsilon >= 1.0) return range * rho;
  if (constraint.epsilon <= 0.0) return kInf;
  const double lambda = 2.0 * rho / constraint.epsilon;
  if (lambda >= 1.0) return range;
  return range * (rho + lambda);
}

double GridBoundWelfare(const PopulationDistribution& mu, const PayoffTable& utility,
                        const PhiFunction& phi, const Policy& optimum,
                        std::size_t resolution) {
  const WelfareProblem problem(mu, utility, phi);
  const double nd = static_cast<double>(problem.decisions());
  const double rho = std::floor(nd / 2.0) / static_cast<double>(resolution);
  const double shift = (utility.max() - utility.min()) * rho;
  std::vector<double> utilities(problem.groups()), lowered(problem.groups());
  problem.Utilities(optimum.values(), utilities);
  for (std::size_t k = 0; k < utilities.size(); ++k) {
    lowered[k] = utilities[k] - shift;
    if (!phi.InDomain(lowered[k])) return kInf;
  }
  return AggregateWelfare(problem.weights(), utilities, phi) -
         AggregateWelfare(problem.weights(), lowered, phi);
}

std::optional<NontrivialWitness> FindNontrivialWitness(const PayoffTable& utility) {
  if (utility.decisions().size() != 2) {
    throw PreconditionError("nontriviality witnesses are defined for two decisions");
  }
  std::optional<std::size_t> y0, y1;
  for (std::size_t y = 0; y < utility.types().size(); ++y) {
    if (!y1 && utility(1, y) > utility(0, y)) y1 = y;
    if (!y0 && utility(1, y) < utility(0, y)) y0 = y;
  }
  if (!y0 || !y1) return std::nullopt;
  return NontrivialWitness{*y0, *y1};
}

double DivergenceThreshold(const PayoffTable& utility, std::size_t y0, std::size_t y1) {
  if (utility.decisions().size() != 2) {
    throw PreconditionError("the divergence threshold needs exactly two decisions");
  }
  if (y0 >= utility.types().size() || y1 >= utility.types().size()) {
    throw UsageError("type index out of range");
  }
  const double gain = utility(1, y1) - utility(0, y1);
  const double loss = utility(0, y0) - utility(1, y0);
  if (!(gain > 0.0) || !(loss > 0.0)) {
    throw PreconditionError("utility is not nontrivial at types (" +
                            utility.types().label(y0) + ", " + utility.types().label(y1) +
                            "): need u(1,y1) > u(0,y1) and u(1,y0) < u(0,y0)");
  }
  const double ratio = std::max(gain / loss, loss / gain);
  return ratio / (1.0 + ratio);
}

double DivergenceThreshold(const PayoffTable& utility, std::string_view y0_label,
                           std::string_view y1_label) {
  return DivergenceThreshold(utility, utility.types().index(y0_label),
                             utility.types().index(y1_label));
}

}  // namespace fairwelfare
