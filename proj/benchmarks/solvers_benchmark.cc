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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "fairwelfare/experiments.h"
#include "fairwelfare/solvers.h"

namespace fairwelfare {
namespace {

std::vector<std::string> Labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

struct Instance {
  PopulationDistribution mu;
  PayoffTable utility;
};

Instance MakeInstance(std::size_t n, std::uint64_t seed) {
  const Alphabets ab = Alphabets::Make(Labels(n), Labels(n), Labels(n), Labels(n));
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> mass(n * n * n);
  double total = 0.0;
  for (double& m : mass) total += (m = e(rng));
  for (double& m : mass) m /= total;
  std::uniform_real_distribution<double> value(0.1, 1.0);
  std::vector<double> table(n * n);
  for (double& v : table) v = value(rng);
  return {PopulationDistribution(ab, mass, 1e-9), PayoffTable(ab.decisions, ab.types, table)};
}

void BM_SolveConstrained(benchmark::State& state) {
  const Instance inst = MakeInstance(static_cast<std::size_t>(state.range(0)), 1);
  const FairnessConstraint c = FairnessConstraint::Make(ConstraintKind::kEqualizedOdds, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveConstrained(inst.mu, inst.utility, c, SolverConfig{}));
  }
}
BENCHMARK(BM_SolveConstrained)->Arg(2)->Arg(3)->Arg(4);

void BM_SolveSocialWelfare(benchmark::State& state) {
  const Instance inst = MakeInstance(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        SolveSocialWelfare(inst.mu, inst.utility, PhiFunction::NegativePower(2), SolverConfig{}));
  }
}
BENCHMARK(BM_SolveSocialWelfare)->Arg(2)->Arg(3)->Arg(4);

void BM_SolveRawls(benchmark::State& state) {
  const Instance inst = MakeInstance(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SolveRawls(inst.mu, inst.utility, SolverConfig{}));
  }
}
BENCHMARK(BM_SolveRawls)->Arg(2)->Arg(3)->Arg(4);

void BM_GridOracleWelfare(benchmark::State& state) {
  const Instance inst = MakeInstance(2, 4);
  SolverConfig cfg;
  cfg.grid_resolution = static_cast<std::size_t>(state.range(0));
  const PolicyObjective objective = WelfareObjective(inst.mu, inst.utility, PhiFunction::Power(0.5));
  for (auto _ : state) benchmark::DoNotOptimize(GridOracle(inst.mu, objective, cfg));
}
BENCHMARK(BM_GridOracleWelfare)->Arg(25)->Arg(100);

void BM_DivergenceConstruction(benchmark::State& state) {
  const PayoffTable u = PayoffTable::Agreement(Example1Alphabets());
  const FairnessConstraint c = FairnessConstraint::Make(ConstraintKind::kEqualizedOdds);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ConstructDivergentPopulation(u, c, PhiFunction::Power(0.5),
                                                          kDefaultDivergenceMargin, SolverConfig{}));
  }
}
BENCHMARK(BM_DivergenceConstruction);

}  // namespace
}  // namespace fairwelfare

BENCHMARK_MAIN();
