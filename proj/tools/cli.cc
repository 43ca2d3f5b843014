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

#include "cli.h"

#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "fairwelfare/errors.h"
#include "fairwelfare/experiments.h"
#include "fairwelfare/report.h"
#include "fairwelfare/scenario.h"

namespace fairwelfare::cli {
namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct Options {
  std::string format = "json";
  std::string out_path;
  bool grid_check = false;
  std::optional<std::uint64_t> seed;

  std::string scenario_path;
  std::string policy_path;
  double delta = 0.75;
  std::string phi = "identity";
  double epsilon = 0.0;
  double margin = kDefaultDivergenceMargin;
  std::size_t count = 0;
  std::string sizes = "2,2,2,2";
  std::string sweep_phi = "power:0.5";
  std::string sweep_constraint = "equalized_odds";
  double sweep_epsilon = 0.0;
};

SolverConfig ConfigFor(const Options& o, SolverConfig base = {}) {
  if (o.seed) base.seed = *o.seed;
  return base;
}

Scenario LoadScenario(const Options& o) { return ParseScenario(ReadFile(o.scenario_path)); }

std::string Solve(const Options& o, ReportFormat format) {
  const Scenario s = LoadScenario(o);
  if (s.designers.size() != 1) {
    throw ConfigurationError("solve needs exactly one designer block, found " +
                             std::to_string(s.designers.size()));
  }
  const PopulationDistribution& mu = s.RequirePopulation();
  const SolverConfig cfg = ConfigFor(o, s.solver);
  const DesignerSpec& designer = s.designers.front();
  std::string kind, description;
  if (const auto* c = std::get_if<ConstrainedDesigner>(&designer)) {
    kind = "constrained";
    std::ostringstream d;
    d << ConstraintKindName(c->constraint.kind) << " epsilon=" << c->constraint.epsilon;
    description = d.str();
  } else {
    kind = "welfare";
    description = "phi=" + std::get<WelfareDesigner>(designer).phi.Spec();
  }
  DesignerSummary summary{kind, description, SolveDesigner(mu, designer, cfg), std::nullopt};
  if (o.grid_check) summary.grid = CheckAgainstGrid(mu, designer, summary.result, cfg);
  return SerializeReport(summary, format);
}

std::string Audit(const Options& o, ReportFormat format) {
  const Scenario s = LoadScenario(o);
  const PopulationDistribution& mu = s.RequirePopulation();
  const Policy policy = ParsePolicy(ReadFile(o.policy_path), s.alphabets);
  std::optional<PayoffTable> accuracy = s.accuracy;
  if (!accuracy && s.utility) accuracy = s.utility->WithRole(PayoffRole::kAccuracy);
  std::optional<WelfareDesigner> welfare = s.FirstWelfare();
  if (!welfare && s.utility) welfare = WelfareDesigner{*s.utility, PhiFunction::Identity()};
  const FairnessLabels labels = s.labels();
  return SerializeReport(
      AuditPolicy(mu, policy, accuracy, welfare, labels.positive, labels.negative), format);
}

std::string Compare(const Options& o, ReportFormat format) {
  const Scenario s = LoadScenario(o);
  const auto constrained = s.FirstConstrained();
  const auto welfare = s.FirstWelfare();
  if (s.designers.size() != 2 || !constrained || !welfare) {
    throw ConfigurationError(
        "compare needs exactly two designer blocks, one constrained and one welfare");
  }
  return SerializeReport(CompareDesigners(s.RequirePopulation(), *constrained, *welfare,
                                          ConfigFor(o, s.solver), o.grid_check),
                         format);
}

std::string Example1(const Options& o, ReportFormat format) {
  const Example1Scenario scenario =
      Example1Scenario::Make(o.delta, PhiFunction::Parse(o.phi), o.epsilon);
  return SerializeReport(RunExample1(scenario, ConfigFor(o), o.grid_check), format);
}

std::string Diverge(const Options& o, ReportFormat format) {
  const Scenario s = LoadScenario(o);
  if (!s.utility) throw ConfigurationError("diverge needs a utility table");
  const auto constrained = s.FirstConstrained();
  const auto welfare = s.FirstWelfare();
  const FairnessConstraint constraint =
      constrained ? constrained->constraint
                  : FairnessConstraint::Make(ConstraintKind::kEqualizedOdds, 0.0,
                                             s.labels().positive, s.labels().negative);
  const PhiFunction phi = welfare ? welfare->phi : PhiFunction::Power(0.5);
  std::optional<PayoffTable> accuracy;
  if (s.accuracy) accuracy = s.accuracy;
  return SerializeReport(ConstructDivergentPopulation(*s.utility, constraint, phi, o.margin,
                                                      ConfigFor(o, s.solver), accuracy,
                                                      o.grid_check),
                         format);
}

std::vector<std::size_t> ParseSizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty() || value == 0) {
      throw UsageError("--sizes expects four positive integers x,y,g,d, got '" + text + "'");
    }
    sizes.push_back(value);
  }
  if (sizes.size() != 4) {
    throw UsageError("--sizes expects four positive integers x,y,g,d, got '" + text + "'");
  }
  return sizes;
}

std::string Sweep(const Options& o, ReportFormat format) {
  const auto sizes = ParseSizes(o.sizes);
  SweepConfig config;
  config.covariates = sizes[0];
  config.types = sizes[1];
  config.groups = sizes[2];
  config.decisions = sizes[3];
  config.count = o.count;
  config.seed = o.seed.value_or(0);
  config.phi = PhiFunction::Parse(o.sweep_phi);
  const auto kind = ParseConstraintKind(o.sweep_constraint);
  if (!kind) throw UsageError("unknown constraint '" + o.sweep_constraint + "'");
  config.constraint = FairnessConstraint::Make(*kind, o.sweep_epsilon);
  config.grid_check = o.grid_check;
  return SerializeReport(DisagreementSweep(config, ConfigFor(o)), format);
}

}  // namespace

int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app("Optimal randomized policies under fairness constraints and social welfare",
               "fairwelfare");
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out_path, "Write the report to this path instead of stdout");
  app.add_flag("--grid-check", o.grid_check,
               "Verify optima against the grid oracle and report the discrepancy");
  app.add_option("--seed", o.seed, "Random seed (default 0)");

  auto* solve = app.add_subcommand("solve", "Solve the single designer in a scenario");
  solve->add_option("scenario", o.scenario_path, "Scenario file")->required();

  auto* audit = app.add_subcommand("audit", "Fairness violations and Jensen gap of a policy");
  audit->add_option("scenario", o.scenario_path, "Scenario file")->required();
  audit->add_option("--policy", o.policy_path, "Policy file")->required();

  auto* compare = app.add_subcommand("compare", "Solve and cross-evaluate both designers");
  compare->add_option("scenario", o.scenario_path, "Scenario file")->required();

  auto* example1 = app.add_subcommand("example1", "Two-group example where designers disagree");
  example1->add_option("--delta", o.delta, "mu(Y=j|G=j), in (1/2, 1)")->required();
  example1->add_option("--phi", o.phi, "identity | power:<a> | log:<s> | negpow:<g> | rawls")
      ->required();
  example1->add_option("--epsilon", o.epsilon, "Equalized-odds relaxation (default 0)");

  auto* diverge = app.add_subcommand("diverge", "Build a population where designers disagree");
  diverge->add_option("scenario", o.scenario_path, "Scenario file with a utility table")
      ->required();
  diverge->add_option("--margin", o.margin, "Distance above the threshold delta");

  auto* sweep = app.add_subcommand("sweep", "Compare designers on random populations");
  sweep->add_option("--count", o.count, "Number of populations")->required();
  sweep->add_option("--sizes", o.sizes, "Alphabet sizes x,y,g,d (default 2,2,2,2)");
  sweep->add_option("--phi", o.sweep_phi, "Welfare transform (default power:0.5)");
  sweep->add_option("--constraint", o.sweep_constraint,
                    "Constraint kind (default equalized_odds)");
  sweep->add_option("--epsilon", o.sweep_epsilon, "Constraint relaxation (default 0)");

  for (CLI::App* sub : {solve, audit, compare, example1, diverge, sweep}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitInvalid;
  }

  try {
    const ReportFormat format = ParseReportFormat(o.format);
    std::string text;
    if (solve->parsed()) text = Solve(o, format);
    if (audit->parsed()) text = Audit(o, format);
    if (compare->parsed()) text = Compare(o, format);
    if (example1->parsed()) text = Example1(o, format);
    if (diverge->parsed()) text = Diverge(o, format);
    if (sweep->parsed()) text = Sweep(o, format);
    if (o.out_path.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out_path, std::ios::binary);
      if (!file || !(file << text)) throw UsageError("cannot write '" + o.out_path + "'");
    }
    return kExitOk;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const InternalConsistencyError& e) {
    err << "internal consistency error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace fairwelfare::cli
