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

#ifndef FAIRWELFARE_SCENARIO_H_
#define FAIRWELFARE_SCENARIO_H_

// Scenario documents: JSON text describing alphabets, a population, payoff
// tables, designers and solver settings.
//
//   {
//     "alphabets": {"X": [...], "Y": [...], "G": [...], "D": [...]},
//     "population": [{"x": "0", "y": "1", "g": "0", "mass": 0.125}, ...],
//     "utility": {"default": 0, "entries": [{"d": "1", "y": "1", "value": 1}]},
//     "accuracy": {...},
//     "designers": [
//       {"type": "constrained", "constraint": "equalized_odds", "epsilon": 0},
//       {"type": "welfare", "phi": "power:0.5"}
//     ],
//     "solver": {"grid_resolution": 50, "seed": 0, ...},
//     "fairness_labels": {"positive": "1", "negative": "0"},
//     "description": "..."
//   }
//
// Welfare designers use the utility table. Constrained designers use the
// accuracy table when present and the utility table otherwise. Masses must
// already sum to 1; nothing is renormalized. Unknown keys are errors.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairwelfare/errors.h"
#include "fairwelfare/experiments.h"
#include "fairwelfare/model.h"
#include "fairwelfare/objectives.h"
#include "fairwelfare/solvers.h"

namespace fairwelfare {

// Tolerance on the total population mass in scenario documents.
inline constexpr double kScenarioMassTolerance = 1e-9;

struct ScenarioIssue {
  // "line:column" for syntax errors, a JSON pointer such as
  // "/population/2/mass" otherwise.
  std::string location;
  std::string message;

  bool operator==(const ScenarioIssue&) const = default;
};

class ScenarioError : public ConfigurationError {
 public:
  explicit ScenarioError(std::vector<ScenarioIssue> issues);
  const std::vector<ScenarioIssue>& issues() const { return issues_; }

 private:
  std::vector<ScenarioIssue> issues_;
};

struct FairnessLabels {
  std::string positive = "1";
  std::string negative = "0";

  bool operator==(const FairnessLabels&) const = default;
};

struct Scenario {
  std::string description;
  Alphabets alphabets;
  std::optional<PopulationDistribution> population;
  std::optional<PayoffTable> utility;
  std::optional<PayoffTable> accuracy;
  std::vector<DesignerSpec> designers;
  SolverConfig solver;
  std::optional<FairnessLabels> fairness_labels;

  FairnessLabels labels() const { return fairness_labels.value_or(FairnessLabels{}); }
  // Throws ConfigurationError when absent.
  const PopulationDistribution& RequirePopulation() const;
  std::optional<ConstrainedDesigner> FirstConstrained() const;
  std::optional<WelfareDesigner> FirstWelfare() const;
};

bool operator==(const Scenario& a, const Scenario& b);

// Throws ScenarioError listing every problem found.
Scenario ParseScenario(std::string_view text);

// Canonical JSON: dense tables, keys in the order shown above.
std::string SerializeScenario(const Scenario& scenario);

// A policy document: {"policy": {"<x>": {"<d>": prob, ...}, ...}}. Other
// top-level keys are ignored so solve reports can be fed back in. Decisions
// missing from a row get probability 0; rows must sum to 1 within 1e-9.
Policy ParsePolicy(std::string_view text, const Alphabets& alphabets);

}  // namespace fairwelfare

#endif  // FAIRWELFARE_SCENARIO_H_
