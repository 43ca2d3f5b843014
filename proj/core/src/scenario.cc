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

#include "fairwelfare/scenario.h"

#include <cmath>
#include <initializer_list>
#include <set>
#include <sstream>
#include <utility>

#include "nlohmann/json.hpp"

namespace fairwelfare {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string JoinIssues(const std::vector<ScenarioIssue>& issues) {
  std::ostringstream out;
  out << "invalid scenario:";
  for (const ScenarioIssue& issue : issues) {
    out << "\n  " << (issue.location.empty() ? "/" : issue.location) << ": " << issue.message;
  }
  return out.str();
}

std::string Pointer(const std::string& parent, std::string_view key) {
  return parent + "/" + std::string(key);
}

std::string Pointer(const std::string& parent, std::size_t index) {
  return parent + "/" + std::to_string(index);
}

std::string FormatNumber(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

// Syntax errors carry "line:column" of the offending byte.
[[noreturn]] void ThrowSyntax(std::string_view text, const json::parse_error& e) {
  std::size_t line = 1, column = 1;
  const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::string message = e.what();
  // Drop the library's "[json.exception.parse_error.101] parse error at ..." prefix.
  if (auto pos = message.find(": "); pos != std::string::npos) message = message.substr(pos + 2);
  throw ScenarioError({{std::to_string(line) + ":" + std::to_string(column),
                        "syntax error: " + message}});
}

json ParseJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    ThrowSyntax(text, e);
  }
}

class Reader {
 public:
  std::vector<ScenarioIssue> issues;

  void Add(std::string location, std::string message) {
    issues.push_back({std::move(location), std::move(message)});
  }

  bool ExpectObject(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    Add(path, "expected an object");
    return false;
  }

  bool ExpectArray(const json& j, const std::string& path) {
    if (j.is_array()) return true;
    Add(path, "expected an array");
    return false;
  }

  void AllowKeys(const json& obj, const std::string& path,
                 std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (std::string_view a : allowed) known = known || key == a;
      if (!known) Add(Pointer(path, key), "unknown key '" + key + "'");
    }
  }

  const json* Member(const json& obj, const std::string& path, std::string_view key,
                     bool required) {
    auto it = obj.find(std::string(key));
    if (it == obj.end()) {
      if (required) Add(Pointer(path, key), "missing required key '" + std::string(key) + "'");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> String(const json& obj, const std::string& path,
                                    std::string_view key, bool required) {
    const json* j = Member(obj, path, key, required);
    if (!j) return std::nullopt;
    if (!j->is_string()) {
      Add(Pointer(path, key), "expected a string");
      return std::nullopt;
    }
    return j->get<std::string>();
  }

  std::optional<double> Number(const json& obj, const std::string& path, std::string_view key,
                               bool required) {
    const json* j = Member(obj, path, key, required);
    if (!j) return std::nullopt;
    if (!j->is_number()) {
      Add(Pointer(path, key), "expected a number");
      return std::nullopt;
    }
    const double v = j->get<double>();
    if (!std::isfinite(v)) {
      Add(Pointer(path, key), "expected a finite number");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> Unsigned(const json& obj, const std::string& path,
                                        std::string_view key, bool positive) {
    const json* j = Member(obj, path, key, false);
    if (!j) return std::nullopt;
    if (!j->is_number_unsigned() && !(j->is_number_integer() && j->get<std::int64_t>() >= 0)) {
      Add(Pointer(path, key), "expected a nonnegative integer");
      return std::nullopt;
    }
    const auto v = j->get<std::uint64_t>();
    if (positive && v == 0) {
      Add(Pointer(path, key), "must be positive");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::size_t> Label(const json& obj, const std::string& path, std::string_view key,
                                   const Alphabet& alphabet) {
    auto label = String(obj, path, key, true);
    if (!label) return std::nullopt;
    auto index = alphabet.find(*label);
    if (!index) {
      Add(Pointer(path, key), "undeclared label '" + *label + "' for alphabet " + alphabet.name());
    }
    return index;
  }
};

std::optional<Alphabets> ReadAlphabets(Reader& r, const json& root) {
  const json* block = r.Member(root, "", "alphabets", true);
  if (!block || !r.ExpectObject(*block, "/alphabets")) return std::nullopt;
  r.AllowKeys(*block, "/alphabets", {"X", "Y", "G", "D"});
  std::vector<std::string> lists[4];
  const char* names[4] = {"X", "Y", "G", "D"};
  bool ok = true;
  for (int i = 0; i < 4; ++i) {
    const std::string path = Pointer("/alphabets", names[i]);
    const json* list = r.Member(*block, "/alphabets", names[i], true);
    if (!list || !r.ExpectArray(*list, path)) {
      ok = false;
      continue;
    }
    if (list->empty()) {
      r.Add(path, "alphabet must not be empty");
      ok = false;
    }
    std::set<std::string> seen;
    for (std::size_t k = 0; k < list->size(); ++k) {
      const json& item = (*list)[k];
      if (!item.is_string()) {
        r.Add(Pointer(path, k), "expected a string label");
        ok = false;
        continue;
      }
      const std::string label = item.get<std::string>();
      if (!seen.insert(label).second) {
        r.Add(Pointer(path, k), "duplicate label '" + label + "'");
        ok = false;
      }
      lists[i].push_back(label);
    }
  }
  if (!ok) return std::nullopt;
  return Alphabets::Make(lists[0], lists[1], lists[2], lists[3]);
}

std::optional<PopulationDistribution> ReadPopulation(Reader& r, const json& block,
                                                     const Alphabets& ab) {
  const std::string path = "/population";
  if (!r.ExpectArray(block, path)) return std::nullopt;
  const std::size_t ny = ab.types.size(), ng = ab.groups.size();
  std::vector<double> mass(ab.covariates.size() * ny * ng, 0.0);
  std::vector<bool> seen(mass.size(), false);
  const std::size_t before = r.issues.size();
  double total = 0.0;
  for (std::size_t i = 0; i < block.size(); ++i) {
    const std::string entry_path = Pointer(path, i);
    const json& entry = block[i];
    if (!r.ExpectObject(entry, entry_path)) continue;
    r.AllowKeys(entry, entry_path, {"x", "y", "g", "mass"});
    auto x = r.Label(entry, entry_path, "x", ab.covariates);
    auto y = r.Label(entry, entry_path, "y", ab.types);
    auto g = r.Label(entry, entry_path, "g", ab.groups);
    auto m = r.Number(entry, entry_path, "mass", true);
    if (m && *m < 0.0) {
      r.Add(Pointer(entry_path, "mass"), "mass must be nonnegative");
      m.reset();
    }
    if (!x || !y || !g || !m) continue;
    const std::size_t cell = (*x * ny + *y) * ng + *g;
    if (seen[cell]) {
      r.Add(entry_path, "duplicate entry for (x, y, g)");
      continue;
    }
    seen[cell] = true;
    mass[cell] = *m;
    total += *m;
  }
  if (r.issues.size() != before) return std::nullopt;
  if (std::abs(total - 1.0) > kScenarioMassTolerance) {
    const double diff = 1.0 - total;
    r.Add(path, "masses sum to " + FormatNumber(total) + " (" +
                    (diff > 0 ? "deficit " : "excess ") + FormatNumber(std::abs(diff)) +
                    "); masses must sum to 1 within 1e-9 and are not renormalized");
    return std::nullopt;
  }
  return PopulationDistribution(ab, std::move(mass), kScenarioMassTolerance);
}

std::optional<PayoffTable> ReadTable(Reader& r, const json& block, const std::string& path,
                                     const Alphabets& ab, PayoffRole role) {
  if (!r.ExpectObject(block, path)) return std::nullopt;
  r.AllowKeys(block, path, {"default", "entries"});
  const std::size_t before = r.issues.size();
  const auto fallback = r.Number(block, path, "default", false);
  const std::size_t nd = ab.decisions.size(), ny = ab.types.size();
  std::vector<std::optional<double>> values(nd * ny);
  if (const json* entries = r.Member(block, path, "entries", true)) {
    const std::string entries_path = Pointer(path, "entries");
    if (r.ExpectArray(*entries, entries_path)) {
      for (std::size_t i = 0; i < entries->size(); ++i) {
        const std::string entry_path = Pointer(entries_path, i);
        const json& entry = (*entries)[i];
        if (!r.ExpectObject(entry, entry_path)) continue;
        r.AllowKeys(entry, entry_path, {"d", "y", "value"});
        auto d = r.Label(entry, entry_path, "d", ab.decisions);
        auto y = r.Label(entry, entry_path, "y", ab.types);
        auto v = r.Number(entry, entry_path, "value", true);
        if (!d || !y || !v) continue;
        auto& slot = values[*d * ny + *y];
        if (slot) {
          r.Add(entry_path, "duplicate entry for (d, y)");
          continue;
        }
        slot = *v;
      }
    }
  }
  if (r.issues.size() != before) return std::nullopt;
  std::vector<double> dense(nd * ny);
  for (std::size_t d = 0; d < nd; ++d)
    for (std::size_t y = 0; y < ny; ++y) {
      const auto& slot = values[d * ny + y];
      if (slot) {
        dense[d * ny + y] = *slot;
      } else if (fallback) {
        dense[d * ny + y] = *fallback;
      } else {
        r.Add(Pointer(path, "entries"), "missing entry for d='" + ab.decisions.label(d) +
                                            "', y='" + ab.types.label(y) +
                                            "' and no default given");
      }
    }
  if (r.issues.size() != before) return std::nullopt;
  return PayoffTable(ab.decisions, ab.types, std::move(dense), role);
}

std::optional<FairnessLabels> ReadLabels(Reader& r, const json& block, const Alphabets& ab) {
  const std::string path = "/fairness_labels";
  if (!r.ExpectObject(block, path)) return std::nullopt;
  r.AllowKeys(block, path, {"positive", "negative"});
  FairnessLabels labels;
  auto pos = r.Label(block, path, "positive", ab.types);
  auto neg = r.Label(block, path, "negative", ab.types);
  if (!pos || !neg) return std::nullopt;
  labels.positive = ab.types.label(*pos);
  labels.negative = ab.types.label(*neg);
  return labels;
}

void ReadSolver(Reader& r, const json& block, SolverConfig& cfg) {
  const std::string path = "/solver";
  if (!r.ExpectObject(block, path)) return;
  r.AllowKeys(block, path,
              {"grid_resolution", "gradient_tolerance", "max_iterations", "multi_starts", "seed"});
  if (auto v = r.Unsigned(block, path, "grid_resolution", true)) cfg.grid_resolution = *v;
  if (auto v = r.Number(block, path, "gradient_tolerance", false)) {
    if (*v > 0.0) {
      cfg.gradient_tolerance = *v;
    } else {
      r.Add(Pointer(path, "gradient_tolerance"), "must be positive");
    }
  }
  if (auto v = r.Unsigned(block, path, "max_iterations", true)) cfg.max_iterations = *v;
  if (auto v = r.Unsigned(block, path, "multi_starts", true)) cfg.multi_starts = *v;
  if (auto v = r.Unsigned(block, path, "seed", false)) cfg.seed = *v;
}

std::vector<DesignerSpec> ReadDesigners(Reader& r, const json& block, const Alphabets& ab,
                                        const std::optional<PayoffTable>& utility,
                                        const std::optional<PayoffTable>& accuracy,
                                        const FairnessLabels& labels,
                                        const std::optional<PopulationDistribution>& mu) {
  std::vector<DesignerSpec> out;
  const std::string path = "/designers";
  if (!r.ExpectArray(block, path)) return out;
  for (std::size_t i = 0; i < block.size(); ++i) {
    const std::string dpath = Pointer(path, i);
    const json& entry = block[i];
    if (!r.ExpectObject(entry, dpath)) continue;
    auto type = r.String(entry, dpath, "type", true);
    if (!type) continue;
    if (*type == "constrained") {
      r.AllowKeys(entry, dpath,
                  {"type", "constraint", "epsilon", "positive_label", "negative_label"});
      const std::size_t before = r.issues.size();
      auto kind_name = r.String(entry, dpath, "constraint", true);
      std::optional<ConstraintKind> kind;
      if (kind_name) {
        kind = ParseConstraintKind(*kind_name);
        if (!kind) {
          r.Add(Pointer(dpath, "constraint"),
                "unknown constraint '" + *kind_name +
                    "' (expected equalized_odds, equal_false_negatives, "
                    "equal_false_positives or statistical_parity)");
        }
      }
      const double epsilon = r.Number(entry, dpath, "epsilon", false).value_or(0.0);
      if (epsilon < 0.0 || epsilon > 1.0) {
        r.Add(Pointer(dpath, "epsilon"), "epsilon must lie in [0, 1]");
      }
      std::string positive = labels.positive, negative = labels.negative;
      if (entry.contains("positive_label")) {
        if (auto p = r.Label(entry, dpath, "positive_label", ab.types)) {
          positive = ab.types.label(*p);
        }
      }
      if (entry.contains("negative_label")) {
        if (auto n = r.Label(entry, dpath, "negative_label", ab.types)) {
          negative = ab.types.label(*n);
        }
      }
      if (kind == ConstraintKind::kEqualFalseNegatives && !ab.types.find(positive)) {
        r.Add(Pointer(dpath, "positive_label"),
              "positive type label '" + positive + "' is not declared in Y");
      }
      if (kind == ConstraintKind::kEqualFalsePositives && !ab.types.find(negative)) {
        r.Add(Pointer(dpath, "negative_label"),
              "negative type label '" + negative + "' is not declared in Y");
      }
      const std::optional<PayoffTable>& table = accuracy ? accuracy : utility;
      if (!table) r.Add(dpath, "constrained designer needs an accuracy or utility table");
      if (r.issues.size() != before) continue;
      out.push_back(ConstrainedDesigner{
          accuracy ? *accuracy : utility->WithRole(PayoffRole::kAccuracy),
          FairnessConstraint::Make(*kind, epsilon, positive, negative)});
    } else if (*type == "welfare") {
      r.AllowKeys(entry, dpath, {"type", "phi"});
      auto spec = r.String(entry, dpath, "phi", true);
      if (!utility) r.Add(dpath, "welfare designer needs a utility table");
      if (!spec) continue;
      std::optional<PhiFunction> phi;
      try {
        phi = PhiFunction::Parse(*spec);
      } catch (const Error& e) {
        r.Add(Pointer(dpath, "phi"), e.what());
      }
      if (!phi || !utility) continue;
      if (mu) {
        try {
          RequireReachableUtilitiesInDomain(*mu, *utility, *phi);
        } catch (const Error& e) {
          r.Add(Pointer(dpath, "phi"), e.what());
          continue;
        }
      }
      out.push_back(WelfareDesigner{*utility, *phi});
    } else {
      r.Add(Pointer(dpath, "type"),
            "unknown designer type '" + *type + "' (expected constrained or welfare)");
    }
  }
  return out;
}

ordered_json TableJson(const PayoffTable& table) {
  ordered_json entries = ordered_json::array();
  for (std::size_t d = 0; d < table.decisions().size(); ++d)
    for (std::size_t y = 0; y < table.types().size(); ++y) {
      ordered_json e;
      e["d"] = table.decisions().label(d);
      e["y"] = table.types().label(y);
      e["value"] = table(d, y);
      entries.push_back(std::move(e));
    }
  ordered_json out;
  out["entries"] = std::move(entries);
  return out;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<ScenarioIssue> issues)
    : ConfigurationError(JoinIssues(issues)), issues_(std::move(issues)) {}

const PopulationDistribution& Scenario::RequirePopulation() const {
  if (!population) throw ConfigurationError("scenario has no population block");
  return *population;
}

std::optional<ConstrainedDesigner> Scenario::FirstConstrained() const {
  for (const DesignerSpec& d : designers)
    if (const auto* c = std::get_if<ConstrainedDesigner>(&d)) return *c;
  return std::nullopt;
}

std::optional<WelfareDesigner> Scenario::FirstWelfare() const {
  for (const DesignerSpec& d : designers)
    if (const auto* w = std::get_if<WelfareDesigner>(&d)) return *w;
  return std::nullopt;
}

bool operator==(const Scenario& a, const Scenario& b) {
  const bool same_population =
      a.population.has_value() == b.population.has_value() &&
      (!a.population ||
       (a.population->alphabets() == b.population->alphabets() &&
        std::equal(a.population->masses().begin(), a.population->masses().end(),
                   b.population->masses().begin(), b.population->masses().end())));
  return same_population && a.description == b.description && a.alphabets == b.alphabets &&
         a.utility == b.utility && a.accuracy == b.accuracy && a.designers == b.designers &&
         a.solver == b.solver && a.fairness_labels == b.fairness_labels;
}

Scenario ParseScenario(std::string_view text) {
  const json root = ParseJson(text);
  Reader r;
  if (!r.ExpectObject(root, "")) throw ScenarioError(r.issues);
  r.AllowKeys(root, "",
              {"description", "alphabets", "population", "utility", "accuracy", "designers",
               "solver", "fairness_labels"});
  const std::optional<Alphabets> ab = ReadAlphabets(r, root);
  if (!ab) throw ScenarioError(r.issues);

  Scenario s{"", *ab, std::nullopt, std::nullopt, std::nullopt, {}, {}, std::nullopt};
  if (auto d = r.String(root, "", "description", false)) s.description = *d;
  if (const json* j = r.Member(root, "", "population", false)) {
    s.population = ReadPopulation(r, *j, *ab);
  }
  if (const json* j = r.Member(root, "", "utility", false)) {
    s.utility = ReadTable(r, *j, "/utility", *ab, PayoffRole::kUtility);
  }
  if (const json* j = r.Member(root, "", "accuracy", false)) {
    s.accuracy = ReadTable(r, *j, "/accuracy", *ab, PayoffRole::kAccuracy);
  }
  if (const json* j = r.Member(root, "", "fairness_labels", false)) {
    s.fairness_labels = ReadLabels(r, *j, *ab);
  }
  if (const json* j = r.Member(root, "", "solver", false)) ReadSolver(r, *j, s.solver);
  if (const json* j = r.Member(root, "", "designers", false)) {
    s.designers = ReadDesigners(r, *j, *ab, s.utility, s.accuracy, s.labels(), s.population);
  }
  if (!r.issues.empty()) throw ScenarioError(r.issues);
  return s;
}

std::string SerializeScenario(const Scenario& s) {
  ordered_json root;
  if (!s.description.empty()) root["description"] = s.description;
  ordered_json alphabets;
  for (Variable v : {Variable::X, Variable::Y, Variable::G, Variable::D}) {
    const Alphabet& a = s.alphabets.of(v);
    alphabets[std::string(VariableName(v))] =
        std::vector<std::string>(a.labels().begin(), a.labels().end());
  }
  root["alphabets"] = std::move(alphabets);
  if (s.population) {
    const Alphabets& ab = s.alphabets;
    ordered_json entries = ordered_json::array();
    for (std::size_t x = 0; x < ab.covariates.size(); ++x)
      for (std::size_t y = 0; y < ab.types.size(); ++y)
        for (std::size_t g = 0; g < ab.groups.size(); ++g) {
          const double m = s.population->mass(x, y, g);
          if (m == 0.0) continue;
          ordered_json e;
          e["x"] = ab.covariates.label(x);
          e["y"] = ab.types.label(y);
          e["g"] = ab.groups.label(g);
          e["mass"] = m;
          entries.push_back(std::move(e));
        }
    root["population"] = std::move(entries);
  }
  if (s.utility) root["utility"] = TableJson(*s.utility);
  if (s.accuracy) root["accuracy"] = TableJson(*s.accuracy);
  ordered_json designers = ordered_json::array();
  for (const DesignerSpec& spec : s.designers) {
    ordered_json d;
    if (const auto* c = std::get_if<ConstrainedDesigner>(&spec)) {
      d["type"] = "constrained";
      d["constraint"] = std::string(ConstraintKindName(c->constraint.kind));
      d["epsilon"] = c->constraint.epsilon;
      d["positive_label"] = c->constraint.positive_label;
      d["negative_label"] = c->constraint.negative_label;
    } else {
      d["type"] = "welfare";
      d["phi"] = std::get<WelfareDesigner>(spec).phi.Spec();
    }
    designers.push_back(std::move(d));
  }
  root["designers"] = std::move(designers);
  ordered_json solver;
  solver["grid_resolution"] = s.solver.grid_resolution;
  solver["gradient_tolerance"] = s.solver.gradient_tolerance;
  solver["max_iterations"] = s.solver.max_iterations;
  solver["multi_starts"] = s.solver.multi_starts;
  solver["seed"] = s.solver.seed;
  root["solver"] = std::move(solver);
  if (s.fairness_labels) {
    ordered_json labels;
    labels["positive"] = s.fairness_labels->positive;
    labels["negative"] = s.fairness_labels->negative;
    root["fairness_labels"] = std::move(labels);
  }
  return root.dump(2) + "\n";
}

Policy ParsePolicy(std::string_view text, const Alphabets& ab) {
  const json root = ParseJson(text);
  Reader r;
  if (!r.ExpectObject(root, "")) throw ScenarioError(r.issues);
  const json* block = r.Member(root, "", "policy", true);
  if (!block || !r.ExpectObject(*block, "/policy")) throw ScenarioError(r.issues);
  const std::size_t nd = ab.decisions.size();
  std::vector<double> rows(ab.covariates.size() * nd, 0.0);
  std::vector<bool> present(ab.covariates.size(), false);
  for (const auto& [x_label, row] : block->items()) {
    const std::string row_path = Pointer("/policy", x_label);
    const auto x = ab.covariates.find(x_label);
    if (!x) {
      r.Add(row_path, "undeclared label '" + x_label + "' for alphabet X");
      continue;
    }
    if (!r.ExpectObject(row, row_path)) continue;
    present[*x] = true;
    double total = 0.0;
    for (const auto& [d_label, p] : row.items()) {
      const std::string cell_path = Pointer(row_path, d_label);
      const auto d = ab.decisions.find(d_label);
      if (!d) {
        r.Add(cell_path, "undeclared label '" + d_label + "' for alphabet D");
        continue;
      }
      if (!p.is_number() || !std::isfinite(p.get<double>()) || p.get<double>() < 0.0) {
        r.Add(cell_path, "expected a nonnegative probability");
        continue;
      }
      rows[*x * nd + *d] = p.get<double>();
      total += p.get<double>();
    }
    if (std::abs(total - 1.0) > kScenarioMassTolerance) {
      r.Add(row_path, "row sums to " + FormatNumber(total) + ", expected 1");
    }
  }
  for (std::size_t x = 0; x < present.size(); ++x) {
    if (!present[x]) {
      r.Add("/policy", "missing row for x='" + ab.covariates.label(x) + "'");
    }
  }
  if (!r.issues.empty()) throw ScenarioError(r.issues);
  return Policy(ab, std::move(rows), kScenarioMassTolerance);
}

}  // namespace fairwelfare
