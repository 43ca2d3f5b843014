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

#include "fairwelfare/report.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "fairwelfare/errors.h"
#include "nlohmann/json.hpp"

namespace fairwelfare {
namespace {

using json = nlohmann::ordered_json;

json Real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return RoundSignificant(v);
}

json Real(const std::optional<double>& v) { return v ? Real(*v) : json(nullptr); }

json Reals(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(Real(v));
  return out;
}

double ReadReal(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigurationError("expected a number in report, got " + j.dump());
}

std::optional<double> ReadOptionalReal(const json& j) {
  if (j.is_null()) return std::nullopt;
  return ReadReal(j);
}

std::vector<double> ReadReals(const json& j) {
  std::vector<double> out;
  for (const json& v : j) out.push_back(ReadReal(v));
  return out;
}

json PolicyJson(const Policy& policy) {
  const Alphabets& ab = policy.alphabets();
  json out = json::object();
  for (std::size_t x = 0; x < ab.covariates.size(); ++x) {
    json row = json::object();
    for (std::size_t d = 0; d < ab.decisions.size(); ++d) {
      row[ab.decisions.label(d)] = Real(policy.prob(x, d));
    }
    out[ab.covariates.label(x)] = std::move(row);
  }
  return out;
}

json DiagnosticsJson(const SolveDiagnostics& d) {
  json out;
  out["iterations"] = d.iterations;
  out["gradient_norm"] = Real(d.gradient_norm);
  out["lp_pivots"] = d.lp_pivots;
  out["winning_start"] = d.winning_start;
  out["starts_run"] = d.starts_run;
  out["evaluations"] = d.evaluations;
  return out;
}

json GridJson(const std::optional<GridCheck>& check) {
  if (!check) return nullptr;
  json out;
  out["oracle_objective"] = Real(check->oracle_objective);
  out["discrepancy"] = Real(check->discrepancy);
  out["bound"] = Real(check->bound);
  out["within_bound"] = check->within_bound;
  return out;
}

std::optional<GridCheck> ReadGrid(const json& j) {
  if (j.is_null()) return std::nullopt;
  return GridCheck{ReadReal(j.at("oracle_objective")), ReadReal(j.at("discrepancy")),
                   ReadReal(j.at("bound")), j.at("within_bound").get<bool>()};
}

json SummaryJson(const DesignerSummary& s) {
  json out;
  out["designer"] = s.kind;
  out["description"] = s.description;
  out["status"] = std::string(SolveStatusName(s.result.status));
  out["objective_value"] = Real(s.result.objective_value);
  out["certainty_equivalent"] = Real(s.result.certainty_equivalent);
  out["policy"] = PolicyJson(s.result.policy);
  out["diagnostics"] = DiagnosticsJson(s.result.diagnostics);
  out["grid_check"] = GridJson(s.grid);
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvValue(const json& j) {
  if (j.is_null()) return "";
  if (j.is_string()) return CsvField(j.get<std::string>());
  return j.dump();
}

void Flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      Flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      Flatten(j[i], prefix + "." + std::to_string(i), out);
    }
  } else {
    out << CsvField(prefix) << ',' << CsvValue(j) << '\n';
  }
}

std::string Render(const json& j, ReportFormat format) {
  if (format == ReportFormat::kJson) return j.dump(2) + "\n";
  std::ostringstream out;
  out << "key,value\n";
  Flatten(j, "", out);
  return out.str();
}

json ParseReportJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("malformed report: ") + e.what());
  }
}

json Example1Json(const Example1Report& r) {
  json out;
  out["report"] = "example1";
  out["delta"] = Real(r.delta);
  out["phi"] = r.phi;
  out["epsilon"] = Real(r.epsilon);
  out["sw_policy"] = Reals(r.sw_policy);
  out["sw_welfare"] = Real(r.sw_welfare);
  out["sw_certainty_equivalent"] = Real(r.sw_certainty_equivalent);
  out["co_policy"] = Reals(r.co_policy);
  out["co_accuracy"] = Real(r.co_accuracy);
  out["co_welfare"] = Real(r.co_welfare);
  out["co_welfare_closed_form"] = Real(r.co_welfare_closed_form);
  out["co_certainty_equivalent"] = Real(r.co_certainty_equivalent);
  out["jensen_bound"] = Real(r.jensen_bound);
  out["gap"] = Real(r.gap);
  out["violation"] = Real(r.violation);
  out["sw_satisfies_constraint"] = r.sw_satisfies_constraint;
  out["co_satisfies_constraint"] = r.co_satisfies_constraint;
  out["sw_grid_check"] = GridJson(r.sw_grid);
  out["co_grid_check"] = GridJson(r.co_grid);
  return out;
}

json SweepRowJson(const SweepRow& row) {
  json out;
  out["index"] = row.index;
  out["status"] = row.status;
  out["error"] = row.error;
  out["sw_policy"] = Reals(row.sw_policy);
  out["co_policy"] = Reals(row.co_policy);
  out["tv"] = Real(row.tv);
  out["welfare_gap"] = Real(row.welfare_gap);
  out["sw_violation"] = Real(row.sw_violation);
  out["diverged"] = row.diverged;
  out["sw_grid_discrepancy"] = Real(row.sw_grid_discrepancy);
  out["co_grid_discrepancy"] = Real(row.co_grid_discrepancy);
  out["grid_error"] = row.grid_error;
  return out;
}

constexpr const char* kSweepColumns[] = {
    "index",       "status",   "error",  "tv", "welfare_gap", "sw_violation", "diverged",
    "sw_grid_discrepancy", "co_grid_discrepancy", "grid_error", "sw_policy", "co_policy"};

}  // namespace

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw UsageError("unknown format '" + std::string(name) + "' (expected json or csv)");
}

double RoundSignificant(double value) {
  if (!std::isfinite(value) || value == 0.0) return value == 0.0 ? 0.0 : value;
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.*g", kReportSignificantDigits, value);
  return std::strtod(buffer, nullptr);
}

std::string SerializeReport(const DesignerSummary& report, ReportFormat format) {
  json out;
  out["report"] = "solve";
  out.update(SummaryJson(report));
  return Render(out, format);
}

std::string SerializeReport(const Example1Report& report, ReportFormat format) {
  return Render(Example1Json(report), format);
}

std::string SerializeReport(const DivergenceReport& r, ReportFormat format) {
  json out;
  out["report"] = "diverge";
  out["constraint"] = r.constraint;
  out["phi"] = r.phi;
  out["y0"] = r.y0;
  out["y1"] = r.y1;
  out["threshold"] = Real(r.threshold);
  out["delta_used"] = Real(r.delta_used);
  json population = json::array();
  const Alphabets& ab = r.mu_constructed.alphabets();
  for (std::size_t x = 0; x < ab.covariates.size(); ++x)
    for (std::size_t y = 0; y < ab.types.size(); ++y)
      for (std::size_t g = 0; g < ab.groups.size(); ++g) {
        const double m = r.mu_constructed.mass(x, y, g);
        if (m == 0.0) continue;
        json e;
        e["x"] = ab.covariates.label(x);
        e["y"] = ab.types.label(y);
        e["g"] = ab.groups.label(g);
        e["mass"] = Real(m);
        population.push_back(std::move(e));
      }
  out["population"] = std::move(population);
  out["sw_policy"] = PolicyJson(r.sw_policy);
  out["co_policy"] = PolicyJson(r.co_policy);
  out["sw_welfare_at_sw_policy"] = Real(r.sw_welfare_at_each.first);
  out["sw_welfare_at_co_policy"] = Real(r.sw_welfare_at_each.second);
  out["constraint_violation_of_sw_policy"] = Real(r.constraint_violation_of_sw_policy);
  out["tv"] = Real(r.tv);
  out["diverged"] = r.diverged;
  out["sw_grid_check"] = GridJson(r.sw_grid);
  out["co_grid_check"] = GridJson(r.co_grid);
  return Render(out, format);
}

std::string SerializeReport(const ComparisonReport& r, ReportFormat format) {
  json out;
  out["report"] = "compare";
  out["constrained"] = SummaryJson(r.constrained);
  out["welfare"] = SummaryJson(r.welfare);
  out["accuracy_at_constrained"] = Real(r.accuracy_at_constrained);
  out["accuracy_at_welfare"] = Real(r.accuracy_at_welfare);
  out["welfare_at_constrained"] = Real(r.welfare_at_constrained);
  out["welfare_at_welfare"] = Real(r.welfare_at_welfare);
  out["welfare_gap"] = Real(r.welfare_gap);
  out["accuracy_gap"] = Real(r.accuracy_gap);
  out["violation_of_welfare_policy"] = Real(r.violation_of_welfare_policy);
  out["tv"] = Real(r.tv);
  out["diverged"] = r.diverged;
  return Render(out, format);
}

std::string SerializeReport(const AuditReport& r, ReportFormat format) {
  json out;
  out["report"] = "audit";
  json violations = json::object();
  for (const auto& [name, value] : r.violations) violations[name] = Real(value);
  out["violations"] = std::move(violations);
  out["accuracy"] = Real(r.accuracy);
  out["welfare"] = Real(r.welfare);
  out["jensen_gap"] = Real(r.jensen_gap);
  json groups = json::object();
  for (const auto& [name, value] : r.group_utilities) groups[name] = Real(value);
  out["group_utilities"] = std::move(groups);
  return Render(out, format);
}

std::string SerializeReport(const SweepReport& r, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    for (std::size_t i = 0; i < std::size(kSweepColumns); ++i) {
      out << (i ? "," : "") << kSweepColumns[i];
    }
    out << '\n';
    for (const SweepRow& row : r.rows) {
      const json j = SweepRowJson(row);
      for (std::size_t i = 0; i < std::size(kSweepColumns); ++i) {
        const json& cell = j.at(kSweepColumns[i]);
        std::string text;
        if (cell.is_array()) {
          for (std::size_t k = 0; k < cell.size(); ++k) text += (k ? ";" : "") + cell[k].dump();
          text = CsvField(text);
        } else {
          text = CsvValue(cell);
        }
        out << (i ? "," : "") << text;
      }
      out << '\n';
    }
    return out.str();
  }
  json out;
  out["report"] = "sweep";
  json rows = json::array();
  for (const SweepRow& row : r.rows) rows.push_back(SweepRowJson(row));
  out["rows"] = std::move(rows);
  const SweepAggregate& a = r.aggregate;
  json agg;
  agg["count"] = a.count;
  agg["solved"] = a.solved;
  agg["errors"] = a.errors;
  agg["diverged"] = a.diverged;
  agg["disagreement_rate"] = Real(a.disagreement_rate);
  agg["mean_tv"] = Real(a.mean_tv);
  agg["mean_welfare_gap"] = Real(a.mean_welfare_gap);
  out["aggregate"] = std::move(agg);
  return Render(out, format);
}

Example1Report ParseExample1Report(std::string_view text) {
  const json j = ParseReportJson(text);
  try {
    if (j.at("report") != "example1") throw ConfigurationError("not an example1 report");
    Example1Report r;
    r.delta = ReadReal(j.at("delta"));
    r.phi = j.at("phi").get<std::string>();
    r.epsilon = ReadReal(j.at("epsilon"));
    r.sw_policy = ReadReals(j.at("sw_policy"));
    r.sw_welfare = ReadReal(j.at("sw_welfare"));
    r.sw_certainty_equivalent = ReadReal(j.at("sw_certainty_equivalent"));
    r.co_policy = ReadReals(j.at("co_policy"));
    r.co_accuracy = ReadReal(j.at("co_accuracy"));
    r.co_welfare = ReadReal(j.at("co_welfare"));
    r.co_welfare_closed_form = ReadReal(j.at("co_welfare_closed_form"));
    r.co_certainty_equivalent = ReadReal(j.at("co_certainty_equivalent"));
    r.jensen_bound = ReadReal(j.at("jensen_bound"));
    r.gap = ReadReal(j.at("gap"));
    r.violation = ReadReal(j.at("violation"));
    r.sw_satisfies_constraint = j.at("sw_satisfies_constraint").get<bool>();
    r.co_satisfies_constraint = j.at("co_satisfies_constraint").get<bool>();
    r.sw_grid = ReadGrid(j.at("sw_grid_check"));
    r.co_grid = ReadGrid(j.at("co_grid_check"));
    return r;
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("malformed example1 report: ") + e.what());
  }
}

SweepReport ParseSweepReport(std::string_view text) {
  const json j = ParseReportJson(text);
  try {
    if (j.at("report") != "sweep") throw ConfigurationError("not a sweep report");
    SweepReport r;
    for (const json& row : j.at("rows")) {
      SweepRow s;
      s.index = row.at("index").get<std::size_t>();
      s.status = row.at("status").get<std::string>();
      s.error = row.at("error").get<std::string>();
      s.sw_policy = ReadReals(row.at("sw_policy"));
      s.co_policy = ReadReals(row.at("co_policy"));
      s.tv = ReadReal(row.at("tv"));
      s.welfare_gap = ReadReal(row.at("welfare_gap"));
      s.sw_violation = ReadReal(row.at("sw_violation"));
      s.diverged = row.at("diverged").get<bool>();
      s.sw_grid_discrepancy = ReadOptionalReal(row.at("sw_grid_discrepancy"));
      s.co_grid_discrepancy = ReadOptionalReal(row.at("co_grid_discrepancy"));
      s.grid_error = row.at("grid_error").get<std::string>();
      r.rows.push_back(std::move(s));
    }
    const json& a = j.at("aggregate");
    r.aggregate.count = a.at("count").get<std::size_t>();
    r.aggregate.solved = a.at("solved").get<std::size_t>();
    r.aggregate.errors = a.at("errors").get<std::size_t>();
    r.aggregate.diverged = a.at("diverged").get<std::size_t>();
    r.aggregate.disagreement_rate = ReadReal(a.at("disagreement_rate"));
    r.aggregate.mean_tv = ReadReal(a.at("mean_tv"));
    r.aggregate.mean_welfare_gap = ReadReal(a.at("mean_welfare_gap"));
    return r;
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("malformed sweep report: ") + e.what());
  }
}

}  // namespace fairwelfare
