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

#include "fairwelfare/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "fairwelfare/errors.h"

namespace fairwelfare {
namespace {

void CheckSimplex(std::span<const double> values, double tolerance,
                  const std::string& what) {
  double total = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << what << ": entries must be finite and nonnegative, got " << v;
      throw ConfigurationError(msg.str());
    }
    total += v;
  }
  if (std::abs(total - 1.0) > tolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": total mass " << total << " differs from 1 by more than "
        << tolerance;
    throw ConfigurationError(msg.str());
  }
}

void CheckSize(std::size_t got, std::size_t want, const std::string& what) {
  if (got != want) {
    throw ConfigurationError(what + ": expected " + std::to_string(want) +
                             " entries, got " + std::to_string(got));
  }
}

}  // namespace

std::string_view VariableName(Variable v) {
  switch (v) {
    case Variable::X: return "X";
    case Variable::Y: return "Y";
    case Variable::G: return "G";
    case Variable::D: return "D";
  }
  return "?";
}

Alphabet::Alphabet(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw ConfigurationError("alphabet " + name_ + " is empty");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw ConfigurationError("alphabet " + name_ + " has an empty label");
    if (!seen.insert(l).second) {
      throw ConfigurationError("alphabet " + name_ + " repeats label '" + l + "'");
    }
  }
}

std::optional<std::size_t> Alphabet::find(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t Alphabet::index(std::string_view label) const {
  auto i = find(label);
  if (!i) {
    throw ConfigurationError("label '" + std::string(label) +
                             "' is not declared in alphabet " + name_);
  }
  return *i;
}

Alphabets Alphabets::Make(std::vector<std::string> x, std::vector<std::string> y,
                          std::vector<std::string> g, std::vector<std::string> d) {
  return Alphabets{Alphabet("X", std::move(x)), Alphabet("Y", std::move(y)),
                   Alphabet("G", std::move(g)), Alphabet("D", std::move(d))};
}

const Alphabet& Alphabets::of(Variable v) const {
  switch (v) {
    case Variable::X: return covariates;
    case Variable::Y: return types;
    case Variable::G: return groups;
    case Variable::D: return decisions;
  }
  throw UsageError("unknown variable");
}

void RequireSameAlphabets(const Alphabets& a, const Alphabets& b) {
  for (Variable v : {Variable::X, Variable::Y, Variable::G, Variable::D}) {
    if (!(a.of(v) == b.of(v))) {
      throw ConfigurationError("alphabet mismatch in " + std::string(VariableName(v)));
    }
  }
}

PopulationDistribution::PopulationDistribution(Alphabets alphabets,
                                               std::vector<double> mass,
                                               double tolerance)
    : alphabets_(std::move(alphabets)),
      ny_(alphabets_.types.size()),
      ng_(alphabets_.groups.size()),
      mass_(std::move(mass)),
      group_prior_(ng_, 0.0) {
  CheckSize(mass_.size(), alphabets_.covariates.size() * ny_ * ng_,
            "population distribution");
  CheckSimplex(mass_, tolerance, "population distribution");
  for (std::size_t i = 0; i < mass_.size(); ++i) group_prior_[i % ng_] += mass_[i];
}

std::vector<std::size_t> PopulationDistribution::positive_groups() const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < ng_; ++g) {
    if (group_prior_[g] > 0.0) out.push_back(g);
  }
  return out;
}

double PopulationDistribution::conditional(std::size_t x, std::size_t y,
                                           std::size_t g) const {
  if (!(group_prior_[g] > 0.0)) {
    throw UndefinedConditionalError("undefined conditional: P(G=" +
                                    alphabets_.groups.label(g) + ") = 0");
  }
  return mass(x, y, g) / group_prior_[g];
}

Policy::Policy(Alphabets alphabets, std::vector<double> rows, double tolerance)
    : alphabets_(std::move(alphabets)),
      nd_(alphabets_.decisions.size()),
      rows_(std::move(rows)) {
  const std::size_t nx = alphabets_.covariates.size();
  CheckSize(rows_.size(), nx * nd_, "policy");
  for (std::size_t x = 0; x < nx; ++x) {
    CheckSimplex(row(x), tolerance, "policy row x=" + alphabets_.covariates.label(x));
  }
}

Policy Policy::Constant(const Alphabets& alphabets, std::span<const double> row) {
  std::vector<double> rows;
  rows.reserve(alphabets.covariates.size() * row.size());
  for (std::size_t x = 0; x < alphabets.covariates.size(); ++x) {
    rows.insert(rows.end(), row.begin(), row.end());
  }
  return Policy(alphabets, std::move(rows));
}

Policy Policy::Deterministic(const Alphabets& alphabets,
                             std::span<const std::size_t> choice) {
  const std::size_t nx = alphabets.covariates.size();
  const std::size_t nd = alphabets.decisions.size();
  CheckSize(choice.size(), nx, "deterministic policy");
  std::vector<double> rows(nx * nd, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    if (choice[x] >= nd) throw ConfigurationError("decision index out of range");
    rows[x * nd + choice[x]] = 1.0;
  }
  return Policy(alphabets, std::move(rows));
}

Policy Policy::FromTreatmentProbabilities(const Alphabets& alphabets,
                                          std::span<const double> q) {
  if (alphabets.decisions.size() != 2) {
    throw ConfigurationError("treatment probabilities require exactly two decisions");
  }
  CheckSize(q.size(), alphabets.covariates.size(), "treatment probabilities");
  std::vector<double> rows;
  rows.reserve(2 * q.size());
  for (double p : q) {
    rows.push_back(1.0 - p);
    rows.push_back(p);
  }
  return Policy(alphabets, std::move(rows));
}

JointDistribution::JointDistribution(Alphabets alphabets, std::vector<double> mass,
                                     double tolerance)
    : alphabets_(std::move(alphabets)),
      ny_(alphabets_.types.size()),
      ng_(alphabets_.groups.size()),
      nd_(alphabets_.decisions.size()),
      mass_(std::move(mass)) {
  CheckSize(mass_.size(), alphabets_.covariates.size() * ny_ * ng_ * nd_,
            "joint distribution");
  CheckSimplex(mass_, tolerance, "joint distribution");
}

double JointDistribution::group_probability(std::size_t g) const {
  double total = 0.0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if ((i / nd_) % ng_ == g) total += mass_[i];
  }
  return total;
}

double Marginal::at(std::span<const std::size_t> index) const {
  if (index.size() != shape.size()) throw UsageError("marginal index has wrong rank");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (index[k] >= shape[k]) throw UsageError("marginal index out of range");
    flat = flat * shape[k] + index[k];
  }
  return mass[flat];
}

std::string DecisionEvent::Describe(const Alphabets& alphabets) const {
  std::string out;
  if (type) out += "Y=" + alphabets.types.label(*type);
  if (group) {
    if (!out.empty()) out += ", ";
    out += "G=" + alphabets.groups.label(*group);
  }
  return out.empty() ? std::string("unconditional") : out;
}

JointDistribution InduceJoint(const PopulationDistribution& mu, const Policy& policy) {
  RequireSameAlphabets(mu.alphabets(), policy.alphabets());
  const Alphabets& ab = mu.alphabets();
  const std::size_t nx = ab.covariates.size(), ny = ab.types.size(),
                    ng = ab.groups.size(), nd = ab.decisions.size();
  std::vector<double> mass;
  mass.reserve(nx * ny * ng * nd);
  for (std::size_t x = 0; x < nx; ++x) {
    auto row = policy.row(x);
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t g = 0; g < ng; ++g) {
        const double m = mu.mass(x, y, g);
        for (std::size_t d = 0; d < nd; ++d) mass.push_back(m * row[d]);
      }
    }
  }
  return JointDistribution(ab, std::move(mass));
}

GroupConditional ConditionOnGroup(const JointDistribution& joint, std::size_t group) {
  const Alphabets& ab = joint.alphabets();
  if (group >= ab.groups.size()) throw UsageError("group index out of range");
  const double pg = joint.group_probability(group);
  if (!(pg > 0.0)) {
    throw UndefinedConditionalError("undefined conditional: P(G=" +
                                    ab.groups.label(group) + ") = 0");
  }
  const std::size_t nx = ab.covariates.size(), ny = ab.types.size(),
                    nd = ab.decisions.size();
  GroupConditional out{ab, group, std::vector<double>(nx * ny * nd)};
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t d = 0; d < nd; ++d)
        out.mass[(x * ny + y) * nd + d] = joint.mass(x, y, group, d) / pg;
  return out;
}

Marginal MarginalOf(const JointDistribution& joint, std::span<const Variable> subset) {
  if (subset.empty()) throw UsageError("marginal requires a nonempty variable subset");
  bool keep[4] = {false, false, false, false};
  for (Variable v : subset) {
    auto k = static_cast<int>(v);
    if (keep[k]) {
      throw UsageError("variable " + std::string(VariableName(v)) +
                       " listed twice in marginal subset");
    }
    keep[k] = true;
  }
  const Alphabets& ab = joint.alphabets();
  const std::size_t sizes[4] = {ab.covariates.size(), ab.types.size(),
                                ab.groups.size(), ab.decisions.size()};
  Marginal out;
  std::size_t total = 1;
  for (int k = 0; k < 4; ++k) {
    if (keep[k]) {
      out.variables.push_back(static_cast<Variable>(k));
      out.shape.push_back(sizes[k]);
      total *= sizes[k];
    }
  }
  out.mass.assign(total, 0.0);
  std::size_t idx[4];
  for (idx[0] = 0; idx[0] < sizes[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < sizes[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < sizes[2]; ++idx[2])
        for (idx[3] = 0; idx[3] < sizes[3]; ++idx[3]) {
          std::size_t flat = 0;
          for (int k = 0; k < 4; ++k) {
            if (keep[k]) flat = flat * sizes[k] + idx[k];
          }
          out.mass[flat] += joint.mass(idx[0], idx[1], idx[2], idx[3]);
        }
  return out;
}

std::vector<double> ConditionalDecisionDistribution(const JointDistribution& joint,
                                                    const DecisionEvent& event) {
  const Alphabets& ab = joint.alphabets();
  const std::size_t nx = ab.covariates.size(), ny = ab.types.size(),
                    ng = ab.groups.size(), nd = ab.decisions.size();
  if ((event.type && *event.type >= ny) || (event.group && *event.group >= ng)) {
    throw UsageError("conditioning event index out of range");
  }
  std::vector<double> out(nd, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      if (event.type && *event.type != y) continue;
      for (std::size_t g = 0; g < ng; ++g) {
        if (event.group && *event.group != g) continue;
        for (std::size_t d = 0; d < nd; ++d) out[d] += joint.mass(x, y, g, d);
      }
    }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  if (!(total > 0.0)) {
    throw UndefinedConditionalError("undefined conditional: P(" +
                                    event.Describe(ab) + ") = 0");
  }
  for (double& v : out) v /= total;
  return out;
}

double TotalVariation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("total variation of mismatched supports");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

double TotalVariation(const JointDistribution& a, const JointDistribution& b) {
  RequireSameAlphabets(a.alphabets(), b.alphabets());
  return TotalVariation(a.masses(), b.masses());
}

}  // namespace fairwelfare
