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

#ifndef FAIRWELFARE_MODEL_H_
#define FAIRWELFARE_MODEL_H_

// Finite probability model: alphabets, population distributions over
// (X, Y, G), randomized policies X -> Delta(D), and the joint distributions
// over (X, Y, G, D) they induce.
//
// All types are immutable after construction. Storage is dense and indexed by
// alphabet position; the alphabet order is the iteration and tie-break order
// used everywhere in the library.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairwelfare {

// Simplex checks on user-supplied data.
inline constexpr double kConstructionTolerance = 1e-12;
// Simplex checks on optimizer output, which accumulates rounding error.
inline constexpr double kSolverTolerance = 1e-9;

enum class Variable { X, Y, G, D };

std::string_view VariableName(Variable v);

// An ordered set of unique, non-empty labels.
class Alphabet {
 public:
  Alphabet(std::string name, std::vector<std::string> labels);

  const std::string& name() const { return name_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::span<const std::string> labels() const { return labels_; }

  std::optional<std::size_t> find(std::string_view label) const;
  // Throws ConfigurationError when the label is not declared.
  std::size_t index(std::string_view label) const;

  bool operator==(const Alphabet& other) const = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

struct Alphabets {
  Alphabet covariates;
  Alphabet types;
  Alphabet groups;
  Alphabet decisions;

  static Alphabets Make(std::vector<std::string> x, std::vector<std::string> y,
                        std::vector<std::string> g, std::vector<std::string> d);

  const Alphabet& of(Variable v) const;
  bool operator==(const Alphabets& other) const = default;
};

// Throws ConfigurationError naming the first mismatched set.
void RequireSameAlphabets(const Alphabets& a, const Alphabets& b);

// mu over X x Y x G.
class PopulationDistribution {
 public:
  // `mass` is dense in (x, y, g) row-major order.
  PopulationDistribution(Alphabets alphabets, std::vector<double> mass,
                         double tolerance = kConstructionTolerance);

  const Alphabets& alphabets() const { return alphabets_; }
  std::span<const double> masses() const { return mass_; }
  double mass(std::size_t x, std::size_t y, std::size_t g) const {
    return mass_[(x * ny_ + y) * ng_ + g];
  }

  // p_g.
  double group_prior(std::size_t g) const { return group_prior_[g]; }
  std::span<const double> group_priors() const { return group_prior_; }
  // Groups with p_g > 0, in alphabet order.
  std::vector<std::size_t> positive_groups() const;
  // mu(x, y | g). Throws UndefinedConditionalError when p_g = 0.
  double conditional(std::size_t x, std::size_t y, std::size_t g) const;

 private:
  Alphabets alphabets_;
  std::size_t ny_;
  std::size_t ng_;
  std::vector<double> mass_;
  std::vector<double> group_prior_;
};

// a(d | x): one probability row over D per covariate value.
class Policy {
 public:
  // `rows` is dense in (x, d) row-major order.
  Policy(Alphabets alphabets, std::vector<double> rows,
         double tolerance = kConstructionTolerance);

  // Same row for every covariate value.
  static Policy Constant(const Alphabets& alphabets, std::span<const double> row);
  // Places all mass on decision `choice[x]` for each x.
  static Policy Deterministic(const Alphabets& alphabets,
                              std::span<const std::size_t> choice);
  // Binary D only: row x puts probability q[x] on the second decision.
  static Policy FromTreatmentProbabilities(const Alphabets& alphabets,
                                           std::span<const double> q);

  const Alphabets& alphabets() const { return alphabets_; }
  std::span<const double> values() const { return rows_; }
  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(rows_).subspan(x * nd_, nd_);
  }
  double prob(std::size_t x, std::size_t d) const { return rows_[x * nd_ + d]; }

  bool operator==(const Policy& other) const = default;

 private:
  Alphabets alphabets_;
  std::size_t nd_;
  std::vector<double> rows_;
};

// P over X x Y x G x D.
class JointDistribution {
 public:
  // `mass` is dense in (x, y, g, d) row-major order.
  JointDistribution(Alphabets alphabets, std::vector<double> mass,
                    double tolerance = kSolverTolerance);

  const Alphabets& alphabets() const { return alphabets_; }
  std::span<const double> masses() const { return mass_; }
  double mass(std::size_t x, std::size_t y, std::size_t g, std::size_t d) const {
    return mass_[((x * ny_ + y) * ng_ + g) * nd_ + d];
  }
  // P(G = g).
  double group_probability(std::size_t g) const;

 private:
  Alphabets alphabets_;
  std::size_t ny_;
  std::size_t ng_;
  std::size_t nd_;
  std::vector<double> mass_;
};

// P( . | G = g) over (X, Y, D).
struct GroupConditional {
  Alphabets alphabets;
  std::size_t group;
  std::vector<double> mass;  // dense in (x, y, d) order

  double at(std::size_t x, std::size_t y, std::size_t d) const {
    return mass[(x * alphabets.types.size() + y) * alphabets.decisions.size() + d];
  }
};

// A distribution over a subset of {X, Y, G, D}, always in canonical variable
// order regardless of the order the subset was requested in.
struct Marginal {
  std::vector<Variable> variables;
  std::vector<std::size_t> shape;
  std::vector<double> mass;

  double at(std::span<const std::size_t> index) const;
};

// Conditioning event over {Y, G}; unset coordinates are unconstrained.
struct DecisionEvent {
  std::optional<std::size_t> type;
  std::optional<std::size_t> group;

  std::string Describe(const Alphabets& alphabets) const;
};

JointDistribution InduceJoint(const PopulationDistribution& mu, const Policy& policy);

GroupConditional ConditionOnGroup(const JointDistribution& joint, std::size_t group);

Marginal MarginalOf(const JointDistribution& joint, std::span<const Variable> subset);

// P(D | event). Throws UndefinedConditionalError when P(event) = 0.
std::vector<double> ConditionalDecisionDistribution(const JointDistribution& joint,
                                                    const DecisionEvent& event);

// Half the L1 distance between two joints on the same alphabets.
double TotalVariation(const JointDistribution& a, const JointDistribution& b);
double TotalVariation(std::span<const double> a, std::span<const double> b);

}  // namespace fairwelfare

#endif  // FAIRWELFARE_MODEL_H_
