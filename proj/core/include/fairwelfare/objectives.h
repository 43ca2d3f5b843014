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

#ifndef FAIRWELFARE_OBJECTIVES_H_
#define FAIRWELFARE_OBJECTIVES_H_

// Payoff tables, the concave transform family phi, group utilities, social
// welfare, the generalized penalized objective and unfairness measures.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fairwelfare/constraints.h"
#include "fairwelfare/model.h"

namespace fairwelfare {

// Value of GeneralizedObjective when a constraint indicator is violated.
inline constexpr double kInfeasibleObjective = -std::numeric_limits<double>::infinity();

enum class PayoffRole { kAccuracy, kUtility };

std::string_view PayoffRoleName(PayoffRole role);

// A real-valued table over D x Y, used either as an accuracy measure v or as
// a utility function u.
class PayoffTable {
 public:
  // `values` is dense in (d, y) row-major order; all entries must be finite.
  PayoffTable(Alphabet decisions, Alphabet types, std::vector<double> values,
              PayoffRole role = PayoffRole::kUtility);

  // 1(d = y), matching decision and type labels by name.
  static PayoffTable Agreement(const Alphabets& alphabets,
                               PayoffRole role = PayoffRole::kUtility);

  double operator()(std::size_t d, std::size_t y) const {
    return values_[d * types_.size() + y];
  }
  const Alphabet& decisions() const { return decisions_; }
  const Alphabet& types() const { return types_; }
  std::span<const double> values() const { return values_; }
  PayoffRole role() const { return role_; }
  double min() const;
  double max() const;

  PayoffTable Scaled(double factor) const;
  PayoffTable WithRole(PayoffRole role) const;
  // Throws ConfigurationError unless D and Y match `alphabets`.
  void RequireCompatible(const Alphabets& alphabets) const;

  bool operator==(const PayoffTable&) const = default;

 private:
  Alphabet decisions_;
  Alphabet types_;
  std::vector<double> values_;
  PayoffRole role_;
};

// Concave, strictly increasing transforms applied to group utilities.
//
//   identity      phi(u) = u                    any u
//   power:a       phi(u) = u^a,  a in (0, 1]    u >= 0
//   log:s         phi(u) = log(u + s), s > 0    u + s > 0
//   negpow:g      phi(u) = -u^(-g), g > 0       u > 0
//   rawls         welfare is min_g U(P_g), the limit of negpow as g grows.
//                 Pointwise it acts as the identity.
class PhiFunction {
 public:
  enum class Family { kIdentity, kPower, kLog, kNegativePower, kRawls };

  static PhiFunction Identity() { return PhiFunction(Family::kIdentity, 1.0); }
  static PhiFunction Power(double exponent);
  static PhiFunction Log(double shift);
  static PhiFunction NegativePower(double gamma);
  static PhiFunction Rawls() { return PhiFunction(Family::kRawls, 0.0); }

  // identity | power:<a> | log:<s> | negpow:<g> | rawls
  static PhiFunction Parse(std::string_view spec);
  std::string Spec() const;

  Family family() const { return family_; }
  double parameter() const { return parameter_; }
  bool is_rawls() const { return family_ == Family::kRawls; }
  bool strictly_concave() const;

  // Smallest admissible utility (-inf for identity and rawls) and whether it
  // is itself admissible.
  double domain_minimum() const;
  bool domain_minimum_admissible() const;
  bool InDomain(double u) const;

  // Throws DomainError outside the domain.
  double operator()(double u) const;
  double Derivative(double u) const;
  // Closed-form inverse. Throws DomainError outside the range.
  double Inverse(double w) const;

  bool operator==(const PhiFunction&) const = default;

 private:
  PhiFunction(Family family, double parameter) : family_(family), parameter_(parameter) {}

  Family family_;
  double parameter_;
};

// Group utilities U(P_g) for the groups with positive probability.
struct GroupProfile {
  std::vector<std::size_t> groups;
  std::vector<double> weights;    // p_g
  std::vector<double> utilities;  // U(P_g)
};

// sum_g weights[g] * phi(utilities[g]); rawls returns the minimum utility over
// positive weights. Throws DomainError naming the offending index and value.
double AggregateWelfare(std::span<const double> weights,
                        std::span<const double> utilities, const PhiFunction& phi);

// phi^{-1}(AggregateWelfare(...)), evaluated as the weighted power mean it
// equals. Unlike the composition this stays finite for very large negpow
// exponents, where the welfare itself overflows binary64.
double AggregateCertaintyEquivalent(std::span<const double> weights,
                                    std::span<const double> utilities,
                                    const PhiFunction& phi);

// Partial derivatives of AggregateCertaintyEquivalent with respect to each
// utility. Not defined for rawls.
void AggregateCertaintyEquivalentGradient(std::span<const double> weights,
                                          std::span<const double> utilities,
                                          const PhiFunction& phi,
                                          std::span<double> gradient);

// E_P[table(D, Y)].
double ExpectedPayoff(const JointDistribution& joint, const PayoffTable& table);

// U(P_g) = E_{P_g}[u(D, Y)]. Throws UndefinedConditionalError when P(G=g) = 0.
double GroupUtility(const JointDistribution& joint, std::size_t group,
                    const PayoffTable& utility);

GroupProfile GroupUtilities(const JointDistribution& joint, const PayoffTable& utility);

// sum_g p_g phi(U(P_g)) over groups with p_g > 0 (rawls: min_g U(P_g)).
// For negpow with very large exponents the sum can overflow to -inf; use
// WelfareCertaintyEquivalent to compare such values.
double SocialWelfare(const JointDistribution& joint, const PayoffTable& utility,
                     const PhiFunction& phi);

double WelfareCertaintyEquivalent(const JointDistribution& joint,
                                  const PayoffTable& utility, const PhiFunction& phi);

// phi(sum_g p_g U(P_g)) - sum_g p_g phi(U(P_g)). Throws DomainError for rawls.
double JensenGap(const JointDistribution& joint, const PayoffTable& utility,
                 const PhiFunction& phi);

// phi^{-1}(welfare); rawls welfare is already in utility units.
double CertaintyEquivalent(double welfare, const PhiFunction& phi);

struct ConstraintIndicator {
  FairnessConstraint constraint;
};

struct JensenGapMeasure {
  PayoffTable utility;
  PhiFunction phi;
};

// h(P) >= 0 with h(P) = 0 whenever P_g is the same for every group.
using UnfairnessMeasure = std::variant<ConstraintIndicator, JensenGapMeasure>;

// 0 or +inf for an indicator; the Jensen gap otherwise.
double EvaluateUnfairness(const JointDistribution& joint, const UnfairnessMeasure& h);

// phi(E_P[v(D, Y)]) - h(P). Returns kInfeasibleObjective when h is a violated
// constraint indicator.
double GeneralizedObjective(const JointDistribution& joint, const PayoffTable& accuracy,
                            const PhiFunction& phi, const UnfairnessMeasure& h);

// Interval of U(P_g) over all policies, per group in alphabet order. Groups
// with p_g = 0 get an empty optional-like pair of NaNs.
std::vector<std::pair<double, double>> ReachableUtilityRange(
    const PopulationDistribution& mu, const PayoffTable& utility);

// Throws DomainError when some policy drives a positive-probability group's
// utility outside phi's domain.
void RequireReachableUtilitiesInDomain(const PopulationDistribution& mu,
                                       const PayoffTable& utility,
                                       const PhiFunction& phi);

}  // namespace fairwelfare

#endif  // FAIRWELFARE_OBJECTIVES_H_
