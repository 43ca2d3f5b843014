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

#include "fairwelfare/objectives.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "fairwelfare/errors.h"

namespace fairwelfare {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Floor used when a power-family gradient is evaluated at zero utility.
constexpr double kUtilityFloor = 1e-12;

std::string FormatNumber(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseNumber(std::string_view text, std::string_view spec) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw ConfigurationError("malformed phi specification '" + std::string(spec) + "'");
  }
  return v;
}

std::string DomainMessage(const PhiFunction& phi, double u, std::size_t index) {
  std::ostringstream msg;
  msg.precision(12);
  msg << "utility " << u << " at position " << index << " is outside the domain of phi="
      << phi.Spec();
  return msg.str();
}

void CheckAggregateInputs(std::span<const double> weights,
                          std::span<const double> utilities) {
  if (weights.size() != utilities.size()) {
    throw UsageError("weights and utilities differ in length");
  }
  if (weights.empty()) throw UsageError("no groups to aggregate");
}

}  // namespace

std::string_view PayoffRoleName(PayoffRole role) {
  return role == PayoffRole::kAccuracy ? "accuracy" : "utility";
}

PayoffTable::PayoffTable(Alphabet decisions, Alphabet types, std::vector<double> values,
                         PayoffRole role)
    : decisions_(std::move(decisions)),
      types_(std::move(types)),
      values_(std::move(values)),
      role_(role) {
  if (values_.size() != decisions_.size() * types_.size()) {
    throw ConfigurationError("payoff table must have one entry per (d, y) pair");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ConfigurationError("payoff table entries must be finite");
  }
}

PayoffTable PayoffTable::Agreement(const Alphabets& alphabets, PayoffRole role) {
  const Alphabet& d = alphabets.decisions;
  const Alphabet& y = alphabets.types;
  std::vector<double> values(d.size() * y.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      values[i * y.size() + j] = d.label(i) == y.label(j) ? 1.0 : 0.0;
  return PayoffTable(d, y, std::move(values), role);
}

double PayoffTable::min() const { return *std::min_element(values_.begin(), values_.end()); }
double PayoffTable::max() const { return *std::max_element(values_.begin(), values_.end()); }

PayoffTable PayoffTable::Scaled(double factor) const {
  std::vector<double> scaled = values_;
  for (double& v : scaled) v *= factor;
  return PayoffTable(decisions_, types_, std::move(scaled), role_);
}

PayoffTable PayoffTable::WithRole(PayoffRole role) const {
  return PayoffTable(decisions_, types_, values_, role);
}

void PayoffTable::RequireCompatible(const Alphabets& alphabets) const {
  if (!(decisions_ == alphabets.decisions)) {
    throw ConfigurationError("payoff table decisions do not match alphabet D");
  }
  if (!(types_ == alphabets.types)) {
    throw ConfigurationError("payoff table types do not match alphabet Y");
  }
}

PhiFunction PhiFunction::Power(double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0)) {
    throw ConfigurationError("power exponent must lie in (0, 1], got " + FormatNumber(exponent));
  }
  return PhiFunction(Family::kPower, exponent);
}

PhiFunction PhiFunction::Log(double shift) {
  if (!(shift > 0.0) || !std::isfinite(shift)) {
    throw ConfigurationError("log shift must be positive, got " + FormatNumber(shift));
  }
  return PhiFunction(Family::kLog, shift);
}

PhiFunction PhiFunction::NegativePower(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigurationError("negpow exponent must be positive, got " + FormatNumber(gamma));
  }
  return PhiFunction(Family::kNegativePower, gamma);
}

PhiFunction PhiFunction::Parse(std::string_view spec) {
  if (spec == "identity") return Identity();
  if (spec == "rawls") return Rawls();
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigurationError("unknown phi specification '" + std::string(spec) +
                             "' (expected identity, power:<a>, log:<s>, negpow:<g> or rawls)");
  }
  const std::string_view name = spec.substr(0, colon);
  const double value = ParseNumber(spec.substr(colon + 1), spec);
  if (name == "power") return Power(value);
  if (name == "log") return Log(value);
  if (name == "negpow") return NegativePower(value);
  throw ConfigurationError("unknown phi family '" + std::string(name) + "'");
}

std::string PhiFunction::Spec() const {
  switch (family_) {
    case Family::kIdentity: return "identity";
    case Family::kPower: return "power:" + FormatNumber(parameter_);
    case Family::kLog: return "log:" + FormatNumber(parameter_);
    case Family::kNegativePower: return "negpow:" + FormatNumber(parameter_);
    case Family::kRawls: return "rawls";
  }
  return "?";
}

bool PhiFunction::strictly_concave() const {
  switch (family_) {
    case Family::kPower: return parameter_ < 1.0;
    case Family::kLog:
    case Family::kNegativePower: return true;
    default: return false;
  }
}

double PhiFunction::domain_minimum() const {
  switch (family_) {
    case Family::kPower:
    case Family::kNegativePower: return 0.0;
    case Family::kLog: return -parameter_;
    default: return -kInf;
  }
}

bool PhiFunction::domain_minimum_admissible() const { return family_ == Family::kPower; }

bool PhiFunction::InDomain(double u) const {
  if (!std::isfinite(u)) return false;
  const double lo = domain_minimum();
  return domain_minimum_admissible() ? u >= lo : u > lo;
}

double PhiFunction::operator()(double u) const {
  if (!InDomain(u)) throw DomainError(DomainMessage(*this, u, 0));
  switch (family_) {
    case Family::kPower: return std::pow(u, parameter_);
    case Family::kLog: return std::log(u + parameter_);
    case Family::kNegativePower: return -std::pow(u, -parameter_);
    default: return u;
  }
}

double PhiFunction::Derivative(double u) const {
  if (!InDomain(u)) throw DomainError(DomainMessage(*this, u, 0));
  switch (family_) {
    case Family::kPower:
      return parameter_ * std::pow(std::max(u, kUtilityFloor), parameter_ - 1.0);
    case Family::kLog: return 1.0 / (u + parameter_);
    case Family::kNegativePower: return parameter_ * std::pow(u, -parameter_ - 1.0);
    default: return 1.0;
  }
}

double PhiFunction::Inverse(double w) const {
  auto out_of_range = [&] {
    std::ostringstream msg;
    msg.precision(12);
    msg << "value " << w << " is outside the range of phi=" << Spec();
    return DomainError(msg.str());
  };
  if (std::isnan(w)) throw out_of_range();
  switch (family_) {
    case Family::kPower:
      if (w < 0.0 || !std::isfinite(w)) throw out_of_range();
      return std::pow(w, 1.0 / parameter_);
    case Family::kLog:
      if (!std::isfinite(w)) throw out_of_range();
      return std::exp(w) - parameter_;
    case Family::kNegativePower:
      if (!(w < 0.0)) throw out_of_range();
      return std::pow(-w, -1.0 / parameter_);
    default:
      if (!std::isfinite(w)) throw out_of_range();
      return w;
  }
}

double AggregateWelfare(std::span<const double> weights, std::span<const double> utilities,
                        const PhiFunction& phi) {
  CheckAggregateInputs(weights, utilities);
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    if (!phi.InDomain(utilities[i])) throw DomainError(DomainMessage(phi, utilities[i], i));
  }
  if (phi.is_rawls()) {
    double lo = kInf;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
      if (weights[i] > 0.0) lo = std::min(lo, utilities[i]);
    }
    return lo;
  }
  if (phi.family() == PhiFunction::Family::kNegativePower) {
    // -sum w u^-g = -exp(logsumexp(log w - g log u)).
    double peak = -kInf;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
      if (weights[i] > 0.0) {
        peak = std::max(peak, std::log(weights[i]) - phi.parameter() * std::log(utilities[i]));
      }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < utilities.size(); ++i) {
      if (weights[i] > 0.0) {
        sum += std::exp(std::log(weights[i]) - phi.parameter() * std::log(utilities[i]) - peak);
      }
    }
    return -std::exp(peak + std::log(sum));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    if (weights[i] > 0.0) total += weights[i] * phi(utilities[i]);
  }
  return total;
}

double AggregateCertaintyEquivalent(std::span<const double> weights,
                                    std::span<const double> utilities,
                                    const PhiFunction& phi) {
  CheckAggregateInputs(weights, utilities);
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    if (!phi.InDomain(utilities[i])) throw DomainError(DomainMessage(phi, utilities[i], i));
  }
  const double r = phi.parameter();
  double total_weight = 0.0;
  for (double w : weights) total_weight += w;
  switch (phi.family()) {
    case PhiFunction::Family::kRawls:
      return AggregateWelfare(weights, utilities, phi);
    case PhiFunction::Family::kIdentity: {
      double s = 0.0;
      for (std::size_t i = 0; i < utilities.size(); ++i) s += weights[i] * utilities[i];
      return s / total_weight;
    }
    case PhiFunction::Family::kPower: {
      double s = 0.0;
      for (std::size_t i = 0; i < utilities.size(); ++i) {
        if (weights[i] > 0.0) s += weights[i] * std::pow(utilities[i], r);
      }
      return std::pow(s / total_weight, 1.0 / r);
    }
    case PhiFunction::Family::kLog: {
      double s = 0.0;
      for (std::size_t i = 0; i < utilities.size(); ++i) {
        if (weights[i] > 0.0) s += weights[i] * std::log(utilities[i] + r);
      }
      return std::exp(s / total_weight) - r;
    }
    case PhiFunction::Family::kNegativePower: {
      double peak = -kInf;
      for (std::size_t i = 0; i < utilities.size(); ++i) {
        if (weights[i] > 0.0) {
          peak = std::max(peak, std::log(weights[i] / total_weight) - r * std::log(utilities[i]));
        }
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < utilities.size(); ++i) {
        if (weights[i] > 0.0) {
          sum += std::exp(std::log(weights[i] / total_weight) - r * std::log(utilities[i]) - peak);
        }
      }
      return std::exp(-(peak + std::log(sum)) / r);
    }
  }
  return 0.0;
}

void AggregateCertaintyEquivalentGradient(std::span<const double> weights,
                                          std::span<const double> utilities,
                                          const PhiFunction& phi,
                                          std::span<double> gradient) {
  if (phi.is_rawls()) throw UsageError("rawls welfare is not differentiable");
  if (gradient.size() != utilities.size()) throw UsageError("gradient has wrong length");
  const double m = AggregateCertaintyEquivalent(weights, utilities, phi);
  const double r = phi.parameter();
  double total_weight = 0.0;
  for (double w : weights) total_weight += w;
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    const double w = weights[i] / total_weight;
    if (!(w > 0.0)) {
      gradient[i] = 0.0;
      continue;
    }
    switch (phi.family()) {
      case PhiFunction::Family::kPower: {
        const double u = std::max(utilities[i], kUtilityFloor);
        gradient[i] = w * std::pow(u / std::max(m, kUtilityFloor), r - 1.0);
        break;
      }
      case PhiFunction::Family::kLog:
        gradient[i] = w * (m + r) / (utilities[i] + r);
        break;
      case PhiFunction::Family::kNegativePower:
        gradient[i] = w * std::exp((r + 1.0) * (std::log(m) - std::log(utilities[i])));
        break;
      default:
        gradient[i] = w;
    }
  }
}

double ExpectedPayoff(const JointDistribution& joint, const PayoffTable& table) {
  table.RequireCompatible(joint.alphabets());
  const Alphabets& ab = joint.alphabets();
  double total = 0.0;
  for (std::size_t x = 0; x < ab.covariates.size(); ++x)
    for (std::size_t y = 0; y < ab.types.size(); ++y)
      for (std::size_t g = 0; g < ab.groups.size(); ++g)
        for (std::size_t d = 0; d < ab.decisions.size(); ++d)
          total += joint.mass(x, y, g, d) * table(d, y);
  return total;
}

double GroupUtility(const JointDistribution& joint, std::size_t group,
                    const PayoffTable& utility) {
  utility.RequireCompatible(joint.alphabets());
  const GroupConditional conditional = ConditionOnGroup(joint, group);
  const Alphabets& ab = joint.alphabets();
  double total = 0.0;
  for (std::size_t x = 0; x < ab.covariates.size(); ++x)
    for (std::size_t y = 0; y < ab.types.size(); ++y)
      for (std::size_t d = 0; d < ab.decisions.size(); ++d)
        total += conditional.at(x, y, d) * utility(d, y);
  return total;
}

GroupProfile GroupUtilities(const JointDistribution& joint, const PayoffTable& utility) {
  GroupProfile profile;
  for (std::size_t g = 0; g < joint.alphabets().groups.size(); ++g) {
    const double pg = joint.group_probability(g);
    if (!(pg > 0.0)) continue;
    profile.groups.push_back(g);
    profile.weights.push_back(pg);
    profile.utilities.push_back(GroupUtility(joint, g, utility));
  }
  return profile;
}

namespace {

void RequireProfileInDomain(const GroupProfile& profile, const Alphabets& ab,
                            const PhiFunction& phi) {
  for (std::size_t i = 0; i < profile.groups.size(); ++i) {
    if (!phi.InDomain(profile.utilities[i])) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "utility U(P_g)=" << profile.utilities[i] << " of group '"
          << ab.groups.label(profile.groups[i]) << "' is outside the domain of phi="
          << phi.Spec();
      throw DomainError(msg.str());
    }
  }
}

}  // namespace

double SocialWelfare(const JointDistribution& joint, const PayoffTable& utility,
                     const PhiFunction& phi) {
  const GroupProfile profile = GroupUtilities(joint, utility);
  RequireProfileInDomain(profile, joint.alphabets(), phi);
  return AggregateWelfare(profile.weights, profile.utilities, phi);
}

double WelfareCertaintyEquivalent(const JointDistribution& joint,
                                  const PayoffTable& utility, const PhiFunction& phi) {
  const GroupProfile profile = GroupUtilities(joint, utility);
  RequireProfileInDomain(profile, joint.alphabets(), phi);
  return AggregateCertaintyEquivalent(profile.weights, profile.utilities, phi);
}

double JensenGap(const JointDistribution& joint, const PayoffTable& utility,
                 const PhiFunction& phi) {
  if (phi.is_rawls()) {
    throw DomainError("the Jensen gap is not defined for rawls welfare");
  }
  const GroupProfile profile = GroupUtilities(joint, utility);
  RequireProfileInDomain(profile, joint.alphabets(), phi);
  double mean = 0.0;
  for (std::size_t i = 0; i < profile.groups.size(); ++i) {
    mean += profile.weights[i] * profile.utilities[i];
  }
  return phi(mean) - AggregateWelfare(profile.weights, profile.utilities, phi);
}

double CertaintyEquivalent(double welfare, const PhiFunction& phi) {
  return phi.Inverse(welfare);
}

double EvaluateUnfairness(const JointDistribution& joint, const UnfairnessMeasure& h) {
  if (const auto* indicator = std::get_if<ConstraintIndicator>(&h)) {
    return Satisfies(joint, indicator->constraint) ? 0.0 : kInf;
  }
  const auto& gap = std::get<JensenGapMeasure>(h);
  return JensenGap(joint, gap.utility, gap.phi);
}

double GeneralizedObjective(const JointDistribution& joint, const PayoffTable& accuracy,
                            const PhiFunction& phi, const UnfairnessMeasure& h) {
  if (phi.is_rawls()) {
    throw DomainError("the generalized objective needs a pointwise phi, not rawls");
  }
  const double penalty = EvaluateUnfairness(joint, h);
  if (std::isinf(penalty)) return kInfeasibleObjective;
  return phi(ExpectedPayoff(joint, accuracy)) - penalty;
}

std::vector<std::pair<double, double>> ReachableUtilityRange(
    const PopulationDistribution& mu, const PayoffTable& utility) {
  utility.RequireCompatible(mu.alphabets());
  const Alphabets& ab = mu.alphabets();
  std::vector<std::pair<double, double>> out;
  for (std::size_t g = 0; g < ab.groups.size(); ++g) {
    if (!(mu.group_prior(g) > 0.0)) {
      out.emplace_back(std::nan(""), std::nan(""));
      continue;
    }
    double lo = 0.0, hi = 0.0;
    for (std::size_t x = 0; x < ab.covariates.size(); ++x) {
      double row_lo = kInf, row_hi = -kInf;
      for (std::size_t d = 0; d < ab.decisions.size(); ++d) {
        double v = 0.0;
        for (std::size_t y = 0; y < ab.types.size(); ++y) {
          v += mu.conditional(x, y, g) * utility(d, y);
        }
        row_lo = std::min(row_lo, v);
        row_hi = std::max(row_hi, v);
      }
      lo += row_lo;
      hi += row_hi;
    }
    out.emplace_back(lo, hi);
  }
  return out;
}

void RequireReachableUtilitiesInDomain(const PopulationDistribution& mu,
                                       const PayoffTable& utility,
                                       const PhiFunction& phi) {
  const auto ranges = ReachableUtilityRange(mu, utility);
  for (std::size_t g = 0; g < ranges.size(); ++g) {
    if (std::isnan(ranges[g].first)) continue;
    if (!phi.InDomain(ranges[g].first)) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "group '" << mu.alphabets().groups.label(g) << "' can reach utility "
          << ranges[g].first << ", outside the domain of phi=" << phi.Spec()
          << "; shift the utility table";
      throw DomainError(msg.str());
    }
  }
}

}  // namespace fairwelfare
