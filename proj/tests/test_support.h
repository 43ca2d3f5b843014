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

#ifndef FAIRWELFARE_TESTS_TEST_SUPPORT_H_
#define FAIRWELFARE_TESTS_TEST_SUPPORT_H_

// Random instances and brute-force reference computations for tests. The
// references work directly on dense arrays and share no code with the
// library beyond its data types.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fairwelfare/model.h"
#include "fairwelfare/objectives.h"

namespace fairwelfare::testing {

inline std::vector<std::string> Labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

inline Alphabets MakeAlphabets(std::size_t nx, std::size_t ny, std::size_t ng, std::size_t nd) {
  return Alphabets::Make(Labels(nx), Labels(ny), Labels(ng), Labels(nd));
}

inline std::vector<double> Dirichlet(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> out(n);
  double total = 0.0;
  for (double& v : out) total += (v = e(rng));
  for (double& v : out) v /= total;
  return out;
}

inline PopulationDistribution RandomPopulation(std::mt19937_64& rng, const Alphabets& ab) {
  return PopulationDistribution(
      ab, Dirichlet(rng, ab.covariates.size() * ab.types.size() * ab.groups.size()), 1e-9);
}

inline Policy RandomPolicy(std::mt19937_64& rng, const Alphabets& ab) {
  std::vector<double> rows;
  for (std::size_t x = 0; x < ab.covariates.size(); ++x) {
    auto row = Dirichlet(rng, ab.decisions.size());
    rows.insert(rows.end(), row.begin(), row.end());
  }
  return Policy(ab, rows, 1e-9);
}

inline PayoffTable RandomTable(std::mt19937_64& rng, const Alphabets& ab, double lo, double hi,
                               PayoffRole role = PayoffRole::kUtility) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> values(ab.decisions.size() * ab.types.size());
  for (double& v : values) v = u(rng);
  return PayoffTable(ab.decisions, ab.types, values, role);
}

// Dense reference model: index helpers over (x, y, g, d).
struct Dense {
  std::size_t nx, ny, ng, nd;
  std::vector<double> p;  // joint, (x, y, g, d) row-major

  Dense(const PopulationDistribution& mu, const Policy& a)
      : nx(mu.alphabets().covariates.size()),
        ny(mu.alphabets().types.size()),
        ng(mu.alphabets().groups.size()),
        nd(mu.alphabets().decisions.size()),
        p(nx * ny * ng * nd) {
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t g = 0; g < ng; ++g)
          for (std::size_t d = 0; d < nd; ++d)
            p[((x * ny + y) * ng + g) * nd + d] = mu.mass(x, y, g) * a.prob(x, d);
  }

  double at(std::size_t x, std::size_t y, std::size_t g, std::size_t d) const {
    return p[((x * ny + y) * ng + g) * nd + d];
  }

  double group_mass(std::size_t g) const {
    double s = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t d = 0; d < nd; ++d) s += at(x, y, g, d);
    return s;
  }

  double group_utility(std::size_t g, const PayoffTable& u) const {
    double s = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t d = 0; d < nd; ++d) s += at(x, y, g, d) * u(d, y);
    return s / group_mass(g);
  }

  // P(D | Y = y, G = g) with y < 0 meaning unconditional on Y. Empty when
  // the event has no mass.
  std::vector<double> decision_given(int y, std::size_t g) const {
    std::vector<double> q(nd, 0.0);
    double total = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t yy = 0; yy < ny; ++yy) {
        if (y >= 0 && static_cast<std::size_t>(y) != yy) continue;
        for (std::size_t d = 0; d < nd; ++d) {
          q[d] += at(x, yy, g, d);
          total += at(x, yy, g, d);
        }
      }
    if (!(total > 0.0)) return {};
    for (double& v : q) v /= total;
    return q;
  }

  // Max over groups pairs of half the L1 distance of P(D | event, G).
  double max_tv(int y) const {
    double worst = 0.0;
    for (std::size_t g = 0; g < ng; ++g)
      for (std::size_t h = g + 1; h < ng; ++h) {
        auto a = decision_given(y, g), b = decision_given(y, h);
        if (a.empty() || b.empty()) continue;
        double l1 = 0.0;
        for (std::size_t d = 0; d < nd; ++d) l1 += std::abs(a[d] - b[d]);
        worst = std::max(worst, 0.5 * l1);
      }
    return worst;
  }
};

}  // namespace fairwelfare::testing

#endif  // FAIRWELFARE_TESTS_TEST_SUPPORT_H_
