/*
   Copyright 2026 The levy_bdg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "levy_bdg/common.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace levy_bdg {

void require_norm_exponent(double s) {
  if (!(s >= 1.0)) {
    throw std::invalid_argument("norm exponent must be >= 1 (got " +
                                std::to_string(s) + ")");
  }
}

double lp_norm(std::span<const double> v, double s) {
  if (v.size() == 1) return std::fabs(v[0]);
  if (std::isinf(s)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  if (s == 2.0) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
  }
  if (s == 1.0) {
    double acc = 0.0;
    for (double x : v) acc += std::fabs(x);
    return acc;
  }
  double acc = 0.0;
  for (double x : v) acc += std::pow(std::fabs(x), s);
  return std::pow(acc, 1.0 / s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 16;
  if (values.size() <= kLeaf) {
    double acc = 0.0;
    for (double x : values) acc += x;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate mean_and_se(std::span<const double> samples) {
  Estimate e;
  const std::size_t n = samples.size();
  if (n == 0) return e;
  e.mean = pairwise_sum(samples) / static_cast<double>(n);
  if (n < 2) return e;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = samples[i] - e.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  e.se = std::sqrt(var / static_cast<double>(n));
  return e;
}

}  // namespace levy_bdg
