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

#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace levy_bdg {

/// A point of R^d. Dimension is carried by the container.
using Vec = std::vector<double>;

/// Norm exponent sentinel selecting the l_infinity norm.
inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// l_s norm on R^d, s in [1, inf].
double lp_norm(std::span<const double> v, double s);

/// Validates a norm exponent; throws std::invalid_argument unless s >= 1.
void require_norm_exponent(double s);

/// Euclidean inner product.
double dot(std::span<const double> a, std::span<const double> b);

/// Order-independent (pairwise) summation. The result depends only on the
/// sequence, never on how it was produced.
double pairwise_sum(std::span<const double> values);

/// Sample mean and standard error of the mean.
struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

/// Mean and SE via two pairwise-summed passes; SE uses the unbiased variance.
Estimate mean_and_se(std::span<const double> samples);

}  // namespace levy_bdg
