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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "levy_bdg/common.hpp"
#include "levy_bdg/rng.hpp"

namespace levy_bdg {

/// Finite intensity measure on R^d made of weighted atoms.
class MarkMeasure {
 public:
  struct Atom {
    Vec z;
    double w = 0.0;
  };

  /// Validates dimensions, weights (finite, > 0) and, when eps > 0, that every
  /// atom lies outside the closed eps-ball.
  MarkMeasure(int dim, std::vector<Atom> atoms, double norm_s = 2.0, double eps = 0.0);

  static MarkMeasure dirac(Vec z, double w = 1.0, double norm_s = 2.0);

  int dim() const noexcept { return dim_; }
  double norm_exponent() const noexcept { return norm_s_; }
  double eps() const noexcept { return eps_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  double total_mass() const noexcept { return mass_; }
  bool empty() const noexcept { return atoms_.empty(); }

  /// Atom index for a uniform draw u in [0, 1).
  std::size_t pick(double u) const;

 private:
  int dim_;
  double norm_s_;
  double eps_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  double mass_ = 0.0;
};

/// Removes atoms with |z|_s <= eps. Throws std::invalid_argument when
/// `require_nonempty` is set and no mass survives.
MarkMeasure truncate(const MarkMeasure& nu, double eps, bool require_nonempty = false);

/// Atoms z_k = scale * ratio^k (along e_1), weights w_k = weight * growth^k,
/// k = 0..count-1. With ratio < 1 and growth > 1 this mimics an
/// infinite-activity measure concentrating near 0.
struct GeometricFamily {
  double scale = 1.0;
  double ratio = 0.5;
  double weight = 1.0;
  double growth = 1.0;
  int count = 10;
  int dim = 1;
};
MarkMeasure geometric_measure(const GeometricFamily& g, double norm_s = 2.0);

/// One realization of the PRM on S x (0, T]: strictly increasing times.
struct PrmPath {
  double horizon = 0.0;
  int dim = 1;
  std::vector<double> times;
  std::vector<double> marks;  // count * dim
  std::uint64_t stream_state = 0;  // state of the stream at sampling start

  std::size_t count() const noexcept { return times.size(); }
  std::span<const double> mark(std::size_t i) const {
    return std::span<const double>(marks).subspan(i * dim, dim);
  }
};

/// Poisson(nu(S) T) events, uniform times on (0, T], marks ~ nu / nu(S).
/// Draw order: count, then all times, then all marks.
PrmPath sample_prm(const MarkMeasure& nu, double horizon, Stream& stream);

/// A jump of a cadlag path.
struct Jump {
  double t = 0.0;
  Vec delta;
};

/// Cadlag, piecewise linear path with jumps at breakpoints. Breakpoint 0 is
/// time 0. `values` holds right limits, `slopes` the drift on
/// [b_k, b_{k+1}), and `jump` the size X(b_k) - X(b_k-).
struct CadlagPath {
  double horizon = 0.0;
  int dim = 1;
  std::vector<double> breaks;
  std::vector<double> values;
  std::vector<double> slopes;
  std::vector<double> jump;

  std::size_t size() const noexcept { return breaks.size(); }
  std::span<const double> right(std::size_t k) const {
    return std::span<const double>(values).subspan(k * dim, dim);
  }
  Vec value(double t) const;
  Vec left_limit(double t) const;
  /// All discontinuities (nonzero jumps) in time order.
  std::vector<Jump> jumps() const;
};

/// Drift plus a finite jump measure; the Gaussian part is zero.
struct LevyTriplet {
  Vec drift;
  MarkMeasure measure;
};

struct LevyPath {
  PrmPath prm;
  CadlagPath path;
};

/// L(t) = m t + sum_{t_i <= t} z_i.
LevyPath levy_path(const LevyTriplet& triplet, double horizon, Stream& stream);

/// exp(t [i <m, theta> + sum_j w_j (exp(i <theta, z_j>) - 1)]).
std::complex<double> levy_cf(const LevyTriplet& triplet, double t, std::span<const double> theta);

struct CfPoint {
  Vec theta;
  std::complex<double> empirical;
  std::complex<double> analytic;
  double error = 0.0;
  double se = 0.0;
};

struct CfReport {
  std::vector<CfPoint> points;
  double max_error = 0.0;
  double threshold = 0.0;  // 4 / sqrt(N)
  bool pass = false;
};

/// Compares the empirical CF of L(t) over N seeded paths with the closed form.
CfReport cf_check(const LevyTriplet& triplet, double t, std::span<const Vec> thetas,
                  std::size_t paths, std::uint64_t seed, unsigned threads = 1);

/// E|xi - lambda|^p for xi ~ Poisson(lambda), summed over the pmf until the
/// remaining tail is provably below 1e-12.
double poisson_central_moment(double lambda, double p);

/// {"atoms":[{"z":[..],"w":..}],"eps":..,"norm":..,"dim":..} or
/// {"geometric":{...},"eps":..,"norm":..}. eps truncates on load.
MarkMeasure measure_from_json(const nlohmann::json& j);
nlohmann::json measure_to_json(const MarkMeasure& nu);

/// CSV dump "t,z_1,..,z_d" of the events.
void write_path_csv(std::ostream& out, const PrmPath& path);

}  // namespace levy_bdg
