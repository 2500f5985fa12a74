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

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "levy_bdg/common.hpp"
#include "levy_bdg/prm.hpp"

namespace levy_bdg {

/// Raised when a mark has no entry in an integrand's atom table.
class MarkDomainError : public std::invalid_argument {
 public:
  MarkDomainError(double t, Vec z);
  double time() const noexcept { return t_; }
  const Vec& mark() const noexcept { return z_; }

 private:
  double t_;
  Vec z_;
};

/// A deterministic map xi_j : R^in_dim -> R^out_dim on marks.
class MarkMap {
 public:
  using Fn = std::function<void(std::span<const double> z, std::span<double> out)>;

  MarkMap(int in_dim, int out_dim, Fn fn);

  static MarkMap zero(int in_dim, int out_dim);
  static MarkMap constant(int in_dim, Vec value);
  /// xi(z) = a z.
  static MarkMap scaled(int in_dim, double a);
  /// xi(z) = A z with A given row-major as out_dim x in_dim.
  static MarkMap matrix(int in_dim, int out_dim, std::vector<double> rows);
  /// Exact lookup; unknown marks raise MarkDomainError (time NaN).
  struct Entry {
    Vec z;
    Vec xi;
  };
  static MarkMap table(std::vector<Entry> entries);

  int in_dim() const noexcept { return in_dim_; }
  int out_dim() const noexcept { return out_dim_; }
  void operator()(std::span<const double> z, std::span<double> out) const { fn_(z, out); }

 private:
  int in_dim_;
  int out_dim_;
  Fn fn_;
};

/// Events of a PRM path with t_i <= cutoff; the only information a
/// predictable rule may see.
struct PathPrefix {
  double cutoff = 0.0;
  int dim = 1;
  std::span<const double> times;
  std::span<const double> marks;

  std::size_t count() const noexcept { return times.size(); }
  std::span<const double> mark(std::size_t i) const { return marks.subspan(i * dim, dim); }
};

/// xi_j fixed for one path: one MarkMap per cell (t_{j-1}, t_j].
struct RealizedIntegrand {
  Vec partition;  // t_0 = 0 < t_1 < ... < t_n
  std::vector<MarkMap> maps;
  int in_dim = 1;
  int out_dim = 1;

  std::size_t cells() const noexcept { return maps.size(); }
  /// Cell index j - 1 with t in (t_{j-1}, t_j], or -1 outside (0, t_n].
  long cell_of(double t) const;
};

/// Predictable step integrand. The rule building the map of cell j receives
/// only the events up to t_{j-1}, so predictability holds by construction.
class StepIntegrand {
 public:
  using Rule = std::function<MarkMap(std::size_t cell, const PathPrefix& past)>;

  /// Throws std::invalid_argument unless partition starts at 0 and is
  /// strictly increasing with at least one cell.
  StepIntegrand(Vec partition, int in_dim, int out_dim, Rule rule);

  static StepIntegrand constant(Vec partition, int in_dim, Vec value);
  static StepIntegrand linear_in_mark(Vec partition, int in_dim, double a = 1.0);
  /// xi_j(z) = (|sum_{t_i <= t_{j-1}} z_i|_s <= theta ? low : high) z.
  static StepIntegrand adapted_threshold(Vec partition, int in_dim, double theta, double low,
                                         double high, double norm_s = 2.0);
  /// One atom table per cell (or a single table for every cell).
  static StepIntegrand table(Vec partition, std::vector<std::vector<MarkMap::Entry>> cells);
  /// One row-major matrix per cell (or a single matrix for every cell).
  static StepIntegrand matrix(Vec partition, int in_dim, int out_dim,
                              std::vector<std::vector<double>> cells);

  /// c xi.
  StepIntegrand scaled(double c) const;
  /// a xi1 + b xi2 on a common partition.
  static StepIntegrand combine(double a, const StepIntegrand& xi1, double b,
                               const StepIntegrand& xi2);

  const Vec& partition() const noexcept { return partition_; }
  std::size_t cells() const noexcept { return partition_.size() - 1; }
  int in_dim() const noexcept { return in_dim_; }
  int out_dim() const noexcept { return out_dim_; }

  RealizedIntegrand realize(const PrmPath& path) const;

 private:
  Vec partition_;
  int in_dim_;
  int out_dim_;
  Rule rule_;
};

/// Uniform partition of [0, T] into n cells.
Vec uniform_partition(double horizon, std::size_t cells);

/// I(t) = sum_{t_i <= t} xi(t_i, z_i) - int_0^t int xi(s, z) nu(dz) ds as an
/// exact cadlag path on [0, T]. The compensator is linear on every cell.
/// Throws MarkDomainError (with the event time) for marks outside a table.
CadlagPath integrate(const RealizedIntegrand& xi, const PrmPath& path, const MarkMeasure& nu);

/// sup_{0 <= u <= t} |I(u)|_s, exact: taken over left and right limits at
/// every breakpoint and the value at t.
double sup_norm(const CadlagPath& path, double t, double s);

/// sum_{t_i <= t} |xi(t_i, z_i)|_s^p.
double jump_power_sum(const RealizedIntegrand& xi, const PrmPath& path, double p, double t,
                      double s);

/// sum_j (t_j ^ t - t_{j-1} ^ t) sum_atoms w |xi_j(z)|_s^p.
double nu_power_integral(const RealizedIntegrand& xi, const MarkMeasure& nu, double p, double t,
                         double s);

/// Partition spec {"cells": n} (uniform on [0, T]) or {"times": [t_1, ..]}.
Vec partition_from_json(const nlohmann::json& j, double horizon);

/// Integrand spec with "kind" in constant | linear_in_mark | adapted_threshold
/// | table | matrix and an optional "partition".
StepIntegrand integrand_from_json(const nlohmann::json& j, int mark_dim, double horizon);

}  // namespace levy_bdg
