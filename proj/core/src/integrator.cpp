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

#include "levy_bdg/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

namespace levy_bdg {
namespace {

std::string describe(double t, const Vec& z) {
  return std::isnan(t) ? fmt::format("mark ({}) outside the integrand table", fmt::join(z, ", "))
                       : fmt::format("mark ({}) at t = {} outside the integrand table",
                                     fmt::join(z, ", "), t);
}

void require_dims(int in_dim, int out_dim) {
  if (in_dim < 1 || out_dim < 1) throw std::invalid_argument("dimensions must be >= 1");
}

// Per-cell list, or one entry broadcast to every cell.
template <class T>
const T& per_cell(const std::vector<T>& items, std::size_t cell) {
  return items.size() == 1 ? items.front() : items.at(cell);
}

std::vector<double> flatten_rows(const nlohmann::json& rows) {
  std::vector<double> out;
  for (const auto& row : rows) {
    for (const auto& x : row) out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

MarkDomainError::MarkDomainError(double t, Vec z)
    : std::invalid_argument(describe(t, z)), t_(t), z_(std::move(z)) {}

MarkMap::MarkMap(int in_dim, int out_dim, Fn fn)
    : in_dim_(in_dim), out_dim_(out_dim), fn_(std::move(fn)) {
  require_dims(in_dim, out_dim);
}

MarkMap MarkMap::zero(int in_dim, int out_dim) {
  return MarkMap(in_dim, out_dim, [](std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
  });
}

MarkMap MarkMap::constant(int in_dim, Vec value) {
  const int out_dim = static_cast<int>(value.size());
  return MarkMap(in_dim, out_dim, [v = std::move(value)](std::span<const double>, std::span<double> out) {
    std::copy(v.begin(), v.end(), out.begin());
  });
}

MarkMap MarkMap::scaled(int in_dim, double a) {
  return MarkMap(in_dim, in_dim, [a](std::span<const double> z, std::span<double> out) {
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = a * z[j];
  });
}

MarkMap MarkMap::matrix(int in_dim, int out_dim, std::vector<double> rows) {
  require_dims(in_dim, out_dim);
  if (rows.size() != static_cast<std::size_t>(in_dim) * static_cast<std::size_t>(out_dim)) {
    throw std::invalid_argument("matrix shape does not match dimensions");
  }
  return MarkMap(in_dim, out_dim,
                 [a = std::move(rows), in_dim](std::span<const double> z, std::span<double> out) {
                   for (std::size_t i = 0; i < out.size(); ++i) {
                     double acc = 0.0;
                     for (int j = 0; j < in_dim; ++j) acc += a[i * in_dim + j] * z[j];
                     out[i] = acc;
                   }
                 });
}

MarkMap MarkMap::table(std::vector<Entry> entries) {
  if (entries.empty()) throw std::invalid_argument("integrand table must not be empty");
  const auto in_dim = entries.front().z.size();
  const auto out_dim = entries.front().xi.size();
  for (const auto& e : entries) {
    if (e.z.size() != in_dim || e.xi.size() != out_dim) {
      throw std::invalid_argument("integrand table entries must share dimensions");
    }
  }
  return MarkMap(static_cast<int>(in_dim), static_cast<int>(out_dim),
                 [t = std::move(entries)](std::span<const double> z, std::span<double> out) {
                   for (const auto& e : t) {
                     if (std::equal(e.z.begin(), e.z.end(), z.begin(), z.end())) {
                       std::copy(e.xi.begin(), e.xi.end(), out.begin());
                       return;
                     }
                   }
                   throw MarkDomainError(std::numeric_limits<double>::quiet_NaN(),
                                         Vec(z.begin(), z.end()));
                 });
}

long RealizedIntegrand::cell_of(double t) const {
  if (!(t > partition.front()) || t > partition.back()) return -1;
  const auto it = std::lower_bound(partition.begin(), partition.end(), t);
  return static_cast<long>(it - partition.begin()) - 1;
}

StepIntegrand::StepIntegrand(Vec partition, int in_dim, int out_dim, Rule rule)
    : partition_(std::move(partition)), in_dim_(in_dim), out_dim_(out_dim), rule_(std::move(rule)) {
  require_dims(in_dim, out_dim);
  if (partition_.size() < 2 || partition_.front() != 0.0) {
    throw std::invalid_argument("partition must start at 0 and have at least one cell");
  }
  for (std::size_t i = 1; i < partition_.size(); ++i) {
    if (!(partition_[i] > partition_[i - 1]) || !std::isfinite(partition_[i])) {
      throw std::invalid_argument("partition must be strictly increasing");
    }
  }
}

StepIntegrand StepIntegrand::constant(Vec partition, int in_dim, Vec value) {
  const int out_dim = static_cast<int>(value.size());
  MarkMap map = MarkMap::constant(in_dim, std::move(value));
  return StepIntegrand(std::move(partition), in_dim, out_dim,
                       [map](std::size_t, const PathPrefix&) { return map; });
}

StepIntegrand StepIntegrand::linear_in_mark(Vec partition, int in_dim, double a) {
  MarkMap map = MarkMap::scaled(in_dim, a);
  return StepIntegrand(std::move(partition), in_dim, in_dim,
                       [map](std::size_t, const PathPrefix&) { return map; });
}

StepIntegrand StepIntegrand::adapted_threshold(Vec partition, int in_dim, double theta,
                                               double low, double high, double norm_s) {
  require_norm_exponent(norm_s);
  return StepIntegrand(std::move(partition), in_dim, in_dim,
                       [=](std::size_t, const PathPrefix& past) {
                         Vec sum(static_cast<std::size_t>(in_dim), 0.0);
                         for (std::size_t i = 0; i < past.count(); ++i) {
                           const auto z = past.mark(i);
                           for (int j = 0; j < in_dim; ++j) sum[j] += z[j];
                         }
                         return MarkMap::scaled(in_dim, lp_norm(sum, norm_s) <= theta ? low : high);
                       });
}

StepIntegrand StepIntegrand::table(Vec partition, std::vector<std::vector<MarkMap::Entry>> cells) {
  if (cells.empty()) throw std::invalid_argument("table integrand needs at least one cell");
  std::vector<MarkMap> maps;
  for (auto& c : cells) maps.push_back(MarkMap::table(std::move(c)));
  const std::size_t n = partition.size() - 1;
  if (maps.size() != 1 && maps.size() != n) {
    throw std::invalid_argument("table integrand needs one table or one per cell");
  }
  const int in_dim = maps.front().in_dim();
  const int out_dim = maps.front().out_dim();
  for (const auto& m : maps) {
    if (m.in_dim() != in_dim || m.out_dim() != out_dim) {
      throw std::invalid_argument("cell tables must share dimensions");
    }
  }
  return StepIntegrand(std::move(partition), in_dim, out_dim,
                       [maps](std::size_t cell, const PathPrefix&) { return per_cell(maps, cell); });
}

StepIntegrand StepIntegrand::matrix(Vec partition, int in_dim, int out_dim,
                                    std::vector<std::vector<double>> cells) {
  const std::size_t n = partition.size() - 1;
  if (cells.empty() || (cells.size() != 1 && cells.size() != n)) {
    throw std::invalid_argument("matrix integrand needs one matrix or one per cell");
  }
  std::vector<MarkMap> maps;
  for (auto& c : cells) maps.push_back(MarkMap::matrix(in_dim, out_dim, std::move(c)));
  return StepIntegrand(std::move(partition), in_dim, out_dim,
                       [maps](std::size_t cell, const PathPrefix&) { return per_cell(maps, cell); });
}

StepIntegrand StepIntegrand::scaled(double c) const {
  return StepIntegrand(partition_, in_dim_, out_dim_,
                       [rule = rule_, c](std::size_t cell, const PathPrefix& past) {
                         MarkMap inner = rule(cell, past);
                         const int out_dim = inner.out_dim();
                         return MarkMap(inner.in_dim(), out_dim,
                                        [inner, c](std::span<const double> z, std::span<double> out) {
                                          inner(z, out);
                                          for (double& x : out) x *= c;
                                        });
                       });
}

StepIntegrand StepIntegrand::combine(double a, const StepIntegrand& xi1, double b,
                                     const StepIntegrand& xi2) {
  if (xi1.partition_ != xi2.partition_ || xi1.in_dim_ != xi2.in_dim_ ||
      xi1.out_dim_ != xi2.out_dim_) {
    throw std::invalid_argument("combined integrands must share partition and dimensions");
  }
  return StepIntegrand(
      xi1.partition_, xi1.in_dim_, xi1.out_dim_,
      [r1 = xi1.rule_, r2 = xi2.rule_, a, b](std::size_t cell, const PathPrefix& past) {
        MarkMap m1 = r1(cell, past);
        MarkMap m2 = r2(cell, past);
        const int out_dim = m1.out_dim();
        return MarkMap(m1.in_dim(), out_dim,
                       [m1, m2, a, b](std::span<const double> z, std::span<double> out) {
                         Vec tmp(out.size());
                         m1(z, out);
                         m2(z, tmp);
                         for (std::size_t j = 0; j < out.size(); ++j) out[j] = a * out[j] + b * tmp[j];
                       });
      });
}

RealizedIntegrand StepIntegrand::realize(const PrmPath& path) const {
  if (path.dim != in_dim_) throw std::invalid_argument("integrand expects another mark dimension");
  if (partition_.back() > path.horizon) {
    throw std::invalid_argument("partition extends past the horizon");
  }
  RealizedIntegrand out{partition_, {}, in_dim_, out_dim_};
  out.maps.reserve(cells());
  for (std::size_t j = 0; j < cells(); ++j) {
    const double cutoff = partition_[j];
    const auto seen = static_cast<std::size_t>(
        std::upper_bound(path.times.begin(), path.times.end(), cutoff) - path.times.begin());
    const PathPrefix past{cutoff, path.dim, std::span<const double>(path.times).first(seen),
                          std::span<const double>(path.marks).first(seen * path.dim)};
    MarkMap map = rule_(j, past);
    if (map.in_dim() != in_dim_ || map.out_dim() != out_dim_) {
      throw std::invalid_argument("integrand rule returned a map of the wrong shape");
    }
    out.maps.push_back(std::move(map));
  }
  return out;
}

Vec uniform_partition(double horizon, std::size_t cells) {
  if (cells == 0 || !(horizon > 0.0)) {
    throw std::invalid_argument("uniform partition needs cells >= 1 and T > 0");
  }
  Vec out(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    out[j] = horizon * static_cast<double>(j) / static_cast<double>(cells);
  }
  out.back() = horizon;
  return out;
}

CadlagPath integrate(const RealizedIntegrand& xi, const PrmPath& path, const MarkMeasure& nu) {
  if (nu.dim() != xi.in_dim || path.dim != xi.in_dim) {
    throw std::invalid_argument("measure, path and integrand dimensions differ");
  }
  const auto d = static_cast<std::size_t>(xi.out_dim);
  const std::size_t n_cells = xi.cells();
  // Compensator rate of every cell: sum_atoms w xi_j(z).
  std::vector<double> rate(n_cells * d, 0.0);
  Vec buf(d);
  for (std::size_t j = 0; j < n_cells; ++j) {
    for (const auto& a : nu.atoms()) {
      try {
        xi.maps[j](a.z, buf);
      } catch (const MarkDomainError& e) {
        throw MarkDomainError(xi.partition[j + 1], e.mark());
      }
      for (std::size_t c = 0; c < d; ++c) rate[j * d + c] += a.w * buf[c];
    }
  }

  CadlagPath out;
  out.horizon = path.horizon;
  out.dim = xi.out_dim;
  out.breaks.push_back(0.0);
  {
    std::vector<double> merged;
    merged.reserve(path.count() + xi.partition.size());
    std::merge(path.times.begin(), path.times.end(), xi.partition.begin() + 1,
               xi.partition.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    out.breaks.insert(out.breaks.end(), merged.begin(), merged.end());
  }
  const std::size_t nb = out.breaks.size();
  out.values.assign(nb * d, 0.0);
  out.slopes.assign(nb * d, 0.0);
  out.jump.assign(nb * d, 0.0);

  std::size_t next_event = 0;
  for (std::size_t k = 0; k < nb; ++k) {
    const double b = out.breaks[k];
    if (k > 0) {
      const double dt = b - out.breaks[k - 1];
      for (std::size_t c = 0; c < d; ++c) {
        out.values[k * d + c] = out.values[(k - 1) * d + c] + out.slopes[(k - 1) * d + c] * dt;
      }
    }
    if (next_event < path.count() && path.times[next_event] == b) {
      const long cell = xi.cell_of(b);
      if (cell >= 0) {
        try {
          xi.maps[static_cast<std::size_t>(cell)](path.mark(next_event), buf);
        } catch (const MarkDomainError& e) {
          throw MarkDomainError(b, e.mark());
        }
        for (std::size_t c = 0; c < d; ++c) {
          out.jump[k * d + c] = buf[c];
          out.values[k * d + c] += buf[c];
        }
      }
      ++next_event;
    }
    // Drift on [b, next): cell j with t_{j-1} <= b < t_j, none past t_n.
    const auto after = static_cast<std::size_t>(
        std::upper_bound(xi.partition.begin(), xi.partition.end(), b) - xi.partition.begin());
    if (after >= 1 && after <= n_cells) {
      for (std::size_t c = 0; c < d; ++c) out.slopes[k * d + c] = -rate[(after - 1) * d + c];
    }
  }
  return out;
}

double sup_norm(const CadlagPath& path, double t, double s) {
  const auto d = static_cast<std::size_t>(path.dim);
  double best = 0.0;
  Vec left(d);
  for (std::size_t k = 0; k < path.size() && path.breaks[k] <= t; ++k) {
    if (k > 0) {
      const double dt = path.breaks[k] - path.breaks[k - 1];
      for (std::size_t c = 0; c < d; ++c) {
        left[c] = path.values[(k - 1) * d + c] + path.slopes[(k - 1) * d + c] * dt;
      }
      best = std::max(best, lp_norm(left, s));
    }
    best = std::max(best, lp_norm(path.right(k), s));
  }
  return std::max(best, lp_norm(path.value(t), s));
}

double jump_power_sum(const RealizedIntegrand& xi, const PrmPath& path, double p, double t,
                      double s) {
  Vec buf(static_cast<std::size_t>(xi.out_dim));
  double total = 0.0;
  for (std::size_t i = 0; i < path.count() && path.times[i] <= t; ++i) {
    const long cell = xi.cell_of(path.times[i]);
    if (cell < 0) continue;
    xi.maps[static_cast<std::size_t>(cell)](path.mark(i), buf);
    total += std::pow(lp_norm(buf, s), p);
  }
  return total;
}

double nu_power_integral(const RealizedIntegrand& xi, const MarkMeasure& nu, double p, double t,
                         double s) {
  Vec buf(static_cast<std::size_t>(xi.out_dim));
  double total = 0.0;
  for (std::size_t j = 0; j < xi.cells(); ++j) {
    const double len = std::min(xi.partition[j + 1], t) - std::min(xi.partition[j], t);
    if (!(len > 0.0)) continue;
    double cell = 0.0;
    for (const auto& a : nu.atoms()) {
      xi.maps[j](a.z, buf);
      cell += a.w * std::pow(lp_norm(buf, s), p);
    }
    total += len * cell;
  }
  return total;
}

Vec partition_from_json(const nlohmann::json& j, double horizon) {
  if (j.contains("times")) {
    Vec out{0.0};
    for (const auto& t : j.at("times")) out.push_back(t.get<double>());
    return out;
  }
  return uniform_partition(horizon, j.value("cells", std::size_t{1}));
}

StepIntegrand integrand_from_json(const nlohmann::json& j, int mark_dim, double horizon) {
  const std::string kind = j.at("kind").get<std::string>();
  Vec part = j.contains("partition") ? partition_from_json(j.at("partition"), horizon)
                                     : uniform_partition(horizon, 1);
  if (kind == "constant") {
    const auto& v = j.at("value");
    Vec value = v.is_array() ? v.get<Vec>() : Vec{v.get<double>()};
    return StepIntegrand::constant(std::move(part), mark_dim, std::move(value));
  }
  if (kind == "linear_in_mark") {
    return StepIntegrand::linear_in_mark(std::move(part), mark_dim, j.value("scale", 1.0));
  }
  if (kind == "adapted_threshold") {
    double norm_s = 2.0;
    if (j.contains("norm")) {
      norm_s = j.at("norm").is_string() && j.at("norm").get<std::string>() == "inf"
                   ? kInfNorm
                   : j.at("norm").get<double>();
    }
    return StepIntegrand::adapted_threshold(std::move(part), mark_dim, j.at("theta").get<double>(),
                                            j.value("low", 1.0), j.value("high", 0.0), norm_s);
  }
  if (kind == "table") {
    auto read_table = [](const nlohmann::json& entries) {
      std::vector<MarkMap::Entry> out;
      for (const auto& e : entries) out.push_back({e.at("z").get<Vec>(), e.at("xi").get<Vec>()});
      return out;
    };
    std::vector<std::vector<MarkMap::Entry>> cells;
    if (j.contains("cells")) {
      for (const auto& c : j.at("cells")) cells.push_back(read_table(c));
    } else {
      cells.push_back(read_table(j.at("atoms")));
    }
    return StepIntegrand::table(std::move(part), std::move(cells));
  }
  if (kind == "matrix") {
    std::vector<std::vector<double>> cells;
    std::size_t out_dim = 0;
    auto add = [&](const nlohmann::json& rows) {
      out_dim = rows.size();
      cells.push_back(flatten_rows(rows));
    };
    if (j.contains("matrices")) {
      for (const auto& m : j.at("matrices")) add(m);
    } else {
      add(j.at("matrix"));
    }
    return StepIntegrand::matrix(std::move(part), mark_dim, static_cast<int>(out_dim),
                                 std::move(cells));
  }
  throw std::invalid_argument("unknown integrand kind '" + kind + "'");
}

}  // namespace levy_bdg
