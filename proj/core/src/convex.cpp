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

#include "levy_bdg/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace levy_bdg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Candidate points for a supremum over (0, t_max].
std::vector<double> sup_points(const ConvexFunction& f, double t_max,
                               SupGrid grid, double breakpoint_scale = 1.0) {
  require(t_max > 0.0, "t_max must be positive");
  const double hi = std::min(t_max, f.domain_max());
  std::vector<double> pts;
  if (!(hi > 0.0)) return pts;
  const std::size_t count =
      static_cast<std::size_t>(grid.decades) * grid.points_per_decade + 1;
  pts = geometric_grid(hi * std::pow(10.0, -grid.decades), hi, count);
  for (double b : f.breakpoints()) {
    if (b > 0.0 && b <= hi) pts.push_back(b);
    const double scaled = b * breakpoint_scale;
    if (scaled > 0.0 && scaled <= hi) pts.push_back(scaled);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

ConvexFunction ConvexFunction::power(double p, double scale) {
  require(p >= 1.0, "power Phi requires p >= 1 (got " + std::to_string(p) + ")");
  require(scale > 0.0 && std::isfinite(scale), "power Phi requires a positive scale");
  ConvexFunction f;
  f.kind_ = Kind::power;
  f.exponent_ = p;
  f.scale_ = scale;
  return f;
}

ConvexFunction ConvexFunction::table(std::vector<double> t, std::vector<double> phi) {
  require(t.size() >= 2, "table needs at least two breakpoints");
  for (std::size_t k = 1; k < t.size(); ++k) {
    require(t[k] > t[k - 1], "table breakpoints must be strictly increasing");
  }
  return table_with_tail(std::move(t), std::move(phi), Tail::linear);
}

ConvexFunction ConvexFunction::table_with_tail(std::vector<double> t,
                                               std::vector<double> phi, Tail tail) {
  require(!t.empty() && t.size() == phi.size(),
          "table needs matching, nonempty t and phi arrays");
  require(t.front() == 0.0, "table must start at t = 0");
  require(phi.front() == 0.0, "table density must satisfy phi(0) = 0");
  for (std::size_t k = 0; k < t.size(); ++k) {
    require(std::isfinite(t[k]) && std::isfinite(phi[k]), "table values must be finite");
    if (k == 0) continue;
    require(t[k] >= t[k - 1], "table breakpoints must be nondecreasing");
    require(phi[k] >= phi[k - 1], "table density must be nondecreasing");
  }
  ConvexFunction f;
  f.kind_ = Kind::table;
  f.tail_ = tail;
  // Drop repeated identical points.
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!f.t_.empty() && f.t_.back() == t[k] && f.phi_.back() == phi[k]) continue;
    f.t_.push_back(t[k]);
    f.phi_.push_back(phi[k]);
  }
  f.cumulative_.assign(f.t_.size(), 0.0);
  for (std::size_t k = 1; k < f.t_.size(); ++k) {
    f.cumulative_[k] = f.cumulative_[k - 1] +
                       0.5 * (f.t_[k] - f.t_[k - 1]) * (f.phi_[k - 1] + f.phi_[k]);
  }
  return f;
}

double ConvexFunction::domain_max() const noexcept {
  if (kind_ == Kind::table && tail_ == Tail::infinite) return t_.back();
  return kInf;
}

std::size_t ConvexFunction::segment_end(double t) const {
  return static_cast<std::size_t>(std::lower_bound(t_.begin(), t_.end(), t) - t_.begin());
}

double ConvexFunction::value(double t) const {
  if (!(t > 0.0)) return 0.0;
  if (kind_ == Kind::power) return scale_ * std::pow(t, exponent_);
  if (t > t_.back()) {
    if (tail_ == Tail::infinite) return kInf;
    return cumulative_.back() + phi_.back() * (t - t_.back());
  }
  const std::size_t k = segment_end(t);
  if (t_[k] == t) return cumulative_[k];
  const double a = t_[k - 1];
  const double b = t_[k];
  const double va = phi_[k - 1];
  const double vt = va + (phi_[k] - va) * (t - a) / (b - a);
  return cumulative_[k - 1] + 0.5 * (t - a) * (va + vt);
}

double ConvexFunction::density(double t) const {
  if (!(t > 0.0)) return 0.0;
  if (kind_ == Kind::power) {
    return scale_ * exponent_ * std::pow(t, exponent_ - 1.0);
  }
  if (t > t_.back()) return tail_ == Tail::infinite ? kInf : phi_.back();
  const std::size_t k = segment_end(t);
  if (t_[k] == t) return phi_[k];
  const double a = t_[k - 1];
  return phi_[k - 1] + (phi_[k] - phi_[k - 1]) * (t - a) / (t_[k] - a);
}

double ConvexFunction::density_right(double t) const {
  if (t < 0.0) return 0.0;
  if (kind_ == Kind::power) {
    if (t == 0.0) return exponent_ == 1.0 ? scale_ : 0.0;
    return density(t);
  }
  if (t >= t_.back()) return tail_ == Tail::infinite ? kInf : phi_.back();
  const auto k = static_cast<std::size_t>(
      std::upper_bound(t_.begin(), t_.end(), t) - t_.begin());
  const double a = t_[k - 1];
  return phi_[k - 1] + (phi_[k] - phi_[k - 1]) * (t - a) / (t_[k] - a);
}

double ConvexFunction::t_dphi(double x) const {
  if (!(x > 0.0)) return 0.0;
  if (kind_ == Kind::power) {
    return scale_ * (exponent_ - 1.0) * std::pow(x, exponent_);
  }
  if (x > t_.back() && tail_ == Tail::infinite) return kInf;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t_.size() && t_[i] < x; ++i) {
    const double a = t_[i];
    const double b = t_[i + 1];
    if (a == b) {
      acc += a * (phi_[i + 1] - phi_[i]);  // jump atom at a < x
      continue;
    }
    const double slope = (phi_[i + 1] - phi_[i]) / (b - a);
    const double hi = std::min(b, x);
    acc += 0.5 * slope * (hi * hi - a * a);
  }
  return acc;
}

ConvexFunction ConvexFunction::inverse_density() const {
  if (kind_ == Kind::power) {
    const double p = exponent_;
    const double a = scale_;
    if (p == 1.0) {
      // phi = a on (0, inf): psi = 0 on [0, a], +inf beyond.
      return table_with_tail({0.0, a}, {0.0, 0.0}, Tail::infinite);
    }
    const double q = p / (p - 1.0);
    return power(q, std::pow(a * p, -1.0 / (p - 1.0)) / q);
  }
  // Reflect the graph of phi through the diagonal.
  return table_with_tail(phi_, t_, tail_ == Tail::linear ? Tail::infinite : Tail::linear);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  require(lo > 0.0 && hi >= lo, "geometric grid needs 0 < lo <= hi");
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = hi;
    return g;
  }
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  g.back() = hi;
  return g;
}

ConvexFunction power_phi(double p) { return ConvexFunction::power(p); }

double dilation_constant(const ConvexFunction& f, double factor, double t_max,
                         SupGrid grid) {
  require(factor > 0.0, "dilation factor must be positive");
  if (f.kind() == ConvexFunction::Kind::power) return std::pow(factor, f.exponent());
  double sup = 0.0;
  for (double lambda : sup_points(f, t_max, grid, 1.0 / factor)) {
    const double base = f.value(lambda);
    const double scaled = f.value(factor * lambda);
    if (base == 0.0) {
      if (scaled > 0.0) return kInf;
      continue;
    }
    sup = std::max(sup, scaled / base);
  }
  return sup;
}

double growth_constant(const ConvexFunction& f, double t_max, SupGrid grid) {
  return dilation_constant(f, 2.0, t_max, grid);
}

double c_star(const ConvexFunction& f, double t_max, SupGrid grid) {
  require(t_max > 0.0, "t_max must be positive");
  if (f.kind() == ConvexFunction::Kind::power) return f.exponent();
  double sup = 0.0;
  for (double u : sup_points(f, t_max, grid)) {
    const double big = f.value(u);
    if (!(big > 0.0)) {
      throw std::domain_error("c* undefined: Phi vanishes at u = " + std::to_string(u) +
                              " > 0");
    }
    sup = std::max(sup, u * f.density(u) / big);
    sup = std::max(sup, u * f.density_right(u) / big);
  }
  return sup;
}

ConjugatePair conjugate(const ConvexFunction& f, SupGrid grid) {
  ConjugatePair pair{f, f.inverse_density(), std::nullopt, std::nullopt};
  auto range_of = [](const ConvexFunction& g) {
    if (g.kind() == ConvexFunction::Kind::power) return 1.0;
    const double top = g.breakpoints().back();
    return top > 0.0 ? top : 1.0;
  };
  try {
    pair.c_star_primal = c_star(pair.primal, range_of(pair.primal), grid);
  } catch (const std::domain_error&) {
  }
  try {
    pair.c_star_dual = c_star(pair.dual, range_of(pair.dual), grid);
  } catch (const std::domain_error&) {
  }
  return pair;
}

IdentityReport check_identities(const ConjugatePair& pair, std::span<const double> grid) {
  const ConvexFunction& big_phi = pair.primal;
  const ConvexFunction& big_psi = pair.dual;
  IdentityReport r;
  auto positive = [](double x) { return std::isfinite(x) ? std::max(0.0, x) : 0.0; };

  for (double u : grid) {
    if (u < 0.0) continue;
    const double d = big_phi.density(u);
    const double lhs = u * d;
    const double rhs = big_phi.value(u) + big_psi.value(d);
    if (std::isfinite(lhs) && std::isfinite(rhs)) {
      r.young_equality = std::max(r.young_equality, std::fabs(lhs - rhs));
    }
    for (double v : grid) {
      if (v < 0.0) continue;
      const double psi_v = big_psi.value(v);
      if (std::isfinite(psi_v)) {
        r.young_inequality =
            std::max(r.young_inequality, positive(u * v - big_phi.value(u) - psi_v));
      }
      r.max_subadditive = std::max(
          r.max_subadditive,
          positive(big_phi.value(std::max(u, v)) - big_phi.value(u) - big_phi.value(v)));
    }
    for (int i = 1; i <= 20; ++i) {
      const double a = 0.05 * i;
      r.scaling = std::max(r.scaling, positive(big_phi.value(a * u) - a * big_phi.value(u)));
      r.scaling_as_printed = std::max(
          r.scaling_as_printed, positive(big_phi.value(u * a) - a * big_phi.value(a)));
    }
    if (pair.c_star_primal) {
      const double c = *pair.c_star_primal;
      for (double rr : {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0}) {
        r.power_dilation = std::max(
            r.power_dilation,
            positive(big_phi.value(rr * u) - std::pow(rr, c) * big_phi.value(u)));
      }
      const double psi_t = big_psi.value(u);
      if (std::isfinite(psi_t)) {
        r.dual_bound = std::max(
            r.dual_bound, positive(psi_t - (c - 1.0) * big_phi.value(big_psi.density(u))));
      }
    }
  }
  return r;
}

ConvexFunction convex_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "power") {
    const double scale = j.contains("scale") ? j.at("scale").get<double>() : 1.0;
    return ConvexFunction::power(j.at("p").get<double>(), scale);
  }
  if (kind == "table") {
    auto t = j.at("t").get<std::vector<double>>();
    auto phi = j.at("phi").get<std::vector<double>>();
    if (!j.contains("tail")) return ConvexFunction::table(std::move(t), std::move(phi));
    const std::string tail = j.at("tail").get<std::string>();
    if (tail != "linear" && tail != "infinite") {
      throw std::invalid_argument("unknown table tail '" + tail + "'");
    }
    return ConvexFunction::table_with_tail(
        std::move(t), std::move(phi),
        tail == "infinite" ? ConvexFunction::Tail::infinite : ConvexFunction::Tail::linear);
  }
  throw std::invalid_argument("unknown convex function kind '" + kind + "'");
}

nlohmann::json convex_to_json(const ConvexFunction& f) {
  nlohmann::json j;
  if (f.kind() == ConvexFunction::Kind::power) {
    j["kind"] = "power";
    j["p"] = f.exponent();
    if (f.scale() != 1.0) j["scale"] = f.scale();
    return j;
  }
  j["kind"] = "table";
  j["t"] = std::vector<double>(f.breakpoints().begin(), f.breakpoints().end());
  j["phi"] = std::vector<double>(f.density_values().begin(), f.density_values().end());
  if (f.tail() == ConvexFunction::Tail::infinite) j["tail"] = "infinite";
  return j;
}

}  // namespace levy_bdg
