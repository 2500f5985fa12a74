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

#include "levy_bdg/prm.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "levy_bdg/parallel.hpp"

namespace levy_bdg {
namespace {

double parse_norm(const nlohmann::json& j) {
  if (!j.contains("norm")) return 2.0;
  const auto& v = j.at("norm");
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInfNorm;
    throw std::invalid_argument("norm must be a number >= 1 or \"inf\"");
  }
  return v.get<double>();
}

nlohmann::json norm_to_json(double s) {
  if (std::isinf(s)) return "inf";
  return s;
}

}  // namespace

MarkMeasure::MarkMeasure(int dim, std::vector<Atom> atoms, double norm_s, double eps)
    : dim_(dim), norm_s_(norm_s), eps_(eps), atoms_(std::move(atoms)) {
  if (dim_ < 1) throw std::invalid_argument("mark dimension must be >= 1");
  require_norm_exponent(norm_s_);
  if (!(eps_ >= 0.0)) throw std::invalid_argument("truncation radius must be >= 0");
  cumulative_.reserve(atoms_.size());
  std::vector<double> weights;
  for (const auto& a : atoms_) {
    if (a.z.size() != static_cast<std::size_t>(dim_)) {
      throw std::invalid_argument("atom dimension does not match measure dimension");
    }
    if (!std::isfinite(a.w) || !(a.w > 0.0)) {
      throw std::invalid_argument("atom weights must be finite and > 0");
    }
    if (eps_ > 0.0 && !(lp_norm(a.z, norm_s_) > eps_)) {
      throw std::invalid_argument("atom inside the truncation ball");
    }
    weights.push_back(a.w);
    mass_ += a.w;
    cumulative_.push_back(mass_);
  }
  mass_ = pairwise_sum(weights);
}

MarkMeasure MarkMeasure::dirac(Vec z, double w, double norm_s) {
  const int d = static_cast<int>(z.size());
  return MarkMeasure(d, {{std::move(z), w}}, norm_s);
}

std::size_t MarkMeasure::pick(double u) const {
  const double target = u * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  return std::min(static_cast<std::size_t>(it - cumulative_.begin()), atoms_.size() - 1);
}

MarkMeasure truncate(const MarkMeasure& nu, double eps, bool require_nonempty) {
  if (!(eps >= 0.0)) throw std::invalid_argument("truncation radius must be >= 0");
  std::vector<MarkMeasure::Atom> kept;
  for (const auto& a : nu.atoms()) {
    if (eps == 0.0 || lp_norm(a.z, nu.norm_exponent()) > eps) kept.push_back(a);
  }
  if (require_nonempty && kept.empty()) {
    throw std::invalid_argument("truncation at eps = " + std::to_string(eps) +
                                " removes all mass");
  }
  return MarkMeasure(nu.dim(), std::move(kept), nu.norm_exponent(), std::max(eps, nu.eps()));
}

MarkMeasure geometric_measure(const GeometricFamily& g, double norm_s) {
  if (g.count < 0 || g.dim < 1 || !(g.scale > 0.0) || !(g.ratio > 0.0) ||
      !(g.weight > 0.0) || !(g.growth > 0.0)) {
    throw std::invalid_argument("geometric family needs positive scale, ratio, weight, growth");
  }
  std::vector<MarkMeasure::Atom> atoms;
  for (int k = 0; k < g.count; ++k) {
    Vec z(static_cast<std::size_t>(g.dim), 0.0);
    z[0] = g.scale * std::pow(g.ratio, k);
    atoms.push_back({std::move(z), g.weight * std::pow(g.growth, k)});
  }
  return MarkMeasure(g.dim, std::move(atoms), norm_s);
}

PrmPath sample_prm(const MarkMeasure& nu, double horizon, Stream& stream) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("horizon must be positive and finite");
  }
  if (!std::isfinite(nu.total_mass())) {
    throw std::invalid_argument("intensity must be finite; truncate first");
  }
  PrmPath path;
  path.horizon = horizon;
  path.dim = nu.dim();
  path.stream_state = stream.state();
  if (nu.empty()) return path;
  std::poisson_distribution<long> count_dist(nu.total_mass() * horizon);
  const auto count = static_cast<std::size_t>(count_dist(stream));
  path.times.resize(count);
  // 1 - u lies in (0, 1], so every time is in (0, T].
  for (double& t : path.times) t = horizon * (1.0 - stream.uniform01());
  std::sort(path.times.begin(), path.times.end());
  for (std::size_t i = 1; i < count; ++i) {
    if (path.times[i] <= path.times[i - 1]) {
      path.times[i] = std::nextafter(path.times[i - 1], horizon + 1.0);
    }
  }
  path.marks.reserve(count * static_cast<std::size_t>(nu.dim()));
  for (std::size_t i = 0; i < count; ++i) {
    const auto& z = nu.atoms()[nu.pick(stream.uniform01())].z;
    path.marks.insert(path.marks.end(), z.begin(), z.end());
  }
  return path;
}

Vec CadlagPath::value(double t) const {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
  const std::size_t k = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
  Vec out(static_cast<std::size_t>(dim));
  const double dt = std::max(0.0, t - breaks[k]);
  for (int j = 0; j < dim; ++j) out[j] = values[k * dim + j] + slopes[k * dim + j] * dt;
  return out;
}

Vec CadlagPath::left_limit(double t) const {
  const auto it = std::lower_bound(breaks.begin(), breaks.end(), t);
  if (it == breaks.begin()) return value(t);
  const std::size_t k = static_cast<std::size_t>(it - breaks.begin()) - 1;
  Vec out(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    out[j] = values[k * dim + j] + slopes[k * dim + j] * (t - breaks[k]);
  }
  return out;
}

std::vector<Jump> CadlagPath::jumps() const {
  std::vector<Jump> out;
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    const auto d = std::span<const double>(jump).subspan(k * dim, dim);
    if (std::any_of(d.begin(), d.end(), [](double x) { return x != 0.0; })) {
      out.push_back({breaks[k], Vec(d.begin(), d.end())});
    }
  }
  return out;
}

LevyPath levy_path(const LevyTriplet& triplet, double horizon, Stream& stream) {
  const int d = triplet.measure.dim();
  if (triplet.drift.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("drift dimension does not match jump measure");
  }
  LevyPath out{sample_prm(triplet.measure, horizon, stream), {}};
  auto& path = out.path;
  path.horizon = horizon;
  path.dim = d;
  const std::size_t n = out.prm.count();
  path.breaks.reserve(n + 1);
  path.breaks.push_back(0.0);
  path.breaks.insert(path.breaks.end(), out.prm.times.begin(), out.prm.times.end());
  path.values.assign((n + 1) * d, 0.0);
  path.jump.assign((n + 1) * d, 0.0);
  path.slopes.resize((n + 1) * d);
  for (std::size_t k = 0; k <= n; ++k) {
    for (int j = 0; j < d; ++j) path.slopes[k * d + j] = triplet.drift[j];
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const double dt = path.breaks[k] - path.breaks[k - 1];
    const auto z = out.prm.mark(k - 1);
    for (int j = 0; j < d; ++j) {
      path.jump[k * d + j] = z[j];
      path.values[k * d + j] =
          path.values[(k - 1) * d + j] + triplet.drift[j] * dt + z[j];
    }
  }
  return out;
}

std::complex<double> levy_cf(const LevyTriplet& triplet, double t, std::span<const double> theta) {
  using namespace std::complex_literals;
  std::complex<double> exponent = 1i * dot(triplet.drift, theta);
  for (const auto& a : triplet.measure.atoms()) {
    exponent += a.w * (std::exp(1i * dot(theta, a.z)) - 1.0);
  }
  return std::exp(t * exponent);
}

CfReport cf_check(const LevyTriplet& triplet, double t, std::span<const Vec> thetas,
                  std::size_t paths, std::uint64_t seed, unsigned threads) {
  if (paths < 2) throw std::invalid_argument("cf check needs at least 2 paths");
  const auto d = static_cast<std::size_t>(triplet.measure.dim());
  for (const auto& th : thetas) {
    if (th.size() != d) throw std::invalid_argument("theta dimension mismatch");
  }
  std::vector<double> endpoint(paths * d);
  parallel_for(paths, threads, [&](std::size_t i) {
    Stream s = Stream::for_path(seed, i, 0);
    const Vec end = levy_path(triplet, t, s).path.value(t);
    std::copy(end.begin(), end.end(), endpoint.begin() + static_cast<std::ptrdiff_t>(i * d));
  });
  CfReport r;
  r.threshold = 4.0 / std::sqrt(static_cast<double>(paths));
  std::vector<double> re(paths);
  std::vector<double> im(paths);
  for (const auto& th : thetas) {
    for (std::size_t i = 0; i < paths; ++i) {
      const double phase = dot(th, std::span<const double>(endpoint).subspan(i * d, d));
      re[i] = std::cos(phase);
      im[i] = std::sin(phase);
    }
    const Estimate er = mean_and_se(re);
    const Estimate ei = mean_and_se(im);
    CfPoint pt{th, {er.mean, ei.mean}, levy_cf(triplet, t, th), 0.0,
               std::hypot(er.se, ei.se)};
    pt.error = std::abs(pt.empirical - pt.analytic);
    r.max_error = std::max(r.max_error, pt.error);
    r.points.push_back(std::move(pt));
  }
  r.pass = r.max_error <= r.threshold;
  return r;
}

double poisson_central_moment(double lambda, double p) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
  if (!(p >= 1.0) || !(p <= 2.0)) throw std::invalid_argument("p must lie in [1, 2]");
  constexpr double kTail = 1e-12;
  const double log_lambda = std::log(lambda);
  std::vector<double> terms;
  for (long k = 0;; ++k) {
    const double kd = static_cast<double>(k);
    const double pmf = std::exp(kd * log_lambda - lambda - std::lgamma(kd + 1.0));
    const double term = pmf * std::pow(std::abs(kd - lambda), p);
    terms.push_back(term);
    if (kd > lambda + 1.0) {
      // t_{j+1} / t_j = lambda / (j + 1) * (1 + 1 / (j - lambda))^p decreases
      // in j > lambda, so the tail is dominated by a geometric series.
      const double rho = lambda / (kd + 1.0) * std::pow(1.0 + 1.0 / (kd - lambda), p);
      if (rho < 1.0 && term * rho / (1.0 - rho) < kTail) break;
    }
  }
  return pairwise_sum(terms);
}

MarkMeasure measure_from_json(const nlohmann::json& j) {
  const double norm_s = parse_norm(j);
  const double eps = j.value("eps", 0.0);
  MarkMeasure base = [&] {
    if (j.contains("geometric")) {
      const auto& g = j.at("geometric");
      GeometricFamily fam;
      fam.scale = g.value("scale", fam.scale);
      fam.ratio = g.value("ratio", fam.ratio);
      fam.weight = g.value("weight", fam.weight);
      fam.growth = g.value("growth", fam.growth);
      fam.count = g.value("count", fam.count);
      fam.dim = g.value("dim", fam.dim);
      return geometric_measure(fam, norm_s);
    }
    std::vector<MarkMeasure::Atom> atoms;
    for (const auto& a : j.at("atoms")) {
      atoms.push_back({a.at("z").get<Vec>(), a.at("w").get<double>()});
    }
    const int dim = j.contains("dim") ? j.at("dim").get<int>()
                    : atoms.empty()   ? 1
                                      : static_cast<int>(atoms.front().z.size());
    return MarkMeasure(dim, std::move(atoms), norm_s);
  }();
  return eps > 0.0 ? truncate(base, eps) : base;
}

nlohmann::json measure_to_json(const MarkMeasure& nu) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : nu.atoms()) atoms.push_back({{"z", a.z}, {"w", a.w}});
  return {{"atoms", atoms},
          {"dim", nu.dim()},
          {"eps", nu.eps()},
          {"norm", norm_to_json(nu.norm_exponent())}};
}

void write_path_csv(std::ostream& out, const PrmPath& path) {
  out << 't';
  for (int j = 1; j <= path.dim; ++j) out << ",z_" << j;
  out << '\n';
  for (std::size_t i = 0; i < path.count(); ++i) {
    out << fmt::format("{}", path.times[i]);
    for (double z : path.mark(i)) out << ',' << fmt::format("{}", z);
    out << '\n';
  }
}

}  // namespace levy_bdg
