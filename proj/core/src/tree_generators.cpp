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

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "levy_bdg/filtration.hpp"
#include "levy_bdg/rng.hpp"

namespace levy_bdg {
namespace {

// Node values are filled in creation order; parents precede children.
struct Growth {
  TreeBuilder builder;
  std::vector<double> values;
  std::vector<int> frontier{0};
};

double parse_norm(const nlohmann::json& j) {
  if (!j.contains("norm")) return 2.0;
  const auto& v = j.at("norm");
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInfNorm;
    throw std::invalid_argument("norm must be a number >= 1 or \"inf\"");
  }
  return v.get<double>();
}

}  // namespace

AdaptedProcess binary_walk(int depth, double step) {
  if (depth < 0) throw std::invalid_argument("walk depth must be >= 0");
  Growth g;
  g.values.push_back(0.0);
  for (int k = 0; k < depth; ++k) {
    std::vector<int> next;
    for (int parent : g.frontier) {
      for (double sign : {1.0, -1.0}) {
        next.push_back(g.builder.add_child(parent, 0.5));
        g.values.push_back(g.values[static_cast<std::size_t>(parent)] + sign * step);
      }
    }
    g.frontier = std::move(next);
  }
  return AdaptedProcess(g.builder.build(), 1, std::move(g.values));
}

AdaptedProcess random_martingale(const RandomTreeOptions& opts) {
  if (opts.depth < 0 || opts.max_branching < 1 || opts.dim < 1) {
    throw std::invalid_argument("random tree needs depth >= 0, branching >= 1, dim >= 1");
  }
  Stream rng = Stream::for_path(opts.seed, 0, 0x7472656555ULL);
  const auto d = static_cast<std::size_t>(opts.dim);
  Growth g;
  for (std::size_t j = 0; j < d; ++j) {
    g.values.push_back(opts.zero_start ? 0.0 : opts.scale * (2.0 * rng.uniform01() - 1.0));
  }
  for (int k = 0; k < opts.depth; ++k) {
    std::vector<int> next;
    for (int parent : g.frontier) {
      const int branches =
          1 + static_cast<int>(rng.uniform01() * static_cast<double>(opts.max_branching));
      std::vector<double> w(static_cast<std::size_t>(branches));
      double total = 0.0;
      for (double& x : w) total += (x = 0.25 + rng.uniform01());
      for (double& x : w) x /= total;
      std::vector<double> raw(w.size() * d);
      for (double& x : raw) x = branches == 1 ? 0.0 : opts.scale * (2.0 * rng.uniform01() - 1.0);
      Vec mean(d, 0.0);
      for (std::size_t b = 0; b < w.size(); ++b) {
        for (std::size_t j = 0; j < d; ++j) mean[j] += w[b] * raw[b * d + j];
      }
      for (std::size_t b = 0; b < w.size(); ++b) {
        const int child = g.builder.add_child(parent, w[b]);
        next.push_back(child);
        for (std::size_t j = 0; j < d; ++j) {
          g.values.push_back(g.values[static_cast<std::size_t>(parent) * d + j] +
                             raw[b * d + j] - mean[j]);
        }
      }
    }
    g.frontier = std::move(next);
  }
  return AdaptedProcess(g.builder.build(), opts.dim, std::move(g.values), opts.norm_s);
}

AdaptedProcess level_martingale(const Vec& initial, std::span<const LevelSpec> levels,
                                double norm_s) {
  const std::size_t d = initial.size();
  if (d == 0) throw std::invalid_argument("initial value must be nonempty");
  Growth g;
  g.values = initial;
  for (const auto& level : levels) {
    if (level.probs.empty() || level.probs.size() != level.increments.size()) {
      throw std::invalid_argument("each level needs matching probs and increments");
    }
    for (const auto& inc : level.increments) {
      if (inc.size() != d) throw std::invalid_argument("increment dimension mismatch");
    }
    std::vector<int> next;
    for (int parent : g.frontier) {
      for (std::size_t b = 0; b < level.probs.size(); ++b) {
        next.push_back(g.builder.add_child(parent, level.probs[b]));
        for (std::size_t j = 0; j < d; ++j) {
          g.values.push_back(g.values[static_cast<std::size_t>(parent) * d + j] +
                             level.increments[b][j]);
        }
      }
    }
    g.frontier = std::move(next);
  }
  return AdaptedProcess(g.builder.build(), static_cast<int>(d), std::move(g.values), norm_s);
}

AdaptedProcess norm_process(const AdaptedProcess& m) {
  const auto& tree = m.tree();
  std::vector<double> values(tree.size());
  const auto start = m.value(0);
  Vec diff(static_cast<std::size_t>(m.dim()));
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const auto v = m.value(static_cast<int>(id));
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = v[j] - start[j];
    values[id] = lp_norm(diff, m.norm_exponent());
  }
  return AdaptedProcess(m.tree_ptr(), 1, std::move(values));
}

AdaptedProcess tree_from_json(const nlohmann::json& j) {
  if (j.contains("generator")) {
    const std::string gen = j.at("generator").get<std::string>();
    if (gen == "binary_walk") {
      return binary_walk(j.at("depth").get<int>(), j.value("step", 1.0));
    }
    if (gen == "random_tree") {
      RandomTreeOptions o;
      o.depth = j.value("depth", o.depth);
      o.max_branching = j.value("max_branching", o.max_branching);
      o.dim = j.value("dim", o.dim);
      o.norm_s = parse_norm(j);
      o.scale = j.value("scale", o.scale);
      o.zero_start = j.value("zero_start", o.zero_start);
      o.seed = j.value("seed", o.seed);
      return random_martingale(o);
    }
    throw std::invalid_argument("unknown tree generator '" + gen + "'");
  }
  std::vector<LevelSpec> levels;
  for (const auto& l : j.at("levels")) {
    levels.push_back({l.at("probs").get<std::vector<double>>(),
                      l.at("increments").get<std::vector<Vec>>()});
  }
  const Vec initial = j.contains("initial") ? j.at("initial").get<Vec>() : Vec{0.0};
  return level_martingale(initial, levels, parse_norm(j));
}

}  // namespace levy_bdg
