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

#include "levy_bdg/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace levy_bdg {

int FiltrationTree::ancestor(int id, int k) const {
  int cur = id;
  while (node(cur).depth > k) cur = node(cur).parent;
  if (node(cur).depth != k) throw std::out_of_range("ancestor depth out of range");
  return cur;
}

double FiltrationTree::conditional(int child) const {
  const Node& c = node(child);
  if (c.parent < 0) return 1.0;
  return c.prob / node(c.parent).prob;
}

TreeBuilder::TreeBuilder() { pending_.push_back({-1, 1.0}); }

int TreeBuilder::add_child(int parent, double cond_prob) {
  if (parent < 0 || static_cast<std::size_t>(parent) >= pending_.size()) {
    throw std::out_of_range("unknown parent node " + std::to_string(parent));
  }
  if (!(cond_prob > 0.0 && cond_prob <= 1.0)) {
    throw std::invalid_argument("conditional probability must lie in (0, 1]");
  }
  pending_.push_back({parent, cond_prob});
  return static_cast<int>(pending_.size()) - 1;
}

std::shared_ptr<const FiltrationTree> TreeBuilder::build() {
  auto tree = std::make_shared<FiltrationTree>();
  auto& nodes = tree->nodes_;
  nodes.resize(pending_.size());
  std::vector<double> cond_sum(pending_.size(), 0.0);
  for (std::size_t i = 1; i < pending_.size(); ++i) {
    const auto parent = static_cast<std::size_t>(pending_[i].parent);
    nodes[i].parent = pending_[i].parent;
    nodes[i].depth = nodes[parent].depth + 1;
    nodes[i].prob = nodes[parent].prob * pending_[i].cond;
    nodes[parent].children.push_back(static_cast<int>(i));
    cond_sum[parent] += pending_[i].cond;
  }
  int depth = 0;
  for (const auto& n : nodes) depth = std::max(depth, n.depth);
  tree->levels_.assign(static_cast<std::size_t>(depth) + 1, {});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto& level = tree->levels_[static_cast<std::size_t>(nodes[i].depth)];
    nodes[i].level_index = static_cast<int>(level.size());
    level.push_back(static_cast<int>(i));
    if (nodes[i].children.empty()) {
      if (nodes[i].depth != depth) {
        throw std::invalid_argument("all leaves of a filtration tree must share one depth");
      }
    } else if (std::fabs(cond_sum[i] - 1.0) > 1e-12) {
      throw std::invalid_argument("conditional probabilities at node " + std::to_string(i) +
                                  " sum to " + std::to_string(cond_sum[i]));
    }
  }
  if (tree->levels_.back().size() > FiltrationTree::kMaxAtoms) {
    throw std::invalid_argument("filtration tree exceeds the atom limit");
  }
  return tree;
}

AdaptedProcess::AdaptedProcess(std::shared_ptr<const FiltrationTree> tree, int dim,
                               double norm_s)
    : tree_(std::move(tree)), dim_(dim), norm_s_(norm_s) {
  if (!tree_) throw std::invalid_argument("adapted process needs a tree");
  if (dim_ < 1) throw std::invalid_argument("dimension must be >= 1");
  require_norm_exponent(norm_s_);
  values_.assign(tree_->size() * static_cast<std::size_t>(dim_), 0.0);
}

AdaptedProcess::AdaptedProcess(std::shared_ptr<const FiltrationTree> tree, int dim,
                               std::vector<double> values, double norm_s)
    : AdaptedProcess(std::move(tree), dim, norm_s) {
  if (values.size() != values_.size()) {
    throw std::invalid_argument("adapted process needs one value per node");
  }
  values_ = std::move(values);
}

std::span<const double> AdaptedProcess::value(int node) const {
  return std::span<const double>(values_).subspan(static_cast<std::size_t>(node) * dim_, dim_);
}

std::span<double> AdaptedProcess::value(int node) {
  return std::span<double>(values_).subspan(static_cast<std::size_t>(node) * dim_, dim_);
}

double AdaptedProcess::norm(int node) const { return lp_norm(value(node), norm_s_); }

LevelField AdaptedProcess::level_field(int k) const {
  LevelField f;
  f.depth = k;
  f.dim = dim_;
  for (int id : tree_->level(k)) {
    const auto v = value(id);
    f.values.insert(f.values.end(), v.begin(), v.end());
  }
  return f;
}

LevelField conditional_expectation(const FiltrationTree& tree, const LevelField& x, int k) {
  if (x.depth < 0 || x.depth > tree.depth() || k < 0 || k > x.depth) {
    throw std::out_of_range("conditional expectation needs 0 <= k <= j <= N");
  }
  const auto source = tree.level(x.depth);
  const auto target = tree.level(k);
  if (x.values.size() != source.size() * static_cast<std::size_t>(x.dim)) {
    throw std::invalid_argument("level field size does not match its level");
  }
  LevelField out;
  out.depth = k;
  out.dim = x.dim;
  out.values.assign(target.size() * static_cast<std::size_t>(x.dim), 0.0);
  std::vector<double> mass(target.size(), 0.0);
  for (std::size_t i = 0; i < source.size(); ++i) {
    const int anc = tree.ancestor(source[i], k);
    const auto slot = static_cast<std::size_t>(tree.node(anc).level_index);
    const double w = tree.node(source[i]).prob;
    mass[slot] += w;
    for (int c = 0; c < x.dim; ++c) out.values[slot * x.dim + c] += w * x.values[i * x.dim + c];
  }
  for (std::size_t s = 0; s < target.size(); ++s) {
    for (int c = 0; c < x.dim; ++c) out.values[s * x.dim + c] /= mass[s];
  }
  return out;
}

bool is_martingale(const AdaptedProcess& m, double tol) {
  const auto& tree = m.tree();
  Vec acc(static_cast<std::size_t>(m.dim()));
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const auto& n = tree.node(static_cast<int>(id));
    if (n.children.empty()) continue;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int c : n.children) {
      const double w = tree.conditional(c);
      const auto v = m.value(c);
      for (int j = 0; j < m.dim(); ++j) acc[j] += w * v[j];
    }
    const auto here = m.value(static_cast<int>(id));
    for (int j = 0; j < m.dim(); ++j) {
      if (std::fabs(acc[j] - here[j]) > tol) return false;
    }
  }
  return true;
}

MartingaleStats stats(const AdaptedProcess& m, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("stats needs p >= 1");
  const auto& tree = m.tree();
  const std::size_t n = tree.size();
  const int d = m.dim();
  MartingaleStats s;
  s.dim = d;
  s.difference.assign(n * d, 0.0);
  s.diff_norm.assign(n, 0.0);
  s.max_value.assign(n, 0.0);
  s.max_diff.assign(n, 0.0);
  s.p_variation.assign(n, 0.0);
  s.cond_variation.assign(n, 0.0);
  std::vector<double> p_sum(n, 0.0);
  std::vector<double> cond_sum(n, 0.0);
  std::vector<double> diff_pow(n, 0.0);
  for (std::size_t id = 0; id < n; ++id) {
    const int parent = tree.node(static_cast<int>(id)).parent;
    const auto v = m.value(static_cast<int>(id));
    for (int j = 0; j < d; ++j) {
      const double prev = parent < 0 ? 0.0 : m.value(parent)[j];
      s.difference[id * d + j] = v[j] - prev;
    }
    s.diff_norm[id] = lp_norm(std::span<const double>(s.difference).subspan(id * d, d),
                              m.norm_exponent());
    diff_pow[id] = std::pow(s.diff_norm[id], p);
    const double norm_here = m.norm(static_cast<int>(id));
    if (parent < 0) {
      s.max_value[id] = norm_here;
      s.max_diff[id] = s.diff_norm[id];
      p_sum[id] = diff_pow[id];
    } else {
      const auto pp = static_cast<std::size_t>(parent);
      s.max_value[id] = std::max(s.max_value[pp], norm_here);
      s.max_diff[id] = std::max(s.max_diff[pp], s.diff_norm[id]);
      p_sum[id] = p_sum[pp] + diff_pow[id];
    }
    s.p_variation[id] = std::pow(p_sum[id], 1.0 / p);
  }
  // Conditional p-th moments of the next difference, stored on the parent.
  std::vector<double> next_moment(n, 0.0);
  for (std::size_t id = 1; id < n; ++id) {
    next_moment[static_cast<std::size_t>(tree.node(static_cast<int>(id)).parent)] +=
        tree.conditional(static_cast<int>(id)) * diff_pow[id];
  }
  for (std::size_t id = 0; id < n; ++id) {
    const int parent = tree.node(static_cast<int>(id)).parent;
    if (parent < 0) {
      cond_sum[id] = diff_pow[id];
    } else {
      const auto pp = static_cast<std::size_t>(parent);
      cond_sum[id] = cond_sum[pp] + next_moment[pp];
    }
    s.cond_variation[id] = std::pow(cond_sum[id], 1.0 / p);
  }
  return s;
}

DavisDecomposition davis_decompose(const AdaptedProcess& m, double tol) {
  if (!is_martingale(m, tol)) {
    throw std::invalid_argument("Davis decomposition requires a martingale");
  }
  const auto& tree = m.tree();
  const std::size_t n = tree.size();
  const int d = m.dim();
  const MartingaleStats st = stats(m, 2.0);
  DavisDecomposition dec{AdaptedProcess(m.tree_ptr(), d, m.norm_exponent()),
                         AdaptedProcess(m.tree_ptr(), d, m.norm_exponent()),
                         std::vector<double>(n * d, 0.0), std::vector<double>(n * d, 0.0),
                         std::vector<double>(n * d, 0.0)};
  for (std::size_t id = 0; id < n; ++id) {
    const int parent = tree.node(static_cast<int>(id)).parent;
    const double prev_max = parent < 0 ? 0.0 : st.max_diff[static_cast<std::size_t>(parent)];
    const bool small = st.diff_norm[id] <= 2.0 * prev_max;
    for (int j = 0; j < d; ++j) {
      const double mk = st.difference[id * d + j];
      dec.y[id * d + j] = small ? mk : 0.0;
      dec.z[id * d + j] = small ? 0.0 : mk;
    }
  }
  // E[y_k | F_{k-1}] stored on the parent; at the root F_{-1} is trivial.
  std::vector<double> y_mean(n * d, 0.0);
  for (std::size_t id = 1; id < n; ++id) {
    const auto pp = static_cast<std::size_t>(tree.node(static_cast<int>(id)).parent);
    const double w = tree.conditional(static_cast<int>(id));
    for (int j = 0; j < d; ++j) y_mean[pp * d + j] += w * dec.y[id * d + j];
  }
  for (std::size_t id = 0; id < n; ++id) {
    const int parent = tree.node(static_cast<int>(id)).parent;
    auto gv = dec.good.value(static_cast<int>(id));
    auto hv = dec.bad.value(static_cast<int>(id));
    for (int j = 0; j < d; ++j) {
      const double cond =
          parent < 0 ? dec.y[id * d + j] : y_mean[static_cast<std::size_t>(parent) * d + j];
      const double gk = dec.y[id * d + j] - cond;
      const double hk = dec.z[id * d + j] + cond;
      dec.g[id * d + j] = gk;
      gv[j] = (parent < 0 ? 0.0 : dec.good.value(parent)[j]) + gk;
      hv[j] = (parent < 0 ? 0.0 : dec.bad.value(parent)[j]) + hk;
    }
  }
  return dec;
}

double DavisCheck::worst() const {
  return std::max({sum_error, good_martingale, bad_martingale, increment_bound, jump_sum_bound});
}

DavisCheck check_davis(const AdaptedProcess& m, const DavisDecomposition& dec) {
  const auto& tree = m.tree();
  const std::size_t n = tree.size();
  const int d = m.dim();
  const double s = m.norm_exponent();
  const MartingaleStats st = stats(m, 2.0);
  DavisCheck c;
  std::vector<double> g_mean(n * d, 0.0);
  std::vector<double> h_mean(n * d, 0.0);
  std::vector<double> z_sum(n, 0.0);
  for (std::size_t id = 0; id < n; ++id) {
    const int node = static_cast<int>(id);
    const int parent = tree.node(node).parent;
    for (int j = 0; j < d; ++j) {
      c.sum_error = std::max(c.sum_error, std::fabs(dec.good.value(node)[j] +
                                                    dec.bad.value(node)[j] - m.value(node)[j]));
    }
    const auto gk = std::span<const double>(dec.g).subspan(id * d, d);
    const double prev_max = parent < 0 ? 0.0 : st.max_diff[static_cast<std::size_t>(parent)];
    c.increment_bound = std::max(c.increment_bound, lp_norm(gk, s) - 4.0 * prev_max);
    const double zk = lp_norm(std::span<const double>(dec.z).subspan(id * d, d), s);
    z_sum[id] = (parent < 0 ? 0.0 : z_sum[static_cast<std::size_t>(parent)]) + zk;
    if (parent >= 0) {
      const auto pp = static_cast<std::size_t>(parent);
      const double w = tree.conditional(node);
      for (int j = 0; j < d; ++j) {
        g_mean[pp * d + j] += w * gk[j];
        h_mean[pp * d + j] +=
            w * (dec.bad.value(node)[j] - dec.bad.value(parent)[j]);
      }
    }
  }
  for (std::size_t id = 0; id < n; ++id) {
    if (tree.node(static_cast<int>(id)).children.empty()) continue;
    for (int j = 0; j < d; ++j) {
      c.good_martingale = std::max(c.good_martingale, std::fabs(g_mean[id * d + j]));
      c.bad_martingale = std::max(c.bad_martingale, std::fabs(h_mean[id * d + j]));
    }
  }
  for (int leaf : tree.leaves()) {
    const auto l = static_cast<std::size_t>(leaf);
    c.jump_sum_bound = std::max(c.jump_sum_bound, z_sum[l] - 2.0 * st.max_diff[l]);
  }
  c.increment_bound = std::max(0.0, c.increment_bound);
  c.jump_sum_bound = std::max(0.0, c.jump_sum_bound);
  return c;
}

double expect_leaves(const FiltrationTree& tree, std::span<const double> per_node) {
  std::vector<double> terms;
  terms.reserve(tree.leaves().size());
  for (int leaf : tree.leaves()) {
    terms.push_back(tree.node(leaf).prob * per_node[static_cast<std::size_t>(leaf)]);
  }
  return pairwise_sum(terms);
}

double type2_identity_gap(const AdaptedProcess& m) {
  const auto& tree = m.tree();
  const std::size_t n = tree.size();
  const int d = m.dim();
  std::vector<double> end_sq(n, 0.0);
  std::vector<double> diff_sq(n, 0.0);
  for (std::size_t id = 0; id < n; ++id) {
    const int node = static_cast<int>(id);
    const int parent = tree.node(node).parent;
    double e = 0.0;
    double dd = 0.0;
    for (int j = 0; j < d; ++j) {
      const double v = m.value(node)[j];
      const double prev = parent < 0 ? 0.0 : m.value(parent)[j];
      e += v * v;
      dd += (v - prev) * (v - prev);
    }
    end_sq[id] = e;
    diff_sq[id] = dd + (parent < 0 ? 0.0 : diff_sq[static_cast<std::size_t>(parent)]);
  }
  return expect_leaves(tree, end_sq) - expect_leaves(tree, diff_sq);
}

}  // namespace levy_bdg
