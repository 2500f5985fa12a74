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

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "levy_bdg/common.hpp"

namespace levy_bdg {

/// Finite filtered probability space as a rooted tree. The nodes at depth k
/// are the atoms of F_k; leaves (all at the same depth N) are the outcomes.
class FiltrationTree {
 public:
  static constexpr std::size_t kMaxAtoms = 100000;

  struct Node {
    int parent = -1;
    int depth = 0;
    int level_index = 0;  // position within its level
    double prob = 1.0;    // unconditional probability of the atom
    std::vector<int> children;
  };

  std::size_t size() const noexcept { return nodes_.size(); }
  int depth() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::span<const int> level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
  std::span<const int> leaves() const { return levels_.back(); }

  /// Ancestor of `id` at depth k <= depth(id).
  int ancestor(int id, int k) const;

  /// Conditional probability P(child | parent).
  double conditional(int child) const;

 private:
  friend class TreeBuilder;
  std::vector<Node> nodes_;
  std::vector<std::vector<int>> levels_;
};

/// Grows a FiltrationTree node by node. build() validates that conditional
/// probabilities of every child set sum to 1 (within 1e-12), that all leaves
/// sit at the same depth, and that there are at most kMaxAtoms leaves.
class TreeBuilder {
 public:
  TreeBuilder();
  int root() const noexcept { return 0; }
  /// Adds a child with conditional probability `cond_prob` in (0, 1].
  int add_child(int parent, double cond_prob);
  std::shared_ptr<const FiltrationTree> build();

 private:
  struct Pending {
    int parent;
    double cond;
  };
  std::vector<Pending> pending_;
};

/// Values at the atoms of a single level (d components per atom).
struct LevelField {
  int depth = 0;
  int dim = 1;
  std::vector<double> values;  // level_size * dim

  std::span<const double> at(std::size_t i) const {
    return std::span<const double>(values).subspan(i * dim, dim);
  }
};

/// An adapted R^d-valued process: one value per node. Norms use l_s.
class AdaptedProcess {
 public:
  AdaptedProcess(std::shared_ptr<const FiltrationTree> tree, int dim,
                 double norm_s = 2.0);
  AdaptedProcess(std::shared_ptr<const FiltrationTree> tree, int dim,
                 std::vector<double> values, double norm_s = 2.0);

  const FiltrationTree& tree() const noexcept { return *tree_; }
  const std::shared_ptr<const FiltrationTree>& tree_ptr() const noexcept { return tree_; }
  int dim() const noexcept { return dim_; }
  double norm_exponent() const noexcept { return norm_s_; }
  std::span<const double> value(int node) const;
  std::span<double> value(int node);
  double norm(int node) const;
  std::span<const double> raw() const noexcept { return values_; }

  LevelField level_field(int k) const;

 private:
  std::shared_ptr<const FiltrationTree> tree_;
  int dim_;
  double norm_s_;
  std::vector<double> values_;
};

/// E[X | F_k] for X given at depth j >= k, by probability-weighted averaging
/// over the descendants of each depth-k atom. Throws std::out_of_range for
/// invalid depths.
LevelField conditional_expectation(const FiltrationTree& tree, const LevelField& x, int k);

/// |E[M_{k+1} | F_k] - M_k|_inf <= tol at every non-leaf node.
bool is_martingale(const AdaptedProcess& m, double tol = 1e-12);

/// Per-node martingale statistics, M_{-1} = 0.
struct MartingaleStats {
  int dim = 1;
  std::vector<double> difference;   // m_n, size nodes * dim
  std::vector<double> diff_norm;    // |m_n|
  std::vector<double> max_value;    // M*_n = max_{k<=n} |M_k|
  std::vector<double> max_diff;     // m*_n = max_{k<=n} |m_k|
  std::vector<double> p_variation;  // S_{n,p}
  std::vector<double> cond_variation;  // s_{n,p}, previsible
};

MartingaleStats stats(const AdaptedProcess& m, double p);

/// Davis decomposition M = G + H (k = 0 included with m*_{-1} = 0).
struct DavisDecomposition {
  AdaptedProcess good;  // G
  AdaptedProcess bad;   // H
  std::vector<double> g;  // g_k per node
  std::vector<double> y;  // m_k 1_{A_k}
  std::vector<double> z;  // m_k 1_{A_k^c}
};

/// Throws std::invalid_argument if m is not a martingale.
DavisDecomposition davis_decompose(const AdaptedProcess& m, double tol = 1e-12);

/// Maximum violations of the Davis identities on every atom.
struct DavisCheck {
  double sum_error = 0.0;         // max |G + H - M|
  double good_martingale = 0.0;   // max |E[g_k|F_{k-1}]|
  double bad_martingale = 0.0;    // max |E[h_k|F_{k-1}]|
  double increment_bound = 0.0;   // max (|g_k| - 4 m*_{k-1})+
  double jump_sum_bound = 0.0;    // max (sum |z_k| - 2 m*_N)+
  double worst() const;
};

DavisCheck check_davis(const AdaptedProcess& m, const DavisDecomposition& dec);

/// E|M_N|^2 - E sum_k |m_k|^2 (zero for Hilbert-valued martingales).
double type2_identity_gap(const AdaptedProcess& m);

/// Expectation over leaves of a per-leaf value.
double expect_leaves(const FiltrationTree& tree, std::span<const double> per_node);

// ---------------------------------------------------------------------------
// Generators

/// Fair +-step walk from 0, depth levels, real valued.
AdaptedProcess binary_walk(int depth, double step = 1.0);

struct RandomTreeOptions {
  int depth = 4;
  int max_branching = 3;
  int dim = 1;
  double norm_s = 2.0;
  double scale = 1.0;
  bool zero_start = true;
  std::uint64_t seed = 1;
};

/// Random tree with random conditional probabilities and a random martingale
/// (increments re-centred at every node so E[m_{k+1} | F_k] = 0 exactly up to
/// rounding).
AdaptedProcess random_martingale(const RandomTreeOptions& opts);

/// Homogeneous tree: every level uses the same child probabilities and
/// additive increments.
struct LevelSpec {
  std::vector<double> probs;
  std::vector<Vec> increments;
};
AdaptedProcess level_martingale(const Vec& initial, std::span<const LevelSpec> levels,
                                double norm_s = 2.0);

/// X_n = |M_n - M_0|_s: nonnegative submartingale with X_0 = 0.
AdaptedProcess norm_process(const AdaptedProcess& m);

/// Tree spec from config: {"generator":"binary_walk",...},
/// {"generator":"random_tree",...} or {"levels":[...],"initial":[...]}.
AdaptedProcess tree_from_json(const nlohmann::json& j);

}  // namespace levy_bdg
