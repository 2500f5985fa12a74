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

#include "levy_bdg/discrete_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace levy_bdg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStructureTol = 1e-12;

// lhs / base with 0/0 = 0 and x/0 = inf.
double ratio(double lhs, double base) {
  if (base > 0.0) return lhs / base;
  return lhs > 0.0 ? kInf : 0.0;
}

// C * base where an infinite constant times a zero base stays zero.
double scaled(double constant, double base) { return base == 0.0 ? 0.0 : constant * base; }

void require_scalar(const AdaptedProcess& x, const char* what) {
  if (x.dim() != 1) throw std::invalid_argument(std::string(what) + " must be real valued");
}

// Validates a nonnegative submartingale started at zero.
void require_submartingale_from_zero(const AdaptedProcess& x) {
  require_scalar(x, "submartingale");
  const auto& tree = x.tree();
  if (std::abs(x.value(0)[0]) > kStructureTol) {
    throw std::invalid_argument("submartingale must start at X_0 = 0");
  }
  std::vector<double> next_mean(tree.size(), 0.0);
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const double v = x.value(static_cast<int>(id))[0];
    if (v < -kStructureTol) {
      throw std::invalid_argument("submartingale must be nonnegative");
    }
    if (id > 0) {
      const auto parent = static_cast<std::size_t>(tree.node(static_cast<int>(id)).parent);
      next_mean[parent] += tree.conditional(static_cast<int>(id)) * v;
    }
  }
  for (std::size_t id = 0; id < tree.size(); ++id) {
    if (tree.node(static_cast<int>(id)).children.empty()) continue;
    if (next_mean[id] < x.value(static_cast<int>(id))[0] - kStructureTol) {
      throw std::invalid_argument("process is not a submartingale at node " +
                                  std::to_string(id));
    }
  }
}

// Running maximum of a real process along each branch.
std::vector<double> running_max(const AdaptedProcess& x) {
  const auto& tree = x.tree();
  std::vector<double> out(tree.size());
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const double v = x.value(static_cast<int>(id))[0];
    const int parent = tree.node(static_cast<int>(id)).parent;
    out[id] = parent < 0 ? v : std::max(out[static_cast<std::size_t>(parent)], v);
  }
  return out;
}

std::vector<double> phi_of(const ConvexFunction& f, std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [&](double t) { return f.value(t); });
  return out;
}

double largest(std::span<const double> v) {
  double top = 1.0;
  for (double x : v) top = std::max(top, x);
  return top;
}

}  // namespace

DiscreteReport doob_phi_check(const AdaptedProcess& x, const ConjugatePair& pair) {
  require_submartingale_from_zero(x);
  const auto& tree = x.tree();
  const auto& f = pair.primal;
  const std::vector<double> star = running_max(x);
  std::vector<double> last(tree.size());
  for (std::size_t id = 0; id < tree.size(); ++id) last[id] = x.value(static_cast<int>(id))[0];

  DiscreteReport r;
  r.lhs = expect_leaves(tree, phi_of(f, star));
  const double base = expect_leaves(tree, phi_of(f, last));
  r.base = base;
  r.min_constant = ratio(r.lhs, base);
  if (!pair.c_star_dual) {
    r.applicable = false;
    r.pass = true;
    r.constant = kInf;
    r.rhs = kInf;
    r.note = "C*_Psi undefined (conjugate vanishes on an interval)";
    return r;
  }
  r.constant = 4.0 * (*pair.c_star_dual - 1.0);
  r.rhs = scaled(r.constant, base);
  r.pass = r.lhs <= r.rhs + kExactTolerance;
  return r;
}

DiscreteReport doob_power_check(const AdaptedProcess& x, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("Doob power form needs p > 1");
  require_submartingale_from_zero(x);
  const auto& tree = x.tree();
  const std::vector<double> star = running_max(x);
  std::vector<double> sup_pow(tree.size());
  std::vector<double> last_pow(tree.size());
  for (std::size_t id = 0; id < tree.size(); ++id) {
    sup_pow[id] = std::pow(star[id], p);
    last_pow[id] = std::pow(std::max(0.0, x.value(static_cast<int>(id))[0]), p);
  }
  DiscreteReport r;
  const double q = p / (p - 1.0);
  r.constant = std::pow(q, p);
  r.lhs = expect_leaves(tree, sup_pow);
  const double base = expect_leaves(tree, last_pow);
  r.rhs = r.constant * base;
  r.base = base;
  r.min_constant = ratio(r.lhs, base);
  r.pass = r.lhs <= r.rhs + kExactTolerance && base <= r.lhs + kExactTolerance;
  return r;
}

GarsiaReport garsia_gap(const AdaptedProcess& x, const ConvexFunction& f) {
  require_submartingale_from_zero(x);
  const auto& tree = x.tree();
  const std::vector<double> star = running_max(x);
  std::vector<double> left(tree.size());
  std::vector<double> right(tree.size());
  for (std::size_t id = 0; id < tree.size(); ++id) {
    left[id] = f.t_dphi(star[id]);
    right[id] = x.value(static_cast<int>(id))[0] * f.density(star[id]);
  }
  GarsiaReport r;
  r.lhs = expect_leaves(tree, left);
  r.rhs = expect_leaves(tree, right);
  r.gap = r.rhs - r.lhs;
  r.pass = r.gap >= -kExactTolerance;
  return r;
}

DiscreteReport conditional_sum_check(const AdaptedProcess& z, const ConjugatePair& pair) {
  require_scalar(z, "conditional-sum input");
  const auto& tree = z.tree();
  const std::size_t n = tree.size();
  for (std::size_t id = 0; id < n; ++id) {
    if (z.value(static_cast<int>(id))[0] < 0.0) {
      throw std::invalid_argument("conditional-sum input must be nonnegative");
    }
  }
  // E[z_k | F_{k-1}] lives on the parent; the root's conditioning is trivial.
  std::vector<double> next_mean(n, 0.0);
  for (std::size_t id = 1; id < n; ++id) {
    const auto parent = static_cast<std::size_t>(tree.node(static_cast<int>(id)).parent);
    next_mean[parent] += tree.conditional(static_cast<int>(id)) * z.value(static_cast<int>(id))[0];
  }
  std::vector<double> cond_sum(n);
  std::vector<double> raw_sum(n);
  for (std::size_t id = 0; id < n; ++id) {
    const double v = z.value(static_cast<int>(id))[0];
    const int parent = tree.node(static_cast<int>(id)).parent;
    if (parent < 0) {
      cond_sum[id] = v;
      raw_sum[id] = v;
    } else {
      const auto pp = static_cast<std::size_t>(parent);
      cond_sum[id] = cond_sum[pp] + next_mean[pp];
      raw_sum[id] = raw_sum[pp] + v;
    }
  }
  const auto& f = pair.primal;
  DiscreteReport r;
  r.lhs = expect_leaves(tree, phi_of(f, cond_sum));
  const double base = expect_leaves(tree, phi_of(f, raw_sum));
  r.base = base;
  r.min_constant = ratio(r.lhs, base);
  if (!pair.c_star_primal) {
    r.applicable = false;
    r.pass = true;
    r.constant = kInf;
    r.rhs = kInf;
    r.note = "c*_Phi undefined";
    return r;
  }
  const double c = *pair.c_star_primal;
  r.constant = std::pow(c, 2.0 * c);
  r.rhs = scaled(r.constant, base);
  r.pass = r.lhs <= r.rhs + kExactTolerance;
  return r;
}

std::vector<JointAtom> joint_from_leaves(const FiltrationTree& tree, std::span<const double> x,
                                         std::span<const double> y) {
  if (x.size() != tree.size() || y.size() != tree.size()) {
    throw std::invalid_argument("joint law needs one value per node");
  }
  std::vector<JointAtom> out;
  for (int leaf : tree.leaves()) {
    const auto i = static_cast<std::size_t>(leaf);
    out.push_back({x[i], y[i], tree.node(leaf).prob});
  }
  return out;
}

GoodLambdaReport good_lambda_check(std::span<const JointAtom> joint, const ConvexFunction& f,
                                   double beta, double delta, std::optional<double> epsilon) {
  if (!(beta > 1.0)) throw std::invalid_argument("good-lambda needs beta > 1");
  if (!(delta > 0.0)) throw std::invalid_argument("good-lambda needs delta > 0");
  if (epsilon && !(*epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  std::vector<double> critical;
  double top = 1.0;
  for (const auto& a : joint) {
    if (a.x < 0.0 || a.y < 0.0 || a.prob < 0.0) {
      throw std::invalid_argument("good-lambda law must be nonnegative");
    }
    for (double c : {a.y / beta, a.x / delta, a.y}) {
      if (c > 0.0) critical.push_back(c);
    }
    top = std::max({top, a.x, a.y});
  }
  std::sort(critical.begin(), critical.end());
  critical.erase(std::unique(critical.begin(), critical.end()), critical.end());

  // All three probabilities are constant on [c_i, c_{i+1}); probing each
  // critical point plus one point below the first covers every lambda > 0.
  std::vector<double> probes;
  if (!critical.empty()) probes.push_back(critical.front() / 2.0);
  for (std::size_t i = 0; i < critical.size(); ++i) {
    probes.push_back(critical[i]);
    if (i + 1 < critical.size()) probes.push_back(0.5 * (critical[i] + critical[i + 1]));
  }
  double worst = 0.0;
  for (double lambda : probes) {
    double both = 0.0;
    double tail = 0.0;
    for (const auto& a : joint) {
      if (a.y > beta * lambda && a.x <= delta * lambda) both += a.prob;
      if (a.y > lambda) tail += a.prob;
    }
    if (tail > 0.0) worst = std::max(worst, both / tail);
  }

  GoodLambdaReport r;
  r.delta_regime = delta > 1.0 ? "as-printed (delta>1)" : "proof (0<delta<=1)";
  r.gamma = dilation_constant(f, beta, top);
  r.eta = dilation_constant(f, 1.0 / delta, top);
  r.min_epsilon = worst;
  r.epsilon = epsilon.value_or(worst);
  r.hypothesis_holds = worst <= r.epsilon + 1e-15;
  r.applicable = r.hypothesis_holds && r.gamma * r.epsilon < 1.0;
  double lhs = 0.0;
  double base = 0.0;
  for (const auto& a : joint) {
    lhs += a.prob * f.value(a.y);
    base += a.prob * f.value(a.x);
  }
  r.lhs = lhs;
  r.base = base;
  if (!r.applicable) {
    r.pass = true;
    r.constant = kInf;
    r.rhs = kInf;
    return r;
  }
  r.constant = r.gamma * r.eta / (1.0 - r.gamma * r.epsilon);
  r.rhs = scaled(r.constant, base);
  r.pass = r.lhs <= r.rhs + kExactTolerance;
  return r;
}

double previsible_control_constant(double c_star_value, double p, double type_constant) {
  if (!(c_star_value >= 1.0) || !(p > 1.0) || !(type_constant > 0.0)) {
    throw std::invalid_argument("previsible-control constant needs c* >= 1, p > 1, L > 0");
  }
  const double c = c_star_value;
  // Solves 2 L delta^p beta^c / (beta - delta - 1)^p = 1/2 for delta.
  auto solve_delta = [&](double beta) {
    double lo = 0.0;
    double hi = beta - 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double g = 2.0 * type_constant * std::pow(mid, p) * std::pow(beta, c) /
                       std::pow(beta - mid - 1.0, p);
      (g < 0.5 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  double best = kInf;
  for (double beta : geometric_grid(1e-3, 1e3, 4000)) {
    const double b = 1.0 + beta;
    const double delta = solve_delta(b);
    if (delta > 0.0) best = std::min(best, 2.0 * std::pow(b / delta, c));
  }
  return best;
}

DiscreteReport previsible_control_check(const AdaptedProcess& m, const AdaptedProcess& w,
                                        const ConvexFunction& f, double p,
                                        std::optional<double> constant) {
  require_scalar(w, "previsible control");
  if (&m.tree() != &w.tree()) throw std::invalid_argument("M and w must share a tree");
  const auto& tree = m.tree();
  const std::size_t n = tree.size();
  const MartingaleStats st = stats(m, p);
  std::vector<double> w_star(n);
  for (std::size_t id = 0; id < n; ++id) {
    const int node = static_cast<int>(id);
    const double wn = w.value(node)[0];
    if (wn < 0.0) throw std::invalid_argument("previsible control must be nonnegative");
    const int parent = tree.node(node).parent;
    if (parent >= 0) {
      const int first = tree.node(parent).children.front();
      if (std::abs(w.value(first)[0] - wn) > kStructureTol) {
        throw std::invalid_argument("w is not previsible at node " + std::to_string(id));
      }
      if (st.diff_norm[id] > wn + kStructureTol) {
        throw std::invalid_argument("|m_n| exceeds w_n at node " + std::to_string(id));
      }
    }
    w_star[id] = parent < 0 ? wn : std::max(w_star[static_cast<std::size_t>(parent)], wn);
  }
  DiscreteReport r;
  r.lhs = expect_leaves(tree, phi_of(f, st.max_value));
  const double base = expect_leaves(tree, phi_of(f, st.p_variation)) +
                      expect_leaves(tree, phi_of(f, w_star));
  r.base = base;
  r.min_constant = ratio(r.lhs, base);
  if (constant) {
    r.constant = *constant;
  } else {
    const double top = std::max({largest(st.max_value), largest(st.p_variation), largest(w_star)});
    r.constant = previsible_control_constant(c_star(f, top), p);
  }
  r.rhs = scaled(r.constant, base);
  r.pass = r.lhs <= r.rhs + kExactTolerance;
  r.note = "Phi used on both sides of the bound";
  return r;
}

DiscreteReport bdg_phi_check(const AdaptedProcess& m, const ConvexFunction& f, double p,
                             double constant) {
  const auto& tree = m.tree();
  const MartingaleStats st = stats(m, p);
  DiscreteReport r;
  r.constant = constant;
  r.lhs = expect_leaves(tree, phi_of(f, st.max_value));
  const double base = expect_leaves(tree, phi_of(f, st.p_variation));
  r.rhs = scaled(constant, base);
  r.base = base;
  r.min_constant = ratio(r.lhs, base);
  r.pass = r.lhs <= r.rhs + kExactTolerance;
  return r;
}

AdaptedProcess davis_control(const AdaptedProcess& m, double factor) {
  const auto& tree = m.tree();
  const MartingaleStats st = stats(m, 2.0);
  std::vector<double> w(tree.size(), 0.0);
  for (std::size_t id = 1; id < tree.size(); ++id) {
    const auto parent = static_cast<std::size_t>(tree.node(static_cast<int>(id)).parent);
    w[id] = factor * st.max_diff[parent];
  }
  return AdaptedProcess(m.tree_ptr(), 1, std::move(w));
}

}  // namespace levy_bdg
