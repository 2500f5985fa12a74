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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levy_bdg/convex.hpp"
#include "levy_bdg/filtration.hpp"

namespace levy_bdg {

/// Outcome of an exact check on a finite filtration. All expectations are
/// computed by enumerating atoms, so there is no sampling error.
struct DiscreteReport {
  double lhs = 0.0;
  double rhs = 0.0;             // already multiplied by `constant`
  double base = 0.0;            // rhs without the constant
  double constant = 1.0;        // asserted constant
  double min_constant = 0.0;    // smallest constant for which lhs <= C * (rhs / constant)
  bool applicable = true;
  bool pass = false;
  std::string note;
};

inline constexpr double kExactTolerance = 1e-10;

/// E Phi(max_n X_n) <= 4 (C*_Psi - 1) E Phi(X_N) for a nonnegative
/// submartingale with X_0 = 0. Throws std::invalid_argument otherwise.
DiscreteReport doob_phi_check(const AdaptedProcess& x, const ConjugatePair& pair);

/// E X_N^p <= E max X^p <= q^p E X_N^p (simple Doob form), q = p / (p - 1).
DiscreteReport doob_power_check(const AdaptedProcess& x, double p);

/// Garsia's identity measured as an inequality:
/// lhs = E int_0^{X*} t dphi(t), rhs = E X_N phi(X*), gap = rhs - lhs.
struct GarsiaReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  bool pass = false;  // gap >= -1e-10
};
GarsiaReport garsia_gap(const AdaptedProcess& x, const ConvexFunction& f);

/// E Phi(sum_n E[z_n | F_{n-1}]) <= (c*)^(2 c*) E Phi(sum_n z_n).
/// z is real valued and nonnegative (throws otherwise).
DiscreteReport conditional_sum_check(const AdaptedProcess& z, const ConjugatePair& pair);

/// A finite joint law of nonnegative (x, y).
struct JointAtom {
  double x = 0.0;
  double y = 0.0;
  double prob = 0.0;
};

struct GoodLambdaReport {
  double gamma = 0.0;         // sup Phi(beta l) / Phi(l)
  double eta = 0.0;           // sup Phi(l / delta) / Phi(l)
  double epsilon = 0.0;       // epsilon used for the hypothesis
  double min_epsilon = 0.0;   // smallest epsilon satisfying the hypothesis
  bool hypothesis_holds = false;
  bool applicable = false;    // hypothesis holds and gamma * epsilon < 1
  double lhs = 0.0;           // E Phi(y)
  double rhs = 0.0;           // gamma eta / (1 - gamma eps) E Phi(x)
  double base = 0.0;          // E Phi(x)
  double constant = 0.0;
  bool pass = false;          // conclusion holds (true when not applicable)
  std::string delta_regime;   // "as-printed (delta>1)" or "proof (0<delta<=1)"
};

/// Checks the distributional hypothesis exactly at every critical lambda of
/// the finite law; when it holds with gamma * eps < 1 asserts the conclusion.
/// If `epsilon` is empty the smallest admissible epsilon is used.
GoodLambdaReport good_lambda_check(std::span<const JointAtom> joint, const ConvexFunction& f,
                                   double beta, double delta,
                                   std::optional<double> epsilon = std::nullopt);

/// Leaf law of (x, y) from two per-node fields of a tree.
std::vector<JointAtom> joint_from_leaves(const FiltrationTree& tree,
                                         std::span<const double> x,
                                         std::span<const double> y);

/// The constant estimate for the previsible-control proposition:
/// min over beta > 1 of 2 delta^-c beta^c where 0 < delta < beta - 1 solves
/// 2 L delta^p beta^c / (beta - delta - 1)^p = 1/2.
double previsible_control_constant(double c_star, double p, double type_constant = 1.0);

/// E Phi(M*_N) <= C E Phi(S_{N,p}) + C E Phi(w*_N) for previsible w with
/// |m_n| <= w_n (n >= 1). Throws std::invalid_argument if w is not
/// previsible or does not dominate the differences.
DiscreteReport previsible_control_check(const AdaptedProcess& m, const AdaptedProcess& w,
                                        const ConvexFunction& f, double p,
                                        std::optional<double> constant = std::nullopt);

/// E Phi(max |M_n|) <= C E Phi(S_{N,p}(M)).
DiscreteReport bdg_phi_check(const AdaptedProcess& m, const ConvexFunction& f, double p,
                             double constant);

/// Previsible w_n = factor * m*_{n-1} (w_0 = 0), the Davis G-part control.
AdaptedProcess davis_control(const AdaptedProcess& m, double factor = 4.0);

}  // namespace levy_bdg
