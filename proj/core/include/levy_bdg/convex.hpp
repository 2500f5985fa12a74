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
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace levy_bdg {

/// Convex, nondecreasing Phi(t) = int_0^t phi(s) ds on [0, inf) with
/// phi nondecreasing and phi(0) = 0.
///
/// Two representations:
///  - power: Phi(t) = a t^p, phi(t) = a p t^(p-1) for t > 0 (p >= 1).
///  - table: phi piecewise linear through (t_k, phi_k). Breakpoints may repeat
///    to encode a jump of phi; phi is left-continuous there (lower value).
///    Past the last breakpoint the tail is either "linear" (phi held at its
///    last value) or "infinite" (Phi = +inf, the function lives on a bounded
///    domain). Conjugation swaps the two tails.
///
/// Phi is evaluated exactly per segment (trapezoid is exact for linear phi).
class ConvexFunction {
 public:
  enum class Kind { power, table };
  enum class Tail { linear, infinite };

  /// Throws std::invalid_argument for p < 1 or scale <= 0.
  static ConvexFunction power(double p, double scale = 1.0);

  /// User-facing table: t strictly increasing from 0, phi nondecreasing from 0.
  /// Throws std::invalid_argument otherwise.
  static ConvexFunction table(std::vector<double> t, std::vector<double> phi);

  /// Table with repeated breakpoints and an explicit tail (used by conjugate).
  static ConvexFunction table_with_tail(std::vector<double> t,
                                        std::vector<double> phi, Tail tail);

  Kind kind() const noexcept { return kind_; }
  Tail tail() const noexcept { return tail_; }
  double exponent() const noexcept { return exponent_; }
  double scale() const noexcept { return scale_; }
  std::span<const double> breakpoints() const noexcept { return t_; }
  std::span<const double> density_values() const noexcept { return phi_; }

  /// Largest t with Phi(t) < inf (+inf unless the tail is infinite).
  double domain_max() const noexcept;

  /// Phi(t).
  double value(double t) const;
  /// phi(t), left-continuous.
  double density(double t) const;
  /// phi(t+), the right limit.
  double density_right(double t) const;
  /// int_[0,x) t dphi(t), computed segment by segment (plus jump atoms).
  double t_dphi(double x) const;

  /// Generalized inverse psi(s) = inf{t >= 0 : phi(t) >= s} as a table-valued
  /// density, i.e. the Young conjugate's density.
  ConvexFunction inverse_density() const;

 private:
  ConvexFunction() = default;
  // Index of the first breakpoint >= t.
  std::size_t segment_end(double t) const;

  Kind kind_ = Kind::power;
  Tail tail_ = Tail::linear;
  double exponent_ = 1.0;
  double scale_ = 1.0;
  std::vector<double> t_;
  std::vector<double> phi_;
  std::vector<double> cumulative_;  // Phi at each breakpoint
};

/// Young pair (Phi, Psi) with the c* constants of each side when finite.
struct ConjugatePair {
  ConvexFunction primal;
  ConvexFunction dual;
  std::optional<double> c_star_primal;
  std::optional<double> c_star_dual;
};

/// Default supremum grid: geometric, 10^4 points per decade over 6 decades
/// below t_max, plus every breakpoint of the function.
struct SupGrid {
  int decades = 6;
  int points_per_decade = 10000;
};

ConvexFunction power_phi(double p);

/// Builds the conjugate by the generalized inverse of phi. Power kinds stay
/// closed form (p > 1) or become the degenerate table (p = 1).
ConjugatePair conjugate(const ConvexFunction& f, SupGrid grid = {});

/// sup over lambda in (0, t_max] of Phi(2 lambda) / Phi(lambda); 2^p for
/// powers. May be +inf (e.g. a bounded domain).
double growth_constant(const ConvexFunction& f, double t_max, SupGrid grid = {});

/// sup over lambda in (0, t_max] of Phi(factor lambda) / Phi(lambda); exact
/// factor^p for powers. Shared by growth_constant and the good-lambda lemma.
double dilation_constant(const ConvexFunction& f, double factor, double t_max,
                         SupGrid grid = {});

/// c*_Phi = sup u phi(u) / Phi(u); exactly p for powers.
/// Throws std::domain_error if Phi vanishes at some u > 0 on the grid.
double c_star(const ConvexFunction& f, double t_max, SupGrid grid = {});

/// Maximum violations (positive part, absolute) of the convex-function
/// identities and inequalities over a grid.
struct IdentityReport {
  double young_equality = 0.0;    // |u phi(u) - Phi(u) - Psi(phi(u))|
  double young_inequality = 0.0;  // (uv - Phi(u) - Psi(v))+
  double scaling = 0.0;           // (Phi(a u) - a Phi(u))+, 0 < a <= 1
  double scaling_as_printed = 0.0;// (Phi(u a) - a Phi(a))+, reported only
  double max_subadditive = 0.0;   // (Phi(t1 v t2) - Phi(t1) - Phi(t2))+
  double power_dilation = 0.0;    // (Phi(r t) - r^c* Phi(t))+, r >= 1
  double dual_bound = 0.0;        // (Psi(t) - (c* - 1) Phi(psi(t)))+
};

IdentityReport check_identities(const ConjugatePair& pair,
                                std::span<const double> grid);

/// Geometric grid of `count` points in [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);

ConvexFunction convex_from_json(const nlohmann::json& j);
nlohmann::json convex_to_json(const ConvexFunction& f);

}  // namespace levy_bdg
