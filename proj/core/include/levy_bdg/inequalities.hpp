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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "levy_bdg/common.hpp"
#include "levy_bdg/integrator.hpp"
#include "levy_bdg/prm.hpp"

namespace levy_bdg {

/// E = (R^d, l_s) assumed of martingale type p with constant C_p.
struct BanachModel {
  int d = 1;
  double s = 2.0;
  double p = 2.0;
  std::optional<double> type_constant;

  /// C_p: the configured value, else 1 for p = 2 when E is Hilbert (s = 2 or
  /// d = 1). Throws std::invalid_argument when neither applies.
  double c_p() const;
  /// Throws std::invalid_argument unless d >= 1, s >= 1, p in (1, 2] and
  /// C_p > 0 when given.
  void validate() const;
};

/// Smallest n >= 1 with p - n p / r <= 1 (1e-12 slack). Throws for r < p.
int compute_m0(double p, double r);

/// m(i) = floor(p^(i-1) (p - 1)) + 1.
int m_fn(double p, int i);

struct ConstantsTable {
  double p = 2.0;
  double r = 2.0;
  int n = 1;
  double c_p = 1.0;
  int m0 = 1;
  double const_i = 0.0;
  double const_ii = 0.0;
  bool const_ii_degenerate = false;
  std::vector<int> m_values;            // m(0) .. m(n-1)
  std::vector<double> level_r;          // r used at recursion level i = 1..n
  std::vector<double> barc_statement;   // barC(1) .. barC(n)
  std::vector<double> barc_proof;
  bool statement_degenerate = false;
  bool proof_degenerate = false;
};

/// const_i = C_p 2^(2-p); const_ii = C_p 2^(r(2+1/p)) (m0-1)^((p-1)r/p);
/// barC(i) = barC(i-1) 2^(p^(n-i+1) + 2p^(n-1)) X_i with
///   statement: X_i = (m(n-i) - 1)^((p-1)r_i/p)
///   proof:     X_i = (m0(p, r_i) - 1)^((p-1)r_i/p) m(n-i)
/// where r_i = p^(n-i+1).
ConstantsTable constants(const BanachModel& model, double r, int n);

enum class Verdict { pass, pass_degenerate, fail, not_applicable };
std::string_view to_string(Verdict v);
/// True for every verdict except fail.
bool acceptable(Verdict v);

/// lhs <= C rhs + 3 (se_lhs + C se_rhs); a degenerate constant passes (as
/// pass_degenerate) iff the measured ratio is finite.
Verdict decide(const Estimate& lhs, const Estimate& rhs, double constant, bool degenerate);

struct McSettings {
  std::size_t paths = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct InequalityReport {
  std::string id;       // i | ii | iii | corollary
  std::string variant;  // e.g. no-sup, statement, proof
  double p = 2.0;
  double order = 2.0;   // q, r or n
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  Estimate lhs;
  Estimate rhs;          // without the constant
  double constant = 1.0;
  double ratio = 0.0;    // lhs / rhs
  double min_constant = 0.0;
  bool degenerate = false;
  Verdict verdict = Verdict::fail;
  double max_path_share = 0.0;  // largest single-path share of the lhs sum
  double runtime_ms = 0.0;
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::string> notes;
};

/// A continuous-time problem: intensity, integrand and horizon.
struct ContinuousProblem {
  MarkMeasure nu;
  StepIntegrand xi;
  double horizon = 1.0;
};

/// q <= p. Primary lhs E|I(T)|^q (no sup); the sup form is reported through
/// extras "sup_lhs", "sup_se", "sup_ratio" and "sup_verdict" (0 fail,
/// 1 pass). rhs = (E int int |xi|^p dnu ds)^(q/p), constant C_p 2^(2-p).
InequalityReport mc_verify_i(const BanachModel& model, const ContinuousProblem& problem,
                             double q, const McSettings& mc);

/// r >= p. lhs E sup|I|^r, rhs E (sum |xi(t_i, z_i)|^p)^(r/p), const_ii.
InequalityReport mc_verify_ii(const BanachModel& model, const ContinuousProblem& problem,
                              double r, const McSettings& mc);

/// q = p^n (must be a natural number). Returns the statement and proof
/// variants of the constants.
std::vector<InequalityReport> mc_verify_iii(const BanachModel& model,
                                            const ContinuousProblem& problem, int n,
                                            const McSettings& mc);

/// X = int h dL over the compensated jump part of L. lhs E sup|X|^r, rhs
/// E (sum |Delta X|^p)^(r/p) from the path's jumps, const_ii. The conditional
/// form E(int sum |h z|^p dnu ds)^(r/p) goes into extras.
InequalityReport mc_verify_corollary(const BanachModel& model, const StepIntegrand& h,
                                     const LevyTriplet& triplet, double horizon, double r,
                                     const McSettings& mc);

/// Finite numbers as JSON numbers; nan and +-inf as strings.
nlohmann::json number_json(double x);

nlohmann::json to_json(const InequalityReport& r);
nlohmann::json to_json(const ConstantsTable& c);

}  // namespace levy_bdg
