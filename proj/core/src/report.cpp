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

#include <nlohmann/json.hpp>

#include "levy_bdg/inequalities.hpp"

namespace levy_bdg {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::pass_degenerate:
      return "pass-with-degenerate-constant";
    case Verdict::fail:
      return "fail";
    case Verdict::not_applicable:
      return "not-applicable";
  }
  return "fail";
}

bool acceptable(Verdict v) { return v != Verdict::fail; }

Verdict decide(const Estimate& lhs, const Estimate& rhs, double constant, bool degenerate) {
  if (degenerate) {
    const bool finite = rhs.mean > 0.0 ? std::isfinite(lhs.mean / rhs.mean) : lhs.mean == 0.0;
    return finite ? Verdict::pass_degenerate : Verdict::fail;
  }
  const double slack = 3.0 * (lhs.se + constant * rhs.se);
  return lhs.mean <= constant * rhs.mean + slack ? Verdict::pass : Verdict::fail;
}

nlohmann::json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

nlohmann::json to_json(const InequalityReport& r) {
  nlohmann::json extras = nlohmann::json::object();
  for (const auto& [k, v] : r.extras) extras[k] = number_json(v);
  return {{"id", r.id},
          {"variant", r.variant},
          {"p", r.p},
          {"order", r.order},
          {"paths", r.paths},
          {"seed", r.seed},
          {"lhs", number_json(r.lhs.mean)},
          {"se_lhs", number_json(r.lhs.se)},
          {"rhs", number_json(r.rhs.mean)},
          {"se_rhs", number_json(r.rhs.se)},
          {"constant", number_json(r.constant)},
          {"ratio", number_json(r.ratio)},
          {"min_constant", number_json(r.min_constant)},
          {"degenerate", r.degenerate},
          {"verdict", std::string(to_string(r.verdict))},
          {"max_path_share", number_json(r.max_path_share)},
          {"runtime_ms", r.runtime_ms},
          {"extras", extras},
          {"notes", r.notes}};
}

nlohmann::json to_json(const ConstantsTable& c) {
  nlohmann::json barc_s = nlohmann::json::array();
  nlohmann::json barc_p = nlohmann::json::array();
  for (double x : c.barc_statement) barc_s.push_back(number_json(x));
  for (double x : c.barc_proof) barc_p.push_back(number_json(x));
  return {{"p", c.p},
          {"r", c.r},
          {"n", c.n},
          {"C_p", c.c_p},
          {"m0", c.m0},
          {"const_i", number_json(c.const_i)},
          {"const_ii", number_json(c.const_ii)},
          {"const_ii_degenerate", c.const_ii_degenerate},
          {"m", c.m_values},
          {"r_level", c.level_r},
          {"barC_statement", barc_s},
          {"barC_proof", barc_p},
          {"statement_degenerate", c.statement_degenerate},
          {"proof_degenerate", c.proof_degenerate}};
}

}  // namespace levy_bdg
