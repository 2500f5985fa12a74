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

#include "levy_bdg/inequalities.hpp"

namespace levy_bdg {

double BanachModel::c_p() const {
  if (type_constant) return *type_constant;
  if (p == 2.0 && (s == 2.0 || d == 1)) return 1.0;
  throw std::invalid_argument("type constant C_p must be given unless p = 2 on a Hilbert space");
}

void BanachModel::validate() const {
  if (d < 1) throw std::invalid_argument("model dimension must be >= 1");
  require_norm_exponent(s);
  if (!(p > 1.0) || !(p <= 2.0)) throw std::invalid_argument("type exponent p must lie in (1, 2]");
  if (type_constant && !(*type_constant > 0.0)) {
    throw std::invalid_argument("type constant must be > 0");
  }
}

int compute_m0(double p, double r) {
  if (!(p > 1.0) || !(p <= 2.0)) throw std::invalid_argument("p must lie in (1, 2]");
  if (!(r >= p)) throw std::invalid_argument("r must be >= p");
  // p - n p / r <= 1  <=>  n >= (p - 1) r / p.
  const double bound = (p - 1.0) * r / p;
  return std::max(1, static_cast<int>(std::ceil(bound - 1e-12)));
}

int m_fn(double p, int i) {
  return static_cast<int>(std::floor(std::pow(p, i - 1) * (p - 1.0))) + 1;
}

ConstantsTable constants(const BanachModel& model, double r, int n) {
  model.validate();
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const double p = model.p;
  ConstantsTable t;
  t.p = p;
  t.r = r;
  t.n = n;
  t.c_p = model.c_p();
  t.m0 = compute_m0(p, r);
  const double power = (p - 1.0) * r / p;
  t.const_i = t.c_p * std::pow(2.0, 2.0 - p);
  t.const_ii = t.c_p * std::pow(2.0, r * (2.0 + 1.0 / p)) * std::pow(t.m0 - 1.0, power);
  t.const_ii_degenerate = t.const_ii == 0.0;

  for (int i = 0; i < n; ++i) t.m_values.push_back(m_fn(p, i));
  double statement = 1.0;
  double proof = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double r_i = std::pow(p, n - i + 1);
    const double level_power = (p - 1.0) * r_i / p;
    const double base = std::pow(2.0, std::pow(p, n - i + 1) + 2.0 * std::pow(p, n - 1));
    const int m = t.m_values[static_cast<std::size_t>(n - i)];
    statement *= base * std::pow(m - 1.0, level_power);
    proof *= base * std::pow(compute_m0(p, r_i) - 1.0, level_power) * m;
    t.level_r.push_back(r_i);
    t.barc_statement.push_back(statement);
    t.barc_proof.push_back(proof);
    t.statement_degenerate = t.statement_degenerate || statement == 0.0;
    t.proof_degenerate = t.proof_degenerate || proof == 0.0;
  }
  return t;
}

}  // namespace levy_bdg
