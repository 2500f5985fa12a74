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
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "levy_bdg/inequalities.hpp"

using namespace levy_bdg;

namespace {

ContinuousProblem unit_problem(StepIntegrand xi) {
  return {MarkMeasure::dirac({1.0}), std::move(xi), 1.0};
}

StepIntegrand constant_xi(double c) { return StepIntegrand::constant({0.0, 1.0}, 1, {c}); }

double extra(const InequalityReport& r, const std::string& key) {
  for (const auto& [k, v] : r.extras) {
    if (k == key) return v;
  }
  FAIL("missing extra " << key);
  return 0.0;
}

}  // namespace

TEST_SUITE("inequalities") {

TEST_CASE("m0") {
  CHECK(compute_m0(2.0, 4.0) == 2);
  CHECK(compute_m0(2.0, 2.0) == 1);
  CHECK(compute_m0(1.5, 6.0) == 2);
  CHECK_THROWS_AS(compute_m0(2.0, 1.5), std::invalid_argument);
  // Brute force: smallest n >= 1 with p - n p / r <= 1.
  for (double p : {1.25, 1.5, 2.0}) {
    for (double r : {2.0, 3.0, 4.5, 8.0, 10.0}) {
      if (r < p) continue;
      int n = 1;
      while (p - n * p / r > 1.0 + 1e-12) ++n;
      CHECK(compute_m0(p, r) == n);
    }
  }
}

TEST_CASE("m function") {
  CHECK(m_fn(2.0, 0) == 1);
  CHECK(m_fn(2.0, 1) == 2);
  CHECK(m_fn(2.0, 2) == 3);
  CHECK(m_fn(1.5, 2) == static_cast<int>(std::floor(1.5 * 0.5)) + 1);
}

TEST_CASE("constants") {
  const BanachModel m{1, 2.0, 2.0, std::nullopt};
  const ConstantsTable t = constants(m, 4.0, 2);
  CHECK(t.c_p == 1.0);
  CHECK(t.const_i == doctest::Approx(1.0));
  CHECK(t.m0 == 2);
  CHECK(t.const_ii == doctest::Approx(1024.0));
  CHECK_FALSE(t.const_ii_degenerate);

  const ConstantsTable d = constants(m, 2.0, 1);
  CHECK(d.m0 == 1);
  CHECK(d.const_ii == 0.0);
  CHECK(d.const_ii_degenerate);
  REQUIRE(d.barc_statement.size() == 1);
  CHECK(d.m_values[0] == 1);
  CHECK(d.barc_statement[0] == 0.0);
  CHECK(d.statement_degenerate);

  // Type constant scales const_i and const_ii linearly.
  const BanachModel m3{3, 1.0, 1.5, 2.5};
  const ConstantsTable t3 = constants(m3, 6.0, 1);
  CHECK(t3.const_i == doctest::Approx(2.5 * std::pow(2.0, 0.5)));
  CHECK(t3.const_ii == doctest::Approx(2.5 * std::pow(2.0, 6.0 * (2.0 + 1.0 / 1.5))));

  const BanachModel no_cp{3, 1.0, 1.5, std::nullopt};
  CHECK_THROWS(no_cp.c_p());
  const BanachModel bad_p{1, 2.0, 2.5, std::nullopt};
  CHECK_THROWS(bad_p.validate());
}

TEST_CASE("verdict rule") {
  CHECK(decide({1.0, 0.1}, {1.0, 0.0}, 0.8, false) == Verdict::pass);   // 1 <= 0.8 + 0.3
  CHECK(decide({2.0, 0.1}, {1.0, 0.0}, 0.8, false) == Verdict::fail);
  CHECK(decide({2.0, 0.1}, {1.0, 0.0}, 0.0, true) == Verdict::pass_degenerate);
  CHECK(decide({2.0, 0.1}, {0.0, 0.0}, 0.0, true) == Verdict::fail);
  CHECK(acceptable(Verdict::not_applicable));
  CHECK_FALSE(acceptable(Verdict::fail));
  CHECK(to_string(Verdict::pass_degenerate) == "pass-with-degenerate-constant");
}

TEST_CASE("zero integrand gives zero on both sides") {
  const BanachModel m;
  const McSettings mc{2000, 1, 1};
  const auto zero = unit_problem(constant_xi(0.0));
  for (const InequalityReport& r :
       {mc_verify_i(m, zero, 2.0, mc), mc_verify_ii(m, zero, 4.0, mc)}) {
    CHECK(r.lhs.mean == 0.0);
    CHECK(r.rhs.mean == 0.0);
    CHECK(acceptable(r.verdict));
  }
  for (const InequalityReport& r : mc_verify_iii(m, zero, 2, mc)) {
    CHECK(r.lhs.mean == 0.0);
    CHECK(acceptable(r.verdict));
  }
}

TEST_CASE("inequality (i) isometry anchor") {
  const BanachModel m;
  const InequalityReport r = mc_verify_i(m, unit_problem(constant_xi(1.0)), 2.0, {100000, 1, 2});
  CHECK(r.variant == "no-sup");
  CHECK(r.rhs.mean == doctest::Approx(1.0));
  CHECK(std::fabs(r.lhs.mean - 1.0) <= 3.0 * r.lhs.se);
  CHECK(r.verdict == Verdict::pass);
  CHECK(extra(r, "sup_lhs") >= r.lhs.mean);
}

TEST_CASE("inequality (ii) rhs for unit jumps") {
  const BanachModel m;
  const InequalityReport r = mc_verify_ii(m, unit_problem(constant_xi(1.0)), 4.0, {100000, 4, 2});
  // E N(1)^2 = 2.
  CHECK(std::fabs(r.rhs.mean - 2.0) <= 3.0 * r.rhs.se);
  CHECK(r.constant == doctest::Approx(1024.0));
  CHECK(r.verdict == Verdict::pass);
  CHECK(r.max_path_share > 0.0);
  CHECK(r.max_path_share < 0.01);
}

TEST_CASE("scale equivariance is exact under a common seed") {
  const BanachModel m;
  const McSettings mc{5000, 3, 1};
  const MarkMeasure nu(1, {{{-1.0}, 0.5}, {{0.5}, 1.0}, {{2.0}, 0.25}});
  const Vec part = uniform_partition(1.0, 4);
  const auto xi = StepIntegrand::adapted_threshold(part, 1, 1.0, 1.0, 0.5);
  const InequalityReport a = mc_verify_ii(m, {nu, xi, 1.0}, 4.0, mc);
  const InequalityReport b = mc_verify_ii(m, {nu, xi.scaled(-3.0), 1.0}, 4.0, mc);
  CHECK(b.lhs.mean == doctest::Approx(81.0 * a.lhs.mean).epsilon(1e-10));
  CHECK(b.rhs.mean == doctest::Approx(81.0 * a.rhs.mean).epsilon(1e-10));
  CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-10));
}

TEST_CASE("monotone in the horizon per path") {
  const BanachModel m;
  const McSettings mc{3000, 9, 1};
  const MarkMeasure nu(1, {{{-1.0}, 0.5}, {{2.0}, 0.25}});
  const auto xi1 = StepIntegrand::linear_in_mark({0.0, 1.0}, 1);
  const auto xi2 = StepIntegrand::linear_in_mark({0.0, 1.0, 2.0}, 1);
  const InequalityReport shorter = mc_verify_ii(m, {nu, xi1, 1.0}, 2.0, mc);
  const InequalityReport longer = mc_verify_ii(m, {nu, xi2, 2.0}, 2.0, mc);
  CHECK(shorter.lhs.mean <= longer.lhs.mean);
  CHECK(shorter.rhs.mean <= longer.rhs.mean);
}

TEST_CASE("inequality (iii) rows") {
  const BanachModel m;
  const auto rows = mc_verify_iii(m, unit_problem(constant_xi(1.0)), 2, {20000, 5, 2});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].variant == "statement");
  CHECK(rows[1].variant == "proof");
  // barC = (256, 0) and (512, 0); both nu-integrals are 1.
  CHECK(rows[0].rhs.mean == doctest::Approx(256.0));
  CHECK(rows[1].rhs.mean == doctest::Approx(512.0));
  for (const auto& r : rows) {
    CHECK(r.degenerate);
    CHECK(r.verdict == Verdict::pass_degenerate);
    CHECK(std::isfinite(r.min_constant));
    CHECK(r.min_constant > 0.0);
  }
  CHECK_THROWS(mc_verify_iii(BanachModel{1, 2.0, 1.5, 1.0}, unit_problem(constant_xi(1.0)), 2,
                             {100, 1, 1}));
}

TEST_CASE("degenerate constant never reports plain pass") {
  const BanachModel m;
  const InequalityReport r = mc_verify_ii(m, unit_problem(constant_xi(1.0)), 2.0, {5000, 1, 1});
  CHECK(r.degenerate);
  CHECK(r.constant == 0.0);
  CHECK(r.verdict != Verdict::pass);
  CHECK(r.min_constant > 0.0);
}

TEST_CASE("corollary with identity h matches inequality (ii) with xi = z") {
  const BanachModel m;
  const MarkMeasure nu(1, {{{-1.0}, 0.5}, {{0.5}, 1.0}, {{2.0}, 0.25}});
  const McSettings mc{20000, 12, 2};
  const auto h = StepIntegrand::matrix({0.0, 1.0}, 1, 1, {{1.0}});
  const InequalityReport c = mc_verify_corollary(m, h, {{0.0}, nu}, 1.0, 4.0, mc);
  const InequalityReport ii =
      mc_verify_ii(m, {nu, StepIntegrand::linear_in_mark({0.0, 1.0}, 1), 1.0}, 4.0, mc);
  CHECK(std::fabs(c.lhs.mean - ii.lhs.mean) <= 3.0 * (c.lhs.se + ii.lhs.se));
  CHECK(std::fabs(c.rhs.mean - ii.rhs.mean) <= 3.0 * (c.rhs.se + ii.rhs.se));

  const auto zero = StepIntegrand::matrix({0.0, 1.0}, 1, 1, {{0.0}});
  const InequalityReport z = mc_verify_corollary(m, zero, {{0.0}, nu}, 1.0, 4.0, mc);
  CHECK(z.lhs.mean == 0.0);
  CHECK(acceptable(z.verdict));
}

TEST_CASE("report json keeps non-finite numbers as strings") {
  CHECK(number_json(1.5) == 1.5);
  CHECK(number_json(INFINITY) == "inf");
  CHECK(number_json(NAN) == "nan");
  const BanachModel m;
  const nlohmann::json j = to_json(constants(m, 4.0, 2));
  CHECK(j.at("const_ii") == 1024.0);
}

}  // TEST_SUITE
