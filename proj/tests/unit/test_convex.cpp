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

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "levy_bdg/convex.hpp"

using namespace levy_bdg;

TEST_SUITE("convex") {

TEST_CASE("power values and densities") {
  const auto f2 = ConvexFunction::power(2.0);
  CHECK(f2.value(3.0) == doctest::Approx(9.0));
  CHECK(f2.density(3.0) == doctest::Approx(6.0));
  const auto f1 = ConvexFunction::power(1.0);
  CHECK(f1.value(5.0) == doctest::Approx(5.0));
  CHECK(f1.density(5.0) == doctest::Approx(1.0));
  const auto f15 = ConvexFunction::power(1.5);
  CHECK(f15.value(4.0) == doctest::Approx(8.0));
  CHECK(f15.density(4.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(ConvexFunction::power(0.5), std::invalid_argument);
}

TEST_CASE("table integrates its density exactly") {
  // phi(t) = min(t, 1): Phi = t^2/2 below 1, t - 1/2 above.
  const auto f = ConvexFunction::table({0.0, 1.0, 4.0}, {0.0, 1.0, 1.0});
  for (double t : {0.0, 0.3, 1.0, 2.5, 4.0, 7.0}) {
    const double oracle = t <= 1.0 ? t * t / 2.0 : t - 0.5;
    CHECK(f.value(t) == doctest::Approx(oracle).epsilon(1e-14));
  }
  CHECK_THROWS(ConvexFunction::table({0.0, 1.0}, {0.0, -1.0}));
  CHECK_THROWS(ConvexFunction::table({0.5, 1.0}, {0.0, 1.0}));
}

TEST_CASE("growth constant") {
  CHECK(growth_constant(ConvexFunction::power(2.0), 10.0) == doctest::Approx(4.0));
  CHECK(growth_constant(ConvexFunction::power(1.0), 10.0) == doctest::Approx(2.0));

  // Dense-grid oracle on the closed form of the min(t, 1) table.
  auto Phi = [](double t) { return t <= 1.0 ? t * t / 2.0 : t - 0.5; };
  double oracle = 0.0;
  for (int k = 1; k <= 10000; ++k) {
    const double l = 4.0 * k / 10000.0;
    oracle = std::max(oracle, Phi(2.0 * l) / Phi(l));
  }
  const auto f = ConvexFunction::table({0.0, 1.0, 4.0}, {0.0, 1.0, 1.0});
  CHECK(growth_constant(f, 4.0) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("c star") {
  for (double p : {1.0, 1.25, 1.5, 2.0}) {
    CHECK(c_star(ConvexFunction::power(p), 10.0) == doctest::Approx(p));
  }
  // u phi(u) / Phi(u) for min(t,1): 2 below 1, then u / (u - 1/2) decreasing.
  const auto f = ConvexFunction::table({0.0, 1.0, 4.0}, {0.0, 1.0, 1.0});
  CHECK(c_star(f, 4.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("conjugate of t^2 is t^2/4") {
  const ConjugatePair pair = conjugate(ConvexFunction::power(2.0));
  for (double v : {0.5, 1.0, 2.0, 3.0}) CHECK(pair.dual.value(v) == doctest::Approx(v * v / 4.0));
  REQUIRE(pair.c_star_dual.has_value());
  CHECK(*pair.c_star_dual == doctest::Approx(2.0));
  // Doob constant 4 (C*_Psi - 1) recovers the classical 4.
  CHECK(4.0 * (*pair.c_star_dual - 1.0) == doctest::Approx(4.0));
}

TEST_CASE("conjugate of a linear function has no dual c star") {
  const ConjugatePair pair = conjugate(ConvexFunction::power(1.0));
  CHECK_FALSE(pair.c_star_dual.has_value());
  CHECK(pair.dual.value(0.5) == 0.0);
  CHECK(std::isinf(pair.dual.value(2.0)));
}

TEST_CASE("identities hold for powers and tables") {
  const auto grid = geometric_grid(1e-3, 20.0, 400);
  for (double p : {1.25, 1.5, 2.0}) {
    const IdentityReport r = check_identities(conjugate(ConvexFunction::power(p)), grid);
    CHECK(r.young_equality <= 1e-9);
    CHECK(r.young_inequality <= 1e-9);
    CHECK(r.scaling <= 1e-9);
    CHECK(r.max_subadditive <= 1e-9);
    CHECK(r.power_dilation <= 1e-9);
    CHECK(r.dual_bound <= 1e-9);
  }
  const auto f = ConvexFunction::table({0.0, 0.5, 1.0, 3.0}, {0.0, 0.2, 1.0, 2.5});
  const IdentityReport r = check_identities(conjugate(f), grid);
  CHECK(r.young_equality <= 1e-9);
  CHECK(r.young_inequality <= 1e-9);
  CHECK(r.scaling <= 1e-9);
}

TEST_CASE("Young inequality by brute force on a table pair") {
  const auto f = ConvexFunction::table({0.0, 1.0, 2.0}, {0.0, 0.5, 3.0});
  const ConjugatePair pair = conjugate(f);
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 60; ++j) {
      const double u = 0.05 * i;
      const double v = 0.05 * j;
      CHECK(u * v <= f.value(u) + pair.dual.value(v) + 1e-12);
    }
  }
}

TEST_CASE("generalized inverse is an involution") {
  const auto f = ConvexFunction::table({0.0, 1.0, 2.0}, {0.0, 0.5, 3.0});
  const auto back = f.inverse_density().inverse_density();
  for (double t : {0.1, 0.7, 1.0, 1.5, 2.0, 5.0}) {
    CHECK(back.value(t) == doctest::Approx(f.value(t)).epsilon(1e-12));
  }
}

TEST_CASE("json round trip") {
  const auto f = ConvexFunction::table({0.0, 1.0, 2.0}, {0.0, 0.5, 3.0});
  const auto g = convex_from_json(convex_to_json(f));
  for (double t : {0.3, 1.7, 4.0}) CHECK(g.value(t) == f.value(t));
  const auto h = convex_from_json(nlohmann::json{{"kind", "power"}, {"p", 1.5}});
  CHECK(h.value(4.0) == doctest::Approx(8.0));
}

}  // TEST_SUITE
