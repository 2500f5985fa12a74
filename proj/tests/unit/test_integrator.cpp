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
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "levy_bdg/integrator.hpp"

using namespace levy_bdg;

namespace {

PrmPath fixed_path(std::vector<double> times, std::vector<double> marks, int dim = 1,
                   double horizon = 1.0) {
  PrmPath p;
  p.horizon = horizon;
  p.dim = dim;
  p.times = std::move(times);
  p.marks = std::move(marks);
  return p;
}

double eval1(const RealizedIntegrand& r, std::size_t cell, double z) {
  double out = 0.0;
  const double in[1] = {z};
  r.maps[cell](in, std::span<double>(&out, 1));
  return out;
}

}  // namespace

TEST_SUITE("integrator") {

TEST_CASE("zero integrand") {
  const MarkMeasure nu = MarkMeasure::dirac({1.0});
  const auto xi = StepIntegrand::constant(uniform_partition(1.0, 3), 1, {0.0});
  const PrmPath p = fixed_path({0.2, 0.7}, {1.0, 1.0});
  const CadlagPath I = integrate(xi.realize(p), p, nu);
  CHECK(sup_norm(I, 1.0, 2.0) == 0.0);
}

TEST_CASE("compensated Poisson by hand") {
  const MarkMeasure nu = MarkMeasure::dirac({1.0});
  const auto xi = StepIntegrand::constant(uniform_partition(1.0, 1), 1, {1.0});
  const PrmPath p = fixed_path({0.4}, {1.0});
  const CadlagPath I = integrate(xi.realize(p), p, nu);
  CHECK(I.value(0.0)[0] == 0.0);
  CHECK(I.left_limit(0.4)[0] == doctest::Approx(-0.4));
  CHECK(I.value(0.4)[0] == doctest::Approx(0.6));
  CHECK(I.value(1.0)[0] == doctest::Approx(0.0));
  CHECK(sup_norm(I, 1.0, 2.0) == doctest::Approx(0.6));
  CHECK(sup_norm(I, 0.3, 2.0) == doctest::Approx(0.3));

  double previous = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double s = sup_norm(I, 0.01 * k, 2.0);
    CHECK(s >= previous);
    previous = s;
  }
}

TEST_CASE("jumps of the integral are xi at the events") {
  const MarkMeasure nu(1, {{{-1.0}, 0.5}, {{0.5}, 1.0}, {{2.0}, 0.25}});
  const auto xi = StepIntegrand::adapted_threshold(uniform_partition(1.0, 4), 1, 1.0, 1.0, 0.0);
  for (std::uint64_t i = 0; i < 200; ++i) {
    Stream s = Stream::for_path(5, i);
    const PrmPath p = sample_prm(nu, 1.0, s);
    const RealizedIntegrand r = xi.realize(p);
    const CadlagPath I = integrate(r, p, nu);
    double from_jumps = 0.0;
    for (const Jump& j : I.jumps()) from_jumps += j.delta[0] * j.delta[0];
    CHECK(jump_power_sum(r, p, 2.0, 1.0, 2.0) == doctest::Approx(from_jumps).epsilon(1e-12));
    for (std::size_t k = 0; k < p.count(); ++k) {
      const double t = p.times[k];
      const double want = eval1(r, static_cast<std::size_t>(r.cell_of(t)), p.mark(k)[0]);
      CHECK(I.value(t)[0] - I.left_limit(t)[0] == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("jump power sum and nu integral") {
  const MarkMeasure nu = MarkMeasure::dirac({1.0});
  const auto one = StepIntegrand::constant(uniform_partition(1.0, 2), 1, {1.0});
  const PrmPath p = fixed_path({0.1, 0.5, 0.9}, {1.0, 1.0, 1.0});
  CHECK(jump_power_sum(one.realize(p), p, 2.0, 1.0, 2.0) == doctest::Approx(3.0));
  CHECK(jump_power_sum(one.realize(p), p, 2.0, 0.5, 2.0) == doctest::Approx(2.0));
  const PrmPath none = fixed_path({}, {});
  CHECK(jump_power_sum(one.realize(none), none, 2.0, 1.0, 2.0) == 0.0);

  CHECK(nu_power_integral(one.realize(p), nu, 2.0, 1.0, 2.0) == doctest::Approx(1.0));
  const MarkMeasure heavy = MarkMeasure::dirac({1.0}, 3.0);
  const auto c = StepIntegrand::constant(uniform_partition(2.0, 1), 1, {-1.5});
  const PrmPath none2 = fixed_path({}, {}, 1, 2.0);
  CHECK(nu_power_integral(c.realize(none2), heavy, 1.5, 2.0, 2.0) ==
        doctest::Approx(std::pow(1.5, 1.5) * 3.0 * 2.0));

  // 1 on (0, 1/2], 3 on (1/2, 1], nu = 2 delta_1: 0.5*2*1 + 0.5*2*9.
  const MarkMeasure two = MarkMeasure::dirac({1.0}, 2.0);
  const auto step = StepIntegrand::table({0.0, 0.5, 1.0}, {{{{1.0}, {1.0}}}, {{{1.0}, {3.0}}}});
  CHECK(nu_power_integral(step.realize(none), two, 2.0, 1.0, 2.0) == doctest::Approx(10.0));
  CHECK(nu_power_integral(step.realize(none), two, 2.0, 0.75, 2.0) == doctest::Approx(1.0 + 4.5));
}

TEST_CASE("predictable rules only see the past") {
  const auto xi = StepIntegrand::adapted_threshold({0.0, 0.5, 1.0}, 1, 1.5, 1.0, 0.0);
  // Same events before 0.5, different after.
  const PrmPath a = fixed_path({0.2, 0.3}, {1.0, 1.0});
  const PrmPath b = fixed_path({0.2, 0.3, 0.6, 0.8}, {1.0, 1.0, 5.0, 5.0});
  const RealizedIntegrand ra = xi.realize(a);
  const RealizedIntegrand rb = xi.realize(b);
  for (std::size_t cell = 0; cell < 2; ++cell) {
    CHECK(eval1(ra, cell, 1.0) == eval1(rb, cell, 1.0));
  }
  // Running sum 2 > 1.5 at t = 0.5, so cell 2 uses `high` = 0.
  CHECK(eval1(ra, 0, 1.0) == 1.0);
  CHECK(eval1(ra, 1, 1.0) == 0.0);

  std::vector<double> seen_counts;
  StepIntegrand spy({0.0, 0.25, 0.5, 1.0}, 1, 1, [&](std::size_t cell, const PathPrefix& past) {
    for (double t : past.times) CHECK(t <= past.cutoff);
    seen_counts.push_back(static_cast<double>(past.count()));
    (void)cell;
    return MarkMap::scaled(1, 1.0);
  });
  spy.realize(fixed_path({0.1, 0.25, 0.3, 0.9}, {1, 1, 1, 1}));
  CHECK(seen_counts == std::vector<double>{0, 2, 3});
}

TEST_CASE("event on a partition point belongs to the left cell") {
  RealizedIntegrand r;
  r.partition = {0.0, 0.5, 1.0};
  r.maps = {MarkMap::scaled(1, 1.0), MarkMap::scaled(1, 2.0)};
  CHECK(r.cell_of(0.5) == 0);
  CHECK(r.cell_of(0.50001) == 1);
  CHECK(r.cell_of(0.0) == -1);
  CHECK(r.cell_of(1.5) == -1);
}

TEST_CASE("linearity") {
  const MarkMeasure nu(1, {{{-1.0}, 0.5}, {{0.5}, 1.0}, {{2.0}, 0.25}});
  const Vec part = uniform_partition(1.0, 4);
  const auto x1 = StepIntegrand::linear_in_mark(part, 1, 1.0);
  const auto x2 = StepIntegrand::adapted_threshold(part, 1, 0.5, 2.0, -1.0);
  const auto sum = StepIntegrand::combine(2.0, x1, -3.0, x2);
  for (std::uint64_t i = 0; i < 50; ++i) {
    Stream s = Stream::for_path(8, i);
    const PrmPath p = sample_prm(nu, 1.0, s);
    const CadlagPath i1 = integrate(x1.realize(p), p, nu);
    const CadlagPath i2 = integrate(x2.realize(p), p, nu);
    const CadlagPath is = integrate(sum.realize(p), p, nu);
    for (int k = 0; k <= 20; ++k) {
      const double t = 0.05 * k;
      CHECK(is.value(t)[0] ==
            doctest::Approx(2.0 * i1.value(t)[0] - 3.0 * i2.value(t)[0]).epsilon(1e-12));
    }
    const CadlagPath sc = integrate(x1.scaled(-2.0).realize(p), p, nu);
    CHECK(sc.value(1.0)[0] == doctest::Approx(-2.0 * i1.value(1.0)[0]).epsilon(1e-12));
  }
}

TEST_CASE("isometry by Monte Carlo") {
  const MarkMeasure nu = MarkMeasure::dirac({1.0});
  const auto xi = StepIntegrand::constant(uniform_partition(1.0, 1), 1, {1.0});
  const std::size_t n = 100000;
  std::vector<double> end(n), sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    Stream s = Stream::for_path(2, i);
    const PrmPath p = sample_prm(nu, 1.0, s);
    const CadlagPath I = integrate(xi.realize(p), p, nu);
    end[i] = I.value(1.0)[0];
    sq[i] = end[i] * end[i];
    // I(1) = N(1) - 1.
    CHECK(end[i] == doctest::Approx(static_cast<double>(p.count()) - 1.0));
  }
  const Estimate m = mean_and_se(end);
  const Estimate v = mean_and_se(sq);
  CHECK(std::fabs(m.mean) <= 3.0 * m.se);
  CHECK(std::fabs(v.mean - 1.0) <= 3.0 * v.se);
}

TEST_CASE("matrix integrands and tables") {
  const MarkMeasure nu(2, {{{1.0, 0.0}, 1.0}});
  const auto rot = StepIntegrand::matrix(uniform_partition(1.0, 1), 2, 2, {{0.0, -1.0, 1.0, 0.0}});
  const PrmPath p = fixed_path({0.5}, {1.0, 0.0}, 2);
  const CadlagPath I = integrate(rot.realize(p), p, nu);
  CHECK(I.value(0.5)[0] == doctest::Approx(0.0));
  CHECK(I.value(0.5)[1] == doctest::Approx(0.5));

  const auto table = StepIntegrand::table(uniform_partition(1.0, 1), {{{{1.0}, {2.0}}}});
  const MarkMeasure one = MarkMeasure::dirac({1.0});
  const PrmPath bad = fixed_path({0.3}, {7.0});
  try {
    integrate(table.realize(bad), bad, one);
    FAIL("expected MarkDomainError");
  } catch (const MarkDomainError& e) {
    CHECK(e.time() == 0.3);
    CHECK(e.mark()[0] == 7.0);
  }
}

TEST_CASE("partition and integrand specs") {
  CHECK(partition_from_json({{"cells", 4}}, 2.0) == Vec{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(partition_from_json({{"times", {0.5, 1.0}}}, 1.0) == Vec{0.0, 0.5, 1.0});
  CHECK_THROWS(StepIntegrand::constant({0.0, 0.5, 0.5}, 1, {1.0}));
  const auto xi = integrand_from_json({{"kind", "linear_in_mark"}, {"scale", 3.0}}, 1, 1.0);
  CHECK(xi.cells() == 1);
  const PrmPath p = fixed_path({}, {});
  CHECK(eval1(xi.realize(p), 0, 2.0) == 6.0);
  CHECK_THROWS(xi.realize(fixed_path({}, {}, 1, 0.5)));
}

}  // TEST_SUITE
