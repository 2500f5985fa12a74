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
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "levy_bdg/prm.hpp"

using namespace levy_bdg;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_SUITE("prm") {

TEST_CASE("measure validation and truncation") {
  const MarkMeasure nu(1, {{{0.1}, 5.0}, {{1.0}, 1.0}, {{-2.0}, 1.0}});
  CHECK(nu.total_mass() == doctest::Approx(7.0).epsilon(1e-12));
  const MarkMeasure t = truncate(nu, 0.5);
  CHECK(t.total_mass() == doctest::Approx(2.0).epsilon(1e-12));
  for (const auto& a : t.atoms()) CHECK(std::fabs(a.z[0]) > 0.5);
  CHECK(truncate(nu, 0.0).total_mass() == nu.total_mass());
  CHECK_THROWS(truncate(nu, 5.0, true));
  CHECK_THROWS(MarkMeasure(1, {{{1.0}, -1.0}}));
  CHECK_THROWS(MarkMeasure(2, {{{1.0}, 1.0}}));
  CHECK_THROWS(MarkMeasure(1, {{{0.1}, 1.0}}, 2.0, 0.5));
}

TEST_CASE("truncated geometric mass increases to the full mass") {
  GeometricFamily g;
  g.count = 12;
  const MarkMeasure nu = geometric_measure(g);
  double previous = -1.0;
  for (double eps : {1.0, 0.5, 0.25, 0.125, 0.0625, 1e-9}) {
    const double m = truncate(nu, eps).total_mass();
    CHECK(m >= previous);
    previous = m;
  }
  CHECK(previous == doctest::Approx(12.0));
}

TEST_CASE("empty measure gives empty paths") {
  const MarkMeasure nu(1, {});
  Stream s = Stream::for_path(1, 0);
  CHECK(sample_prm(nu, 1.0, s).count() == 0);
}

TEST_CASE("Poisson counts and independence on disjoint intervals") {
  const MarkMeasure nu = MarkMeasure::dirac({1.0});
  const std::size_t n = 100000;
  std::vector<double> count(n), a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    Stream s = Stream::for_path(42, i);
    const PrmPath p = sample_prm(nu, 1.0, s);
    count[i] = static_cast<double>(p.count());
    for (std::size_t k = 0; k < p.count(); ++k) {
      CHECK(p.times[k] > 0.0);
      CHECK(p.times[k] <= 1.0);
      if (k > 0) CHECK(p.times[k] > p.times[k - 1]);
      (p.times[k] <= 0.5 ? a[i] : b[i]) += 1.0;
    }
  }
  const Estimate c = mean_and_se(count);
  CHECK(std::fabs(c.mean - 1.0) <= 3.0 * std::sqrt(1.0 / n));
  const Estimate ea = mean_and_se(a);
  const Estimate eb = mean_and_se(b);
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (a[i] - ea.mean) * (b[i] - eb.mean);
    va += (a[i] - ea.mean) * (a[i] - ea.mean);
    vb += (b[i] - eb.mean) * (b[i] - eb.mean);
  }
  CHECK(std::fabs(cov / std::sqrt(va * vb)) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("marks follow the normalized measure") {
  const MarkMeasure nu(1, {{{-1.0}, 0.5}, {{2.0}, 1.5}});
  std::size_t hits = 0, total = 0;
  for (std::size_t i = 0; i < 20000; ++i) {
    Stream s = Stream::for_path(7, i);
    const PrmPath p = sample_prm(nu, 1.0, s);
    for (std::size_t k = 0; k < p.count(); ++k) {
      hits += p.mark(k)[0] == 2.0 ? 1 : 0;
      CHECK((p.mark(k)[0] == 2.0 || p.mark(k)[0] == -1.0));
    }
    total += p.count();
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(total);
  CHECK(std::fabs(frac - 0.75) <= 3.0 * std::sqrt(0.75 * 0.25 / static_cast<double>(total)));
}

TEST_CASE("same stream gives the same path") {
  const MarkMeasure nu(2, {{{1.0, 0.0}, 2.0}, {{0.0, 1.0}, 1.0}});
  Stream s1 = Stream::for_path(9, 3);
  Stream s2 = Stream::for_path(9, 3);
  const PrmPath a = sample_prm(nu, 2.0, s1);
  const PrmPath b = sample_prm(nu, 2.0, s2);
  CHECK(a.times == b.times);
  CHECK(a.marks == b.marks);
}

TEST_CASE("Levy paths") {
  // Drift only: L(t) = t.
  const LevyTriplet drift{{1.0}, MarkMeasure(1, {})};
  Stream s = Stream::for_path(1, 0);
  const LevyPath lp = levy_path(drift, 2.0, s);
  CHECK(lp.path.value(1.5)[0] == doctest::Approx(1.5));
  CHECK(lp.path.jumps().empty());

  // jumps() returns exactly the sampled events.
  const LevyTriplet jumps{{0.0}, MarkMeasure(1, {{{1.0}, 2.0}, {{-0.5}, 3.0}})};
  for (std::uint64_t i = 0; i < 50; ++i) {
    Stream t = Stream::for_path(3, i);
    const LevyPath p = levy_path(jumps, 1.0, t);
    const auto js = p.path.jumps();
    REQUIRE(js.size() == p.prm.count());
    for (std::size_t k = 0; k < js.size(); ++k) {
      CHECK(js[k].t == p.prm.times[k]);
      CHECK(js[k].delta[0] == p.prm.mark(k)[0]);
    }
  }

  // E L(1) = 1 for unit jumps at rate 1.
  const LevyTriplet unit{{0.0}, MarkMeasure::dirac({1.0})};
  std::vector<double> end(100000);
  for (std::size_t i = 0; i < end.size(); ++i) {
    Stream t = Stream::for_path(11, i);
    end[i] = levy_path(unit, 1.0, t).path.value(1.0)[0];
  }
  const Estimate e = mean_and_se(end);
  CHECK(std::fabs(e.mean - 1.0) <= 3.0 * e.se);
}

TEST_CASE("cadlag path jumps") {
  CadlagPath p;
  p.horizon = 1.0;
  p.breaks = {0.0, 0.5};
  p.values = {0.0, 2.0};
  p.slopes = {0.0, 0.0};
  p.jump = {0.0, 2.0};
  const auto js = p.jumps();
  REQUIRE(js.size() == 1);
  CHECK(js[0].t == 0.5);
  CHECK(js[0].delta[0] == 2.0);
  CHECK(p.left_limit(0.5)[0] == 0.0);
  CHECK(p.value(0.5)[0] == 2.0);
}

TEST_CASE("characteristic function") {
  const LevyTriplet unit{{0.0}, MarkMeasure::dirac({1.0})};
  const std::vector<double> theta{0.7};
  const auto cf = levy_cf(unit, 1.0, theta);
  const auto oracle = std::exp(std::exp(std::complex<double>(0.0, 0.7)) - 1.0);
  CHECK(std::abs(cf - oracle) <= 1e-14);

  const std::vector<Vec> zero{{0.0}};
  const CfReport r0 = cf_check(unit, 1.0, zero, 1000, 1);
  CHECK(std::abs(r0.points[0].empirical - 1.0) <= 1e-15);
  CHECK(std::abs(r0.points[0].analytic - 1.0) <= 1e-15);

  // Drift only: |empirical| = 1 exactly.
  const LevyTriplet drift{{1.0}, MarkMeasure(1, {})};
  const std::vector<Vec> th{{1.3}};
  const CfReport rd = cf_check(drift, 2.0, th, 100, 1);
  CHECK(std::abs(rd.points[0].empirical) == doctest::Approx(1.0));
  CHECK(std::abs(rd.points[0].empirical - std::exp(std::complex<double>(0.0, 2.6))) <= 1e-12);
}

TEST_CASE("Poisson central moments") {
  for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    CHECK(poisson_central_moment(lambda, 2.0) == doctest::Approx(lambda).epsilon(1e-9));
    // Mean absolute deviation: 2 lambda^(floor+1) e^-lambda / floor!.
    const int f = static_cast<int>(std::floor(lambda));
    const double mad = 2.0 * std::pow(lambda, f + 1) * std::exp(-lambda) / factorial(f);
    CHECK(poisson_central_moment(lambda, 1.0) == doctest::Approx(mad).epsilon(1e-10));
    for (double p : {1.0, 1.25, 1.5, 1.75, 2.0}) {
      CHECK(poisson_central_moment(lambda, p) <= std::pow(2.0, 2.0 - p) * lambda + 1e-9);
    }
  }
  CHECK(poisson_central_moment(0.5, 1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(poisson_central_moment(4.0, 1.5) <= std::sqrt(2.0) * 4.0);
}

TEST_CASE("measure json round trip") {
  const nlohmann::json j = {{"atoms", {{{"z", {1.0, 0.0}}, {"w", 2.0}}, {{"z", {0.0, 0.1}}, {"w", 1.0}}}},
                            {"norm", "inf"},
                            {"eps", 0.5}};
  const MarkMeasure nu = measure_from_json(j);
  CHECK(nu.dim() == 2);
  CHECK(std::isinf(nu.norm_exponent()));
  CHECK(nu.total_mass() == doctest::Approx(2.0));
  const MarkMeasure back = measure_from_json(measure_to_json(nu));
  CHECK(back.total_mass() == nu.total_mass());
  CHECK(back.atoms().size() == nu.atoms().size());
}

TEST_CASE("path csv export") {
  PrmPath p;
  p.horizon = 1.0;
  p.times = {0.25, 0.5};
  p.marks = {1.0, -2.0};
  std::ostringstream out;
  write_path_csv(out, p);
  const std::string s = out.str();
  CHECK(s.find("0.25") != std::string::npos);
  CHECK(s.find("-2") != std::string::npos);
}

}  // TEST_SUITE
