// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "materials.hpp"

using namespace lcris;

TEST_CASE("endpoints and threshold") {
  const auto m = LcMaterial::gt7_29001();
  auto p = lc_permittivity(m, 0.0);
  CHECK(p.eps_r == 2.46);
  CHECK(p.tan_delta == 0.0116);
  p = lc_permittivity(m, m.v_threshold);
  CHECK(p.eps_r == 2.46);
  CHECK(p.tan_delta == 0.0116);
}

TEST_CASE("20 V is within 1% of eps_par") {
  const auto m = LcMaterial::gt7_29001();
  // Direct evaluation of the saturation curve as the oracle.
  const double s = 1.0 - std::exp(-(20.0 - 2.0) / 3.9);
  CHECK(s >= 0.99);
  const double eps = lc_permittivity(m, 20.0).eps_r;
  CHECK(eps == doctest::Approx(2.46 + 1.07 * s).epsilon(1e-14));
  CHECK(std::abs(eps / 3.53 - 1.0) < 0.01);
}

TEST_CASE("negative bias is a domain error") {
  CHECK_THROWS_AS(lc_permittivity(LcMaterial{}, -0.1), DomainError);
}

TEST_CASE("monotone and bounded on a dense grid") {
  const LcMaterial m;
  double prev = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double v = 100.0 * i / 10000.0;
    const auto p = lc_permittivity(m, v);
    CHECK(p.eps_r >= prev);
    CHECK(p.eps_r >= m.eps_perp);
    CHECK(p.eps_r <= m.eps_par);
    CHECK(p.tan_delta >= m.tan_par);
    CHECK(p.tan_delta <= m.tan_perp);
    prev = p.eps_r;
  }
}

TEST_CASE("inverse") {
  const LcMaterial m;
  CHECK(invert_permittivity(m, 2.46) == m.v_threshold);
  const double mid = 0.5 * (m.eps_perp + m.eps_par);
  CHECK(invert_permittivity(m, mid) == doctest::Approx(m.v_threshold + m.v_scale * std::log(2.0)).epsilon(1e-12));

  const double hi = m.eps_par * (1.0 - kInversionMargin);
  for (int i = 0; i < 100; ++i) {
    const double e = m.eps_perp + (hi - m.eps_perp) * i / 99.0;
    const double back = lc_permittivity(m, invert_permittivity(m, e)).eps_r;
    CHECK(std::abs(back / e - 1.0) < 1e-9);
  }
}

TEST_CASE("inverse out of range names the interval") {
  const LcMaterial m;
  CHECK_THROWS_AS(invert_permittivity(m, 2.0), RangeError);
  try {
    invert_permittivity(m, 3.53);
    FAIL("expected RangeError");
  } catch (const RangeError& e) {
    CHECK(std::string(e.what()).find("[2.46") != std::string::npos);
  }
}

TEST_CASE("response times") {
  const ResponseTimeBase b;
  auto r = response_times(b, 4.6e-6);
  CHECK(r.tau_on == doctest::Approx(15e-3));
  CHECK(r.tau_off == doctest::Approx(72e-3));
  r = response_times(b, 9.2e-6);
  CHECK(r.tau_on == doctest::Approx(60e-3));
  CHECK(r.tau_off == doctest::Approx(288e-3));
  for (double k : {0.3, 1.7, 2.0, 5.5}) {
    const double t = 3.1e-6;
    const double ratio = response_times(b, k * t).tau_on / response_times(b, t).tau_on;
    CHECK(ratio == doctest::Approx(k * k).epsilon(1e-14));
  }
  CHECK_THROWS_AS(response_times(b, 0.0), DomainError);
}

TEST_CASE("array power") {
  CHECK(array_power(21.5e-9, 1000000) == doctest::Approx(21.5e-3).epsilon(1e-15));
  CHECK(array_power(21.5e-9, 120) == doctest::Approx(2.58e-6).epsilon(1e-15));
  CHECK(array_power(3.25, 1) == 3.25);
  CHECK_THROWS_AS(array_power(1.0, 0), DomainError);
  CHECK_THROWS_AS(array_power(-1.0, 3), DomainError);
}

TEST_CASE("material validation") {
  LcMaterial m;
  m.eps_par = 2.0;
  CHECK_THROWS_AS(m.validate(), DomainError);
  StackMaterials s;
  s.t_gold = 0.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
}
