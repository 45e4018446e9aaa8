#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fhspec/rng.hpp"

using namespace fhspec;

TEST_CASE("same seed gives identical draw sequences; children are independent") {
  RngStream a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform();
    CHECK(ua == b.uniform());
    CHECK(ua > 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(a.uniform() != c.uniform());

  RngStream p(42);
  auto c1 = p.child("noise");
  auto c2 = p.child("noise");
  auto c3 = p.child("mask");
  CHECK(c1.uniform() == c2.uniform());
  CHECK(c1.seed() != c3.seed());
  CHECK(c1.seed() != p.seed());
}

TEST_CASE("child derivation ignores parent consumption") {
  RngStream p(42);
  const uint64_t before = p.child("x").seed();
  for (int i = 0; i < 17; ++i) p.raw();
  CHECK(p.child("x").seed() == before);
}

TEST_CASE("normal moments") {
  RngStream r(7);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::fabs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma moments, including tiny shapes via log space") {
  RngStream r(11);
  const int n = 100000;
  double s = 0;
  for (int i = 0; i < n; ++i) s += r.gamma(2.5, 2.0);  // mean shape/rate = 1.25
  CHECK(s / n == doctest::Approx(1.25).epsilon(0.03));

  // shape 1e-6: log draw must stay finite
  for (int i = 0; i < 1000; ++i) {
    const double lg = r.log_gamma(1e-6);
    CHECK(std::isfinite(lg));
  }
}

TEST_CASE("beta moments and logit consistency") {
  RngStream r(13);
  const int n = 100000;
  double s = 0;
  for (int i = 0; i < n; ++i) s += r.beta(2.0, 6.0);  // mean 0.25
  CHECK(s / n == doctest::Approx(0.25).epsilon(0.03));

  // tiny shapes: draws stay in [0,1] and are not NaN
  for (int i = 0; i < 2000; ++i) {
    const double x = r.beta(0.0159, 11.984);
    CHECK(std::isfinite(x));
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("uniform_int range and determinism") {
  RngStream r(3), r2(3);
  for (int i = 0; i < 1000; ++i) {
    const int v = r.uniform_int(7);
    CHECK(v >= 0);
    CHECK(v < 7);
    CHECK(v == r2.uniform_int(7));
  }
}
