#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "dephlab/special.hpp"

using namespace dephlab;

TEST_CASE("digamma matches reference values") {
  CHECK(digamma(1.0) == doctest::Approx(-0.577215664901532861).epsilon(1e-13));
  CHECK(digamma(0.5) == doctest::Approx(-1.96351002602142348).epsilon(1e-13));
  CHECK(digamma(0.3) == doctest::Approx(-3.50252422220013299).epsilon(1e-13));
  CHECK(digamma(5.0) == doctest::Approx(1.50611766843180047).epsilon(1e-13));
  CHECK(digamma(12.75) == doctest::Approx(2.50580327640135547).epsilon(1e-13));
  CHECK(digamma(-1.5) == doctest::Approx(0.703156640645243187).epsilon(1e-12));
}

TEST_CASE("digamma rejects poles") {
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(digamma(-3.0), std::domain_error);
}

TEST_CASE("log_gamma agrees with reference on and off the axis") {
  auto check = [](std::complex<double> z, double re, double im) {
    const auto v = log_gamma(z);
    CHECK(v.real() == doctest::Approx(re).epsilon(1e-12));
    // branch choice is free for Re z < 0.5; compare modulo 2 pi
    const double two_pi = 6.283185307179586476925286766559;
    CHECK(std::remainder(v.imag() - im, two_pi) ==
          doctest::Approx(0.0).epsilon(1e-11));
  };
  check({2.5, 1.7}, -0.360788766447576625, 1.35971241756883438);
  check({0.25, -0.75}, -0.169725085677072986, 1.33964344299236025);
  check({-3.2, 0.4}, -1.42362519066919073, -11.1774464072730851);
  // real axis consistency with lgamma
  for (double x : {0.3, 1.0, 2.0, 7.5, 41.0}) {
    CHECK(log_gamma({x, 0.0}).real() ==
          doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    CHECK(log_gamma({x, 0.0}).imag() == doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("coth is continuous across the series crossover") {
  // just below the crossover the series must match the exact form in place
  const double x = 1e-2 * (1 - 1e-9);
  const double exact = 1.0 + 2.0 / std::expm1(2.0 * x);
  CHECK(coth(x) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(coth(1e-8) == doctest::Approx(1e8).epsilon(1e-12));
  CHECK(coth(2.0) == doctest::Approx(1.0 / std::tanh(2.0)).epsilon(1e-15));
}

TEST_CASE("one_minus_cos is exact for tiny arguments") {
  CHECK(one_minus_cos(1e-8) == doctest::Approx(0.5e-16).epsilon(1e-12));
  CHECK(one_minus_cos(2.0) == doctest::Approx(1.0 - std::cos(2.0)).epsilon(1e-15));
  CHECK(one_minus_cos(0.0) == 0.0);
}

TEST_CASE("kernel gamma combinations and derivatives") {
  const double pi = 3.14159265358979323846;
  // cos branch: zero at s = 1 with slope -pi/2
  CHECK(cos_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(cos_gamma_deriv(1.0) == doctest::Approx(-pi / 2).epsilon(1e-12));
  CHECK(cos_gamma(2.0) == doctest::Approx(-1.0).epsilon(1e-13));
  // sin branch: finite continuation at s = 0
  CHECK(sin_gamma(0.0) == doctest::Approx(pi / 2).epsilon(1e-13));
  CHECK(sin_gamma_deriv(0.0) ==
        doctest::Approx(-0.90668824619580175).epsilon(1e-11));
  CHECK(sin_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(sin_gamma_deriv(2.0) == doctest::Approx(-pi / 2).epsilon(1e-12));
  // generic point cross-check against the definition
  const double s = 2.5;
  CHECK(cos_gamma(s) ==
        doctest::Approx(std::cos(pi * s / 2) * std::tgamma(s)).epsilon(1e-13));
  CHECK(sin_gamma(s) ==
        doctest::Approx(std::sin(pi * s / 2) * std::tgamma(s)).epsilon(1e-13));
  // derivative identity by central difference away from special points
  const double h = 1e-6;
  CHECK(cos_gamma_deriv(s) ==
        doctest::Approx((cos_gamma(s + h) - cos_gamma(s - h)) / (2 * h))
            .epsilon(1e-8));
  CHECK(sin_gamma_deriv(s) ==
        doctest::Approx((sin_gamma(s + h) - sin_gamma(s - h)) / (2 * h))
            .epsilon(1e-8));
}

TEST_CASE("negative-argument continuation of the kernel combinations") {
  const double pi = 3.14159265358979323846;
  const double s = -0.5;
  CHECK(sin_gamma(s) ==
        doctest::Approx(std::sin(pi * s / 2) * std::tgamma(s)).epsilon(1e-13));
  CHECK(cos_gamma(s) ==
        doctest::Approx(std::cos(pi * s / 2) * std::tgamma(s)).epsilon(1e-13));
}
