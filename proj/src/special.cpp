#include "dephlab/special.hpp"

#include <cmath>
#include <stdexcept>

namespace dephlab {

namespace {

constexpr double pi = 3.141592653589793238462643383279503;

// Bernoulli tail of the asymptotic series for psi.
double digamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  static const double coeff[] = {
      1.0 / 12.0,    -1.0 / 120.0,     1.0 / 252.0,  -1.0 / 240.0,
      1.0 / 132.0,   -691.0 / 32760.0, 1.0 / 12.0,
  };
  double p = inv2;
  for (double c : coeff) {
    series += c * p;
    p *= inv2;
  }
  return std::log(x) - 0.5 * inv - series;
}

}  // namespace

double digamma(double x) {
  if (!std::isfinite(x)) throw std::domain_error("digamma: non-finite argument");
  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("digamma: pole at non-positive integer");
  if (x < 0.0) return digamma(1.0 - x) - pi / std::tan(pi * x);
  double acc = 0.0;
  while (x < 8.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  return acc + digamma_asymptotic(x);
}

std::complex<double> log_gamma(std::complex<double> z) {
  static const double lanczos[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
  };
  if (z.real() < 0.5) {
    // reflection; keeps the strip Re z in (0,1) usable from both sides
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  std::complex<double> x = lanczos[0];
  for (int i = 1; i < 9; ++i) x += lanczos[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double coth(double x) {
  if (x <= 0.0) throw std::domain_error("coth: argument must be positive");
  if (x < 1e-2) {
    const double x2 = x * x;
    return 1.0 / x + x * (1.0 / 3.0 - x2 / 45.0);
  }
  return 1.0 + 2.0 / std::expm1(2.0 * x);
}

double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

double cos_gamma(double s) { return std::cos(0.5 * pi * s) * std::tgamma(s); }

double cos_gamma_deriv(double s) {
  return std::tgamma(s) *
         (std::cos(0.5 * pi * s) * digamma(s) - 0.5 * pi * std::sin(0.5 * pi * s));
}

double sin_gamma(double s) {
  if (std::fabs(s) < 1e-6) {
    // sin(pi s/2) Gamma(s) = (pi/2)(1 - euler_gamma s + ...)
    return 0.5 * pi * (1.0 - euler_gamma * s);
  }
  return std::sin(0.5 * pi * s) * std::tgamma(s);
}

double sin_gamma_deriv(double s) {
  if (std::fabs(s) < 1e-6) {
    const double c2 = 0.5 * euler_gamma * euler_gamma + pi * pi / 24.0;
    return 0.5 * pi * (-euler_gamma + 2.0 * c2 * s);
  }
  return std::tgamma(s) *
         (std::sin(0.5 * pi * s) * digamma(s) + 0.5 * pi * std::cos(0.5 * pi * s));
}

}  // namespace dephlab
