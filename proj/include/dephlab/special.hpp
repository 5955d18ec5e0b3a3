#pragma once

#include <complex>

namespace dephlab {

// psi(x) for x > 0, accurate to ~1e-13.
double digamma(double x);

// Principal branch of log Gamma(z) for complex z (Lanczos + reflection).
std::complex<double> log_gamma(std::complex<double> z);

// coth(x) for x > 0, series near zero to avoid 1/x - 1/x cancellation.
double coth(double x);

// 1 - cos(x) computed as 2 sin^2(x/2); exact for small x.
double one_minus_cos(double x);

// cos(pi*s/2) * Gamma(s) and its derivative in s, with the removable
// point s = 0 handled on the sine side helpers below.
double cos_gamma(double s);
double cos_gamma_deriv(double s);
double sin_gamma(double s);        // finite at s = 0 (value pi/2)
double sin_gamma_deriv(double s);  // finite at s = 0 (value -pi/2 * euler_gamma)

inline constexpr double euler_gamma = 0.577215664901532860606512090082;

}  // namespace dephlab
