#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace dephlab {

enum class Kernel { None, Cosine, Sine };

struct QuadratureOptions {
  double rel_tolerance = 1e-10;
  std::size_t max_evaluations = 1000000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  std::string strategy;
};

// Thrown when the requested tolerance cannot be certified; carries the best
// partial answer so callers can degrade gracefully instead of silently.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const QuadratureResult& partial() const { return partial_; }

 private:
  QuadratureResult partial_;
};

struct WeightedIntegrand {
  std::function<double(double)> f;  // smooth factor, kernel applied internally
  Kernel kernel = Kernel::None;
  double t = 0.0;
  // f ~ omega^(a-1) near zero; a > 0 required for cosine/plain, a > -1 for sine
  double endpoint_exponent = 1.0;
  double omega_min = 0.0;   // lower end (nonzero skips the singular transform)
  double omega_max = 0.0;   // finite truncation or support end, required
  QuadratureOptions opts;
};

// \int_{omega_min}^{omega_max} f(w) * kernel(w t) dw
QuadratureResult integrate_weighted(const WeightedIntegrand& req);

// Plain positive-measure integral with an algebraic endpoint at zero.
QuadratureResult integrate_moment(const std::function<double(double)>& f,
                                  double endpoint_exponent, double omega_max,
                                  const QuadratureOptions& opts = {});

// Adaptive Gauss-Kronrod over a finite interval without endpoint treatment.
QuadratureResult integrate_plain(const std::function<double(double)>& f, double a,
                                 double b, const QuadratureOptions& opts = {});

// Complex-valued variant used by the Mellin transform checks.
struct ComplexResult {
  std::complex<double> value{0.0, 0.0};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};
ComplexResult integrate_complex(const std::function<std::complex<double>(double)>& f,
                                double a, double b, const QuadratureOptions& opts = {});

// Default truncation point for integrands with an exp(-w/wc) envelope and
// algebraic prefactor ~ w^alpha, scaled so the discarded tail sits well under
// the requested relative tolerance.
double exp_envelope_truncation(double omega_c, double alpha, double rel_tolerance);

struct QuadratureStatsSnapshot {
  std::size_t calls = 0;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
  std::size_t zero_partition = 0;
  std::size_t accelerated = 0;
  std::size_t adaptive = 0;
};
QuadratureStatsSnapshot quadrature_stats();
void reset_quadrature_stats();

}  // namespace dephlab
