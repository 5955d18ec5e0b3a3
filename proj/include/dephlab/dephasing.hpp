#pragma once

#include <optional>

#include "dephlab/spectral_model.hpp"

namespace dephlab {

struct DephasingState {
  SpectralModel model;
  double temperature = 0.0;       // 0 means strict vacuum
  QuadratureOptions quad;
  bool force_quadrature = false;  // skip closed-form fast paths

  // true when the decoherence exponent grows without bound (thermal bath with
  // alpha0 <= 1); coherence still evaluates, it just tends to zero
  bool xi_unbounded() const;
};

DephasingState make_state(SpectralModel model, double temperature,
                          QuadratureOptions quad = {}, bool force_quadrature = false);

// real part of the bath correlation transform: integral of J/w * cos(wt)
double lambda_of_t(const DephasingState& s, double t);

// vacuum dephasing rate: integral of J/w * sin(wt)
double gamma0(const DephasingState& s, double t);

// thermal dephasing rate: same with the tanh-reciprocal occupation factor
double gammaT(const DephasingState& s, double t);

// dispatches on the state's temperature
double gamma(const DephasingState& s, double t);

// decoherence exponent: 2 * integral of J_T/w^2 * (1 - cos(wt))
double xi_of_t(const DephasingState& s, double t);

double coherence(const DephasingState& s, double t);

// closed forms for the exponential-cutoff family (any alpha0 > 0); empty for
// other families
std::optional<double> closed_form_lambda(const SpectralModel& m, double t);
std::optional<double> closed_form_gamma0(const SpectralModel& m, double t);
std::optional<double> closed_form_xi0(const SpectralModel& m, double t);
// finite-support family at alpha0 == 1 has an elementary transform as well
std::optional<double> closed_form_lambda_compact(const SpectralModel& m, double t);

}  // namespace dephlab
