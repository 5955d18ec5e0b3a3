#include "dephlab/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dephlab/dephasing.hpp"
#include "dephlab/special.hpp"

namespace dephlab {

double d0(const QubitPreparation& prep) {
  if (!(prep.omega0 > 0.0)) throw std::domain_error("d0: omega0 must be positive");
  if (prep.T_prep < 0.0) throw std::domain_error("d0: negative temperature");
  if (std::fabs(prep.z) > 1.0) throw std::domain_error("d0: |z| must be <= 1");
  if (std::fabs(prep.z) == 1.0) return 0.0;
  const double x = (prep.T_prep > 0.0)
                       ? prep.omega0 / prep.T_prep
                       : std::numeric_limits<double>::infinity();
  if (x > 40.0) return 2.0 * (1.0 + prep.z);
  const double th = std::tanh(x);
  return 2.0 * (1.0 + prep.z * (th - prep.z) / (1.0 - prep.z * th));
}

double moment_diff(const SpectralModel& m, double t, const QuadratureOptions& opts,
                   bool force_quadrature, std::optional<double> eta1_hint) {
  if (t < 0.0) throw std::domain_error("moment_diff: negative time");
  const double wmax = m.truncation_frequency(opts.rel_tolerance);
  if (t * wmax < 1.0) {
    // single-signed integrand; avoids the eta1 - Lambda cancellation
    auto f = [&](double w) { return m.over_omega(w) * one_minus_cos(w * t); };
    return integrate_moment(f, m.alpha0() + 2.0, wmax, opts).value;
  }
  double eta1;
  if (eta1_hint) {
    eta1 = *eta1_hint;
  } else if (!force_quadrature && m.closed_form_eta1()) {
    eta1 = *m.closed_form_eta1();
  } else {
    eta1 = m.moment_eta1(opts).value;
  }
  DephasingState s = make_state(m, 0.0, opts, force_quadrature);
  return eta1 - lambda_of_t(s, t);
}

double energy_increment(const QubitPreparation& prep, const SpectralModel& m,
                        double t, const QuadratureOptions& opts,
                        bool force_quadrature, std::optional<double> eta1_hint) {
  return d0(prep) * moment_diff(m, t, opts, force_quadrature, eta1_hint);
}

ShortTimeCoefficient short_time_coefficient(const QubitPreparation& prep,
                                            const SpectralModel& m,
                                            const QuadratureOptions& opts) {
  const MomentResult mom = m.moment_omega1(opts);
  return {0.5 * d0(prep) * mom.value, mom.short_time_law_ok};
}

EnergyTrajectory bath_energy(const QubitPreparation& prep, const SpectralModel& m,
                             const std::vector<double>& times,
                             const QuadratureOptions& opts,
                             std::optional<double> initial_absolute) {
  EnergyTrajectory traj;
  traj.times = times;
  traj.initial_absolute = initial_absolute;
  const double weight = d0(prep);
  const double eta1 = m.moment_eta1(opts).value;
  traj.asymptote_delta = weight * eta1;
  traj.bath_delta.reserve(times.size());
  traj.system_corr_delta.reserve(times.size());
  for (double t : times) {
    const double dE = weight * moment_diff(m, t, opts, false, eta1);
    traj.bath_delta.push_back(dE);
    traj.system_corr_delta.push_back(-dE);
  }
  return traj;
}

double bath_energy_initial(const SpectralModel& m, double temperature,
                           const ModeDensity& density,
                           const QuadratureOptions& opts) {
  if (temperature < 0.0)
    throw std::domain_error("bath_energy_initial: negative temperature");
  const double eta1 = m.moment_eta1(opts).value;
  if (temperature == 0.0) return eta1;
  if (!density.r)
    throw std::domain_error("bath_energy_initial: mode density required");
  const double L = std::log(1.0 / std::max(opts.rel_tolerance, 1e-300));
  double wmax = temperature * (L + 3.0 * std::log(L + 2.718281828459045));
  if (density.cutoff > 0.0) wmax = std::min(wmax, density.cutoff);
  auto f = [&](double w) { return w * density.r(w) / std::expm1(w / temperature); };
  const double thermal = integrate_moment(f, 1.0, wmax, opts).value;
  return thermal + eta1;
}

}  // namespace dephlab
