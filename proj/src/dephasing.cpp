#include "dephlab/dephasing.hpp"

#include <cmath>
#include <stdexcept>

#include "dephlab/special.hpp"

namespace dephlab {

namespace {

bool is_exp_cutoff(const SpectralModel& m) {
  return m.cls() == SpectralClass::ExpCutoff;
}

double check_time(double t) {
  if (t < 0.0 || !std::isfinite(t))
    throw std::domain_error("dephasing: time must be finite and nonnegative");
  return t;
}

}  // namespace

bool DephasingState::xi_unbounded() const {
  return temperature > 0.0 && model.alpha0() <= 1.0 + 1e-9;
}

DephasingState make_state(SpectralModel model, double temperature,
                          QuadratureOptions quad, bool force_quadrature) {
  if (temperature < 0.0)
    throw std::domain_error("make_state: temperature must be >= 0");
  DephasingState s{std::move(model), temperature, quad, force_quadrature};
  return s;
}

std::optional<double> closed_form_lambda(const SpectralModel& m, double t) {
  if (!is_exp_cutoff(m)) return std::nullopt;
  const double u = m.omega_c() * t;
  const double a = m.alpha0();
  const double base = m.amplitude() * m.omega_c() * std::tgamma(a);
  return base * std::pow(1.0 + u * u, -0.5 * a) * std::cos(a * std::atan(u));
}

std::optional<double> closed_form_gamma0(const SpectralModel& m, double t) {
  if (!is_exp_cutoff(m)) return std::nullopt;
  const double u = m.omega_c() * t;
  const double a = m.alpha0();
  const double base = m.amplitude() * m.omega_c() * std::tgamma(a);
  return base * std::pow(1.0 + u * u, -0.5 * a) * std::sin(a * std::atan(u));
}

std::optional<double> closed_form_xi0(const SpectralModel& m, double t) {
  if (!is_exp_cutoff(m)) return std::nullopt;
  const double u = m.omega_c() * t;
  const double a = m.alpha0();
  if (std::fabs(a - 1.0) <= 1e-9)
    return m.amplitude() * std::log1p(u * u);
  const double g = std::tgamma(a - 1.0);  // continued through (0,1)
  const double damp =
      std::pow(1.0 + u * u, -0.5 * (a - 1.0)) * std::cos((a - 1.0) * std::atan(u));
  return 2.0 * m.amplitude() * g * (1.0 - damp);
}

std::optional<double> closed_form_lambda_compact(const SpectralModel& m, double t) {
  if (m.cls() != SpectralClass::FiniteSupport) return std::nullopt;
  if (std::fabs(m.alpha0() - 1.0) > 1e-12) return std::nullopt;
  const double u = m.omega_c() * t;
  const double base = m.amplitude() * m.omega_c();
  if (u == 0.0) return base;
  return base * std::sin(u) / u;
}

double lambda_of_t(const DephasingState& s, double t) {
  check_time(t);
  if (!s.force_quadrature) {
    if (auto v = closed_form_lambda(s.model, t)) return *v;
    if (auto v = closed_form_lambda_compact(s.model, t)) return *v;
  }
  WeightedIntegrand req;
  req.f = [&m = s.model](double w) { return m.over_omega(w); };
  req.kernel = Kernel::Cosine;
  req.t = t;
  req.endpoint_exponent = s.model.alpha0();
  req.omega_max = s.model.truncation_frequency(s.quad.rel_tolerance);
  req.opts = s.quad;
  return integrate_weighted(req).value;
}

double gamma0(const DephasingState& s, double t) {
  check_time(t);
  if (!s.force_quadrature)
    if (auto v = closed_form_gamma0(s.model, t)) return *v;
  WeightedIntegrand req;
  req.f = [&m = s.model](double w) { return m.over_omega(w); };
  req.kernel = Kernel::Sine;
  req.t = t;
  req.endpoint_exponent = s.model.alpha0();
  req.omega_max = s.model.truncation_frequency(s.quad.rel_tolerance);
  req.opts = s.quad;
  return integrate_weighted(req).value;
}

double gammaT(const DephasingState& s, double t) {
  check_time(t);
  if (!(s.temperature > 0.0))
    throw std::domain_error("gammaT: requires positive temperature");
  const double T = s.temperature;
  WeightedIntegrand req;
  req.f = [&m = s.model, T](double w) {
    return m.over_omega(w) * coth(w / (2.0 * T));
  };
  req.kernel = Kernel::Sine;
  req.t = t;
  req.endpoint_exponent = s.model.alpha0() - 1.0;
  req.omega_max = s.model.truncation_frequency(s.quad.rel_tolerance);
  req.opts = s.quad;
  return integrate_weighted(req).value;
}

double gamma(const DephasingState& s, double t) {
  return (s.temperature > 0.0) ? gammaT(s, t) : gamma0(s, t);
}

double xi_of_t(const DephasingState& s, double t) {
  check_time(t);
  if (t == 0.0) return 0.0;
  if (!s.force_quadrature && s.temperature == 0.0)
    if (auto v = closed_form_xi0(s.model, t)) return *v;

  const double T = s.temperature;
  auto F = [&m = s.model, T](double w) {
    const double base = m.over_omega(w) / w;
    return (T > 0.0) ? base * coth(w / (2.0 * T)) : base;
  };
  // F ~ w^(aF - 1) near the origin
  const double aF = s.model.alpha0() - (T > 0.0 ? 2.0 : 1.0);
  const double wmax = s.model.truncation_frequency(s.quad.rel_tolerance);

  auto positive_piece = [&](double hi) {
    auto f = [&](double w) { return F(w) * one_minus_cos(w * t); };
    return integrate_moment(f, aF + 2.0, hi, s.quad).value;
  };

  const double w0 = 1.0 / t;
  if (w0 >= 0.5 * wmax) return 2.0 * positive_piece(wmax);

  // below w0 the integrand has no oscillation to exploit and the 1 - cos
  // difference must be taken before integrating; above w0 split it
  const double head = positive_piece(w0);

  WeightedIntegrand mom;
  mom.f = F;
  mom.kernel = Kernel::None;
  mom.omega_min = w0;
  mom.omega_max = wmax;
  mom.opts = s.quad;
  const double tail_plain = integrate_weighted(mom).value;

  WeightedIntegrand osc = mom;
  osc.kernel = Kernel::Cosine;
  osc.t = t;
  const double tail_cos = integrate_weighted(osc).value;

  return 2.0 * (head + tail_plain - tail_cos);
}

double coherence(const DephasingState& s, double t) {
  return std::exp(-xi_of_t(s, t));
}

}  // namespace dephlab
