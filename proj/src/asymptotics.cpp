#include "dephlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dephlab/dephasing.hpp"
#include "dephlab/special.hpp"

namespace dephlab {

namespace {

constexpr double pi = 3.141592653589793238462643383279503;
constexpr double odd_tol = 1e-9;

bool is_natural(double x, double tol = odd_tol) {
  return x > -tol && std::fabs(x - std::round(x)) <= tol;
}

bool is_odd_natural(double x) {
  if (!is_natural(x)) return false;
  const long n = std::lround(x);
  return n >= 1 && (n % 2 == 1);
}

bool is_even_natural_ge2(double x) {
  if (!is_natural(x)) return false;
  const long n = std::lround(x);
  return n >= 2 && (n % 2 == 0);
}

bool has_log(double n) { return std::fabs(n) > 1e-12; }

// kernel transform factor and its s-derivative
double kfac(Kernel k, double a) {
  return (k == Kernel::Cosine) ? cos_gamma(a) : sin_gamma(a);
}
double kfac_deriv(Kernel k, double a) {
  return (k == Kernel::Cosine) ? cos_gamma_deriv(a) : sin_gamma_deriv(a);
}

bool kernel_kills(Kernel k, double a) {
  if (k == Kernel::Cosine) return is_odd_natural(a);
  return is_even_natural_ge2(a);
}

}  // namespace

std::vector<TailTerm> oscillatory_tail(const std::vector<ExpansionTerm>& f_terms,
                                       Kernel kernel) {
  std::vector<TailTerm> raw;
  for (const auto& t : f_terms) {
    if (t.coeff == 0.0) continue;
    const double a = t.exponent;
    const double n = t.log_power;
    if (kernel_kills(kernel, a)) {
      if (!has_log(n)) continue;  // nothing survives from this term
      const double ar = std::round(a);
      raw.push_back({-t.coeff * n * kfac_deriv(kernel, ar), a, n - 1.0});
    } else {
      raw.push_back({t.coeff * kfac(kernel, a), a, n});
      if (has_log(n))
        raw.push_back({-t.coeff * n * kfac_deriv(kernel, a), a, n - 1.0});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const TailTerm& x, const TailTerm& y) {
    if (std::fabs(x.power - y.power) > 1e-9) return x.power < y.power;
    return x.log_power > y.log_power;
  });
  std::vector<TailTerm> merged;
  double scale = 0.0;
  for (const auto& t : raw) {
    scale = std::max(scale, std::fabs(t.coeff));
    if (!merged.empty() && std::fabs(merged.back().power - t.power) <= 1e-9 &&
        std::fabs(merged.back().log_power - t.log_power) <= 1e-9) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [scale](const TailTerm& t) {
    return std::fabs(t.coeff) <= 1e-13 * scale;
  });
  return merged;
}

std::vector<ExpansionTerm> rate_integrand_terms(const SpectralModel& m) {
  // J/omega ~ sum c nu^(alpha-1) ln^n, so the f-exponent equals alpha
  return m.low_freq_terms();
}

std::vector<ExpansionTerm> thermal_rate_integrand_terms(const SpectralModel& m,
                                                        double temperature) {
  if (!(temperature > 0.0))
    throw std::domain_error("thermal_rate_integrand_terms: T must be positive");
  const double theta = temperature / m.omega_s();
  std::vector<ExpansionTerm> out;
  for (const auto& t : m.low_freq_terms()) {
    out.push_back({t.exponent - 1.0, t.log_power, 2.0 * theta * t.coeff});
    out.push_back({t.exponent + 1.0, t.log_power, t.coeff / (6.0 * theta)});
    out.push_back(
        {t.exponent + 3.0, t.log_power, -t.coeff / (360.0 * theta * theta * theta)});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (std::fabs(x.exponent - y.exponent) > 1e-12) return x.exponent < y.exponent;
    return x.log_power > y.log_power;
  });
  return out;
}

IndexSelection select_indices(const SpectralModel& m) {
  const auto groups = group_terms(m.low_freq_terms());
  IndexSelection sel;
  const bool lead_dies =
      is_odd_natural(groups.front().exponent) && !has_log(groups.front().log_power);
  sel.k0_required = lead_dies;
  if (lead_dies) {
    for (std::size_t j = 1; j < groups.size(); ++j) {
      if (!(is_odd_natural(groups[j].exponent) && !has_log(groups[j].log_power))) {
        sel.k0 = j;
        break;
      }
    }
    if (!sel.k0) {
      sel.refused = true;
      sel.reason =
          "leading power is an odd natural without a log factor and no listed "
          "subleading term survives the cosine kernel";
      return sel;
    }
    sel.k1 = *sel.k0;
  } else {
    sel.k1 = 0;
  }
  for (std::size_t j = sel.k1 + 1; j < groups.size(); ++j) {
    if (!(is_odd_natural(groups[j].exponent) && !has_log(groups[j].log_power))) {
      sel.k2 = j;
      break;
    }
  }
  return sel;
}

LongTimeExpansion long_time_expansion(const QubitPreparation& prep,
                                      const SpectralModel& m) {
  LongTimeExpansion ex;
  ex.indices = select_indices(m);
  if (ex.indices.refused) throw ExpansionRefused(ex.indices.reason);

  const double weight = d0(prep);
  const auto groups = group_terms(m.low_freq_terms());
  const auto& lead = groups[ex.indices.k1];
  const bool lead_odd = is_odd_natural(lead.exponent);
  const bool lead_log = has_log(lead.log_power);
  if (m.cls() == SpectralClass::Class2 && !is_natural(lead.log_power))
    ex.source_case = "real-log-power";
  else if (ex.indices.k0)
    ex.source_case = "via-next-term";
  else if (lead_odd && lead_log)
    ex.source_case = "odd-with-log";
  else if (lead_log)
    ex.source_case = "log-modulated";
  else
    ex.source_case = "plain-power";

  if (weight == 0.0) {
    ex.notes.push_back("zero displacement weight; energy stays constant");
    return ex;
  }

  auto tail = oscillatory_tail(rate_integrand_terms(m), Kernel::Cosine);
  if (tail.empty())
    throw ExpansionRefused("no listed term survives the cosine kernel");
  const double ws = m.omega_s();
  // eps_E(t) - eps_E(inf) = -d0 * Lambda(t), Lambda = ws * K(ws t)
  for (auto& t : tail) t.coeff *= -weight * ws;
  if (tail.size() > 4) tail.resize(4);
  ex.terms = std::move(tail);

  if (m.cls() == SpectralClass::FiniteSupport && m.alpha0() > 1.0 + odd_tol) {
    ex.decay_conditions_ok = false;
    ex.notes.push_back(
        "compact support: endpoint oscillations decay like 1/t and overtake "
        "the origin expansion; terms below are the formal origin series");
  }
  if (m.cls() == SpectralClass::Class1 || m.cls() == SpectralClass::Class2)
    ex.notes.push_back("envelope realization assumed smooth beyond listed orders");
  return ex;
}

ShortTimeExpansion short_time_expansion(const QubitPreparation& prep,
                                        const SpectralModel& m,
                                        const QuadratureOptions& opts) {
  const auto c = short_time_coefficient(prep, m, opts);
  ShortTimeExpansion ex;
  ex.term = {c.value, -2.0, 0.0};
  ex.law_applies = c.law_applies;
  return ex;
}

namespace {

// piecewise interval reading: energy relaxes from below on (0,1) and on
// (3+4n, 5+4n); odd lead powers defer to the replacement index with a
// half-open right edge; odd powers with logs relax from below at 1+4l
bool interval_increase_plain(double a) {
  if (a < 1.0) return true;
  for (int n = 0; 3.0 + 4.0 * n < a + 1.0; ++n)
    if (a > 3.0 + 4.0 * n && a < 5.0 + 4.0 * n) return true;
  return false;
}

bool interval_increase_half_open(double a) {
  for (int n = 0; 3.0 + 4.0 * n < a + 1.0; ++n)
    if (a > 3.0 + 4.0 * n && a <= 5.0 + 4.0 * n) return true;
  return false;
}

std::optional<bool> interval_rule(const SpectralModel& m,
                                  const IndexSelection& sel) {
  const auto groups = group_terms(m.low_freq_terms());
  const double a0 = groups.front().exponent;
  const double n0 = groups.front().log_power;
  if (!is_natural(n0)) return std::nullopt;  // outside the tabulated classes
  if (!is_odd_natural(a0)) return interval_increase_plain(a0);
  if (!has_log(n0)) {
    if (!sel.k0) return std::nullopt;
    return interval_increase_half_open(groups[*sel.k0].exponent);
  }
  const double l = (a0 - 1.0) / 4.0;
  return is_natural(l, 1e-9);
}

}  // namespace

RegimeResult classify_energy_regime(const QubitPreparation& prep,
                                    const SpectralModel& m) {
  RegimeResult res;
  if (d0(prep) == 0.0) {
    res.regime = EnergyRegime::Constant;
    res.note = "zero displacement weight";
    return res;
  }
  LongTimeExpansion ex;
  try {
    ex = long_time_expansion(prep, m);
  } catch (const ExpansionRefused& e) {
    res.regime = EnergyRegime::Refused;
    res.note = e.what();
    return res;
  }
  res.leading_coeff = ex.terms.front().coeff;
  res.regime = (res.leading_coeff < 0.0) ? EnergyRegime::LongTimeIncrease
                                         : EnergyRegime::LongTimeDecrease;
  res.interval_rule_increase = interval_rule(m, ex.indices);
  if (res.interval_rule_increase) {
    const bool inc = res.regime == EnergyRegime::LongTimeIncrease;
    res.interval_rule_differs = (*res.interval_rule_increase != inc);
    if (res.interval_rule_differs)
      res.note =
          "coefficient sign disagrees with the alpha-interval reading; "
          "a negative subleading expansion coefficient flips the tabulated "
          "direction here";
  }
  return res;
}

const char* to_string(EnergyRegime r) {
  switch (r) {
    case EnergyRegime::LongTimeIncrease: return "increase";
    case EnergyRegime::LongTimeDecrease: return "decrease";
    case EnergyRegime::Constant: return "constant";
    default: return "refused";
  }
}

MellinStrip mellin_strip(const SpectralModel& m) {
  return {0.0, std::min(1.0, m.alpha0())};
}

std::complex<double> mellin_K(const SpectralModel& m, std::complex<double> s) {
  if (m.cls() != SpectralClass::ExpCutoff)
    throw std::domain_error("mellin_K: closed form needs the exp-cutoff family");
  const double a = m.alpha0();
  const double r = m.omega_s() / m.omega_c();
  const std::complex<double> rfac = std::pow(std::complex<double>(r, 0.0), s - 1.0);

  auto near_nonpos_int = [](std::complex<double> z, double tol) {
    return std::fabs(z.imag()) < tol && z.real() < 0.5 &&
           std::fabs(z.real() - std::round(z.real())) < tol;
  };
  if (near_nonpos_int(s, 1e-8))
    throw MellinPoleError("mellin_K: Gamma(s) pole", 1);
  const std::complex<double> arg = std::complex<double>(a, 0.0) - s;
  if (near_nonpos_int(arg, 1e-8)) {
    // cos(pi s/2) cancels the pole when s sits at an odd natural
    const double p = std::round(s.real());
    if (std::fabs(s.imag()) < 1e-8 && is_odd_natural(p)) {
      const long k = std::lround(p - a);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const double limit =
          0.5 * pi * std::sin(0.5 * pi * p) * sign / std::tgamma(double(k + 1));
      return m.amplitude() * std::tgamma(p) * limit * std::pow(r, p - 1.0);
    }
    throw MellinPoleError("mellin_K: Gamma(alpha - s) pole", 1);
  }
  const std::complex<double> val =
      std::cos(0.5 * pi * s) * std::exp(log_gamma(s) + log_gamma(arg));
  return m.amplitude() * val * rfac;
}

std::complex<double> mellin_K_numeric(const SpectralModel& m,
                                      std::complex<double> s,
                                      const QuadratureOptions& opts) {
  if (m.cls() != SpectralClass::ExpCutoff)
    throw std::domain_error("mellin_K_numeric: needs the exp-cutoff family");
  const double sigma = s.real();
  const MellinStrip strip = mellin_strip(m);
  if (!(sigma > strip.lower && sigma < strip.upper))
    throw std::domain_error("mellin_K_numeric: Re(s) outside the strip");
  const double a = m.alpha0();
  const double ws = m.omega_s();
  const double ltol = std::log(std::max(opts.rel_tolerance, 1e-14));
  const double x_lo = (ltol - 4.0) / sigma;
  const double x_hi = (ltol - 4.0) / (sigma - a);
  auto f = [&](double x) -> std::complex<double> {
    const double tau = std::exp(x);
    const double K = *closed_form_lambda(m, tau / ws) / ws;
    return K * std::exp(s * x);
  };
  return integrate_complex(f, x_lo, x_hi, opts).value;
}

std::vector<double> mellin_decay_profile(const SpectralModel& m, int n_points) {
  const MellinStrip strip = mellin_strip(m);
  const double mid = 0.5 * (strip.lower + strip.upper);
  std::vector<double> out;
  out.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double y = -40.0 + 80.0 * double(i) / std::max(1, n_points - 1);
    try {
      out.push_back(std::abs(mellin_K(m, {mid, y})));
    } catch (const MellinPoleError&) {
      out.push_back(std::numeric_limits<double>::infinity());
    }
  }
  return out;
}

}  // namespace dephlab
