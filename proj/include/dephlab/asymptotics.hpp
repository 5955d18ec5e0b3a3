#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dephlab/energy.hpp"
#include "dephlab/spectral_model.hpp"

namespace dephlab {

// one tail contribution C * tau^(-power) * ln(tau)^log_power, tau = omega_s * t
struct TailTerm {
  double coeff = 0.0;
  double power = 0.0;
  double log_power = 0.0;
};

// Long-time tail of \int f(nu) kernel(nu tau) dnu for f ~ sum c nu^(a-1) ln(1/nu)^n,
// with exponent fields of the input meaning a. Terms whose kernel factor
// vanishes at odd (cosine) or even (sine) naturals drop to their log-derivative
// residue; terms with nothing left are skipped.
std::vector<TailTerm> oscillatory_tail(const std::vector<ExpansionTerm>& f_terms,
                                       Kernel kernel);

// f-expansion of J/omega in nu units (exponent field = a)
std::vector<ExpansionTerm> rate_integrand_terms(const SpectralModel& m);
// same for the thermal rate integrand, coth factor expanded about the origin
std::vector<ExpansionTerm> thermal_rate_integrand_terms(const SpectralModel& m,
                                                        double temperature);

struct IndexSelection {
  std::size_t k1 = 0;
  std::optional<std::size_t> k0;  // replacement index when the lead term dies
  std::optional<std::size_t> k2;  // next surviving index after k1
  bool k0_required = false;
  bool refused = false;
  std::string reason;
};
IndexSelection select_indices(const SpectralModel& m);

class ExpansionRefused : public std::runtime_error {
 public:
  explicit ExpansionRefused(const std::string& what) : std::runtime_error(what) {}
};

struct LongTimeExpansion {
  std::vector<TailTerm> terms;  // of eps_E(t) - eps_E(infinity)
  IndexSelection indices;
  std::string source_case;      // which structural case produced the lead term
  bool decay_conditions_ok = true;
  std::vector<std::string> notes;
};
// throws ExpansionRefused when no listed term survives the kernel
LongTimeExpansion long_time_expansion(const QubitPreparation& prep,
                                      const SpectralModel& m);

struct ShortTimeExpansion {
  TailTerm term;           // power is -2: the quadratic growth law
  bool law_applies = true;
};
ShortTimeExpansion short_time_expansion(const QubitPreparation& prep,
                                        const SpectralModel& m,
                                        const QuadratureOptions& opts = {});

enum class EnergyRegime { LongTimeIncrease, LongTimeDecrease, Constant, Refused };

struct RegimeResult {
  EnergyRegime regime = EnergyRegime::Constant;
  double leading_coeff = 0.0;  // of eps_E(t) - eps_E(inf)
  // the piecewise alpha-interval reading; empty when no interval rule applies
  std::optional<bool> interval_rule_increase;
  bool interval_rule_differs = false;
  std::string note;
};
RegimeResult classify_energy_regime(const QubitPreparation& prep,
                                    const SpectralModel& m);

const char* to_string(EnergyRegime r);

// Mellin transform of the decaying kernel K(tau) = Lambda(tau/omega_s)/omega_s.
struct MellinStrip {
  double lower = 0.0;
  double upper = 1.0;
};
MellinStrip mellin_strip(const SpectralModel& m);

class MellinPoleError : public std::runtime_error {
 public:
  MellinPoleError(const std::string& what, int order)
      : std::runtime_error(what), order_(order) {}
  int order() const { return order_; }

 private:
  int order_;
};

// closed form, exponential-cutoff family only
std::complex<double> mellin_K(const SpectralModel& m, std::complex<double> s);
// direct numerical transform of the closed-form kernel
std::complex<double> mellin_K_numeric(const SpectralModel& m,
                                      std::complex<double> s,
                                      const QuadratureOptions& opts = {});
// |Khat| along the vertical midline of the strip (diagnostic)
std::vector<double> mellin_decay_profile(const SpectralModel& m, int n_points);

}  // namespace dephlab
