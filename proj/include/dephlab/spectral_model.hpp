#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dephlab/quadrature.hpp"

namespace dephlab {

enum class SpectralClass {
  Class1,          // user expansion, natural log powers
  Class2,          // user expansion, real log powers
  ExpCutoff,       // lambda * wc * (w/wc)^alpha * exp(-w/wc)
  FiniteSupport,   // lambda * wc * (w/wc)^alpha on [0, wc]
  LogExpCutoff,    // scaled nu^alpha * exp(-nu) * ln(1+1/nu)^q
};

// One term of the scaled low-frequency expansion:
//   c * nu^exponent * (-ln nu)^log_power,  nu = omega / omega_s.
struct ExpansionTerm {
  double exponent = 0.0;
  double log_power = 0.0;
  double coeff = 0.0;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed = true;
  // set when a check relies on smoothness/uniformity assumptions that are
  // sampled on a grid rather than proven
  bool conditions_assumed = false;
};

struct MomentResult {
  double value = 0.0;
  // false when the high-frequency decay is too slow for the quadratic
  // short-time law to hold; the number itself is still the integral
  bool short_time_law_ok = true;
};

struct ModeGrid {
  std::vector<double> frequencies;
  std::vector<double> weights;    // trapezoid weights
  std::vector<double> couplings;  // weight * J(frequency)
  double origin_over = 0.0;       // weight * lim J/omega at the origin node
  // origin node dropped because J/omega diverges there
  bool singular_origin = false;

  double eta1_sum() const;
  double lambda_sum(double t) const;
};

class SpectralModel {
 public:
  static SpectralModel exp_cutoff(double alpha0, double lambda, double omega_c,
                                  double omega_s = 0.0);
  static SpectralModel finite_support(double alpha0, double lambda, double omega_c,
                                      double omega_s = 0.0);
  static SpectralModel log_exp_cutoff(double alpha0, double log_power,
                                      double lambda, double omega_s);
  // user-supplied low-frequency expansion realized with an exp(-nu) envelope;
  // terms are the declared leading behaviours (exponent, log_power, coeff)
  static SpectralModel from_terms(SpectralClass cls,
                                  std::vector<ExpansionTerm> declared,
                                  double omega_s, double high_freq_decay);

  double evaluate(double omega) const;        // J(omega)
  double over_omega(double omega) const;      // J(omega)/omega with 0+ limit
  double evaluate_thermal(double omega, double temperature) const;

  SpectralClass cls() const { return cls_; }
  double omega_s() const { return omega_s_; }
  double omega_c() const { return omega_c_; }
  double amplitude() const { return lambda_; }
  double alpha0() const;
  double log_power0() const;
  double high_freq_decay() const { return chi0_; }
  bool compact_support() const { return cls_ == SpectralClass::FiniteSupport; }
  double support_max() const;

  // merged low-frequency expansion in nu = omega/omega_s, sorted by exponent
  // (ties by descending log power), envelope-induced terms included
  const std::vector<ExpansionTerm>& low_freq_terms() const { return terms_; }
  const std::vector<ExpansionTerm>& declared_terms() const { return declared_; }

  // truncation point for semi-infinite quadratures at this tolerance
  double truncation_frequency(double rel_tolerance) const;

  MomentResult moment_eta1(const QuadratureOptions& opts = {}) const;
  MomentResult moment_omega1(const QuadratureOptions& opts = {}) const;
  std::optional<double> closed_form_eta1() const;
  std::optional<double> closed_form_omega1() const;

  ValidationReport validate(const QuadratureOptions& opts = {}) const;

  ModeGrid discretize_modes(std::size_t count, double omega_max) const;

 private:
  SpectralModel() = default;

  SpectralClass cls_ = SpectralClass::ExpCutoff;
  double lambda_ = 0.0;
  double omega_c_ = 0.0;
  double omega_s_ = 0.0;
  double chi0_ = 0.0;
  double alpha0_param_ = 0.0;  // canonical families
  double q_param_ = 0.0;       // LogExpCutoff
  std::vector<ExpansionTerm> declared_;
  std::vector<ExpansionTerm> terms_;

  void build_terms();
};

// groups terms_ by exponent: exponent, max log power, coefficient at that power
struct ExpansionGroup {
  double exponent = 0.0;
  double log_power = 0.0;
  double lead_coeff = 0.0;
};
std::vector<ExpansionGroup> group_terms(const std::vector<ExpansionTerm>& terms);

}  // namespace dephlab
