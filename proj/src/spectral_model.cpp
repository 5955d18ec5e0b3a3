#include "dephlab/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dephlab/special.hpp"

namespace dephlab {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double binom2(double q) { return 0.5 * q * (q - 1.0); }

bool near_integer(double x, double tol = 1e-9) {
  return std::fabs(x - std::round(x)) <= tol;
}

// induced expansion of c * nu^a * exp(-nu) * ln(1+1/nu)^q to relative depth 2
void push_induced(std::vector<ExpansionTerm>& out, double a, double q, double c) {
  out.push_back({a, q, c});
  out.push_back({a + 1.0, q, -c});
  out.push_back({a + 1.0, q - 1.0, q * c});
  out.push_back({a + 2.0, q, 0.5 * c});
  out.push_back({a + 2.0, q - 1.0, -1.5 * q * c});
  out.push_back({a + 2.0, q - 2.0, binom2(q) * c});
}

void merge_terms(std::vector<ExpansionTerm>& terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    if (std::fabs(x.exponent - y.exponent) > 1e-12) return x.exponent < y.exponent;
    return x.log_power > y.log_power;
  });
  std::vector<ExpansionTerm> merged;
  for (const auto& t : terms) {
    if (!merged.empty() &&
        std::fabs(merged.back().exponent - t.exponent) <= 1e-12 &&
        std::fabs(merged.back().log_power - t.log_power) <= 1e-12) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const ExpansionTerm& t) { return t.coeff == 0.0; });
  terms = std::move(merged);
}

}  // namespace

std::vector<ExpansionGroup> group_terms(const std::vector<ExpansionTerm>& terms) {
  std::vector<ExpansionGroup> groups;
  for (const auto& t : terms) {
    if (t.coeff == 0.0) continue;
    if (groups.empty() || t.exponent > groups.back().exponent + 1e-9)
      groups.push_back({t.exponent, t.log_power, t.coeff});
    // terms are sorted with the highest log power first within an exponent,
    // so later entries never replace the group leader
  }
  return groups;
}

SpectralModel SpectralModel::exp_cutoff(double alpha0, double lambda,
                                        double omega_c, double omega_s) {
  if (!(alpha0 > 0.0) || !(lambda > 0.0) || !(omega_c > 0.0))
    throw std::domain_error("exp_cutoff: alpha0, lambda, omega_c must be positive");
  SpectralModel m;
  m.cls_ = SpectralClass::ExpCutoff;
  m.alpha0_param_ = alpha0;
  m.lambda_ = lambda;
  m.omega_c_ = omega_c;
  m.omega_s_ = (omega_s > 0.0) ? omega_s : omega_c;
  m.chi0_ = inf;
  m.build_terms();
  return m;
}

SpectralModel SpectralModel::finite_support(double alpha0, double lambda,
                                            double omega_c, double omega_s) {
  if (!(alpha0 > 0.0) || !(lambda > 0.0) || !(omega_c > 0.0))
    throw std::domain_error(
        "finite_support: alpha0, lambda, omega_c must be positive");
  SpectralModel m;
  m.cls_ = SpectralClass::FiniteSupport;
  m.alpha0_param_ = alpha0;
  m.lambda_ = lambda;
  m.omega_c_ = omega_c;
  m.omega_s_ = (omega_s > 0.0) ? omega_s : omega_c;
  m.chi0_ = inf;
  m.build_terms();
  return m;
}

SpectralModel SpectralModel::log_exp_cutoff(double alpha0, double log_power,
                                            double lambda, double omega_s) {
  if (!(alpha0 > 0.0) || !(lambda > 0.0) || !(omega_s > 0.0))
    throw std::domain_error(
        "log_exp_cutoff: alpha0, lambda, omega_s must be positive");
  if (log_power < 0.0)
    throw std::domain_error("log_exp_cutoff: log power must be >= 0");
  SpectralModel m;
  m.cls_ = SpectralClass::LogExpCutoff;
  m.alpha0_param_ = alpha0;
  m.q_param_ = log_power;
  m.lambda_ = lambda;
  m.omega_c_ = omega_s;
  m.omega_s_ = omega_s;
  m.chi0_ = inf;
  m.build_terms();
  return m;
}

SpectralModel SpectralModel::from_terms(SpectralClass cls,
                                        std::vector<ExpansionTerm> declared,
                                        double omega_s, double high_freq_decay) {
  if (cls != SpectralClass::Class1 && cls != SpectralClass::Class2)
    throw std::domain_error("from_terms: class must be Class1 or Class2");
  if (declared.empty()) throw std::domain_error("from_terms: no terms");
  if (!(omega_s > 0.0)) throw std::domain_error("from_terms: omega_s must be positive");
  std::sort(declared.begin(), declared.end(),
            [](const auto& x, const auto& y) { return x.exponent < y.exponent; });
  SpectralModel m;
  m.cls_ = cls;
  m.declared_ = std::move(declared);
  m.lambda_ = m.declared_.front().coeff;
  m.omega_s_ = omega_s;
  m.omega_c_ = omega_s;
  m.chi0_ = high_freq_decay;
  m.build_terms();
  return m;
}

void SpectralModel::build_terms() {
  terms_.clear();
  const double r = omega_s_ / omega_c_;
  switch (cls_) {
    case SpectralClass::ExpCutoff: {
      const double c0 = lambda_ * std::pow(r, alpha0_param_ - 1.0);
      declared_ = {{alpha0_param_, 0.0, c0}};
      terms_ = {{alpha0_param_, 0.0, c0},
                {alpha0_param_ + 1.0, 0.0, -c0 * r},
                {alpha0_param_ + 2.0, 0.0, 0.5 * c0 * r * r}};
      break;
    }
    case SpectralClass::FiniteSupport: {
      const double c0 = lambda_ * std::pow(r, alpha0_param_ - 1.0);
      declared_ = {{alpha0_param_, 0.0, c0}};
      terms_ = declared_;
      break;
    }
    case SpectralClass::LogExpCutoff: {
      declared_ = {{alpha0_param_, q_param_, lambda_}};
      push_induced(terms_, alpha0_param_, q_param_, lambda_);
      if (near_integer(q_param_) && q_param_ >= 0.0) {
        const double qn = std::round(q_param_);
        std::erase_if(terms_, [&](const ExpansionTerm& t) {
          return t.log_power < -1e-12 || (qn == 0.0 && t.log_power > 1e-12);
        });
      }
      merge_terms(terms_);
      break;
    }
    case SpectralClass::Class1:
    case SpectralClass::Class2: {
      for (const auto& d : declared_)
        push_induced(terms_, d.exponent, d.log_power, d.coeff);
      if (cls_ == SpectralClass::Class1) {
        std::erase_if(terms_,
                      [](const ExpansionTerm& t) { return t.log_power < -1e-12; });
      }
      merge_terms(terms_);
      break;
    }
  }
}

double SpectralModel::evaluate(double omega) const {
  if (omega < 0.0) throw std::domain_error("evaluate: negative frequency");
  if (omega == 0.0) return 0.0;
  switch (cls_) {
    case SpectralClass::ExpCutoff: {
      const double x = omega / omega_c_;
      return lambda_ * omega_c_ * std::pow(x, alpha0_param_) * std::exp(-x);
    }
    case SpectralClass::FiniteSupport: {
      if (omega > omega_c_) return 0.0;
      const double x = omega / omega_c_;
      return lambda_ * omega_c_ * std::pow(x, alpha0_param_);
    }
    case SpectralClass::LogExpCutoff: {
      const double nu = omega / omega_s_;
      return omega_s_ * lambda_ * std::pow(nu, alpha0_param_) * std::exp(-nu) *
             std::pow(std::log1p(1.0 / nu), q_param_);
    }
    default: {
      const double nu = omega / omega_s_;
      const double lf = std::log1p(1.0 / nu);
      double acc = 0.0;
      for (const auto& d : declared_)
        acc += d.coeff * std::pow(nu, d.exponent) * std::pow(lf, d.log_power);
      return omega_s_ * acc * std::exp(-nu);
    }
  }
}

double SpectralModel::over_omega(double omega) const {
  if (omega < 0.0) throw std::domain_error("over_omega: negative frequency");
  if (omega > 0.0) return evaluate(omega) / omega;
  const auto groups = group_terms(terms_);
  const double a0 = groups.front().exponent;
  const double q0 = groups.front().log_power;
  if (a0 > 1.0 + 1e-12) return 0.0;
  if (a0 < 1.0 - 1e-12) return inf;
  if (q0 > 1e-12) return inf;
  if (q0 < -1e-12) return 0.0;
  return groups.front().lead_coeff;  // J/omega -> c0 for exactly linear onset
}

double SpectralModel::evaluate_thermal(double omega, double temperature) const {
  if (!(temperature > 0.0))
    throw std::domain_error("evaluate_thermal: temperature must be positive");
  if (omega < 0.0) throw std::domain_error("evaluate_thermal: negative frequency");
  if (omega == 0.0) {
    // 0+ limit: J coth(omega/2T) -> 2 T J/omega
    const double r0 = over_omega(0.0);
    return std::isfinite(r0) ? 2.0 * temperature * r0 : r0;
  }
  return evaluate(omega) * coth(omega / (2.0 * temperature));
}

double SpectralModel::alpha0() const {
  switch (cls_) {
    case SpectralClass::ExpCutoff:
    case SpectralClass::FiniteSupport:
    case SpectralClass::LogExpCutoff:
      return alpha0_param_;
    default:
      return declared_.front().exponent;
  }
}

double SpectralModel::log_power0() const {
  switch (cls_) {
    case SpectralClass::ExpCutoff:
    case SpectralClass::FiniteSupport:
      return 0.0;
    case SpectralClass::LogExpCutoff:
      return q_param_;
    default:
      return declared_.front().log_power;
  }
}

double SpectralModel::support_max() const {
  return compact_support() ? omega_c_ : inf;
}

double SpectralModel::truncation_frequency(double rel_tolerance) const {
  if (compact_support()) return omega_c_;
  double top = alpha0();
  for (const auto& t : terms_) top = std::max(top, t.exponent);
  return exp_envelope_truncation(omega_c_, top + 3.0, rel_tolerance);
}

MomentResult SpectralModel::moment_eta1(const QuadratureOptions& opts) const {
  auto f = [this](double w) { return over_omega(w); };
  auto r = integrate_moment(f, alpha0(), truncation_frequency(opts.rel_tolerance),
                            opts);
  return {r.value, true};
}

MomentResult SpectralModel::moment_omega1(const QuadratureOptions& opts) const {
  auto f = [this](double w) { return w * evaluate(w); };
  auto r = integrate_moment(f, alpha0() + 2.0,
                            truncation_frequency(opts.rel_tolerance), opts);
  return {r.value, chi0_ > 2.0};
}

std::optional<double> SpectralModel::closed_form_eta1() const {
  switch (cls_) {
    case SpectralClass::ExpCutoff:
      return lambda_ * omega_c_ * std::tgamma(alpha0_param_);
    case SpectralClass::FiniteSupport:
      return lambda_ * omega_c_ / alpha0_param_;
    default:
      return std::nullopt;
  }
}

std::optional<double> SpectralModel::closed_form_omega1() const {
  const double wc3 = omega_c_ * omega_c_ * omega_c_;
  switch (cls_) {
    case SpectralClass::ExpCutoff:
      return lambda_ * wc3 * std::tgamma(alpha0_param_ + 2.0);
    case SpectralClass::FiniteSupport:
      return lambda_ * wc3 / (alpha0_param_ + 2.0);
    default:
      return std::nullopt;
  }
}

ValidationReport SpectralModel::validate(const QuadratureOptions& opts) const {
  ValidationReport rep;
  auto add = [&](const std::string& name, bool ok, const std::string& detail) {
    rep.checks.push_back({name, ok, detail});
    rep.all_passed = rep.all_passed && ok;
  };

  {
    bool ok = omega_s_ > 0.0 && (compact_support() || omega_c_ > 0.0);
    add("scales-positive", ok, ok ? "" : "nonpositive frequency scale");
  }
  {
    bool ok = true;
    std::string detail;
    double prev = 0.0;
    for (std::size_t j = 0; j < declared_.size(); ++j) {
      const auto& d = declared_[j];
      if (!(d.exponent > 0.0)) { ok = false; detail = "nonpositive exponent"; }
      if (j > 0 && !(d.exponent > prev + 1e-12)) {
        ok = false;
        detail = "exponents not strictly increasing";
      }
      prev = d.exponent;
    }
    if (ok && !(declared_.front().coeff > 0.0)) {
      ok = false;
      detail = "leading coefficient must be positive";
    }
    add("expansion-ordering", ok, detail);
  }
  if (cls_ == SpectralClass::Class1 || cls_ == SpectralClass::LogExpCutoff) {
    bool ok = true;
    for (const auto& d : declared_)
      if (d.log_power < -1e-9 || !near_integer(d.log_power)) ok = false;
    add("log-powers-natural", ok, ok ? "" : "log powers must be naturals");
  }
  {
    bool ok = true;
    std::string detail;
    const double hi = compact_support() ? omega_c_ : 1e3 * omega_s_;
    const double lo = 1e-8 * omega_s_;
    const double step = std::pow(hi / lo, 1.0 / 399.0);
    double w = lo;
    double scale = 0.0;
    std::vector<double> vals(400);
    for (int i = 0; i < 400; ++i, w *= step) {
      vals[i] = evaluate(w);
      scale = std::max(scale, std::fabs(vals[i]));
    }
    for (int i = 0; i < 400 && ok; ++i) {
      if (!(vals[i] >= -1e-14 * scale) || !std::isfinite(vals[i])) {
        ok = false;
        std::ostringstream os;
        os << "negative or non-finite value near omega index " << i;
        detail = os.str();
      }
    }
    add("non-negativity", ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    try {
      const double v = moment_eta1(opts).value;
      ok = std::isfinite(v);
      if (!ok) detail = "eta1 integral not finite";
    } catch (const QuadratureError& e) {
      ok = false;
      detail = e.what();
    }
    add("eta1-convergence", ok, detail);
  }
  if (cls_ == SpectralClass::Class2) {
    // the declared expansion must match the realized model near the origin,
    // including the first couple of derivatives; sampled, not proven
    rep.conditions_assumed = true;
    bool ok = true;
    std::string detail;
    auto partial_sum = [&](double w) {
      const double nu = w / omega_s_;
      const double L = -std::log(nu);
      double acc = 0.0;
      for (const auto& d : declared_)
        acc += d.coeff * std::pow(nu, d.exponent) * std::pow(L, d.log_power);
      return omega_s_ * acc;
    };
    double abar = 0.0;
    for (const auto& d : declared_)
      if (d.exponent >= 1.0) { abar = d.exponent; break; }
    const int nbar = (abar > 0.0) ? std::min(2, (int)std::ceil(abar)) : 1;
    for (double nu : {1e-3, 3e-3, 1e-2}) {
      const double w = nu * omega_s_;
      const double h = w / 30.0;
      for (int k = 0; k <= nbar && ok; ++k) {
        double da = 0.0, db = 0.0;
        if (k == 0) {
          da = evaluate(w);
          db = partial_sum(w);
        } else if (k == 1) {
          da = (evaluate(w + h) - evaluate(w - h)) / (2.0 * h);
          db = (partial_sum(w + h) - partial_sum(w - h)) / (2.0 * h);
        } else {
          da = (evaluate(w + h) - 2.0 * evaluate(w) + evaluate(w - h)) / (h * h);
          db = (partial_sum(w + h) - 2.0 * partial_sum(w) + partial_sum(w - h)) /
               (h * h);
        }
        const double denom = std::max(std::fabs(db), 1e-300);
        if (std::fabs(da - db) > 0.15 * denom) {
          ok = false;
          std::ostringstream os;
          os << "derivative order " << k << " mismatch at nu=" << nu;
          detail = os.str();
        }
      }
    }
    add("expansion-matching", ok, detail);
  }
  if (cls_ == SpectralClass::Class1 || cls_ == SpectralClass::Class2)
    rep.conditions_assumed = true;
  return rep;
}

ModeGrid SpectralModel::discretize_modes(std::size_t count, double omega_max) const {
  if (count < 2) throw std::domain_error("discretize_modes: need at least 2 modes");
  if (!(omega_max > 0.0))
    throw std::domain_error("discretize_modes: omega_max must be positive");
  ModeGrid g;
  const double h = omega_max / static_cast<double>(count - 1);
  g.frequencies.resize(count);
  g.weights.resize(count);
  g.couplings.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double w = h * static_cast<double>(k);
    g.frequencies[k] = w;
    g.weights[k] = (k == 0 || k + 1 == count) ? 0.5 * h : h;
    g.couplings[k] = g.weights[k] * evaluate(w);
  }
  const double origin = over_omega(0.0);
  if (std::isfinite(origin)) {
    g.origin_over = g.weights[0] * origin;
  } else {
    g.singular_origin = true;
    g.origin_over = 0.0;
  }
  return g;
}

double ModeGrid::eta1_sum() const {
  long double acc = origin_over;
  for (std::size_t k = 1; k < frequencies.size(); ++k)
    acc += couplings[k] / frequencies[k];
  return static_cast<double>(acc);
}

double ModeGrid::lambda_sum(double t) const {
  long double acc = origin_over;
  for (std::size_t k = 1; k < frequencies.size(); ++k)
    acc += couplings[k] / frequencies[k] * std::cos(frequencies[k] * t);
  return static_cast<double>(acc);
}

}  // namespace dephlab
