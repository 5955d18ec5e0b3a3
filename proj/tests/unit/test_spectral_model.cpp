#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "dephlab/quadrature.hpp"
#include "dephlab/spectral_model.hpp"

using namespace dephlab;

TEST_CASE("exponential-cutoff family pointwise values") {
  auto m = SpectralModel::exp_cutoff(2.0, 1.0, 1.0, 1.0);
  CHECK(m.evaluate(0.0) == 0.0);
  CHECK(m.evaluate(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(m.evaluate(3.0) == doctest::Approx(9.0 * std::exp(-3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(m.evaluate(-1.0), std::domain_error);
  CHECK(m.alpha0() == 2.0);
  CHECK(m.log_power0() == 0.0);

  auto scaled = SpectralModel::exp_cutoff(1.5, 0.7, 2.0, 1.0);
  CHECK(scaled.evaluate(2.0) ==
        doctest::Approx(0.7 * 2.0 * std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("finite-support family vanishes beyond the cutoff") {
  auto m = SpectralModel::finite_support(1.0, 1.0, 1.0, 1.0);
  CHECK(m.evaluate(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.evaluate(1.5) == 0.0);
  CHECK(m.compact_support());
  CHECK(m.support_max() == 1.0);
  CHECK(m.truncation_frequency(1e-10) == 1.0);
}

TEST_CASE("low-frequency behaviour of the ratio to frequency") {
  auto ohmic = SpectralModel::exp_cutoff(1.0, 0.8, 1.0, 1.0);
  CHECK(ohmic.over_omega(0.0) == doctest::Approx(0.8).epsilon(1e-12));
  auto super = SpectralModel::exp_cutoff(2.0, 1.0, 1.0, 1.0);
  CHECK(super.over_omega(0.0) == 0.0);
  auto sub = SpectralModel::exp_cutoff(0.5, 1.0, 1.0, 1.0);
  CHECK(!std::isfinite(sub.over_omega(0.0)));
}

TEST_CASE("thermal weighting approaches the classical limit at the origin") {
  auto m = SpectralModel::exp_cutoff(2.0, 1.0, 1.0, 1.0);
  const double T = 0.7;
  // J coth(omega/2T) -> 2 T J/omega as omega -> 0
  const double small = 1e-6;
  CHECK(m.evaluate_thermal(small, T) ==
        doctest::Approx(2.0 * T * m.evaluate(small) / small).epsilon(1e-9));
  CHECK(m.evaluate_thermal(0.0, T) == 0.0);
  auto ohmic = SpectralModel::exp_cutoff(1.0, 1.0, 1.0, 1.0);
  CHECK(ohmic.evaluate_thermal(0.0, T) == doctest::Approx(2.0 * T).epsilon(1e-12));
  auto sub = SpectralModel::exp_cutoff(0.5, 1.0, 1.0, 1.0);
  CHECK(!std::isfinite(sub.evaluate_thermal(0.0, T)));
  CHECK(m.evaluate_thermal(2.0, T) ==
        doctest::Approx(m.evaluate(2.0) / std::tanh(2.0 / (2.0 * T)))
            .epsilon(1e-13));
}

TEST_CASE("first inverse moment: closed forms and quadrature agree") {
  struct Case {
    SpectralModel m;
    double expected;
  };
  const double g_half = 1.77245385090551603;  // Gamma(1/2)
  Case cases[] = {
      {SpectralModel::exp_cutoff(0.5, 1.0, 1.0, 1.0), g_half},
      {SpectralModel::exp_cutoff(1.0, 1.0, 1.0, 1.0), 1.0},
      {SpectralModel::exp_cutoff(2.0, 1.0, 1.0, 1.0), 1.0},
      {SpectralModel::exp_cutoff(3.5, 1.0, 1.0, 1.0), 3.32335097044784255},
      {SpectralModel::finite_support(1.0, 1.0, 1.0, 1.0), 1.0},
      {SpectralModel::finite_support(2.5, 2.0, 3.0, 1.0), 2.0 * 3.0 / 2.5},
      {SpectralModel::log_exp_cutoff(0.5, 1, 1.0, 1.0), 4.06684965349561196},
      {SpectralModel::log_exp_cutoff(1.0, 1, 1.0, 1.0), 1.17356302722472694},
  };
  for (const auto& c : cases) {
    auto r = c.m.moment_eta1({});
    CHECK(r.value == doctest::Approx(c.expected).epsilon(1e-9));
  }
}

TEST_CASE("second moment closed forms") {
  auto m = SpectralModel::exp_cutoff(2.0, 1.0, 1.0, 1.0);
  CHECK(m.moment_omega1({}).value ==
        doctest::Approx(std::tgamma(4.0)).epsilon(1e-9));
  CHECK(m.moment_omega1({}).short_time_law_ok);
  auto fs = SpectralModel::finite_support(1.0, 1.0, 2.0, 1.0);
  CHECK(fs.moment_omega1({}).value ==
        doctest::Approx(8.0 / 3.0).epsilon(1e-9));  // lambda wc^3/(a+2)
}

TEST_CASE("scaling with the cutoff and coupling") {
  auto m = SpectralModel::exp_cutoff(2.0, 0.5, 3.0, 1.0);
  // eta1 = lambda wc Gamma(alpha)
  CHECK(m.moment_eta1({}).value == doctest::Approx(0.5 * 3.0).epsilon(1e-9));
}

TEST_CASE("declared expansions drive the low-frequency term list") {
  auto m = SpectralModel::from_terms(SpectralClass::Class1,
                                     {{1.5, 0.0, 2.0}, {2.5, 0.0, -0.3}}, 1.0,
                                     1.0);
  const auto& terms = m.low_freq_terms();
  REQUIRE(!terms.empty());
  CHECK(terms.front().exponent == doctest::Approx(1.5));
  CHECK(terms.front().coeff == doctest::Approx(2.0));
  // realized J matches the declared law as omega -> 0
  const double w = 1e-6;
  CHECK(m.evaluate(w) / w ==
        doctest::Approx(2.0 * std::pow(w, 0.5)).epsilon(1e-4));
}

TEST_CASE("validation passes canonical models and flags broken ones") {
  auto good = SpectralModel::exp_cutoff(2.0, 1.0, 1.0, 1.0);
  auto rep = good.validate({});
  CHECK(rep.all_passed);
  CHECK(!rep.checks.empty());

  // a model whose realized J dips negative near the origin
  auto bad = SpectralModel::from_terms(SpectralClass::Class1,
                                       {{1.0, 0.0, 1.0}, {1.2, 0.0, -40.0}}, 1.0,
                                       1.0);
  auto rep2 = bad.validate({});
  CHECK(!rep2.all_passed);
  bool saw_negative = false;
  for (const auto& c : rep2.checks)
    if (c.name == "non-negativity" && !c.passed) saw_negative = true;
  CHECK(saw_negative);
}

TEST_CASE("validation check names are stable") {
  auto rep = SpectralModel::log_exp_cutoff(1.0, 1, 1.0, 1.0).validate({});
  bool names[4] = {false, false, false, false};
  for (const auto& c : rep.checks) {
    if (c.name == "scales-positive") names[0] = true;
    if (c.name == "expansion-ordering") names[1] = true;
    if (c.name == "log-powers-natural") names[2] = true;
    if (c.name == "non-negativity") names[3] = true;
  }
  CHECK(names[0]);
  CHECK(names[1]);
  CHECK(names[2]);
  CHECK(names[3]);
}

TEST_CASE("mode discretization reproduces the inverse moment") {
  auto m = SpectralModel::exp_cutoff(2.0, 1.0, 1.0, 1.0);
  auto g = m.discretize_modes(20000, 40.0);
  CHECK(g.frequencies.size() == 20000);
  CHECK(!g.singular_origin);
  CHECK(g.eta1_sum() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g.lambda_sum(0.0) == doctest::Approx(g.eta1_sum()).epsilon(1e-14));
  CHECK_THROWS_AS(m.discretize_modes(1, 40.0), std::domain_error);

  auto sub = SpectralModel::exp_cutoff(0.5, 1.0, 1.0, 1.0);
  auto gs = sub.discretize_modes(1000, 40.0);
  CHECK(gs.singular_origin);
}

TEST_CASE("domain errors on invalid construction") {
  CHECK_THROWS_AS(SpectralModel::exp_cutoff(-1.0, 1.0, 1.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(SpectralModel::exp_cutoff(1.0, 0.0, 1.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(SpectralModel::log_exp_cutoff(1.0, -2.0, 1.0, 1.0),
                  std::domain_error);
}

TEST_CASE("truncation frequency suppresses the envelope") {
  auto m = SpectralModel::exp_cutoff(2.0, 1.0, 1.0, 1.0);
  const double wt = m.truncation_frequency(1e-10);
  CHECK(m.evaluate(wt) < 1e-12 * m.evaluate(2.0));
}
