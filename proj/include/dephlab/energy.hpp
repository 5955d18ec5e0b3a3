#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dephlab/spectral_model.hpp"

namespace dephlab {

struct QubitPreparation {
  double omega0 = 1.0;   // level splitting
  double z = 0.0;        // population bias in [-1, 1]
  double T_prep = 1.0;   // preparation temperature, 0 means ground-state limit
};

// displacement weight entering every energy formula; 0 for |z| = 1,
// 2(1+z) in the cold limit
double d0(const QubitPreparation& prep);

// eta1 - Lambda(t), evaluated as one positive integral at short times where
// the difference of separately computed pieces would cancel catastrophically
double moment_diff(const SpectralModel& m, double t,
                   const QuadratureOptions& opts = {},
                   bool force_quadrature = false,
                   std::optional<double> eta1_hint = std::nullopt);

// bath energy gain since t = 0 (monotone quantities are the caller's business;
// this is just d0 * moment_diff)
double energy_increment(const QubitPreparation& prep, const SpectralModel& m,
                        double t, const QuadratureOptions& opts = {},
                        bool force_quadrature = false,
                        std::optional<double> eta1_hint = std::nullopt);

struct ShortTimeCoefficient {
  double value = 0.0;      // quadratic-law prefactor
  bool law_applies = true; // false when declared high-frequency decay is too slow
};
ShortTimeCoefficient short_time_coefficient(const QubitPreparation& prep,
                                            const SpectralModel& m,
                                            const QuadratureOptions& opts = {});

struct EnergyTrajectory {
  std::vector<double> times;
  std::vector<double> bath_delta;         // eps_E(t) - eps_E(0)
  std::vector<double> system_corr_delta;  // exact negation of bath_delta
  double asymptote_delta = 0.0;           // d0 * eta1
  std::optional<double> initial_absolute; // when a mode density was supplied
};

EnergyTrajectory bath_energy(const QubitPreparation& prep, const SpectralModel& m,
                             const std::vector<double>& times,
                             const QuadratureOptions& opts = {},
                             std::optional<double> initial_absolute = std::nullopt);

struct ModeDensity {
  std::function<double(double)> r;  // density of modes per unit frequency
  double cutoff = 0.0;              // 0 means thermally truncated
};

// absolute bath plus interaction energy at t = 0 for a thermal bath
double bath_energy_initial(const SpectralModel& m, double temperature,
                           const ModeDensity& density,
                           const QuadratureOptions& opts = {});

}  // namespace dephlab
