#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dephlab/asymptotics.hpp"
#include "dephlab/dephasing.hpp"

namespace dephlab {

struct NegativeRateInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  double min_rate = 0.0;  // most negative rate seen inside
};

// scans (0, t_max] on a log grid and bisects each sign change of the rate;
// tangential dips below -1e-12 * omega_s in magnitude are ignored
std::vector<NegativeRateInterval> find_negative_intervals(const DephasingState& s,
                                                          double t_max,
                                                          std::size_t grid_points = 1000);

struct MeasureResult {
  double value = 0.0;
  std::vector<NegativeRateInterval> intervals;
  double tail_bound = 0.0;     // estimated mass beyond t_max
  bool lower_bound_only = false;
};

// integral of |rate| * coherence over the negative-rate set
MeasureResult non_markovianity(const DephasingState& s, double t_max);

enum class FlowDirection { Backflow, Loss };

struct FlowClassification {
  FlowDirection direction = FlowDirection::Loss;
  double leading_tail_coeff = 0.0;   // thermal case: sign decides
  bool from_numerics = false;        // vacuum case is interval-based
  std::optional<bool> interval_rule_backflow;  // tabulated alpha-interval reading
  bool interval_rule_differs = false;
  std::string note;
};
FlowClassification classify_flow_direction(const DephasingState& s,
                                           double t_max = 1e3);

enum class Verdict { Match, Mismatch };

struct FlowReport {
  double alpha0 = 0.0;
  double log_power0 = 0.0;
  double T_factorized = 0.0;
  double T_prep = 0.0;
  MeasureResult measure;
  FlowDirection direction = FlowDirection::Loss;
  EnergyRegime energy_regime = EnergyRegime::Constant;
  Verdict verdict = Verdict::Mismatch;
  std::string narrative;
};

// cross-checks information flow for the factorized thermal state against the
// long-time energy direction for the correlated preparation
FlowReport correspondence_report(const QubitPreparation& prep,
                                 const SpectralModel& m, double T_factorized,
                                 double t_max, const QuadratureOptions& opts = {});

const char* to_string(FlowDirection d);
const char* to_string(Verdict v);

}  // namespace dephlab
