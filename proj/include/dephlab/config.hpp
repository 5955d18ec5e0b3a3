#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dephlab/energy.hpp"
#include "dephlab/spectral_model.hpp"

namespace dephlab {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string key = "")
      : std::runtime_error(message), line_(line), key_(std::move(key)) {}
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

struct IniEntry {
  std::string value;
  int line = 0;
};

struct IniFile {
  // section -> key -> entry; keys and sections are lowercase
  std::map<std::string, std::map<std::string, IniEntry>> sections;
};

IniFile parse_ini_text(const std::string& text);
IniFile parse_ini_file(const std::string& path);

struct GridSpec {
  std::string kind = "log";  // log | linear | explicit
  double t_min = 1e-2;
  double t_max = 1e3;
  std::size_t points = 200;
  std::vector<double> values;
};

struct ModelSpec {
  std::string cls = "exp_cutoff";
  double alpha0 = 1.0;
  double log_power = 0.0;
  double lambda = 1.0;
  double omega_c = 1.0;
  double omega_s = 0.0;  // 0: defaults to omega_c (or omega_s for log family)
  double chi0 = 4.0;
  std::vector<ExpansionTerm> terms;
};

struct Scenario {
  ModelSpec model;
  QubitPreparation prep;
  double temperature = 0.0;
  double t_max = 1e3;
  GridSpec grid;
  std::vector<std::string> analyses = {"trajectory"};
  std::string out_dir = "out";
  std::optional<double> epsilon_env;
  std::optional<std::string> mode_density;
  std::map<std::string, std::vector<double>> sweep_values;
  QuadratureOptions quad;

  SpectralModel build_model() const;
  std::vector<double> build_times() const;
  std::optional<ModeDensity> build_mode_density() const;
  // applies one sweep-axis override and rebuilds dependent pieces
  Scenario with_axis_value(const std::string& axis, double value) const;
};

Scenario scenario_from_ini(const IniFile& ini);
std::string effective_config(const Scenario& sc);

// fixed-format CSV number: enough digits to round-trip visually, dot decimal
std::string format_number(double v);

}  // namespace dephlab
