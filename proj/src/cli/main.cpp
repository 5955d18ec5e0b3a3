#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dephlab/quadrature.hpp"
#include "dephlab/scenario.hpp"

namespace {

void print_stats(std::ostream& os) {
  const auto s = dephlab::quadrature_stats();
  os << "quadrature: calls=" << s.calls << " evaluations=" << s.evaluations
     << " failures=" << s.failures << " zero_partition=" << s.zero_partition
     << " accelerated=" << s.accelerated << " adaptive=" << s.adaptive << "\n";
}

int report_config_error(const dephlab::ConfigError& e) {
  std::cerr << "config error";
  if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
  if (!e.key().empty()) std::cerr << " [" << e.key() << "]";
  std::cerr << ": " << e.what() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qubit dephasing toolkit: bath energy and information flow"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::string axis;
  double tolerance = 0.0;
  bool want_stats = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "scenario config file (INI)")
        ->required();
    cmd->add_option("--out", out_override, "override output directory");
    cmd->add_option("--tolerance", tolerance,
                    "override relative quadrature tolerance");
    cmd->add_flag("--quadrature-stats", want_stats,
                  "print quadrature counters to stderr on exit");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run the analyses of a scenario");
  add_common(run_cmd);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "repeat the analyses along one swept axis");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--axis", axis, "swept parameter (alpha0, log_power, temperature, z)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    dephlab::Scenario sc =
        dephlab::scenario_from_ini(dephlab::parse_ini_file(config_path));
    if (!out_override.empty()) sc.out_dir = out_override;
    if (tolerance > 0.0) sc.quad.rel_tolerance = tolerance;

    dephlab::RunOutcome outcome;
    if (app.got_subcommand(run_cmd))
      outcome = dephlab::run_scenario(sc, std::cerr);
    else
      outcome = dephlab::run_sweep(sc, axis, std::cerr);

    for (const auto& path : outcome.written)
      std::cout << "wrote " << path << "\n";
    if (!outcome.failures.empty())
      std::cerr << outcome.failures.size() << " analysis step(s) failed\n";
    if (want_stats) print_stats(std::cerr);
    return outcome.exit_code;
  } catch (const dephlab::ConfigError& e) {
    if (want_stats) print_stats(std::cerr);
    return report_config_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (want_stats) print_stats(std::cerr);
    return 1;
  }
}
