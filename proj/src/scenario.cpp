#include "dephlab/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "dephlab/asymptotics.hpp"
#include "dephlab/dephasing.hpp"
#include "dephlab/info_flow.hpp"

namespace dephlab {

namespace {

namespace fs = std::filesystem;

struct FileContent {
  std::string name;
  std::string body;
};

struct AnalysisOutput {
  std::vector<FileContent> files;
  std::vector<std::string> summary;
};

std::string csv_join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  out += '\n';
  return out;
}

AnalysisOutput analysis_trajectory(const Scenario& sc, const SpectralModel& model,
                                   const std::vector<double>& times) {
  AnalysisOutput out;
  DephasingState st = make_state(model, sc.temperature, sc.quad);
  const double weight = d0(sc.prep);
  const double eta1 = model.moment_eta1(sc.quad).value;
  std::string csv = "t,Lambda,gamma,Xi,coherence,eps_E_delta,eps_SE_delta\n";
  for (double t : times) {
    const double lam = lambda_of_t(st, t);
    const double rate = gamma(st, t);
    const double xi = xi_of_t(st, t);
    const double dE = weight * moment_diff(model, t, sc.quad, false, eta1);
    csv += csv_join({format_number(t), format_number(lam), format_number(rate),
                     format_number(xi), format_number(std::exp(-xi)),
                     format_number(dE), format_number(-dE)});
  }
  out.files.push_back({"trajectory.csv", csv});
  out.files.push_back(
      {"trajectory.gp",
       "set datafile separator ','\n"
       "set key autotitle columnhead\n"
       "set logscale x\n"
       "set xlabel 't'\n"
       "plot 'trajectory.csv' using 1:2 with lines, \\\n"
       "     'trajectory.csv' using 1:3 with lines, \\\n"
       "     'trajectory.csv' using 1:5 with lines\n"});
  if (st.xi_unbounded())
    out.summary.push_back(
        "decoherence exponent is unbounded for this bath (thermal, alpha0 <= 1)");
  return out;
}

AnalysisOutput analysis_energy(const Scenario& sc, const SpectralModel& model,
                               const std::vector<double>& times) {
  AnalysisOutput out;
  const double weight = d0(sc.prep);
  const double eta1 = model.moment_eta1(sc.quad).value;
  std::optional<double> initial = sc.epsilon_env;
  if (!initial) {
    if (auto density = sc.build_mode_density())
      initial = bath_energy_initial(model, sc.temperature, *density, sc.quad);
  }
  std::string csv = initial ? "t,eps_E_delta,eps_SE_delta,eps_E_abs\n"
                            : "t,eps_E_delta,eps_SE_delta\n";
  for (double t : times) {
    const double dE = weight * moment_diff(model, t, sc.quad, false, eta1);
    std::vector<std::string> row = {format_number(t), format_number(dE),
                                    format_number(-dE)};
    if (initial) row.push_back(format_number(*initial + dE));
    csv += csv_join(row);
  }
  out.files.push_back({"energy.csv", csv});
  out.summary.push_back("energy plateau above start: " +
                        format_number(weight * eta1));
  if (initial)
    out.summary.push_back("initial absolute bath energy: " +
                          format_number(*initial));
  const auto stc = short_time_coefficient(sc.prep, model, sc.quad);
  out.summary.push_back("short-time quadratic coefficient: " +
                        format_number(stc.value) +
                        (stc.law_applies ? "" : " (law outside declared decay)"));
  return out;
}

struct FlowRowResult {
  std::string row;
  std::string intervals_csv;
  std::vector<std::string> summary;
};

FlowRowResult compute_flow_row(const Scenario& sc, const SpectralModel& model) {
  FlowRowResult res;
  std::string flow_dir = "refused";
  std::string regime_str = "refused";
  std::string verdict_str = "refused";
  MeasureResult measure;
  if (sc.temperature > 0.0) {
    try {
      FlowReport rep = correspondence_report(sc.prep, model, sc.temperature,
                                             sc.t_max, sc.quad);
      measure = rep.measure;
      flow_dir = to_string(rep.direction);
      regime_str = to_string(rep.energy_regime);
      verdict_str = to_string(rep.verdict);
      res.summary.push_back(rep.narrative);
    } catch (const ExpansionRefused& e) {
      DephasingState st = make_state(model, sc.temperature, sc.quad);
      measure = non_markovianity(st, sc.t_max);
      flow_dir = to_string(classify_flow_direction(st, sc.t_max).direction);
      res.summary.push_back(std::string("long-time expansion refused: ") +
                            e.what());
    }
  } else {
    DephasingState st = make_state(model, 0.0, sc.quad);
    measure = non_markovianity(st, sc.t_max);
    const bool backflow = !measure.intervals.empty();
    flow_dir = backflow ? "backflow" : "loss";
    const RegimeResult regime = classify_energy_regime(sc.prep, model);
    regime_str = to_string(regime.regime);
    if (regime.regime == EnergyRegime::LongTimeIncrease ||
        regime.regime == EnergyRegime::LongTimeDecrease) {
      const bool increase = regime.regime == EnergyRegime::LongTimeIncrease;
      const bool sub_ohmic = model.alpha0() <= 1.0 + 1e-9;
      const bool match = sub_ohmic ? (!backflow && increase) : (backflow == increase);
      verdict_str = match ? "match" : "mismatch";
    }
    res.summary.push_back("vacuum flow classified from the interval scan");
  }
  res.row = csv_join({format_number(model.alpha0()),
                      format_number(model.log_power0()),
                      format_number(sc.temperature), format_number(sc.prep.T_prep),
                      format_number(measure.value),
                      std::to_string(measure.intervals.size()), flow_dir,
                      regime_str, verdict_str});
  std::string iv = "t_start,t_end,min_rate\n";
  for (const auto& i : measure.intervals)
    iv += csv_join({format_number(i.t_start), format_number(i.t_end),
                    format_number(i.min_rate)});
  res.intervals_csv = iv;
  if (measure.lower_bound_only)
    res.summary.push_back(
        "backflow measure is a lower bound (tail beyond t_max not negligible)");
  return res;
}

const char* flow_header = "alpha0,n0,T_fact,T_prep,N,n_intervals,flow_dir,"
                          "energy_regime,verdict\n";

AnalysisOutput analysis_info_flow(const Scenario& sc, const SpectralModel& model) {
  AnalysisOutput out;
  FlowRowResult res = compute_flow_row(sc, model);
  out.files.push_back({"info_flow.csv", std::string(flow_header) + res.row});
  out.files.push_back({"intervals.csv", res.intervals_csv});
  out.summary = res.summary;
  return out;
}

std::vector<std::string> expansion_rows(const Scenario& sc,
                                        const SpectralModel& model) {
  std::vector<std::string> rows;
  auto opt_idx = [](const std::optional<std::size_t>& k) {
    return k ? std::to_string(*k) : std::string();
  };
  try {
    const LongTimeExpansion ex = long_time_expansion(sc.prep, model);
    for (const auto& term : ex.terms)
      rows.push_back(csv_join({ex.source_case, format_number(term.power),
                               format_number(term.log_power),
                               format_number(term.coeff), opt_idx(ex.indices.k0),
                               std::to_string(ex.indices.k1),
                               opt_idx(ex.indices.k2)}));
    if (ex.terms.empty())
      rows.push_back(csv_join({ex.source_case, "", "", "0",
                               opt_idx(ex.indices.k0),
                               std::to_string(ex.indices.k1),
                               opt_idx(ex.indices.k2)}));
  } catch (const ExpansionRefused&) {
    rows.push_back(csv_join({"refused", "", "", "", "", "", ""}));
  }
  const ShortTimeExpansion st = short_time_expansion(sc.prep, model, sc.quad);
  rows.push_back(csv_join({"short-time", format_number(st.term.power),
                           format_number(st.term.log_power),
                           format_number(st.term.coeff), "", "", ""}));
  return rows;
}

const char* expansion_header = "case,p,q,coeff,k0,k1,k2\n";

AnalysisOutput analysis_expansion(const Scenario& sc, const SpectralModel& model) {
  AnalysisOutput out;
  std::string csv = expansion_header;
  for (const auto& r : expansion_rows(sc, model)) csv += r;
  out.files.push_back({"expansion.csv", csv});
  return out;
}

std::string regime_row(const Scenario& sc, const SpectralModel& model) {
  const RegimeResult r = classify_energy_regime(sc.prep, model);
  std::string note = r.note;
  if (r.interval_rule_increase && !r.interval_rule_differs)
    note = note.empty() ? "matches alpha-interval reading" : note;
  for (auto& c : note)
    if (c == ',') c = ';';
  return csv_join({format_number(model.alpha0()),
                   format_number(model.log_power0()), format_number(d0(sc.prep)),
                   to_string(r.regime), format_number(r.leading_coeff), note});
}

const char* regimes_header = "alpha0,n0,d0,regime,leading_coeff,note\n";

AnalysisOutput analysis_regimes(const Scenario& sc, const SpectralModel& model) {
  AnalysisOutput out;
  out.files.push_back(
      {"regimes.csv", std::string(regimes_header) + regime_row(sc, model)});
  return out;
}

AnalysisOutput analysis_validate(const Scenario& sc, const SpectralModel& model) {
  AnalysisOutput out;
  const ValidationReport rep = model.validate(sc.quad);
  std::ostringstream os;
  for (const auto& c : rep.checks) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  os << (rep.all_passed ? "all checks passed\n" : "some checks failed\n");
  if (rep.conditions_assumed)
    os << "note: smoothness and convergence conditions sampled, not proven\n";
  out.files.push_back({"validation.txt", os.str()});
  if (!rep.all_passed) out.summary.push_back("model validation failed");
  return out;
}

void write_all(const std::string& dir, const std::vector<FileContent>& files,
               std::vector<std::string>& written) {
  fs::create_directories(dir);
  for (const auto& f : files) {
    const std::string path = dir + "/" + f.name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << f.body;
    written.push_back(path);
  }
}

}  // namespace

RunOutcome run_scenario(const Scenario& sc, std::ostream& log) {
  RunOutcome out;
  std::vector<std::string> summary;
  std::vector<FileContent> files;

  SpectralModel model = sc.build_model();
  const std::vector<double> times = sc.build_times();

  for (const auto& name : sc.analyses) {
    try {
      AnalysisOutput a;
      if (name == "trajectory")
        a = analysis_trajectory(sc, model, times);
      else if (name == "energy")
        a = analysis_energy(sc, model, times);
      else if (name == "info_flow")
        a = analysis_info_flow(sc, model);
      else if (name == "expansion")
        a = analysis_expansion(sc, model);
      else if (name == "regimes")
        a = analysis_regimes(sc, model);
      else if (name == "validate")
        a = analysis_validate(sc, model);
      for (auto& f : a.files) files.push_back(std::move(f));
      for (auto& s : a.summary) summary.push_back(std::move(s));
    } catch (const std::exception& e) {
      out.failures.push_back(name + ": " + e.what());
      log << "analysis '" << name << "' failed: " << e.what() << "\n";
    }
  }

  files.push_back({"effective_config.ini", effective_config(sc)});
  std::ostringstream sum;
  for (const auto& s : summary) sum << s << "\n";
  for (const auto& f : out.failures) sum << "FAILED " << f << "\n";
  if (summary.empty() && out.failures.empty()) sum << "ok\n";
  files.push_back({"summary.txt", sum.str()});

  write_all(sc.out_dir, files, out.written);
  out.exit_code = out.failures.empty() ? 0 : 2;
  return out;
}

RunOutcome run_sweep(const Scenario& sc, const std::string& axis,
                     std::ostream& log) {
  RunOutcome out;
  auto it = sc.sweep_values.find(axis);
  if (it == sc.sweep_values.end())
    throw ConfigError("sweep axis '" + axis + "' has no values in [sweep]");
  const std::vector<double>& values = it->second;

  struct Point {
    bool failed = false;
    std::string error;
    std::string flow_row;
    std::string regime_row;
    std::vector<std::string> expansion;
    std::vector<FileContent> point_files;
    std::vector<std::string> summary;
  };
  std::vector<Point> pts(values.size());

  const bool want_flow =
      std::count(sc.analyses.begin(), sc.analyses.end(), "info_flow") > 0;
  const bool want_regimes =
      std::count(sc.analyses.begin(), sc.analyses.end(), "regimes") > 0;
  const bool want_expansion =
      std::count(sc.analyses.begin(), sc.analyses.end(), "expansion") > 0;
  const bool want_traj =
      std::count(sc.analyses.begin(), sc.analyses.end(), "trajectory") > 0;
  const bool want_energy =
      std::count(sc.analyses.begin(), sc.analyses.end(), "energy") > 0;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      Point& p = pts[i];
      try {
        const Scenario sci = sc.with_axis_value(axis, values[i]);
        SpectralModel model = sci.build_model();
        if (want_flow) {
          FlowRowResult r = compute_flow_row(sci, model);
          p.flow_row = r.row;
          for (auto& s : r.summary) p.summary.push_back(s);
        }
        if (want_regimes) p.regime_row = regime_row(sci, model);
        if (want_expansion) p.expansion = expansion_rows(sci, model);
        if (want_traj || want_energy) {
          const auto times = sci.build_times();
          std::ostringstream tag;
          tag << axis << "_" << format_number(values[i]);
          if (want_traj) {
            auto a = analysis_trajectory(sci, model, times);
            p.point_files.push_back(
                {"trajectory_" + tag.str() + ".csv", a.files.front().body});
          }
          if (want_energy) {
            auto a = analysis_energy(sci, model, times);
            p.point_files.push_back(
                {"energy_" + tag.str() + ".csv", a.files.front().body});
          }
        }
      } catch (const std::exception& e) {
        p.failed = true;
        p.error = e.what();
      }
    }
  };
  const std::size_t n_threads =
      std::max<std::size_t>(1, std::min<std::size_t>(
                                   values.size(),
                                   std::thread::hardware_concurrency()));
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  std::vector<FileContent> files;
  std::vector<std::string> summary;
  if (want_flow) {
    std::string csv = flow_header;
    for (const auto& p : pts)
      if (!p.failed) csv += p.flow_row;
    files.push_back({"info_flow.csv", csv});
  }
  if (want_regimes) {
    std::string csv = regimes_header;
    for (const auto& p : pts)
      if (!p.failed) csv += p.regime_row;
    files.push_back({"regimes.csv", csv});
  }
  if (want_expansion) {
    std::string csv = std::string("axis_value,") + expansion_header;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (!pts[i].failed)
        for (const auto& r : pts[i].expansion)
          csv += format_number(values[i]) + "," + r;
    files.push_back({"expansion.csv", csv});
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (auto& f : pts[i].point_files) files.push_back(std::move(f));
    for (const auto& s : pts[i].summary)
      summary.push_back(axis + "=" + format_number(values[i]) + ": " + s);
    if (pts[i].failed) {
      out.failures.push_back(axis + "=" + format_number(values[i]) + ": " +
                             pts[i].error);
      log << "sweep point " << axis << "=" << values[i]
          << " failed: " << pts[i].error << "\n";
    }
  }

  files.push_back({"effective_config.ini", effective_config(sc)});
  std::ostringstream sum;
  sum << "sweep axis: " << axis << "\n";
  for (const auto& s : summary) sum << s << "\n";
  for (const auto& f : out.failures) sum << "FAILED " << f << "\n";
  files.push_back({"summary.txt", sum.str()});

  write_all(sc.out_dir, files, out.written);
  out.exit_code = out.failures.empty() ? 0 : 2;
  return out;
}

}  // namespace dephlab
