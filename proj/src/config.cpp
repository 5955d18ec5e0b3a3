#include "dephlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dephlab {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(strip(cur));
  return out;
}

double to_number(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + v + "'", line, key);
  }
}

std::size_t to_count(const std::string& v, int line, const std::string& key) {
  const double x = to_number(v, line, key);
  if (!(x >= 1.0) || x != std::floor(x))
    throw ConfigError("expected a positive integer", line, key);
  return static_cast<std::size_t>(x);
}

// "(a, n, c), (a, n, c), ..."
std::vector<ExpansionTerm> parse_terms(const std::string& v, int line) {
  std::vector<ExpansionTerm> out;
  std::string body = v;
  std::size_t pos = 0;
  while ((pos = body.find('(', pos)) != std::string::npos) {
    const std::size_t close = body.find(')', pos);
    if (close == std::string::npos)
      throw ConfigError("unbalanced parenthesis in terms", line, "terms");
    const auto fields = split(body.substr(pos + 1, close - pos - 1), ',');
    if (fields.size() != 3)
      throw ConfigError("each term needs (exponent, log_power, coeff)", line,
                        "terms");
    out.push_back({to_number(fields[0], line, "terms"),
                   to_number(fields[1], line, "terms"),
                   to_number(fields[2], line, "terms")});
    pos = close + 1;
  }
  if (out.empty()) throw ConfigError("no terms given", line, "terms");
  return out;
}

const IniEntry* find(const IniFile& ini, const std::string& sec,
                     const std::string& key) {
  auto s = ini.sections.find(sec);
  if (s == ini.sections.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  return &k->second;
}

}  // namespace

IniFile parse_ini_text(const std::string& text) {
  IniFile ini;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t cut = line.find_first_of(";#");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header", lineno);
      section = lower(strip(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError("empty section name", lineno);
      ini.sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value", lineno);
    if (section.empty())
      throw ConfigError("key outside any section", lineno);
    const std::string key = lower(strip(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("empty key", lineno);
    ini.sections[section][key] = {strip(line.substr(eq + 1)), lineno};
  }
  return ini;
}

IniFile parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ini_text(buf.str());
}

Scenario scenario_from_ini(const IniFile& ini) {
  static const std::map<std::string, std::vector<std::string>> known = {
      {"model",
       {"class", "alpha0", "log_power", "lambda", "omega_c", "omega_s", "chi0",
        "terms"}},
      {"preparation", {"omega0", "z", "t_prep", "epsilon_env", "mode_density"}},
      {"dynamics", {"temperature", "t_max"}},
      {"grid", {"kind", "t_min", "t_max", "points", "values"}},
      {"run", {"analyses", "out", "tolerance", "max_evaluations"}},
      {"sweep", {"alpha0", "log_power", "temperature", "z"}},
  };
  for (const auto& [sec, keys] : ini.sections) {
    auto it = known.find(sec);
    if (it == known.end()) throw ConfigError("unknown section [" + sec + "]");
    for (const auto& [key, entry] : keys) {
      if (std::find(it->second.begin(), it->second.end(), key) ==
          it->second.end())
        throw ConfigError("unknown key '" + key + "' in [" + sec + "]",
                          entry.line, key);
    }
  }

  Scenario sc;
  if (const auto* e = find(ini, "model", "class")) {
    sc.model.cls = lower(e->value);
    static const std::vector<std::string> classes = {
        "exp_cutoff", "finite_support", "log_exp_cutoff", "class1", "class2"};
    if (std::find(classes.begin(), classes.end(), sc.model.cls) == classes.end())
      throw ConfigError("unknown model class '" + e->value + "'", e->line,
                        "class");
  }
  if (const auto* e = find(ini, "model", "alpha0"))
    sc.model.alpha0 = to_number(e->value, e->line, "alpha0");
  if (const auto* e = find(ini, "model", "log_power"))
    sc.model.log_power = to_number(e->value, e->line, "log_power");
  if (const auto* e = find(ini, "model", "lambda"))
    sc.model.lambda = to_number(e->value, e->line, "lambda");
  if (const auto* e = find(ini, "model", "omega_c"))
    sc.model.omega_c = to_number(e->value, e->line, "omega_c");
  if (const auto* e = find(ini, "model", "omega_s"))
    sc.model.omega_s = to_number(e->value, e->line, "omega_s");
  if (const auto* e = find(ini, "model", "chi0"))
    sc.model.chi0 = to_number(e->value, e->line, "chi0");
  if (const auto* e = find(ini, "model", "terms"))
    sc.model.terms = parse_terms(e->value, e->line);
  if ((sc.model.cls == "class1" || sc.model.cls == "class2") &&
      sc.model.terms.empty())
    throw ConfigError("model class '" + sc.model.cls + "' requires terms");

  if (const auto* e = find(ini, "preparation", "omega0"))
    sc.prep.omega0 = to_number(e->value, e->line, "omega0");
  if (const auto* e = find(ini, "preparation", "z"))
    sc.prep.z = to_number(e->value, e->line, "z");
  if (const auto* e = find(ini, "preparation", "t_prep"))
    sc.prep.T_prep = to_number(e->value, e->line, "t_prep");
  if (const auto* e = find(ini, "preparation", "epsilon_env"))
    sc.epsilon_env = to_number(e->value, e->line, "epsilon_env");
  if (const auto* e = find(ini, "preparation", "mode_density"))
    sc.mode_density = e->value;

  if (const auto* e = find(ini, "dynamics", "temperature"))
    sc.temperature = to_number(e->value, e->line, "temperature");
  if (const auto* e = find(ini, "dynamics", "t_max"))
    sc.t_max = to_number(e->value, e->line, "t_max");

  if (const auto* e = find(ini, "grid", "kind")) {
    sc.grid.kind = lower(e->value);
    if (sc.grid.kind != "log" && sc.grid.kind != "linear" &&
        sc.grid.kind != "explicit")
      throw ConfigError("grid kind must be log, linear or explicit", e->line,
                        "kind");
  }
  if (const auto* e = find(ini, "grid", "t_min"))
    sc.grid.t_min = to_number(e->value, e->line, "t_min");
  if (const auto* e = find(ini, "grid", "t_max"))
    sc.grid.t_max = to_number(e->value, e->line, "t_max");
  if (const auto* e = find(ini, "grid", "points"))
    sc.grid.points = to_count(e->value, e->line, "points");
  if (const auto* e = find(ini, "grid", "values"))
    for (const auto& v : split(e->value, ','))
      sc.grid.values.push_back(to_number(v, e->line, "values"));

  if (const auto* e = find(ini, "run", "analyses")) {
    sc.analyses.clear();
    static const std::vector<std::string> kinds = {
        "trajectory", "energy", "info_flow", "expansion", "regimes", "validate"};
    for (const auto& a : split(e->value, ',')) {
      const std::string name = lower(a);
      if (std::find(kinds.begin(), kinds.end(), name) == kinds.end())
        throw ConfigError("unknown analysis '" + a + "'", e->line, "analyses");
      sc.analyses.push_back(name);
    }
  }
  if (const auto* e = find(ini, "run", "out")) sc.out_dir = e->value;
  if (const auto* e = find(ini, "run", "tolerance"))
    sc.quad.rel_tolerance = to_number(e->value, e->line, "tolerance");
  if (const auto* e = find(ini, "run", "max_evaluations"))
    sc.quad.max_evaluations = to_count(e->value, e->line, "max_evaluations");

  if (auto s = ini.sections.find("sweep"); s != ini.sections.end()) {
    for (const auto& [key, entry] : s->second) {
      std::vector<double> vals;
      for (const auto& v : split(entry.value, ','))
        vals.push_back(to_number(v, entry.line, key));
      if (vals.empty()) throw ConfigError("empty sweep axis", entry.line, key);
      sc.sweep_values[key] = vals;
    }
  }

  sc.build_model();   // surface model construction problems as config errors
  sc.build_times();
  return sc;
}

SpectralModel Scenario::build_model() const {
  try {
    if (model.cls == "exp_cutoff")
      return SpectralModel::exp_cutoff(model.alpha0, model.lambda, model.omega_c,
                                       model.omega_s);
    if (model.cls == "finite_support")
      return SpectralModel::finite_support(model.alpha0, model.lambda,
                                           model.omega_c, model.omega_s);
    if (model.cls == "log_exp_cutoff") {
      const double ws = (model.omega_s > 0.0) ? model.omega_s : model.omega_c;
      return SpectralModel::log_exp_cutoff(model.alpha0, model.log_power,
                                           model.lambda, ws);
    }
    const SpectralClass cls = (model.cls == "class1") ? SpectralClass::Class1
                                                      : SpectralClass::Class2;
    const double ws = (model.omega_s > 0.0) ? model.omega_s : model.omega_c;
    return SpectralModel::from_terms(cls, model.terms, ws, model.chi0);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

std::vector<double> Scenario::build_times() const {
  std::vector<double> out;
  if (grid.kind == "explicit") {
    if (grid.values.empty())
      throw ConfigError("explicit grid needs values");
    out = grid.values;
    for (double t : out)
      if (t < 0.0) throw ConfigError("grid values must be nonnegative");
    return out;
  }
  if (!(grid.t_max > grid.t_min))
    throw ConfigError("grid needs t_max > t_min");
  if (grid.points < 2) throw ConfigError("grid needs at least 2 points");
  out.reserve(grid.points);
  if (grid.kind == "linear") {
    const double h = (grid.t_max - grid.t_min) / double(grid.points - 1);
    for (std::size_t i = 0; i < grid.points; ++i)
      out.push_back(grid.t_min + h * double(i));
  } else {
    if (!(grid.t_min > 0.0))
      throw ConfigError("log grid needs t_min > 0");
    const double f = std::pow(grid.t_max / grid.t_min, 1.0 / double(grid.points - 1));
    double t = grid.t_min;
    for (std::size_t i = 0; i < grid.points; ++i, t *= f) out.push_back(t);
    out.back() = grid.t_max;
  }
  return out;
}

std::optional<ModeDensity> Scenario::build_mode_density() const {
  if (!mode_density) return std::nullopt;
  const std::string& spec = *mode_density;
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw ConfigError("mode_density must be exp:<scale> or const:<cutoff>");
  const std::string kind = lower(strip(spec.substr(0, colon)));
  const double par = to_number(strip(spec.substr(colon + 1)), 0, "mode_density");
  if (!(par > 0.0))
    throw ConfigError("mode_density parameter must be positive");
  ModeDensity d;
  if (kind == "exp") {
    d.r = [par](double w) { return std::exp(-w / par); };
    d.cutoff = 0.0;
  } else if (kind == "const") {
    d.r = [](double) { return 1.0; };
    d.cutoff = par;
  } else {
    throw ConfigError("mode_density kind must be exp or const");
  }
  return d;
}

Scenario Scenario::with_axis_value(const std::string& axis, double value) const {
  Scenario sc = *this;
  if (axis == "alpha0")
    sc.model.alpha0 = value;
  else if (axis == "log_power")
    sc.model.log_power = value;
  else if (axis == "temperature")
    sc.temperature = value;
  else if (axis == "z")
    sc.prep.z = value;
  else
    throw ConfigError("unknown sweep axis '" + axis + "'");
  if ((axis == "alpha0" || axis == "log_power") &&
      (sc.model.cls == "class1" || sc.model.cls == "class2") &&
      !sc.model.terms.empty()) {
    // the axis moves the leading declared term
    if (axis == "alpha0") sc.model.terms.front().exponent = value;
    else sc.model.terms.front().log_power = value;
  }
  return sc;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string effective_config(const Scenario& sc) {
  std::ostringstream os;
  os << "[model]\n";
  os << "class = " << sc.model.cls << "\n";
  if (sc.model.cls == "class1" || sc.model.cls == "class2") {
    os << "terms =";
    for (std::size_t i = 0; i < sc.model.terms.size(); ++i) {
      const auto& t = sc.model.terms[i];
      os << (i ? ", (" : " (") << format_number(t.exponent) << ", "
         << format_number(t.log_power) << ", " << format_number(t.coeff) << ")";
    }
    os << "\n";
    os << "chi0 = " << format_number(sc.model.chi0) << "\n";
  } else {
    os << "alpha0 = " << format_number(sc.model.alpha0) << "\n";
    if (sc.model.cls == "log_exp_cutoff")
      os << "log_power = " << format_number(sc.model.log_power) << "\n";
    os << "lambda = " << format_number(sc.model.lambda) << "\n";
    os << "omega_c = " << format_number(sc.model.omega_c) << "\n";
  }
  os << "omega_s = " << format_number(sc.build_model().omega_s()) << "\n";
  os << "\n[preparation]\n";
  os << "omega0 = " << format_number(sc.prep.omega0) << "\n";
  os << "z = " << format_number(sc.prep.z) << "\n";
  os << "t_prep = " << format_number(sc.prep.T_prep) << "\n";
  if (sc.epsilon_env)
    os << "epsilon_env = " << format_number(*sc.epsilon_env) << "\n";
  if (sc.mode_density) os << "mode_density = " << *sc.mode_density << "\n";
  os << "\n[dynamics]\n";
  os << "temperature = " << format_number(sc.temperature) << "\n";
  os << "t_max = " << format_number(sc.t_max) << "\n";
  os << "\n[grid]\n";
  os << "kind = " << sc.grid.kind << "\n";
  if (sc.grid.kind == "explicit") {
    os << "values =";
    for (std::size_t i = 0; i < sc.grid.values.size(); ++i)
      os << (i ? ", " : " ") << format_number(sc.grid.values[i]);
    os << "\n";
  } else {
    os << "t_min = " << format_number(sc.grid.t_min) << "\n";
    os << "t_max = " << format_number(sc.grid.t_max) << "\n";
    os << "points = " << sc.grid.points << "\n";
  }
  os << "\n[run]\n";
  os << "analyses =";
  for (std::size_t i = 0; i < sc.analyses.size(); ++i)
    os << (i ? ", " : " ") << sc.analyses[i];
  os << "\n";
  os << "out = " << sc.out_dir << "\n";
  os << "tolerance = " << format_number(sc.quad.rel_tolerance) << "\n";
  os << "max_evaluations = " << sc.quad.max_evaluations << "\n";
  if (!sc.sweep_values.empty()) {
    os << "\n[sweep]\n";
    for (const auto& [axis, vals] : sc.sweep_values) {
      os << axis << " =";
      for (std::size_t i = 0; i < vals.size(); ++i)
        os << (i ? ", " : " ") << format_number(vals[i]);
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace dephlab
