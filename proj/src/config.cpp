#include "fockprep/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "fockprep/errors.hpp"

namespace fockprep {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + text + "' for " + what);
  }
}

long to_long(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid integer '" + text + "' for " + what);
  }
}

bool to_bool(const std::string& text, const std::string& what) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw UsageError("invalid boolean '" + text + "' for " + what);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (preset.has_value() == inline_params.has_value()) {
    throw UsageError("give exactly one of --preset or --inline");
  }
  if (jobs < 1) throw UsageError("jobs must be >= 1");
  if (n_target && *n_target < 0) throw UsageError("n must be >= 0");
}

std::map<std::string, std::string> parse_config_text(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string section;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw UsageError("config line " + std::to_string(number) + ": unterminated section");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(number) + ": empty key");
    out[section.empty() ? key : section + "." + key] = trim(t.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  return parse_config_text(in);
}

void apply_config(const std::map<std::string, std::string>& entries, RunConfig& c) {
  std::vector<std::string> inline_items;
  for (const auto& [key, value] : entries) {
    if (key == "run.preset") {
      c.preset = value;
    } else if (key == "run.method") {
      c.method = value;
    } else if (key == "run.n") {
      c.n_target = static_cast<int>(to_long(value, key));
    } else if (key == "run.jobs") {
      const long j = to_long(value, key);
      if (j < 1) throw UsageError("run.jobs must be >= 1");
      c.jobs = static_cast<std::size_t>(j);
    } else if (key == "run.cache_dir") {
      c.cache_dir = value;
    } else if (key == "run.superposition") {
      c.superposition = to_bool(value, key);
    } else if (key == "run.demux") {
      c.demux = to_bool(value, key);
    } else if (key.rfind("inline.", 0) == 0) {
      inline_items.push_back(key.substr(7) + "=" + value);
    } else if (key == "grid.x_min") {
      c.x_min = to_double(value, key);
    } else if (key == "grid.x_max") {
      c.x_max = to_double(value, key);
    } else if (key == "grid.points") {
      const long p = to_long(value, key);
      if (p < 16) throw UsageError("grid.points must be >= 16");
      c.points = static_cast<std::size_t>(p);
    } else if (key == "grid.dt") {
      c.dt = to_double(value, key);
    } else if (key == "scan.tf") {
      c.tf = split(value, ',');
    } else if (key == "scan.tf_range") {
      c.tf_range = value;
    } else if (key == "output.csv") {
      c.csv_out = value;
    } else if (key == "output.plot") {
      c.plot_out = value;
    } else if (key == "output.schedule") {
      c.schedule_out = value;
    } else if (key == "output.trajectory") {
      c.trajectory_out = value;
    } else if (key == "eigen.k") {
      const long k = to_long(value, key);
      if (k < 1) throw UsageError("eigen.k must be >= 1");
      c.k = static_cast<std::size_t>(k);
    } else if (key == "eigen.lambda") {
      c.lambda = to_double(value, key);
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  if (!inline_items.empty()) {
    std::string joined;
    for (const auto& item : inline_items) joined += (joined.empty() ? "" : ",") + item;
    c.inline_params = joined;
  }
}

std::map<std::string, double> parse_kv_list(const std::string& text) {
  std::map<std::string, double> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("inline parameter '" + item + "' is not key=value");
    const std::string key = trim(item.substr(0, eq));
    out[key] = to_double(trim(item.substr(eq + 1)), "inline parameter " + key);
  }
  return out;
}

double parse_duration(const std::string& raw, const Preset& preset) {
  const std::string text = trim(raw);
  struct Suffix {
    const char* name;
    double seconds;
  };
  static constexpr Suffix suffixes[] = {{"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}};
  for (const auto& s : suffixes) {
    const std::string suf = s.name;
    if (text.size() > suf.size() && text.compare(text.size() - suf.size(), suf.size(), suf) == 0) {
      if (!preset.units) throw UsageError("duration '" + text + "' has a unit but preset " + preset.name + " is dimensionless");
      const double v = to_double(text.substr(0, text.size() - suf.size()), "duration");
      return v * s.seconds / preset.units->time_unit();
    }
  }
  return to_double(text, "duration");
}

std::vector<double> parse_tf_range(const std::string& text, const Preset& preset) {
  const auto parts = split(text, ':');
  if (parts.size() != 3 && parts.size() != 4) throw UsageError("tf range must be from:to:count[:log]");
  const double from = parse_duration(parts[0], preset);
  const double to = parse_duration(parts[1], preset);
  const long count = to_long(parts[2], "tf range count");
  if (!(from > 0.0) || !(to >= from) || count < 1) throw UsageError("tf range needs 0 < from <= to and count >= 1");
  if (parts.size() == 4) {
    if (parts[3] != "log") throw UsageError("tf range spacing must be 'log'");
    return log_spaced(from, to, static_cast<std::size_t>(count));
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

std::vector<double> resolve_tf_list(const RunConfig& config, const Preset& preset) {
  std::vector<double> out;
  for (const auto& t : config.tf) out.push_back(parse_duration(t, preset));
  if (config.tf_range) {
    const auto r = parse_tf_range(*config.tf_range, preset);
    out.insert(out.end(), r.begin(), r.end());
  }
  if (out.empty()) out = preset.default_tf;
  for (double t : out)
    if (!(t > 0.0)) throw UsageError("t_f values must be positive");
  return out;
}

Preset preset_from_config(const RunConfig& config) {
  config.validate();
  Preset p;
  if (config.preset) {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), *config.preset) == names.end()) {
      throw UsageError("unknown preset '" + *config.preset + "'");
    }
    p = make_preset(*config.preset, config.n_target);
  } else {
    const auto kv = parse_kv_list(*config.inline_params);
    auto need = [&](const char* key) {
      const auto it = kv.find(key);
      if (it == kv.end()) throw UsageError(std::string("inline path needs ") + key);
      return it->second;
    };
    p.name = "inline";
    p.description = "inline parameters";
    p.path.A0 = need("A0");
    p.path.Af = kv.count("Af") ? kv.at("Af") : 2.0 * std::abs(p.path.A0);
    p.path.B0 = need("B0");
    p.path.eps = need("eps");
    p.path.kappa = kv.count("kappa") ? kv.at("kappa") : 100.0 / (p.path.A0 - p.path.Af);
    p.path.n_target = config.n_target.value_or(kv.count("n") ? static_cast<int>(kv.at("n")) : 2);
    p.path.C = kv.count("C") ? kv.at("C") : bias_for_target(p.path.n_target, p.path.A0, p.path.B0);
    p.default_tf = log_spaced(10.0, 2000.0, 24);
  }
  if (config.x_min || config.x_max || config.points) {
    p.grid = SpatialGrid(config.x_min.value_or(p.grid.x_min()), config.x_max.value_or(p.grid.x_max()),
                         config.points.value_or(p.grid.size()));
  }
  if (config.dt) p.dt = *config.dt;
  return p;
}

PotentialParams potential_from_config(const RunConfig& config, const Preset* preset) {
  if (preset) {
    const double A = config.lambda.value_or(preset->path.A0);
    return preset->path.at(A);
  }
  if (!config.inline_params) throw UsageError("eigen needs --preset or --inline");
  const auto kv = parse_kv_list(*config.inline_params);
  PotentialParams p;
  for (const auto& [key, value] : kv) {
    if (key == "A") {
      p.A = value;
    } else if (key == "B") {
      p.B = value;
    } else if (key == "C") {
      p.C = value;
    } else {
      throw UsageError("eigen inline block takes A, B, C; got '" + key + "'");
    }
  }
  return p;
}

}  // namespace fockprep
