#include "fockprep/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>

#include "fockprep/constants.hpp"
#include "fockprep/errors.hpp"
#include "fockprep/parallel.hpp"
#include "fockprep/spectral.hpp"
#include "fockprep/sweep_cache.hpp"

namespace fockprep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_g12(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void check_confined(const Preset& p, double A, std::size_t k) {
  try {
    eigensolve(p.path.at(A), p.grid, k);
  } catch (const GridTooSmallError& e) {
    throw InvalidArgument("preset " + p.name + ": " + e.what());
  }
}

}  // namespace

void Preset::validate() const {
  path.validate_multiplexing();
  if (path.n_target < 1) throw InvalidArgument("preset " + name + ": n_target must be >= 1");
  if (!(dt > 0.0)) throw InvalidArgument("preset " + name + ": dt must be positive");
  const auto bias = small_bias_check(path.at(path.A0));
  if (!bias.pass) {
    throw InvalidArgument("preset " + name + ": bias outside the small-bias regime (ratio " +
                          std::to_string(bias.ratio) + ")");
  }
  check_confined(*this, path.A0, profile_k());
  check_confined(*this, path.Af, profile_k());
}

Preset mini_preset(int n_target) {
  Preset p;
  p.name = "mini";
  p.description = "dimensionless double well, D = 16, depth 8 quanta";
  p.path.A0 = -0.25;
  p.path.Af = 0.5;
  p.path.B0 = 1.0 / 512.0;
  p.path.eps = 0.05;
  p.path.kappa = 100.0 / (p.path.A0 - p.path.Af);
  p.path.n_target = n_target;
  p.path.C = bias_for_target(n_target, p.path.A0, p.path.B0);
  p.grid = SpatialGrid(-20.0, 20.0, 512);
  p.dt = 0.005;
  p.default_tf = log_spaced(10.0, 2000.0, 24);
  return p;
}

Preset paper_preset(int n_target) {
  constexpr double alpha0 = -4.7e-12;  // N/m
  constexpr double alpha_f = 9.4e-12;  // N/m
  constexpr double beta0 = 0.052;      // N/m^3
  constexpr double eps = 1e-12;        // N/m
  constexpr double mass = 9.012 * constants::kAtomicMassUnit;
  const UnitSystem units(mass, alpha0);

  Preset p;
  p.name = "paper";
  p.description = "Be-9, alpha0 = -4.7 pN/m, beta0 = 0.052 N/m^3, eps = 1 pN/m";
  p.units = units;
  const auto start = to_dimensionless({alpha0, beta0, 0.0}, units);
  const auto end = to_dimensionless({alpha_f, 0.0, 0.0}, units);
  const double alpha_scale = units.energy_unit() / (units.length_unit() * units.length_unit());
  p.path.A0 = start.A;
  p.path.Af = end.A;
  p.path.B0 = start.B;
  p.path.eps = eps / alpha_scale;
  p.path.kappa = 100.0 / (alpha0 - alpha_f) * alpha_scale;
  p.path.n_target = n_target;
  p.path.C = bias_for_target(n_target, p.path.A0, p.path.B0);
  p.grid = SpatialGrid(-1100.0, 1100.0, 16384);
  p.dt = 0.2;
  p.default_tf = log_spaced(20e-6 / units.time_unit(), 200e-6 / units.time_unit(), 16);
  return p;
}

std::vector<std::string> preset_names() { return {"mini", "paper"}; }

Preset make_preset(const std::string& name, std::optional<int> n_target) {
  if (name == "mini") return mini_preset(n_target.value_or(2));
  if (name == "paper") return paper_preset(n_target.value_or(4));
  throw InvalidArgument("unknown preset '" + name + "'");
}

std::vector<double> log_spaced(double from, double to, std::size_t count) {
  if (!(from > 0.0) || !(to >= from) || count == 0) throw InvalidArgument("log_spaced: need 0 < from <= to");
  if (count == 1) return {from};
  std::vector<double> out(count);
  const double a = std::log(from), b = std::log(to);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = from;
  out.back() = to;
  return out;
}

Protocol::Protocol(const Preset& preset, Method method, const ScanOptions& options)
    : preset_(preset), method_(method) {
  preset_.validate();
  const std::size_t n = preset.n_target();
  if (method != Method::linear) {
    ProfileOptions popt = options.profile;
    popt.jobs = std::max<std::size_t>(popt.jobs, options.jobs);
    if (popt.k == 0) popt.k = preset.profile_k();
    std::string key;
    if (options.cache_dir) {
      key = profile_cache_key(method, preset.path, preset.grid, n, popt);
      profile_ = load_profile(*options.cache_dir, key);
    }
    if (!profile_) {
      profile_ = design_profile(method, preset.path, preset.grid, n, popt);
      if (options.cache_dir) store_profile(*options.cache_dir, key, *profile_);
    }
  }
  const auto start = eigensolve(preset.path.at(preset.path.A0), preset.grid, n + 1);
  const auto end = eigensolve(preset.path.at(preset.path.Af), preset.grid, n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    initial_.push_back(Wavefunction::from_real(preset.grid, start.states[i]));
    final_.push_back(Wavefunction::from_real(preset.grid, end.states[i]));
  }
}

Schedule Protocol::schedule(double t_f) const {
  if (method_ == Method::linear) return linear_schedule(preset_.path, t_f);
  return invert_profile(*profile_, preset_.path, t_f);
}

const Wavefunction& Protocol::initial(std::size_t index) const {
  if (index >= initial_.size()) throw InvalidArgument("protocol: initial state index out of range");
  return initial_[index];
}

const Wavefunction& Protocol::final(std::size_t index) const {
  if (index >= final_.size()) throw InvalidArgument("protocol: final state index out of range");
  return final_[index];
}

PropagationOptions Protocol::propagation_options() const {
  PropagationOptions o;
  o.dt = preset_.dt;
  return o;
}

ScanResult run_scan(const Protocol& protocol, std::vector<double> t_f_list, bool superposition,
                    const ScanOptions& options) {
  for (double t : t_f_list) {
    if (!std::isfinite(t) || !(t > 0.0)) throw InvalidArgument("scan: t_f values must be positive");
  }
  std::sort(t_f_list.begin(), t_f_list.end());
  t_f_list.erase(std::unique(t_f_list.begin(), t_f_list.end()), t_f_list.end());

  const Preset& preset = protocol.preset();
  const std::size_t n = preset.n_target();
  ScanResult result;
  result.method = to_string(protocol.method());
  result.n_target = n;
  result.superposition = superposition;
  result.time_scale = preset.time_scale();
  result.si_time = preset.units.has_value();
  result.rows.resize(t_f_list.size());

  std::mutex report_mutex;
  parallel_for(t_f_list.size(), options.jobs, [&](std::size_t i) {
    ScanRow row;
    row.t_f = t_f_list[i];
    row.F_0 = kNaN;
    row.F_avg = kNaN;
    row.c = kNaN;
    try {
      const Schedule s = protocol.schedule(row.t_f);
      if (s.c()) row.c = *s.c();
      const auto opts = protocol.propagation_options();
      const auto excited = propagate(protocol.initial(n), s, opts);
      row.F_n = std::min(fidelity(excited.final_state, protocol.final(n)), 1.0);
      if (superposition) {
        const auto ground = propagate(protocol.initial(0), s, opts);
        row.F_0 = std::min(fidelity(ground.final_state, protocol.final(0)), 1.0);
        row.F_avg = superposition_fidelity(row.F_0, row.F_n);
      }
    } catch (const Error& e) {
      row.ok = false;
      row.F_n = kNaN;
      row.error = e.what();
    }
    result.rows[i] = row;
    if (options.on_row) {
      std::lock_guard lock(report_mutex);
      options.on_row(i, row);
    }
  });
  return result;
}

ScanResult run_scan(const Preset& preset, Method method, std::vector<double> t_f_list, const ScanOptions& options) {
  return run_scan(Protocol(preset, method, options), std::move(t_f_list), false, options);
}

ScanResult run_superposition(const Preset& preset, Method method, std::vector<double> t_f_list,
                             const ScanOptions& options) {
  return run_scan(Protocol(preset, method, options), std::move(t_f_list), true, options);
}

DemuxResult run_demultiplexing(const Protocol& protocol, double t_f) {
  const std::size_t n = protocol.preset().n_target();
  const Schedule forward = protocol.schedule(t_f);
  const Schedule backward = reverse(forward);
  const auto opts = protocol.propagation_options();
  DemuxResult r;
  r.forward = fidelity(propagate(protocol.initial(n), forward, opts).final_state, protocol.final(n));
  r.backward = fidelity(propagate(protocol.final(n), backward, opts).final_state, protocol.initial(n));
  return r;
}

DemuxResult run_demultiplexing(const Preset& preset, Method method, double t_f, const ScanOptions& options) {
  return run_demultiplexing(Protocol(preset, method, options), t_f);
}

std::optional<ScanRow> best_row(const ScanResult& result) {
  std::optional<ScanRow> best;
  for (const auto& row : result.rows) {
    if (!row.ok) continue;
    const double score = result.superposition ? row.F_avg : row.F_n;
    const double current = best ? (result.superposition ? best->F_avg : best->F_n) : -1.0;
    if (score > current) best = row;
  }
  return best;
}

ScanCsvWriter::ScanCsvWriter(std::ostream& out, const ScanResult& meta)
    : out_(out), time_scale_(meta.si_time ? meta.time_scale : 1.0) {
  out_ << "# fockprep scan method=" << meta.method << " n=" << meta.n_target
       << " superposition=" << (meta.superposition ? 1 : 0) << " t_f_unit=" << (meta.si_time ? "s" : "internal")
       << "\n";
  out_ << "t_f,F_n,F_0,F_avg,c\n";
  out_.flush();
}

void ScanCsvWriter::write_row(const ScanRow& row) {
  const double t = row.t_f * time_scale_;
  if (!row.ok) {
    std::string msg = row.error;
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    out_ << "# failed t_f=" << format_g12(t) << ": " << msg << "\n";
  } else {
    out_ << format_g12(t) << "," << format_g12(row.F_n) << "," << format_g12(row.F_0) << ","
         << format_g12(row.F_avg) << "," << format_g12(row.c) << "\n";
  }
  out_.flush();
  if (!out_) throw IoError("scan csv: write failed");
}

void ScanCsvWriter::submit(std::size_t index, const ScanRow& row) {
  held_.emplace(index, row);
  for (auto it = held_.find(next_); it != held_.end(); it = held_.find(next_)) {
    write_row(it->second);
    held_.erase(it);
    ++next_;
  }
}

void emit_csv(const ScanResult& result, std::ostream& out) {
  ScanCsvWriter writer(out, result);
  for (const auto& row : result.rows) writer.write_row(row);
}

void emit_csv(const ScanResult& result, const std::filesystem::path& destination) {
  std::ofstream out(destination);
  if (!out) throw IoError("cannot open " + destination.string() + " for writing");
  emit_csv(result, out);
}

std::vector<ScanRow> read_scan_csv(std::istream& in) {
  std::vector<ScanRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "t_f,F_n,F_0,F_avg,c") throw IoError("scan csv: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(fields, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    if (v.size() != 5) throw IoError("scan csv: expected 5 columns in '" + line + "'");
    rows.push_back(ScanRow{v[0], v[1], v[2], v[3], v[4], true, {}});
  }
  return rows;
}

void emit_gnuplot(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& curves, bool si_time,
                  bool superposition) {
  out << "set datafile separator ','\n";
  out << "set key bottom right\n";
  out << "set logscale x\n";
  out << "set xlabel 't_f" << (si_time ? " [s]" : " [1/omega_0]") << "'\n";
  out << "set ylabel 'fidelity'\n";
  out << "set yrange [0:1.02]\n";
  out << "plot ";
  bool first = true;
  for (const auto& [label, csv] : curves) {
    if (!first) out << ", \\\n     ";
    first = false;
    out << "'" << csv << "' skip 2 using 1:2 with linespoints title '" << label << " F_n'";
    if (superposition) {
      out << ", \\\n     '" << csv << "' skip 2 using 1:4 with linespoints title '" << label << " (F_0+F_n)/2'";
    }
  }
  out << "\n";
}

}  // namespace fockprep
