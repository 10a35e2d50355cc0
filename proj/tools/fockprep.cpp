// fockprep: design and verify trap-deformation schedules that prepare Fock
// states by merging a biased double well into a harmonic trap.
//
// Exit codes: 0 success, 1 runtime/model error, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "fockprep/config.hpp"
#include "fockprep/errors.hpp"
#include "fockprep/experiments.hpp"
#include "fockprep/schedule.hpp"
#include "fockprep/spectral.hpp"
#include "fockprep/sweep_cache.hpp"

namespace fp = fockprep;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Flag values that override config file entries when given.
struct Flags {
  std::string config_file;
  std::string preset;
  std::string inline_params;
  int n = -1;
  std::string method;
  std::vector<std::string> tf;
  std::string tf_range;
  std::string out;
  std::string plot;
  std::string trajectory;
  std::size_t jobs = 0;
  std::string cache_dir;
  bool superposition = false;
  bool demux = false;
  std::size_t k = 0;
  double lambda = std::nan("");
  double x_min = std::nan("");
  double x_max = std::nan("");
  std::size_t points = 0;
  double dt = std::nan("");
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "key = value config file; flags override it");
  cmd->add_option("--preset", f.preset, "named preset (see `presets list`)");
  cmd->add_option("--inline", f.inline_params, "inline parameter block, comma-separated key=value");
  cmd->add_option("--n", f.n, "target Fock index");
  cmd->add_option("--x-min", f.x_min, "grid lower edge (internal units)");
  cmd->add_option("--x-max", f.x_max, "grid upper edge (internal units)");
  cmd->add_option("--points", f.points, "grid points");
}

fp::RunConfig build_config(const Flags& f) {
  fp::RunConfig c;
  if (!f.config_file.empty()) fp::apply_config(fp::parse_config_file(f.config_file), c);
  if (!f.preset.empty()) {
    c.preset = f.preset;
    c.inline_params.reset();
  }
  if (!f.inline_params.empty()) {
    c.inline_params = f.inline_params;
    if (f.preset.empty()) c.preset.reset();
  }
  if (f.n >= 0) c.n_target = f.n;
  if (!f.method.empty()) c.method = f.method;
  if (!f.tf.empty()) c.tf = f.tf;
  if (!f.tf_range.empty()) c.tf_range = f.tf_range;
  if (!f.out.empty()) c.csv_out = f.out;
  if (!f.plot.empty()) c.plot_out = f.plot;
  if (!f.trajectory.empty()) c.trajectory_out = f.trajectory;
  if (f.jobs > 0) c.jobs = f.jobs;
  if (!f.cache_dir.empty()) {
    c.cache_dir = f.cache_dir;
  } else if (!c.cache_dir) {
    if (const char* env = std::getenv(fp::kCacheDirEnv); env && *env) c.cache_dir = env;
  }
  if (f.superposition) c.superposition = true;
  if (f.demux) c.demux = true;
  if (f.k > 0) c.k = f.k;
  if (!std::isnan(f.lambda)) c.lambda = f.lambda;
  if (!std::isnan(f.x_min)) c.x_min = f.x_min;
  if (!std::isnan(f.x_max)) c.x_max = f.x_max;
  if (f.points > 0) c.points = f.points;
  if (!std::isnan(f.dt)) c.dt = f.dt;
  c.validate();
  return c;
}

std::vector<fp::Method> parse_methods(const std::string& text) {
  std::vector<fp::Method> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      out.push_back(fp::parse_method(item));
    } catch (const fp::InvalidArgument& e) {
      throw fp::UsageError(e.what());
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

fp::ScanOptions scan_options(const fp::RunConfig& c) {
  fp::ScanOptions o;
  o.jobs = c.jobs;
  o.profile.jobs = c.jobs;
  if (c.cache_dir) o.cache_dir = *c.cache_dir;
  return o;
}

std::string with_method_suffix(const std::string& path, fp::Method m, bool many) {
  if (!many) return path;
  const auto dot = path.rfind('.');
  const std::string tag = "_" + fp::to_string(m);
  if (dot == std::string::npos || path.find('/', dot) != std::string::npos) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

int cmd_presets() {
  for (const auto& name : fp::preset_names()) {
    const auto p = fp::make_preset(name);
    std::printf("%s: %s\n", name.c_str(), p.description.c_str());
    std::printf("  A0=%.10g Af=%.10g B0=%.10g kappa=%.10g eps=%.10g C=%.10g n=%d\n", p.path.A0, p.path.Af,
                p.path.B0, p.path.kappa, p.path.eps, p.path.C, p.path.n_target);
    std::printf("  grid=[%g, %g] x %zu dt=%g%s\n", p.grid.x_min(), p.grid.x_max(), p.grid.size(), p.dt,
                p.units ? " (SI preset)" : "");
  }
  return 0;
}

int cmd_eigen(const fp::RunConfig& c) {
  std::unique_ptr<fp::Preset> preset;
  fp::SpatialGrid grid(-20.0, 20.0, 512);
  if (c.preset) {
    preset = std::make_unique<fp::Preset>(fp::preset_from_config(c));
    grid = preset->grid;
  } else if (c.x_min || c.x_max || c.points) {
    grid = fp::SpatialGrid(c.x_min.value_or(grid.x_min()), c.x_max.value_or(grid.x_max()),
                           c.points.value_or(grid.size()));
  }
  const auto p = fp::potential_from_config(c, preset.get());
  const auto eig = fp::eigensolve(p, grid, c.k);
  std::printf("# A=%.12g B=%.12g C=%.12g\n", p.A, p.B, p.C);
  std::printf("index,energy,mean_x,prob_right\n");
  for (std::size_t i = 0; i < eig.k(); ++i) {
    const auto loc = fp::localization(eig, grid, i);
    std::printf("%zu,%.12g,%.12g,%.12g\n", i, eig.energies[i], loc.mean_x, loc.prob_right);
  }
  return 0;
}

int cmd_design(const fp::RunConfig& c) {
  const auto preset = fp::preset_from_config(c);
  const auto methods = parse_methods(c.method);
  if (methods.size() != 1) throw fp::UsageError("design takes a single --method");
  const auto tfs = fp::resolve_tf_list(c, preset);
  if (c.tf.size() + (c.tf_range ? 1 : 0) == 0 || tfs.size() != 1) throw fp::UsageError("design needs exactly one --tf");
  preset.validate();
  const fp::Protocol protocol(preset, methods.front(), scan_options(c));
  const auto s = protocol.schedule(tfs.front());
  if (c.schedule_out || c.csv_out) {
    const std::string path = c.schedule_out ? *c.schedule_out : *c.csv_out;
    std::ofstream out(path);
    if (!out) throw fp::IoError("cannot open " + path);
    fp::write_schedule(out, s);
  } else {
    fp::write_schedule(std::cout, s);
  }
  if (s.c()) {
    std::fprintf(stderr, "c = %.12g\n", *s.c());
    if (c.schedule_out || c.csv_out) std::printf("c=%.12g\n", *s.c());
  } else if (c.schedule_out || c.csv_out) {
    std::printf("c=none\n");
  }
  return 0;
}

int cmd_scan(const fp::RunConfig& c) {
  const auto preset = fp::preset_from_config(c);
  const auto methods = parse_methods(c.method);
  const auto tfs = fp::resolve_tf_list(c, preset);
  if (c.trajectory_out && tfs.size() != 1) throw fp::UsageError("--trajectory needs a single t_f");
  preset.validate();

  std::size_t rows_ok = 0;
  std::vector<std::pair<std::string, std::string>> curves;
  for (const auto m : methods) {
    const auto options = scan_options(c);
    const fp::Protocol protocol(preset, m, options);

    if (c.demux) {
      for (double t : tfs) {
        const auto r = fp::run_demultiplexing(protocol, t);
        std::printf("demux method=%s t_f=%.12g F_forward=%.12g F_backward=%.12g\n", fp::to_string(m).c_str(),
                    t * preset.time_scale(), r.forward, r.backward);
        ++rows_ok;
      }
      continue;
    }

    if (c.trajectory_out) {
      const auto s = protocol.schedule(tfs.front());
      std::ofstream traj(*c.trajectory_out);
      if (!traj) throw fp::IoError("cannot open " + *c.trajectory_out);
      auto opts = protocol.propagation_options();
      opts.observer = fp::trajectory_csv(traj);
      opts.observe_target = &protocol.final(preset.n_target());
      fp::propagate(protocol.initial(preset.n_target()), s, opts);
    }

    fp::ScanResult meta;
    meta.method = fp::to_string(m);
    meta.n_target = preset.n_target();
    meta.superposition = c.superposition;
    meta.time_scale = preset.time_scale();
    meta.si_time = preset.units.has_value();

    std::unique_ptr<std::ofstream> file;
    std::unique_ptr<fp::ScanCsvWriter> writer;
    std::string csv_path;
    if (c.csv_out) {
      csv_path = with_method_suffix(*c.csv_out, m, methods.size() > 1);
      file = std::make_unique<std::ofstream>(csv_path);
      if (!*file) throw fp::IoError("cannot open " + csv_path);
      writer = std::make_unique<fp::ScanCsvWriter>(*file, meta);
      curves.emplace_back(meta.method, csv_path);
    }
    std::size_t finished = 0;
    auto opts = scan_options(c);
    opts.on_row = [&](std::size_t index, const fp::ScanRow& row) {
      ++finished;
      if (row.ok) {
        std::fprintf(stderr, "[%zu/%zu] %s t_f=%.6g F_n=%.6f%s\n", finished, tfs.size(), meta.method.c_str(),
                     row.t_f * preset.time_scale(), row.F_n,
                     c.superposition ? (" F_0=" + std::to_string(row.F_0)).c_str() : "");
      } else {
        std::fprintf(stderr, "[%zu/%zu] %s t_f=%.6g failed: %s\n", finished, tfs.size(), meta.method.c_str(),
                     row.t_f * preset.time_scale(), row.error.c_str());
      }
      if (writer) writer->submit(index, row);
    };
    const auto result = fp::run_scan(protocol, tfs, c.superposition, opts);
    for (const auto& row : result.rows) rows_ok += row.ok ? 1 : 0;
    if (!writer) fp::emit_csv(result, std::cout);
    if (const auto best = fp::best_row(result)) {
      std::printf("summary method=%s n=%zu best_t_f=%.12g best_F=%.12g%s\n", meta.method.c_str(), meta.n_target,
                  best->t_f * preset.time_scale(), c.superposition ? best->F_avg : best->F_n,
                  c.superposition ? " (superposition average)" : "");
    } else {
      std::printf("summary method=%s n=%zu no successful rows\n", meta.method.c_str(), meta.n_target);
    }
  }
  if (c.plot_out) {
    if (curves.empty()) throw fp::UsageError("--plot needs --out");
    std::ofstream plot(*c.plot_out);
    if (!plot) throw fp::IoError("cannot open " + *c.plot_out);
    fp::emit_gnuplot(plot, curves, preset.units.has_value(), c.superposition);
  }
  return rows_ok > 0 ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fockprep: trap-deformation schedules for trapped-ion Fock state preparation"};
  app.require_subcommand(1);
  Flags f;

  auto* presets = app.add_subcommand("presets", "preset operations");
  presets->add_subcommand("list", "list built-in presets");
  presets->require_subcommand(1);

  auto* eigen = app.add_subcommand("eigen", "lowest eigenpairs of a static potential");
  add_common(eigen, f);
  eigen->add_option("--k", f.k, "number of eigenpairs");
  eigen->add_option("--lambda", f.lambda, "quadratic coefficient A along the preset path (default A0)");

  auto* design = app.add_subcommand("design", "design a schedule A(t)");
  add_common(design, f);
  design->add_option("--method", f.method, "faquad, la or linear");
  design->add_option("--tf", f.tf, "duration (internal units, or with s/ms/us/ns for SI presets)");
  design->add_option("--out", f.out, "schedule file (default standard output)");
  design->add_option("--jobs", f.jobs, "worker threads");
  design->add_option("--cache-dir", f.cache_dir, "profile cache directory");

  auto* scan = app.add_subcommand("scan", "fidelity versus t_f");
  add_common(scan, f);
  scan->add_option("--method", f.method, "faquad, la, linear, or a comma list");
  scan->add_option("--tf", f.tf, "durations")->delimiter(',');
  scan->add_option("--tf-range", f.tf_range, "from:to:count[:log]");
  scan->add_option("--out", f.out, "CSV output (suffixed per method when several)");
  scan->add_option("--plot", f.plot, "gnuplot script referencing the CSV files");
  scan->add_option("--trajectory", f.trajectory, "trajectory CSV for a single t_f");
  scan->add_option("--jobs", f.jobs, "worker threads");
  scan->add_option("--cache-dir", f.cache_dir, "profile cache directory");
  scan->add_option("--dt", f.dt, "time step (internal units)");
  scan->add_flag("--superposition", f.superposition, "also propagate the ground state and report (F_0+F_n)/2");
  scan->add_flag("--demux", f.demux, "compare multiplexing with the reversed (demultiplexing) run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (presets->parsed()) return cmd_presets();
    const auto config = build_config(f);
    if (eigen->parsed()) return cmd_eigen(config);
    if (design->parsed()) return cmd_design(config);
    if (scan->parsed()) return cmd_scan(config);
  } catch (const fp::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const fp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
