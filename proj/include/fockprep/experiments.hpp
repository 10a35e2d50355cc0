#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fockprep/dynamics.hpp"
#include "fockprep/grid.hpp"
#include "fockprep/model.hpp"
#include "fockprep/schedule.hpp"

namespace fockprep {

/// A complete multiplexing setup: trap path, grid, target and step size.
struct Preset {
  std::string name;
  std::string description;
  std::optional<UnitSystem> units;  // present for presets defined in SI
  DeformationPath path;
  SpatialGrid grid{-20.0, 20.0, 512};
  double dt = 0.005;
  std::size_t k = 0;  // eigenstates per profile node; 0 means n_target + 3
  std::vector<double> default_tf;  // internal time units

  std::size_t n_target() const { return static_cast<std::size_t>(path.n_target); }
  std::size_t profile_k() const { return k == 0 ? n_target() + 3 : k; }
  /// Seconds per internal time unit, or 1 for dimensionless presets.
  double time_scale() const { return units ? units->time_unit() : 1.0; }
  /// Small-bias and confinement checks at both ends of the path.
  void validate() const;
};

/// Dimensionless desk-scale setup: wells 16 apart, 8 quanta deep, target n = 2.
Preset mini_preset(int n_target = 2);
/// Be-9 trap with alpha0 = -4.7 pN/m, beta0 = 0.052 N/m^3, eps = 1 pN/m and
/// kappa = 100 / (alpha0 - alpha_f).
Preset paper_preset(int n_target = 4);
std::vector<std::string> preset_names();
/// Throws InvalidArgument for unknown names.
Preset make_preset(const std::string& name, std::optional<int> n_target = std::nullopt);

std::vector<double> log_spaced(double from, double to, std::size_t count);

struct ScanRow {
  double t_f = 0.0;  // internal units
  double F_n = 0.0;
  double F_0 = 0.0;
  double F_avg = 0.0;
  double c = 0.0;  // NaN for linear ramps
  bool ok = true;
  std::string error;
};

struct ScanResult {
  std::string method;
  std::size_t n_target = 0;
  bool superposition = false;
  double time_scale = 1.0;  // seconds per internal unit when SI
  bool si_time = false;
  std::vector<ScanRow> rows;  // ascending t_f
};

struct ScanOptions {
  std::size_t jobs = 1;
  ProfileOptions profile;
  std::optional<std::filesystem::path> cache_dir;
  /// Called once per finished row (from worker threads, serialized).
  std::function<void(std::size_t index, const ScanRow&)> on_row;
};

/// Everything a scan reuses across t_f: the adiabaticity profile and the
/// initial/target eigenstates. Schedules for any t_f are rescalings of one
/// profile.
class Protocol {
 public:
  Protocol(const Preset& preset, Method method, const ScanOptions& options = {});

  Schedule schedule(double t_f) const;
  const Preset& preset() const { return preset_; }
  Method method() const { return method_; }
  const std::optional<AdiabaticityProfile>& profile() const { return profile_; }

  /// Eigenstate `index` of H(A0) and H(Af).
  const Wavefunction& initial(std::size_t index) const;
  const Wavefunction& final(std::size_t index) const;

  PropagationOptions propagation_options() const;

 private:
  Preset preset_;
  Method method_;
  std::optional<AdiabaticityProfile> profile_;
  std::vector<Wavefunction> initial_;
  std::vector<Wavefunction> final_;
};

ScanResult run_scan(const Preset& preset, Method method, std::vector<double> t_f_list,
                    const ScanOptions& options = {});
ScanResult run_superposition(const Preset& preset, Method method, std::vector<double> t_f_list,
                             const ScanOptions& options = {});
ScanResult run_scan(const Protocol& protocol, std::vector<double> t_f_list, bool superposition,
                    const ScanOptions& options = {});

struct DemuxResult {
  double forward = 0.0;   // eigenstate n of H(A0) -> |n> of H(Af)
  double backward = 0.0;  // |n> of H(Af) under the reversed schedule -> eigenstate n of H(A0)
};

DemuxResult run_demultiplexing(const Protocol& protocol, double t_f);
DemuxResult run_demultiplexing(const Preset& preset, Method method, double t_f, const ScanOptions& options = {});

/// Best row by F_avg for superposition scans, by F_n otherwise.
std::optional<ScanRow> best_row(const ScanResult& result);

/// Streams scan rows as CSV. Header: one "# ..." comment line with the time
/// unit, then "t_f,F_n,F_0,F_avg,c". Failed rows become "#" comment lines.
class ScanCsvWriter {
 public:
  ScanCsvWriter(std::ostream& out, const ScanResult& meta);
  void write_row(const ScanRow& row);
  /// Accepts rows in completion order and writes them in index order as soon
  /// as every earlier index has arrived, flushing after each row.
  void submit(std::size_t index, const ScanRow& row);

 private:
  std::ostream& out_;
  double time_scale_;
  std::size_t next_ = 0;
  std::map<std::size_t, ScanRow> held_;
};

void emit_csv(const ScanResult& result, std::ostream& out);
void emit_csv(const ScanResult& result, const std::filesystem::path& destination);
/// Parses rows written by emit_csv; t_f is returned in the file's unit.
std::vector<ScanRow> read_scan_csv(std::istream& in);

/// gnuplot command file plotting F_n (and F_avg for superposition files)
/// against t_f, one curve per (label, csv) pair.
void emit_gnuplot(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& curves,
                  bool si_time, bool superposition);

}  // namespace fockprep
