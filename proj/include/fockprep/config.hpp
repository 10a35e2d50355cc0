#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockprep/experiments.hpp"

namespace fockprep {

/// Bad command line or config file. The CLI maps this to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Settings for one CLI run. Built from an optional config file, then
/// overridden by flags.
struct RunConfig {
  std::optional<std::string> preset;
  /// Comma-separated key=value block used instead of a preset, e.g.
  /// "A=0.5,B=0,C=0" for eigen or "A0=-0.25,Af=0.5,B0=0.002,kappa=-133,eps=0.05,n=2" for design/scan.
  std::optional<std::string> inline_params;
  std::string method = "faquad";
  std::optional<int> n_target;
  std::vector<std::string> tf;
  std::optional<std::string> tf_range;
  std::optional<std::string> csv_out;
  std::optional<std::string> plot_out;
  std::optional<std::string> schedule_out;
  std::optional<std::string> trajectory_out;
  std::size_t jobs = 1;
  std::optional<std::string> cache_dir;
  bool superposition = false;
  bool demux = false;
  std::size_t k = 6;
  std::optional<double> lambda;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::optional<std::size_t> points;
  std::optional<double> dt;

  /// Exactly one of preset / inline_params, jobs >= 1. Throws UsageError.
  void validate() const;
};

/// Parses "key = value" lines grouped under "[section]" headers. Keys are
/// returned as "section.key" ("key" before the first header). '#' and ';'
/// start comment lines.
std::map<std::string, std::string> parse_config_text(std::istream& in);
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Applies recognised entries to `config`; unknown keys are a UsageError.
/// Sections: [run] preset method n jobs cache_dir superposition demux,
/// [inline] any inline key, [grid] x_min x_max points dt, [scan] tf tf_range,
/// [output] csv plot schedule trajectory, [eigen] k lambda.
void apply_config(const std::map<std::string, std::string>& entries, RunConfig& config);

/// "a=1,b=2" -> {a: 1, b: 2}. Throws UsageError on malformed items.
std::map<std::string, double> parse_kv_list(const std::string& text);

/// Duration in internal units. A bare number is already internal; suffixes
/// s, ms, us, ns need an SI preset.
double parse_duration(const std::string& text, const Preset& preset);

/// "from:to:count" (linear) or "from:to:count:log".
std::vector<double> parse_tf_range(const std::string& text, const Preset& preset);

/// Collects t_f values from config.tf and config.tf_range, or the preset's
/// default list when neither is given.
std::vector<double> resolve_tf_list(const RunConfig& config, const Preset& preset);

/// Preset from the config: a named preset or an inline path block, with grid
/// and dt overrides applied.
Preset preset_from_config(const RunConfig& config);

/// Static potential for `eigen`: an inline "A=,B=,C=" block, or a preset path
/// evaluated at config.lambda (default A0).
PotentialParams potential_from_config(const RunConfig& config, const Preset* preset);

}  // namespace fockprep
