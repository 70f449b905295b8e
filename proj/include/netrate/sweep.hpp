// Distance sweeps over the relay and two-way relay channels, CSV / metadata /
// SVG artifact generation. All text output is byte-stable: fixed 6-decimal
// floats, LF line endings, deterministic row order.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace netrate::sweep {

inline constexpr const char* kVersion = "0.1.0";

/// Configuration errors (bad field values, unknown schemes, bad files).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SweepConfig {
  std::string mode = "relay";  // relay | twrc
  double p1 = 5.0, p2 = 5.0, p3 = 10.0;
  double n1 = 1.0, n2 = 1.0, n3 = 1.0;
  double gamma = 3.0;
  double d_min = 0.05, d_max = 0.95;
  int steps = 50;
  std::vector<std::string> schemes;  // subset of the mode's scheme set
  int grid_points = 21;
  int refine_iters = 50;
  double q_min = 1e-3, q_max = 1e3;
  std::string out;   // CSV path ("" = stdout only)
  std::string meta;  // sidecar path ("" = derive from out)
  int threads = 0;   // 0 = hardware concurrency

  static SweepConfig relay_defaults();
  static SweepConfig twrc_defaults();
  void validate() const;

  /// Uniform inclusive d grid; steps == 1 yields {d_min}.
  std::vector<double> d_grid() const;
};

/// Scheme names in canonical output order for each mode.
const std::vector<std::string>& relay_schemes();
const std::vector<std::string>& twrc_schemes();

/// CSV text (header `d,scheme,rate,binding`), rows ordered by d then by
/// canonical scheme order.
std::string relay_sweep_csv(const SweepConfig& config);

/// CSV text (header `d,scheme,r1,r2,sum,binding`).
std::string twrc_sweep_csv(const SweepConfig& config);

/// Metadata sidecar: every constant, default and budget that shaped the run.
std::string meta_json(const SweepConfig& config);

/// Runs the sweep for config.mode and writes CSV + sidecar atomically
/// (write-then-rename; no partial files on failure). Returns the CSV text.
std::string run_sweep(const SweepConfig& config);

/// Renders a sweep CSV as an SVG line chart, one polyline per scheme.
/// Throws ConfigError on unknown CSV schema or empty data.
std::string render_svg(const std::string& csv_text);

/// Reads `csv_path`, writes the rendered SVG to `svg_path` atomically.
void emit_plot(const std::string& csv_path, const std::string& svg_path);

/// Atomic text-file write helper (tmp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);

std::string format_bits(double v);  // fixed "%.6f"

}  // namespace netrate::sweep
