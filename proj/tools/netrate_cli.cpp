// netrate: distance sweeps, single-point evaluations and cut reports for
// relay-channel rate bounds. Subcommands: relay-sweep, twrc-sweep, point,
// dmn-eval, plot. Exit codes: 0 success, 2 configuration error, 3 compute
// error.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netrate/dmn.hpp"
#include "netrate/sweep.hpp"

namespace {

using netrate::sweep::ConfigError;
using netrate::sweep::SweepConfig;

struct SweepFlags {
  double p1 = 0, p2 = 0, p3 = 0;
  double n1 = 0, n2 = 0, n3 = 0;
  double gamma = 0;
  double d_min = 0, d_max = 0;
  double q_min = 0, q_max = 0;
  int steps = 0, grid = 0, refine_iters = 0, threads = 0;
  std::string schemes, out, meta, config_path;
};

void add_sweep_options(CLI::App* cmd, SweepFlags& f, bool twrc) {
  cmd->add_option("--p1", f.p1, "transmit power of node 1");
  cmd->add_option("--p2", f.p2, "transmit power of node 2");
  if (twrc) cmd->add_option("--p3", f.p3, "transmit power of the relay (node 3)");
  cmd->add_option("--n1", f.n1, "noise variance at receiver 1");
  cmd->add_option("--n2", f.n2, "noise variance at receiver 2");
  if (twrc) cmd->add_option("--n3", f.n3, "noise variance at the relay");
  if (twrc) cmd->add_option("--gamma", f.gamma, "path-loss exponent");
  cmd->add_option("--d-min", f.d_min, "smallest relay position");
  cmd->add_option("--d-max", f.d_max, "largest relay position");
  cmd->add_option("--steps", f.steps, "number of grid points in d");
  cmd->add_option("--schemes", f.schemes, "comma-separated scheme list");
  cmd->add_option("--grid", f.grid, "optimizer grid points per dimension");
  cmd->add_option("--refine-iters", f.refine_iters, "optimizer refinement cycles");
  cmd->add_option("--q-min", f.q_min, "compression-noise search lower bound");
  cmd->add_option("--q-max", f.q_max, "compression-noise search upper bound");
  cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)");
  cmd->add_option("--out", f.out, "output CSV path");
  cmd->add_option("--meta", f.meta, "metadata sidecar path (default: out with .meta)");
  cmd->add_option("--config", f.config_path, "JSON config file (flags override it)");
}

std::vector<std::string> split_schemes(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

void apply_config_file(SweepConfig& c, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "p1") c.p1 = value.get<double>();
      else if (key == "p2") c.p2 = value.get<double>();
      else if (key == "p3") c.p3 = value.get<double>();
      else if (key == "n1") c.n1 = value.get<double>();
      else if (key == "n2") c.n2 = value.get<double>();
      else if (key == "n3") c.n3 = value.get<double>();
      else if (key == "gamma") c.gamma = value.get<double>();
      else if (key == "d_min") c.d_min = value.get<double>();
      else if (key == "d_max") c.d_max = value.get<double>();
      else if (key == "steps") c.steps = value.get<int>();
      else if (key == "grid") c.grid_points = value.get<int>();
      else if (key == "refine_iters") c.refine_iters = value.get<int>();
      else if (key == "q_min") c.q_min = value.get<double>();
      else if (key == "q_max") c.q_max = value.get<double>();
      else if (key == "threads") c.threads = value.get<int>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "meta") c.meta = value.get<std::string>();
      else if (key == "schemes") c.schemes = value.get<std::vector<std::string>>();
      else throw ConfigError("config: unknown field '" + key + "'");
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config: bad value for field '" + key + "'");
    }
  }
}

void apply_flags(SweepConfig& c, const CLI::App* cmd, const SweepFlags& f) {
  auto given = [&](const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--p1")) c.p1 = f.p1;
  if (given("--p2")) c.p2 = f.p2;
  if (given("--p3")) c.p3 = f.p3;
  if (given("--n1")) c.n1 = f.n1;
  if (given("--n2")) c.n2 = f.n2;
  if (given("--n3")) c.n3 = f.n3;
  if (given("--gamma")) c.gamma = f.gamma;
  if (given("--d-min")) c.d_min = f.d_min;
  if (given("--d-max")) c.d_max = f.d_max;
  if (given("--steps")) c.steps = f.steps;
  if (given("--schemes")) c.schemes = split_schemes(f.schemes);
  if (given("--grid")) c.grid_points = f.grid;
  if (given("--refine-iters")) c.refine_iters = f.refine_iters;
  if (given("--q-min")) c.q_min = f.q_min;
  if (given("--q-max")) c.q_max = f.q_max;
  if (given("--threads")) c.threads = f.threads;
  if (given("--out")) c.out = f.out;
  if (given("--meta")) c.meta = f.meta;
}

SweepConfig assemble_config(const CLI::App* cmd, const SweepFlags& f, bool twrc) {
  SweepConfig c = twrc ? SweepConfig::twrc_defaults() : SweepConfig::relay_defaults();
  if (cmd->count("--config")) apply_config_file(c, f.config_path);
  apply_flags(c, cmd, f);
  return c;
}

int run_sweep_command(const CLI::App* cmd, const SweepFlags& f, bool twrc) {
  const SweepConfig config = assemble_config(cmd, f, twrc);
  const std::string csv = netrate::sweep::run_sweep(config);
  if (config.out.empty()) {
    std::cout << csv;
  } else {
    std::cout << "wrote " << config.out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relay-network achievable-rate sweeps and bounds"};
  app.require_subcommand(1);

  SweepFlags relay_flags, twrc_flags, point_flags;
  double point_d = 0.5;
  std::string point_mode = "relay";

  CLI::App* relay_cmd = app.add_subcommand("relay-sweep", "rate-vs-position sweep, single relay");
  add_sweep_options(relay_cmd, relay_flags, false);

  CLI::App* twrc_cmd = app.add_subcommand("twrc-sweep", "sum-rate sweep, two-way relay");
  add_sweep_options(twrc_cmd, twrc_flags, true);

  CLI::App* point_cmd = app.add_subcommand("point", "evaluate all selected schemes at a single d");
  point_cmd->add_option("--mode", point_mode, "relay or twrc")->check(CLI::IsMember({"relay", "twrc"}));
  point_cmd->add_option("--d", point_d, "relay position")->required();
  add_sweep_options(point_cmd, point_flags, true);

  std::string dmn_file, dmn_out, dmn_theorem = "auto";
  bool dmn_literal = false;
  CLI::App* dmn_cmd = app.add_subcommand("dmn-eval", "cut report for a discrete network file");
  dmn_cmd->add_option("network", dmn_file, "network description (JSON)")->required();
  dmn_cmd->add_option("--theorem", dmn_theorem, "2, 3 or auto")
      ->check(CLI::IsMember({"2", "3", "auto"}));
  dmn_cmd->add_flag("--literal-v", dmn_literal,
                    "condition the compression penalty on V_{k-1}^N instead of the full V-tuple");
  dmn_cmd->add_option("--out", dmn_out, "write the report as JSON to this path");

  std::string plot_csv, plot_out;
  CLI::App* plot_cmd = app.add_subcommand("plot", "render a sweep CSV as an SVG chart");
  plot_cmd->add_option("csv", plot_csv, "input CSV")->required();
  plot_cmd->add_option("--out", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (relay_cmd->parsed()) return run_sweep_command(relay_cmd, relay_flags, false);
    if (twrc_cmd->parsed()) return run_sweep_command(twrc_cmd, twrc_flags, true);

    if (point_cmd->parsed()) {
      const bool twrc = point_mode == "twrc";
      SweepConfig config = assemble_config(point_cmd, point_flags, twrc);
      config.d_min = point_d;
      config.d_max = point_d;
      config.steps = 1;
      const std::string csv = netrate::sweep::run_sweep(config);
      if (config.out.empty()) std::cout << csv;
      return 0;
    }

    if (dmn_cmd->parsed()) {
      const auto spec = netrate::dmn::load_network(dmn_file);
      netrate::dmn::CutReport report;
      if (dmn_theorem == "2" ||
          (dmn_theorem == "auto" && spec.sources().size() == 1 && spec.sources().front() == 1)) {
        report = netrate::dmn::theorem2_rate(spec, dmn_literal);
      } else {
        report = netrate::dmn::theorem3_rates(spec, dmn_literal);
      }
      std::cout << netrate::dmn::format_report(report, spec);
      if (!dmn_out.empty()) {
        netrate::sweep::write_file_atomic(dmn_out, netrate::dmn::report_to_json(report, spec));
      }
      return 0;
    }

    if (plot_cmd->parsed()) {
      netrate::sweep::emit_plot(plot_csv, plot_out);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "compute error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
