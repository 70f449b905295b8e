#include "netrate/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "netrate/parallel.hpp"
#include "netrate/relay.hpp"
#include "netrate/twrc.hpp"

namespace netrate::sweep {

namespace {

using json = nlohmann::json;

const std::vector<std::string> kRelaySchemes = {"snnc", "nnc", "cf", "cutset"};
const std::vector<std::string> kTwrcSchemes = {"snnc", "nnc", "cutset"};

std::vector<std::string> selected_in_canonical_order(const std::vector<std::string>& selection,
                                                     const std::vector<std::string>& canonical,
                                                     const std::string& mode) {
  if (selection.empty()) throw ConfigError("schemes: selection must not be empty");
  std::set<std::string> wanted;
  for (const auto& s : selection) {
    if (std::find(canonical.begin(), canonical.end(), s) == canonical.end()) {
      throw ConfigError("schemes: '" + s + "' is not available in " + mode + " mode");
    }
    wanted.insert(s);
  }
  std::vector<std::string> out;
  for (const auto& s : canonical) {
    if (wanted.count(s)) out.push_back(s);
  }
  return out;
}

}  // namespace

std::string format_bits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

const std::vector<std::string>& relay_schemes() { return kRelaySchemes; }
const std::vector<std::string>& twrc_schemes() { return kTwrcSchemes; }

SweepConfig SweepConfig::relay_defaults() {
  SweepConfig c;
  c.mode = "relay";
  c.p1 = 5.0;
  c.p2 = 5.0;
  c.steps = 50;
  c.grid_points = 21;
  c.schemes = kRelaySchemes;
  return c;
}

SweepConfig SweepConfig::twrc_defaults() {
  SweepConfig c;
  c.mode = "twrc";
  c.p1 = 10.0;
  c.p2 = 10.0;
  c.p3 = 10.0;
  c.steps = 25;
  c.grid_points = 13;
  c.schemes = kTwrcSchemes;
  return c;
}

void SweepConfig::validate() const {
  if (mode != "relay" && mode != "twrc") throw ConfigError("mode: must be 'relay' or 'twrc'");
  if (!(d_min > 0.0 && d_min < 1.0) || !(d_max > 0.0 && d_max < 1.0) || !(d_min <= d_max)) {
    throw ConfigError("d_min/d_max: need 0 < d_min <= d_max < 1");
  }
  if (steps < 1) throw ConfigError("steps: must be >= 1");
  if (steps > 1 && !(d_min < d_max)) throw ConfigError("steps: need d_min < d_max for steps > 1");
  if (p1 < 0.0 || p2 < 0.0 || p3 < 0.0) throw ConfigError("powers: must be >= 0");
  if (!(n1 > 0.0) || !(n2 > 0.0) || !(n3 > 0.0)) throw ConfigError("noise: variances must be > 0");
  if (!(gamma > 0.0)) throw ConfigError("gamma: must be > 0");
  if (grid_points < 2) throw ConfigError("grid: must be >= 2");
  if (refine_iters < 0) throw ConfigError("refine_iters: must be >= 0");
  if (!(q_min > 0.0) || !(q_max > q_min)) throw ConfigError("q box: need 0 < q_min < q_max");
  if (threads < 0) throw ConfigError("threads: must be >= 0");
  selected_in_canonical_order(schemes, mode == "relay" ? kRelaySchemes : kTwrcSchemes, mode);
}

std::vector<double> SweepConfig::d_grid() const {
  std::vector<double> out;
  if (steps == 1) {
    out.push_back(d_min);
    return out;
  }
  for (int i = 0; i < steps; ++i) {
    out.push_back(d_min + (d_max - d_min) * static_cast<double>(i) / (steps - 1));
  }
  return out;
}

std::string relay_sweep_csv(const SweepConfig& config) {
  config.validate();
  if (config.mode != "relay") throw ConfigError("mode: relay sweep requires mode 'relay'");
  const auto schemes = selected_in_canonical_order(config.schemes, kRelaySchemes, "relay");
  const auto grid = config.d_grid();

  relay::OptimizeBudget budget;
  budget.grid_points = config.grid_points;
  budget.refine_iters = config.refine_iters;
  budget.q_min = config.q_min;
  budget.q_max = config.q_max;

  std::vector<std::string> blocks(grid.size());
  parallel_for_index(grid.size(), config.threads, [&](std::size_t i) {
    const auto spec =
        relay::GaussianRelaySpec::at_position(grid[i], config.p1, config.p2, config.n1, config.n2);
    std::ostringstream os;
    for (const auto& scheme : schemes) {
      double rate = 0.0;
      std::string binding;
      if (scheme == "snnc") {
        const auto r = relay::optimize_snnc(spec, budget);
        rate = r.rate.total;
        binding = r.rate.binding();
      } else if (scheme == "nnc") {
        const auto r = relay::optimize_nnc(spec, budget);
        rate = r.rate.total;
        binding = r.rate.binding();
      } else if (scheme == "cf") {
        const auto r = relay::cf_rate(spec);
        rate = r.total;
        binding = r.binding();
      } else {
        const auto r = relay::cutset_bound_detail(spec);
        rate = r.value;
        binding = r.binding();
      }
      os << format_bits(grid[i]) << "," << scheme << "," << format_bits(rate) << "," << binding
         << "\n";
    }
    blocks[i] = os.str();
  });

  std::string csv = "d,scheme,rate,binding\n";
  for (const auto& block : blocks) csv += block;
  return csv;
}

std::string twrc_sweep_csv(const SweepConfig& config) {
  config.validate();
  if (config.mode != "twrc") throw ConfigError("mode: twrc sweep requires mode 'twrc'");
  const auto schemes = selected_in_canonical_order(config.schemes, kTwrcSchemes, "twrc");
  const auto grid = config.d_grid();

  twrc::TwrcOptimizeBudget budget;
  budget.grid_points = config.grid_points;
  budget.refine_iters = config.refine_iters;
  budget.q_min = config.q_min;
  budget.q_max = config.q_max;

  std::vector<std::string> blocks(grid.size());
  parallel_for_index(grid.size(), config.threads, [&](std::size_t i) {
    twrc::TwrcSpec spec;
    spec.p1 = config.p1;
    spec.p2 = config.p2;
    spec.p3 = config.p3;
    spec.n1 = config.n1;
    spec.n2 = config.n2;
    spec.n3 = config.n3;
    spec.gamma = config.gamma;
    spec.d = grid[i];
    std::ostringstream os;
    for (const auto& scheme : schemes) {
      double r1 = 0.0, r2 = 0.0;
      std::string binding;
      if (scheme == "snnc") {
        const auto r = twrc::optimize_twrc_snnc(spec, budget);
        r1 = r.rate.r1;
        r2 = r.rate.r2;
        binding = r.rate.binding();
      } else if (scheme == "nnc") {
        const auto r = twrc::optimize_twrc_nnc(spec, budget);
        r1 = r.rate.r1;
        r2 = r.rate.r2;
        binding = r.rate.binding();
      } else {
        const auto r = twrc::twrc_cutset_detail(spec);
        r1 = r.r1_max;
        r2 = r.r2_max;
        binding = r.binding();
      }
      os << format_bits(grid[i]) << "," << scheme << "," << format_bits(r1) << ","
         << format_bits(r2) << "," << format_bits(r1 + r2) << "," << binding << "\n";
    }
    blocks[i] = os.str();
  });

  std::string csv = "d,scheme,r1,r2,sum,binding\n";
  for (const auto& block : blocks) csv += block;
  return csv;
}

std::string meta_json(const SweepConfig& config) {
  json j;
  j["tool"] = "netrate";
  j["version"] = kVersion;
  j["mode"] = config.mode;
  j["p1"] = config.p1;
  j["p2"] = config.p2;
  if (config.mode == "twrc") j["p3"] = config.p3;
  j["n1"] = config.n1;
  j["n2"] = config.n2;
  if (config.mode == "twrc") j["n3"] = config.n3;
  if (config.mode == "twrc") j["gamma"] = config.gamma;
  j["d_min"] = config.d_min;
  j["d_max"] = config.d_max;
  j["steps"] = config.steps;
  j["schemes"] = selected_in_canonical_order(
      config.schemes, config.mode == "relay" ? kRelaySchemes : kTwrcSchemes, config.mode);
  j["grid_points"] = config.grid_points;
  j["refine_iters"] = config.refine_iters;
  j["q_min"] = config.q_min;
  j["q_max"] = config.q_max;
  // Constants the literature leaves unstated; recorded so artifacts are
  // self-describing.
  j["defaults"] = {{"noise_variances", "unit (noise-normalized) unless overridden"},
                   {"gamma", "path-loss exponent 3 unless overridden"}};
  j["csv_float_format"] = "%.6f";
  j["line_endings"] = "LF";
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out.good()) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed while writing '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot rename into '" + path + "'");
  }
}

namespace {

std::string derived_meta_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".meta");
  return p.string();
}

}  // namespace

std::string run_sweep(const SweepConfig& config) {
  config.validate();
  const std::string csv =
      config.mode == "relay" ? relay_sweep_csv(config) : twrc_sweep_csv(config);
  if (!config.out.empty()) {
    write_file_atomic(config.out, csv);
    const std::string meta_path = config.meta.empty() ? derived_meta_path(config.out) : config.meta;
    write_file_atomic(meta_path, meta_json(config));
  }
  return csv;
}

namespace {

struct Series {
  std::string scheme;
  std::vector<std::pair<double, double>> points;  // (d, value)
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string render_svg(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("plot: empty CSV");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  int value_col;
  std::string y_label;
  if (header == "d,scheme,rate,binding") {
    value_col = 2;
    y_label = "rate (bits/channel use)";
  } else if (header == "d,scheme,r1,r2,sum,binding") {
    value_col = 4;
    y_label = "sum rate (bits/channel use)";
  } else {
    throw ConfigError("plot: unknown CSV schema '" + header + "'");
  }

  std::vector<Series> series;
  std::map<std::string, std::size_t> by_scheme;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < static_cast<std::size_t>(value_col) + 1) {
      throw ConfigError("plot: malformed CSV row at line " + std::to_string(lineno));
    }
    double d, v;
    try {
      d = std::stod(fields[0]);
      v = std::stod(fields[value_col]);
    } catch (const std::exception&) {
      throw ConfigError("plot: non-numeric value at line " + std::to_string(lineno));
    }
    const std::string& scheme = fields[1];
    auto it = by_scheme.find(scheme);
    if (it == by_scheme.end()) {
      it = by_scheme.emplace(scheme, series.size()).first;
      series.push_back(Series{scheme, {}});
    }
    series[it->second].points.emplace_back(d, v);
  }
  if (series.empty()) throw ConfigError("plot: CSV has no data rows");

  double x_min = series[0].points[0].first, x_max = x_min;
  double y_max = 0.0;
  for (const auto& s : series) {
    for (const auto& [d, v] : s.points) {
      x_min = std::min(x_min, d);
      x_max = std::max(x_max, d);
      y_max = std::max(y_max, v);
    }
  }
  if (x_max <= x_min) {
    x_min -= 0.05;
    x_max += 0.05;
  }
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;

  const double w = 800, h = 520;
  const double ml = 64, mr = 160, mt = 28, mb = 48;
  const double pw = w - ml - mr, ph = h - mt - mb;
  auto sx = [&](double d) { return ml + (d - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double v) { return mt + ph - v / y_max * ph; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf"};
  constexpr int kPaletteSize = 7;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  svg << "  <rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";

  // Axes and ticks.
  svg << "  <line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  svg << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double fx = x_min + (x_max - x_min) * t / 5.0;
    const double fy = y_max * t / 5.0;
    svg << "  <line x1=\"" << sx(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << sx(fx) << "\" y2=\""
        << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << sx(fx) << "\" y=\"" << mt + ph + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << num(fx) << "</text>\n";
    svg << "  <line x1=\"" << ml - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml << "\" y2=\""
        << sy(fy) << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << ml - 9 << "\" y=\"" << sy(fy) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << num(fy) << "</text>\n";
  }
  svg << "  <text x=\"" << ml + pw / 2 << "\" y=\"" << h - 10
      << "\" font-size=\"14\" text-anchor=\"middle\">relay position d</text>\n";
  svg << "  <text x=\"18\" y=\"" << mt + ph / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2
      << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPaletteSize];
    svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t p = 0; p < series[s].points.size(); ++p) {
      if (p) svg << " ";
      svg << sx(series[s].points[p].first) << "," << sy(series[s].points[p].second);
    }
    svg << "\"/>\n";
    const double ly = mt + 16 + 22 * static_cast<double>(s);
    svg << "  <line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 40
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "  <text x=\"" << ml + pw + 46 << "\" y=\"" << ly + 4 << "\" font-size=\"13\">"
        << series[s].scheme << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::string& csv_path, const std::string& svg_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw ConfigError("plot: cannot open '" + csv_path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string svg = render_svg(buf.str());  // validate before touching the output
  write_file_atomic(svg_path, svg);
}

}  // namespace netrate::sweep
