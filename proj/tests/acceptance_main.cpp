// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Returns nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dmn_oracle.hpp"
#include "frozen_oracles.hpp"
#include "netrate/dmn.hpp"
#include "netrate/gaussian.hpp"
#include "netrate/optimize.hpp"
#include "netrate/parallel.hpp"
#include "netrate/relay.hpp"
#include "netrate/sweep.hpp"
#include "netrate/twrc.hpp"
#include "test_support.hpp"

namespace {

int g_failures = 0;

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)) {
    start_ = std::chrono::steady_clock::now();
  }

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok_ = false;
      notes_.push_back(what);
    }
  }

  void check_time(double limit_seconds) { time_limit_ = limit_seconds; }

  ~Criterion() {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (time_limit_ > 0.0 && seconds > time_limit_) {
      ok_ = false;
      notes_.push_back("runtime " + std::to_string(seconds) + " s exceeds " +
                       std::to_string(time_limit_) + " s");
    }
    std::printf("[%s] %s (%.1f s)\n", ok_ ? "PASS" : "FAIL", name_.c_str(), seconds);
    for (const auto& n : notes_) std::printf("       - %s\n", n.c_str());
    std::fflush(stdout);
    if (!ok_) ++g_failures;
  }

 private:
  std::string name_;
  bool ok_ = true;
  std::vector<std::string> notes_;
  double time_limit_ = 0.0;
  std::chrono::steady_clock::time_point start_;
};

std::vector<double> d_grid(int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(0.05 + 0.9 * i / (points - 1));
  return out;
}

void criterion1_gaussian_engine() {
  Criterion c("criterion 1: Gaussian MI engine (value + property suites)");
  c.check_time(5.0);
  using namespace netrate::gauss;

  const auto sys = build_system({{"X", 5.0}, {"Z", 1.0}},
                                {StructuralEquation{"Y", {{1.0, "X"}, {1.0, "Z"}}}});
  const double mi = mutual_information(sys, {"X"}, {"Y"});
  c.check(std::abs(mi - 0.5 * std::log2(6.0)) < 1e-12,
          "I(X;X+Z) with var 5,1 not within 1e-12 of 0.5*log2(6)");

  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> size_dist(3, 6);
  double worst_sym = 0.0, worst_chain = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size_dist(rng);
    const auto rs = test_support::random_system(rng, n);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const int na = std::uniform_int_distribution<int>(1, n - 2)(rng);
    const int nb = std::uniform_int_distribution<int>(1, n - na - 1)(rng);
    const int nc = std::uniform_int_distribution<int>(0, n - na - nb)(rng);
    auto names_of = [&](int from, int count) {
      std::vector<std::string> out;
      for (int i = from; i < from + count; ++i) out.push_back(rs.names()[perm[i]]);
      return out;
    };
    const auto a = names_of(0, na);
    const auto b = names_of(na, nb);
    const auto cc = names_of(na + nb, nc);
    worst_sym = std::max(worst_sym, std::abs(mutual_information(rs, a, b, cc) -
                                             mutual_information(rs, b, a, cc)));
    if (!cc.empty()) {
      const std::vector<std::string> d = {cc.front()};
      const std::vector<std::string> rest(cc.begin() + 1, cc.end());
      std::vector<std::string> ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      std::vector<std::string> a_rest = a;
      a_rest.insert(a_rest.end(), rest.begin(), rest.end());
      worst_chain = std::max(worst_chain,
                             std::abs(mutual_information(rs, ab, d, rest) -
                                      mutual_information(rs, a, d, rest) -
                                      mutual_information(rs, b, d, a_rest)));
    }
  }
  c.check(worst_sym < 1e-8, "symmetry residual " + std::to_string(worst_sym) + " >= 1e-8 bits");
  c.check(worst_chain < 1e-8,
          "chain-rule residual " + std::to_string(worst_chain) + " >= 1e-8 bits");
}

void criterion2_nnc_equals_cf() {
  Criterion c("criterion 2: optimized NNC equals closed-form CF on the 50-point grid");
  c.check_time(120.0);
  const auto grid = d_grid(50);
  std::vector<double> diffs(grid.size());
  netrate::parallel_for_index(grid.size(), 0, [&](std::size_t i) {
    const auto spec = netrate::relay::GaussianRelaySpec::at_position(grid[i]);
    diffs[i] = std::abs(netrate::relay::optimize_nnc(spec).rate.total -
                        netrate::relay::cf_rate(spec).total);
  });
  const double worst = *std::max_element(diffs.begin(), diffs.end());
  c.check(worst < 1e-5, "max |NNC - CF| = " + std::to_string(worst) + " >= 1e-5 bits");
}

void criterion3_relay_ordering() {
  Criterion c("criterion 3: relay scheme ordering and d = 0.1 advantage");
  c.check_time(300.0);
  const auto grid = d_grid(50);
  struct Row {
    double snnc, nnc, cutset;
  };
  std::vector<Row> rows(grid.size());
  netrate::parallel_for_index(grid.size(), 0, [&](std::size_t i) {
    const auto spec = netrate::relay::GaussianRelaySpec::at_position(grid[i]);
    rows[i] = {netrate::relay::optimize_snnc(spec).rate.total,
               netrate::relay::optimize_nnc(spec).rate.total,
               netrate::relay::cutset_bound(spec)};
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    c.check(rows[i].nnc >= 0.0, "NNC < 0 at d = " + std::to_string(grid[i]));
    c.check(rows[i].snnc >= rows[i].nnc - 1e-9, "SNNC < NNC at d = " + std::to_string(grid[i]));
    c.check(rows[i].cutset >= rows[i].snnc - 1e-9,
            "cut-set < SNNC at d = " + std::to_string(grid[i]));
  }
  const auto spec01 = netrate::relay::GaussianRelaySpec::at_position(0.1);
  const double gap = netrate::relay::optimize_snnc(spec01).rate.total -
                     netrate::relay::optimize_nnc(spec01).rate.total;
  c.check(gap > 0.0, "no SNNC advantage at d = 0.1");
  c.check(std::abs(gap - frozen::kRelayGapD010) < 1e-4,
          "gap at d = 0.1 is " + std::to_string(gap) + ", oracle " +
              std::to_string(frozen::kRelayGapD010));
}

void criterion4_degeneracy_limits() {
  Criterion c("criterion 4: degeneracy limits (P2 -> 0; alpha = beta = 0)");
  netrate::relay::GaussianRelaySpec spec;
  spec.p1 = 5.0;
  spec.p2 = 1e-9;
  spec.a = 2.0;
  spec.b = 2.0;
  const double direct = 0.5 * std::log2(6.0);
  netrate::relay::OptimizeBudget wide;
  wide.q_max = 1e9;
  c.check(std::abs(netrate::relay::optimize_snnc(spec, wide).rate.total - direct) < 1e-6,
          "SNNC does not reach the direct link at P2 = 1e-9");
  c.check(std::abs(netrate::relay::optimize_nnc(spec, wide).rate.total - direct) < 1e-6,
          "NNC does not reach the direct link at P2 = 1e-9");
  c.check(std::abs(netrate::relay::cf_rate(spec).total - direct) < 1e-6,
          "CF does not reach the direct link at P2 = 1e-9");

  const auto typical = netrate::relay::GaussianRelaySpec::at_position(0.35);
  for (double q : {1e-3, 0.2, 1.0, 17.0, 1e3}) {
    const auto s = netrate::relay::snnc_rate(typical, netrate::relay::RelaySnncParams{0, 0, q});
    const auto n = netrate::relay::nnc_rate(typical, q);
    c.check(std::abs(s.total - n.total) <= 1e-12,
            "SNNC(0,0,q) deviates from NNC(q) at q = " + std::to_string(q));
  }
}

void criterion5_twrc() {
  Criterion c("criterion 5: TWRC structure on the 25-point grid");
  c.check_time(600.0);
  const auto grid = d_grid(25);
  struct Row {
    netrate::twrc::TwrcRatePoint snnc, nnc;
  };
  std::vector<Row> rows(grid.size());
  netrate::parallel_for_index(grid.size(), 0, [&](std::size_t i) {
    netrate::twrc::TwrcSpec spec;
    spec.d = grid[i];
    rows[i].snnc = netrate::twrc::optimize_twrc_snnc(spec).rate;
    rows[i].nnc = netrate::twrc::optimize_twrc_nnc(spec).rate;
  });

  for (std::size_t i = 0; i < grid.size(); ++i) {
    c.check(rows[i].snnc.sum >= rows[i].nnc.sum - 1e-9,
            "sum(SNNC) < sum(NNC) at d = " + std::to_string(grid[i]));
  }
  // d = 0.5 sits at index 12 of the 25-point grid.
  c.check(std::abs(grid[12] - 0.5) < 1e-12, "grid midpoint is not d = 0.5");
  c.check(std::abs(rows[12].snnc.r1 - rows[12].snnc.r2) < 1e-6,
          "|r1 - r2| >= 1e-6 at the symmetric point");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t j = grid.size() - 1 - i;
    c.check(std::abs(rows[i].snnc.r1 - rows[j].snnc.r2) < 1e-6 &&
                std::abs(rows[i].snnc.r2 - rows[j].snnc.r1) < 1e-6,
            "reflection swap fails at d = " + std::to_string(grid[i]));
  }

  for (const auto& [d, oracle_gap] :
       std::vector<std::pair<double, double>>{{0.1, frozen::kTwrcGapD010},
                                              {0.9, frozen::kTwrcGapD090}}) {
    netrate::twrc::TwrcSpec spec;
    spec.d = d;
    const double gap = netrate::twrc::optimize_twrc_snnc(spec).rate.sum -
                       netrate::twrc::optimize_twrc_nnc(spec).rate.sum;
    c.check(std::abs(gap - oracle_gap) < 1e-4,
            "gap at d = " + std::to_string(d) + " is " + std::to_string(gap) + ", oracle " +
                std::to_string(oracle_gap));
  }
}

void criterion6_dmn() {
  Criterion c("criterion 6: DMN evaluator vs brute-force oracle on three toys");
  using namespace netrate::dmn;
  const std::string base = std::string(NETRATE_DATA_DIR) + "/networks/";

  {  // noiseless line
    const auto spec = load_network(base + "line3.json");
    const auto report = theorem2_rate(spec);
    const auto table = dmn_oracle::build(spec);
    const double k2 = dmn_oracle::mi(table, {"v1"}, {"y2"}, {"x2", "v2", "v3"});
    const double k3 = dmn_oracle::mi(table, {"v1", "v2"}, {"y3"}, {"x3", "v3"});
    c.check(std::abs(report.decode_terms[0].second - k2) < 1e-12 &&
                std::abs(report.decode_terms[1].second - k3) < 1e-12 &&
                std::abs(report.r_prime - std::min(k2, k3)) < 1e-12,
            "line3 decode terms disagree with the oracle");
    double min_term = 1e300;
    bool cuts_ok = true;
    for (const auto& e : report.destinations[0].entries) {
      const double oracle = dmn_oracle::dprime_term(spec, table, 3, e.cut);
      cuts_ok = cuts_ok && std::abs(e.r_dprime - oracle) < 1e-12;
      min_term = std::min(min_term, oracle);
    }
    c.check(cuts_ok && std::abs(report.r_dprime - min_term) < 1e-12,
            "line3 cut terms disagree with the oracle");
  }

  {  // xor two-way relay
    const auto spec = load_network(base + "xor_twrc.json");
    const auto report = theorem3_rates(spec);
    const auto table = dmn_oracle::build(spec);
    bool ok = true;
    for (const auto& dc : report.destinations) {
      for (const auto& e : dc.entries) {
        std::set<std::string> vs_in, vs_out;
        for (int id = 1; id <= 3; ++id) {
          ((e.cut & (1u << (id - 1))) ? vs_in : vs_out).insert("v" + std::to_string(id));
        }
        std::set<std::string> cond = vs_out;
        cond.insert("x" + std::to_string(dc.node));
        ok = ok &&
             std::abs(*e.r_prime -
                      dmn_oracle::mi(table, vs_in, {"y" + std::to_string(dc.node)}, cond)) < 1e-12;
        ok = ok && std::abs(e.r_dprime - dmn_oracle::dprime_term(spec, table, dc.node, e.cut)) <
                       1e-12;
      }
    }
    c.check(ok, "xor relay cut terms disagree with the oracle");
  }

  {  // disconnected-relay MAC
    const auto spec = load_network(base + "mac4.json");
    const auto report = theorem3_rates(spec);
    const auto table = dmn_oracle::build(spec);
    bool ok = report.destinations.size() == 1 && report.destinations[0].entries.size() == 6;
    bool mac_bound_seen = false;
    for (const auto& e : report.destinations[0].entries) {
      ok = ok && std::abs(e.r_dprime - dmn_oracle::dprime_term(spec, table, 4, e.cut)) < 1e-12;
      if (e.cut == 0b011) {
        mac_bound_seen = std::abs(*e.r_prime - 2.0) < 1e-12;
      }
    }
    c.check(ok, "mac4 cut terms disagree with the oracle");
    c.check(mac_bound_seen, "full-source cut does not equal the 2-bit MAC sum bound");
  }

  {  // combinatorics
    const auto spec = load_network(base + "line4.json");
    const auto report = theorem2_rate(spec);
    c.check(report.destinations[0].entries.size() == 4,
            "N = 4, source 1, destination 4 should enumerate exactly 4 cuts");
  }
}

void criterion7_optimizer() {
  Criterion c("criterion 7: optimizer benchmarks and determinism");
  using namespace netrate::opt;

  const auto quad = grid_refine(
      [](const std::vector<double>& v) { return -(v[0] - 0.3) * (v[0] - 0.3); },
      SearchBox{{{"x", 0.0, 1.0, Scale::Linear}}}, 11, 30);
  c.check(std::abs(quad.best_params[0] - 0.3) < 1e-4, "quadratic argmax misses 0.3 by >= 1e-4");
  c.check(std::abs(quad.best_value) < 1e-8, "quadratic max misses 0 by >= 1e-8");

  auto kinked = [](const std::vector<double>& v) {
    return std::min({v[0] + 0.2, 1.0 - 0.3 * v[1], 1.5 - v[0] - v[1]});
  };
  double oracle = -1e300;
  for (int i = 0; i <= 1000; ++i) {
    for (int j = 0; j <= 1000; ++j) oracle = std::max(oracle, kinked({i / 1000.0, j / 1000.0}));
  }
  const auto kres = grid_refine(kinked,
                                SearchBox{{{"x", 0.0, 1.0, Scale::Linear},
                                           {"y", 0.0, 1.0, Scale::Linear}}},
                                21, 50);
  c.check(std::abs(kres.best_value - oracle) < 1e-4,
          "non-smooth benchmark misses the dense-grid oracle by >= 1e-4");

  auto wavy = [](const std::vector<double>& v) {
    return std::sin(5.0 * v[0]) + std::cos(3.0 * v[1]);
  };
  const SearchBox box{{{"x", 0.0, 2.0, Scale::Linear}, {"y", 0.0, 2.0, Scale::Linear}}};
  const auto r1 = grid_refine(wavy, box, 15, 40, 1e-6, true);
  const auto r2 = grid_refine(wavy, box, 15, 40, 1e-6, true);
  std::ostringstream t1, t2;
  t1.precision(17);
  t2.precision(17);
  for (const auto& [p, v] : r1.trace) {
    for (double x : p) t1 << x << ";";
    t1 << v << "\n";
  }
  for (const auto& [p, v] : r2.trace) {
    for (double x : p) t2 << x << ";";
    t2 << v << "\n";
  }
  c.check(t1.str() == t2.str() && r1.best_value == r2.best_value,
          "two identical runs are not byte-identical");
}

void criterion8_cli() {
  Criterion c("criterion 8: CLI artifacts, exit codes, reproducibility");
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "netrate_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = NETRATE_CLI_PATH;
  const std::string null_io = " > /dev/null 2>&1";

  auto run = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + null_io).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  const std::string out = (dir / "sweep.csv").string();
  const std::string flags = "relay-sweep --steps 3 --d-min 0.2 --d-max 0.8 --grid 9 "
                            "--refine-iters 12 --schemes snnc,nnc,cutset --out " + out;
  c.check(run(flags) == 0, "relay-sweep exited nonzero");
  const std::string first = slurp(out);
  c.check(std::count(first.begin(), first.end(), '\n') == 1 + 9,
          "relay-sweep row count is not header + 9");
  c.check(run(flags) == 0, "second relay-sweep run exited nonzero");
  c.check(slurp(out) == first, "re-run CSV is not byte-identical");

  const std::string meta = slurp(dir / "sweep.meta");
  c.check(meta.find("\"p1\": 5.0") != std::string::npos &&
              meta.find("\"steps\": 3") != std::string::npos &&
              meta.find("\"version\"") != std::string::npos,
          "metadata sidecar is missing constants");

  c.check(run("relay-sweep --steps 0") == 2, "invalid steps should exit 2");
  c.check(run("relay-sweep --schemes nonsense") == 2, "unknown scheme should exit 2");

  const std::string svg_path = (dir / "sweep.svg").string();
  c.check(run("plot " + out + " --out " + svg_path) == 0, "plot exited nonzero");
  const std::string svg = slurp(svg_path);
  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    ++pos;
  }
  c.check(svg.rfind("<?xml", 0) == 0 && svg.find("</svg>") != std::string::npos,
          "SVG is not well-formed");
  c.check(polylines == 3, "SVG should contain one polyline per scheme");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  std::printf("netrate acceptance suite\n");
  criterion1_gaussian_engine();
  criterion2_nnc_equals_cf();
  criterion3_relay_ordering();
  criterion4_degeneracy_limits();
  criterion5_twrc();
  criterion6_dmn();
  criterion7_optimizer();
  criterion8_cli();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return EXIT_SUCCESS;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return EXIT_FAILURE;
}
