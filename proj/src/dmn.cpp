#include "netrate/dmn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace netrate::dmn {

namespace {

using json = nlohmann::json;

std::string var_v(int id) { return "v" + std::to_string(id); }
std::string var_x(int id) { return "x" + std::to_string(id); }
std::string var_y(int id) { return "y" + std::to_string(id); }
std::string var_yhat(int id) { return "yhat" + std::to_string(id); }

double mi(const disc::JointPmf& joint, const std::vector<std::string>& a,
          const std::vector<std::string>& b, const std::vector<std::string>& c) {
  if (a.empty() || b.empty()) return 0.0;
  return disc::mutual_information(joint, std::span<const std::string>(a),
                                  std::span<const std::string>(b),
                                  std::span<const std::string>(c));
}

}  // namespace

std::vector<int> DiscreteNetworkSpec::sources() const {
  std::vector<int> out;
  for (const auto& nd : nodes) {
    if (nd.is_source) out.push_back(nd.id);
  }
  return out;
}

std::vector<int> DiscreteNetworkSpec::destinations() const {
  std::vector<int> out;
  for (const auto& nd : nodes) {
    if (nd.is_destination) out.push_back(nd.id);
  }
  return out;
}

void DiscreteNetworkSpec::validate() const {
  if (nodes.empty()) throw std::invalid_argument("network: needs at least one node");
  if (nodes.size() > 10) {
    throw std::invalid_argument("network: at most 10 nodes are supported");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    if (nd.id != static_cast<int>(i) + 1) {
      throw std::invalid_argument("network: node ids must be 1..N in order");
    }
    if (nd.v_card < 1 || nd.x_card < 1 || nd.y_card < 0 || nd.yhat_card < 0) {
      throw std::invalid_argument("network: invalid alphabet size at node " +
                                  std::to_string(nd.id));
    }
    if (nd.is_source && nd.yhat_card > 0) {
      throw std::invalid_argument("network: source node " + std::to_string(nd.id) +
                                  " must not carry a compression factor");
    }
    if (nd.is_destination && nd.y_card < 1) {
      throw std::invalid_argument("network: destination node " + std::to_string(nd.id) +
                                  " must receive (y alphabet missing)");
    }
    if (nd.yhat_card > 0 && nd.y_card < 1) {
      throw std::invalid_argument("network: node " + std::to_string(nd.id) +
                                  " compresses but does not receive");
    }
  }
  if (sources().empty()) throw std::invalid_argument("network: no source node");
  if (destinations().empty()) throw std::invalid_argument("network: no destination node");
}

std::vector<disc::PmfFactor> DiscreteNetworkSpec::factors() const {
  std::vector<disc::PmfFactor> out;
  for (const auto& nd : nodes) {
    disc::PmfFactor fv;
    fv.targets = {{var_v(nd.id), nd.v_card}};
    fv.table = nd.p_v;
    out.push_back(std::move(fv));

    disc::PmfFactor fx;
    fx.targets = {{var_x(nd.id), nd.x_card}};
    fx.conditioning = {{var_v(nd.id), nd.v_card}};
    fx.table = nd.p_x_given_v;
    out.push_back(std::move(fx));
  }

  disc::PmfFactor ch;
  for (const auto& nd : nodes) ch.conditioning.push_back({var_x(nd.id), nd.x_card});
  for (const auto& nd : nodes) {
    if (nd.y_card >= 1) ch.targets.push_back({var_y(nd.id), nd.y_card});
  }
  ch.table = channel;
  out.push_back(std::move(ch));

  auto card_of = [&](const std::string& name) -> int {
    for (const auto& nd : nodes) {
      if (name == var_v(nd.id)) return nd.v_card;
      if (name == var_x(nd.id)) return nd.x_card;
      if (name == var_y(nd.id) && nd.y_card >= 1) return nd.y_card;
      if (name == var_yhat(nd.id) && nd.yhat_card >= 1) return nd.yhat_card;
    }
    throw std::invalid_argument("network: unknown conditioning variable '" + name + "'");
  };

  for (const auto& nd : nodes) {
    if (nd.yhat_card < 1) continue;
    disc::PmfFactor fh;
    fh.targets = {{var_yhat(nd.id), nd.yhat_card}};
    fh.conditioning = {{var_y(nd.id), nd.y_card}, {var_x(nd.id), nd.x_card}};
    for (const auto& extra : nd.yhat_extra_conditioning) {
      fh.conditioning.push_back({extra, card_of(extra)});
    }
    fh.table = nd.p_yhat;
    out.push_back(std::move(fh));
  }
  return out;
}

namespace {

struct VarSets {
  const DiscreteNetworkSpec& spec;

  std::vector<std::string> v_range(int from, int to) const {  // inclusive ids
    std::vector<std::string> out;
    for (int k = from; k <= to; ++k) out.push_back(var_v(k));
    return out;
  }
  std::vector<std::string> v_all() const { return v_range(1, spec.n()); }
  std::vector<std::string> v_of(std::uint32_t mask) const {
    std::vector<std::string> out;
    for (const auto& nd : spec.nodes) {
      if (mask & (1u << (nd.id - 1))) out.push_back(var_v(nd.id));
    }
    return out;
  }
  std::vector<std::string> x_of(std::uint32_t mask) const {
    std::vector<std::string> out;
    for (const auto& nd : spec.nodes) {
      if (mask & (1u << (nd.id - 1))) out.push_back(var_x(nd.id));
    }
    return out;
  }
  std::vector<std::string> y_of(std::uint32_t mask) const {
    std::vector<std::string> out;
    for (const auto& nd : spec.nodes) {
      if ((mask & (1u << (nd.id - 1))) && nd.y_card >= 1) out.push_back(var_y(nd.id));
    }
    return out;
  }
  std::vector<std::string> yhat_of(std::uint32_t mask) const {
    std::vector<std::string> out;
    for (const auto& nd : spec.nodes) {
      if ((mask & (1u << (nd.id - 1))) && nd.yhat_card >= 1) out.push_back(var_yhat(nd.id));
    }
    return out;
  }
};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// R''(S) for destination k: the compression-layer cut expression shared by
// both evaluators.
double dprime_term(const disc::JointPmf& joint, const VarSets& vs, int dest, std::uint32_t cut,
                   std::uint32_t all_mask, bool literal_v_indexing) {
  const std::uint32_t comp = all_mask & ~cut;
  const std::vector<std::string> yk = {var_y(dest)};

  const double forward =
      mi(joint, vs.x_of(cut), concat(vs.yhat_of(comp), yk), concat(vs.x_of(comp), vs.v_all()));

  const auto v_star =
      literal_v_indexing ? vs.v_range(std::max(1, dest - 1), vs.spec.n()) : vs.v_all();
  const double backward =
      mi(joint, vs.yhat_of(cut), vs.y_of(cut),
         concat(concat(concat(vs.x_of(all_mask), vs.yhat_of(comp)), yk), v_star));

  return forward - backward;
}

std::string describe_cut(int dest, std::uint32_t cut) {
  return "dest=" + std::to_string(dest) + " cut=" + cut_to_string(cut);
}

}  // namespace

std::string cut_to_string(std::uint32_t mask) {
  std::string out = "{";
  bool first = true;
  for (int id = 1; id <= 32; ++id) {
    if (mask & (1u << (id - 1))) {
      if (!first) out += ",";
      out += std::to_string(id);
      first = false;
    }
  }
  return out + "}";
}

CutReport theorem2_rate(const DiscreteNetworkSpec& spec, bool literal_v_indexing) {
  spec.validate();
  const auto srcs = spec.sources();
  if (srcs.size() != 1 || srcs.front() != 1) {
    throw std::invalid_argument("theorem2_rate: expects a single source at node 1");
  }
  if (spec.n() < 2) throw std::invalid_argument("theorem2_rate: needs at least 2 nodes");

  const disc::JointPmf joint = disc::compose(spec.factors());
  const VarSets vs{spec};
  const std::uint32_t all_mask = (1u << spec.n()) - 1;

  CutReport report;

  // Decode-forward chain: node k decodes the partial message from everything
  // upstream in the route order.
  double rp = std::numeric_limits<double>::infinity();
  int rp_node = 0;
  for (int k = 2; k <= spec.n(); ++k) {
    double term = 0.0;
    if (spec.nodes[k - 1].y_card >= 1) {
      term = mi(joint, vs.v_range(1, k - 1), {var_y(k)},
                concat({var_x(k)}, vs.v_range(k, spec.n())));
    }
    report.decode_terms.emplace_back(k, term);
    if (term < rp) {
      rp = term;
      rp_node = k;
    }
  }
  report.r_prime = rp;

  double rdp = std::numeric_limits<double>::infinity();
  int rdp_dest = 0;
  std::uint32_t rdp_cut = 0;
  for (int dest : spec.destinations()) {
    if (dest == 1) {
      throw std::invalid_argument("theorem2_rate: the source cannot be a destination");
    }
    DestinationCuts dc;
    dc.node = dest;
    dc.r_dprime_min = std::numeric_limits<double>::infinity();
    const std::uint32_t dest_bit = 1u << (dest - 1);
    for (std::uint32_t m = 1; m <= all_mask; ++m) {
      if ((m & dest_bit) || !(m & 1u)) continue;  // source in, destination out
      CutEntry entry;
      entry.cut = m;
      entry.r_dprime = dprime_term(joint, vs, dest, m, all_mask, literal_v_indexing);
      if (entry.r_dprime < dc.r_dprime_min) {
        dc.r_dprime_min = entry.r_dprime;
        dc.binding_dprime_cut = m;
      }
      dc.entries.push_back(entry);
    }
    if (dc.r_dprime_min < rdp) {
      rdp = dc.r_dprime_min;
      rdp_dest = dest;
      rdp_cut = dc.binding_dprime_cut;
    }
    report.destinations.push_back(std::move(dc));
  }
  report.r_dprime = rdp;
  report.total = report.r_prime + report.r_dprime;
  report.binding = "Rp: node " + std::to_string(rp_node) + "; Rpp: " +
                   describe_cut(rdp_dest, rdp_cut);
  return report;
}

CutReport theorem3_rates(const DiscreteNetworkSpec& spec, bool literal_v_indexing) {
  spec.validate();
  const disc::JointPmf joint = disc::compose(spec.factors());
  const VarSets vs{spec};
  const std::uint32_t all_mask = (1u << spec.n()) - 1;
  std::uint32_t source_mask = 0;
  for (int s : spec.sources()) source_mask |= 1u << (s - 1);

  CutReport report;
  double rp = std::numeric_limits<double>::infinity();
  double rdp = std::numeric_limits<double>::infinity();
  int rp_dest = 0, rdp_dest = 0;
  std::uint32_t rp_cut = 0, rdp_cut = 0;

  for (int dest : spec.destinations()) {
    DestinationCuts dc;
    dc.node = dest;
    dc.r_prime_min = std::numeric_limits<double>::infinity();
    dc.r_dprime_min = std::numeric_limits<double>::infinity();
    const std::uint32_t dest_bit = 1u << (dest - 1);
    for (std::uint32_t m = 1; m <= all_mask; ++m) {
      if ((m & dest_bit) || !(m & source_mask)) continue;
      const std::uint32_t comp = all_mask & ~m;

      CutEntry entry;
      entry.cut = m;
      entry.r_prime =
          mi(joint, vs.v_of(m), {var_y(dest)}, concat({var_x(dest)}, vs.v_of(comp)));
      entry.r_dprime = dprime_term(joint, vs, dest, m, all_mask, literal_v_indexing);

      if (*entry.r_prime < *dc.r_prime_min) {
        dc.r_prime_min = entry.r_prime;
        dc.binding_prime_cut = m;
      }
      if (entry.r_dprime < dc.r_dprime_min) {
        dc.r_dprime_min = entry.r_dprime;
        dc.binding_dprime_cut = m;
      }
      dc.entries.push_back(entry);
    }
    if (dc.entries.empty()) {
      throw std::invalid_argument("theorem3_rates: no cut separates a source from destination " +
                                  std::to_string(dest));
    }
    if (dc.r_prime_min && *dc.r_prime_min < rp) {
      rp = *dc.r_prime_min;
      rp_dest = dest;
      rp_cut = dc.binding_prime_cut;
    }
    if (dc.r_dprime_min < rdp) {
      rdp = dc.r_dprime_min;
      rdp_dest = dest;
      rdp_cut = dc.binding_dprime_cut;
    }
    report.destinations.push_back(std::move(dc));
  }

  report.r_prime = rp;
  report.r_dprime = rdp;
  report.total = report.r_prime + report.r_dprime;
  report.binding = "Rp: " + describe_cut(rp_dest, rp_cut) + "; Rpp: " +
                   describe_cut(rdp_dest, rdp_cut);
  return report;
}

std::vector<std::vector<double>> quantized_simplex(int card, int denom) {
  if (card < 1 || denom < 1) {
    throw std::invalid_argument("quantized_simplex: card and denom must be >= 1");
  }
  std::vector<std::vector<double>> out;
  std::vector<int> parts(card, 0);
  // Lexicographic enumeration of compositions of `denom` into `card` parts.
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == card - 1) {
      parts[pos] = remaining;
      std::vector<double> p(card);
      for (int i = 0; i < card; ++i) p[i] = static_cast<double>(parts[i]) / denom;
      out.push_back(std::move(p));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      parts[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, denom);
  return out;
}

InputOptimum optimize_v_inputs(const DiscreteNetworkSpec& spec, Theorem theorem,
                               const std::vector<int>& node_ids, int denom,
                               bool literal_v_indexing) {
  spec.validate();
  std::vector<std::vector<std::vector<double>>> candidates;
  for (int id : node_ids) {
    if (id < 1 || id > spec.n()) {
      throw std::invalid_argument("optimize_v_inputs: node id out of range");
    }
    const int card = spec.nodes[id - 1].v_card;
    if (card > 3) {
      throw std::invalid_argument("optimize_v_inputs: only alphabets up to 3 are searched");
    }
    candidates.push_back(quantized_simplex(card, denom));
  }

  auto evaluate = [&](const DiscreteNetworkSpec& s) {
    return theorem == Theorem::SingleSource ? theorem2_rate(s, literal_v_indexing)
                                            : theorem3_rates(s, literal_v_indexing);
  };

  InputOptimum best;
  best.spec = spec;
  bool have = false;
  std::vector<std::size_t> idx(node_ids.size(), 0);
  for (;;) {
    DiscreteNetworkSpec trial = spec;
    for (std::size_t i = 0; i < node_ids.size(); ++i) {
      trial.nodes[node_ids[i] - 1].p_v = candidates[i][idx[i]];
    }
    CutReport rep = evaluate(trial);
    ++best.evaluations;
    if (!have || rep.total > best.report.total) {
      have = true;
      best.report = rep;
      best.spec = trial;
    }
    if (idx.empty()) break;
    int d = static_cast<int>(idx.size()) - 1;
    while (d >= 0) {
      if (++idx[d] == candidates[d].size()) {
        idx[d] = 0;
        --d;
      } else {
        break;
      }
    }
    if (d < 0) break;
  }
  return best;
}

namespace {

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw std::invalid_argument(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> get_table(const json& j, const std::string& where) {
  if (!j.is_array()) throw std::invalid_argument(where + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

DiscreteNetworkSpec parse_network(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("network: JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("network: top level must be an object");

  DiscreteNetworkSpec spec;
  spec.name = doc.value("name", "");
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw std::invalid_argument("network: missing 'nodes' array");
  }

  for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
    const json& jn = doc["nodes"][i];
    const std::string where = "nodes[" + std::to_string(i) + "]";
    if (!jn.is_object()) throw std::invalid_argument(where + ": expected an object");
    NodeSpec nd;
    if (!jn.contains("id")) throw std::invalid_argument(where + ": missing 'id'");
    nd.id = jn["id"].get<int>();

    const std::string role = jn.value("role", "relay");
    std::istringstream roles(role);
    std::string token;
    while (std::getline(roles, token, '+')) {
      if (token == "source") {
        nd.is_source = true;
      } else if (token == "destination") {
        nd.is_destination = true;
      } else if (token != "relay") {
        throw std::invalid_argument(where + ": unknown role token '" + token + "'");
      }
    }

    nd.v_card = jn.value("v", 1);
    nd.x_card = jn.value("x", 1);
    nd.y_card = jn.value("y", 0);
    nd.yhat_card = jn.value("yhat", 0);

    if (!jn.contains("p_v")) throw std::invalid_argument(where + ": missing 'p_v'");
    nd.p_v = get_table(jn["p_v"], where + ".p_v");
    if (!jn.contains("p_x_given_v")) {
      throw std::invalid_argument(where + ": missing 'p_x_given_v'");
    }
    nd.p_x_given_v = get_table(jn["p_x_given_v"], where + ".p_x_given_v");

    if (nd.yhat_card >= 1) {
      if (!jn.contains("p_yhat")) throw std::invalid_argument(where + ": missing 'p_yhat'");
      nd.p_yhat = get_table(jn["p_yhat"], where + ".p_yhat");
      if (jn.contains("yhat_conditioning")) {
        for (const auto& c : jn["yhat_conditioning"]) {
          nd.yhat_extra_conditioning.push_back(c.get<std::string>());
        }
      }
    }
    spec.nodes.push_back(std::move(nd));
  }

  if (!doc.contains("channel")) throw std::invalid_argument("network: missing 'channel' table");
  spec.channel = get_table(doc["channel"], "channel");

  spec.validate();
  // Surface factor-shape and normalization problems at parse time, naming
  // the factor.
  try {
    auto fs = spec.factors();
    for (const auto& f : fs) f.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("network: ") + e.what());
  }
  return spec;
}

DiscreteNetworkSpec load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("network: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

namespace {

std::string fmt_bits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string format_report(const CutReport& report, const DiscreteNetworkSpec& spec) {
  std::ostringstream os;
  os << "network: " << (spec.name.empty() ? "(unnamed)" : spec.name) << "\n";
  if (!report.decode_terms.empty()) {
    os << "decode-forward chain terms:\n";
    for (const auto& [node, bits] : report.decode_terms) {
      os << "  node " << node << "  " << fmt_bits(bits) << "\n";
    }
  }
  for (const auto& dc : report.destinations) {
    os << "destination " << dc.node << ":\n";
    for (const auto& e : dc.entries) {
      os << "  cut " << cut_to_string(e.cut);
      os << std::string(std::max<std::size_t>(1, 14 - cut_to_string(e.cut).size()), ' ');
      if (e.r_prime) os << "R'=" << fmt_bits(*e.r_prime) << "  ";
      os << "R''=" << fmt_bits(e.r_dprime) << "\n";
    }
  }
  os << "R'    = " << fmt_bits(report.r_prime) << " bits\n";
  os << "R''   = " << fmt_bits(report.r_dprime) << " bits\n";
  os << "total = " << fmt_bits(report.total) << " bits\n";
  os << "binding: " << report.binding << "\n";
  return os.str();
}

std::string report_to_json(const CutReport& report, const DiscreteNetworkSpec& spec) {
  json j;
  j["network"] = spec.name;
  j["r_prime"] = report.r_prime;
  j["r_dprime"] = report.r_dprime;
  j["total"] = report.total;
  j["binding"] = report.binding;
  json decode = json::array();
  for (const auto& [node, bits] : report.decode_terms) {
    decode.push_back({{"node", node}, {"bits", bits}});
  }
  j["decode_terms"] = decode;
  json dests = json::array();
  for (const auto& dc : report.destinations) {
    json jd;
    jd["node"] = dc.node;
    json cuts = json::array();
    for (const auto& e : dc.entries) {
      json je;
      json members = json::array();
      for (int id = 1; id <= 32; ++id) {
        if (e.cut & (1u << (id - 1))) members.push_back(id);
      }
      je["cut"] = members;
      if (e.r_prime) je["r_prime"] = *e.r_prime;
      je["r_dprime"] = e.r_dprime;
      cuts.push_back(je);
    }
    jd["cuts"] = cuts;
    if (dc.r_prime_min) jd["r_prime_min"] = *dc.r_prime_min;
    jd["r_dprime_min"] = dc.r_dprime_min;
    dests.push_back(jd);
  }
  j["destinations"] = dests;
  return j.dump(2) + "\n";
}

}  // namespace netrate::dmn
