// Discrete-memoryless-network bounds by exact cut-set enumeration over the
// composed joint pmf. Node k owns variables v<k>, x<k>, y<k>, yhat<k>; the
// node index order 1..N doubles as the decode-forward route order for the
// single-source evaluator.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netrate/discrete.hpp"

namespace netrate::dmn {

struct NodeSpec {
  int id = 0;  // 1-based
  bool is_source = false;
  bool is_destination = false;
  int v_card = 1;
  int x_card = 1;
  int y_card = 0;     // 0: the node does not receive
  int yhat_card = 0;  // 0: the node does not compress (mandatory for sources)

  std::vector<double> p_v;          // size v_card
  std::vector<double> p_x_given_v;  // row-major [v, x]
  // Compression factor p(yhat | y, x, extra...): `yhat_extra_conditioning`
  // lists variable names beyond the node's own y and x; the table is
  // row-major over [y, x, extra..., yhat].
  std::vector<std::string> yhat_extra_conditioning;
  std::vector<double> p_yhat;
};

struct DiscreteNetworkSpec {
  std::string name;
  std::vector<NodeSpec> nodes;    // ids 1..N in order
  std::vector<double> channel;    // row-major [x1..xN, y outputs in node order]

  int n() const { return static_cast<int>(nodes.size()); }
  std::vector<int> sources() const;
  std::vector<int> destinations() const;
  void validate() const;

  /// Factor list realizing the product-form pmf; the channel is one factor.
  std::vector<disc::PmfFactor> factors() const;
};

/// One evaluated cut for a destination. Masks use bit (id-1) for node id.
struct CutEntry {
  std::uint32_t cut = 0;
  std::optional<double> r_prime;  // set by the multi-source evaluator
  double r_dprime = 0.0;
};

struct DestinationCuts {
  int node = 0;
  std::vector<CutEntry> entries;
  std::optional<double> r_prime_min;
  double r_dprime_min = 0.0;
  std::uint32_t binding_prime_cut = 0;
  std::uint32_t binding_dprime_cut = 0;
};

struct CutReport {
  // Single-source evaluator only: per-node decode-forward chain terms.
  std::vector<std::pair<int, double>> decode_terms;
  std::vector<DestinationCuts> destinations;
  double r_prime = 0.0;
  double r_dprime = 0.0;
  double total = 0.0;
  std::string binding;  // human-readable summary of the active minima
};

/// Single-source multicast bound. R' is the minimum over nodes k = 2..N of
/// I(V^{k-1}; Y_k | X_k, V_k^N) along the declared route order; R'' is the
/// minimum over destinations k and cuts S (source in S, k not in S) of
///   I(X(S); Yh(S^c), Y_k | X(S^c), V^N) - I(Yh(S); Y(S) | X^N, Yh(S^c), Y_k, V*)
/// where V* is the full V-tuple by default, or V_{k-1}^N when
/// `literal_v_indexing` is set.
CutReport theorem2_rate(const DiscreteNetworkSpec& spec, bool literal_v_indexing = false);

/// Multi-source multicast bounds: for each destination k and each cut S with
/// k not in S and at least one source in S, evaluates
///   R'(S)  = I(V(S); Y_k | X_k, V(S^c))
///   R''(S) = I(X(S); Yh(S^c), Y_k | X(S^c), V^N) - I(Yh(S); Y(S) | X^N, Yh(S^c), Y_k, V*)
/// with the same V* convention as above.
CutReport theorem3_rates(const DiscreteNetworkSpec& spec, bool literal_v_indexing = false);

/// Enumerates probability vectors of length `card` whose entries are
/// multiples of 1/denom, in lexicographic order.
std::vector<std::vector<double>> quantized_simplex(int card, int denom);

enum class Theorem { SingleSource, MultiSource };

struct InputOptimum {
  DiscreteNetworkSpec spec;  // with the optimized p(v) tables substituted
  CutReport report;
  long evaluations = 0;
};

/// Exhaustive grid search of the listed nodes' p(v) tables over the
/// quantized simplex (alphabets up to 3), maximizing the report total.
InputOptimum optimize_v_inputs(const DiscreteNetworkSpec& spec, Theorem theorem,
                               const std::vector<int>& node_ids, int denom = 8,
                               bool literal_v_indexing = false);

/// Parse / load a network description document (JSON). Parse errors carry
/// the offending field; guard violations name the limit.
DiscreteNetworkSpec parse_network(const std::string& json_text);
DiscreteNetworkSpec load_network(const std::string& path);

std::string format_report(const CutReport& report, const DiscreteNetworkSpec& spec);
std::string report_to_json(const CutReport& report, const DiscreteNetworkSpec& spec);

/// "{1,3}" for mask 0b101.
std::string cut_to_string(std::uint32_t mask);

}  // namespace netrate::dmn
