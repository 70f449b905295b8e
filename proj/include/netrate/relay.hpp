// Achievable-rate and cut-set evaluation for the AWGN single relay channel
//   Y2 = a X1 + Z1,   Y3 = X1 + b X2 + Z2,
// with superposition layering X1 = U1 + S1, X2 = V2 + S2 and relay
// compression Yh2 = Y2 + Zh(q).
#pragma once

#include <string>
#include <vector>

#include "netrate/optimize.hpp"

namespace netrate::relay {

struct GaussianRelaySpec {
  double p1 = 5.0, p2 = 5.0;  // transmit powers
  double n1 = 1.0, n2 = 1.0;  // noise variances at relay / destination
  double a = 1.0, b = 1.0;    // source-relay / relay-destination gains

  /// Line geometry: relay at distance d from the source, a = 1/d, b = 1/(1-d).
  static GaussianRelaySpec at_position(double d, double p1 = 5.0, double p2 = 5.0,
                                       double n1 = 1.0, double n2 = 1.0);
  void validate() const;
};

/// Free parameters of the superposition scheme: power-split fractions for
/// the decoded layer and the compression-noise variance.
struct RelaySnncParams {
  double alpha = 0.0;  // fraction of P1 on U1
  double beta = 0.0;   // fraction of P2 on V2
  double q = 1.0;      // compression noise variance, > 0
  void validate() const;
};

struct RatePoint {
  double r_prime = 0.0;
  double r_dprime = 0.0;
  double total = 0.0;
  std::vector<std::string> binding_terms;  // labels of the active minima

  /// Labels joined with '+', e.g. "Rp:dest+Rpp:cut".
  std::string binding() const;
};

/// Superposition rate R' + R'' at the given parameter point, each layer the
/// min of its two information constraints, clamped at 0.
RatePoint snnc_rate(const GaussianRelaySpec& spec, const RelaySnncParams& params);

/// Noisy network coding: the alpha = beta = 0 special case (no decoded layer).
RatePoint nnc_rate(const GaussianRelaySpec& spec, double q);

/// Classical Gaussian compress-forward, closed form: the compression noise is
/// set by the tight feasibility constraint q* = (N1 (P1+N2) + a^2 P1 N2) / (b^2 P2)
/// and the rate is C(P1/N2 + a^2 P1 / (N1 + q*)). Serves as the independent
/// oracle for optimized NNC.
RatePoint cf_rate(const GaussianRelaySpec& spec);

/// Cut-set bound with correlated inputs:
///   max_{rho in [0,1]} min{ C((1-rho^2) P1 (a^2/N1 + 1/N2)),
///                           C((P1 + b^2 P2 + 2 rho b sqrt(P1 P2)) / N2) }.
double cutset_bound(const GaussianRelaySpec& spec);

struct CutsetDetail {
  double value = 0.0;
  double rho = 0.0;
  std::vector<std::string> binding_terms;  // "bc" and/or "mac"
  std::string binding() const;
};
CutsetDetail cutset_bound_detail(const GaussianRelaySpec& spec);

/// Search budgets shared by the scheme optimizers. The q box follows the
/// regime where compression is useful at the powers studied here.
struct OptimizeBudget {
  int grid_points = 21;
  int refine_iters = 50;
  double q_min = 1e-3;
  double q_max = 1e3;
};

struct OptimizedRate {
  RatePoint rate;
  RelaySnncParams params;
  long evaluations = 0;
};

/// Deterministic maximization of the SNNC total over (alpha, beta, log q).
/// Runs the full 3-D search plus a restart restricted to the alpha = beta = 0
/// plane with the same q budget, so the optimized SNNC value can never fall
/// below the optimized NNC value.
OptimizedRate optimize_snnc(const GaussianRelaySpec& spec, const OptimizeBudget& budget = {});

/// Deterministic maximization of the NNC total over log q.
OptimizedRate optimize_nnc(const GaussianRelaySpec& spec, const OptimizeBudget& budget = {});

}  // namespace netrate::relay
