// Achievable-rate and cut-set evaluation for the AWGN two-way relay channel
//   Y1 = g21 X2 + g31 X3 + Z1
//   Y2 = g12 X1 + g32 X3 + Z2
//   Y3 = g13 X1 + g23 X2 + Z3
// with the relay (node 3) at distance d from node 1 on a unit line and
// path-loss gains g12 = g21 = 1, g13 = g31 = d^(-gamma/2),
// g23 = g32 = (1-d)^(-gamma/2).
#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace netrate::twrc {

struct TwrcSpec {
  double p1 = 10.0, p2 = 10.0, p3 = 10.0;
  double n1 = 1.0, n2 = 1.0, n3 = 1.0;
  double gamma = 3.0;
  double d = 0.5;

  double g12() const { return 1.0; }
  double g21() const { return 1.0; }
  double g13() const { return std::pow(d, -gamma / 2.0); }
  double g31() const { return g13(); }
  double g23() const { return std::pow(1.0 - d, -gamma / 2.0); }
  double g32() const { return g23(); }

  void validate() const;
};

/// Power fractions on the decoded layers U1, U2, V3 plus the compression
/// noise variance for Yh3 = Y3 + Zh(q). The time-sharing variable is held
/// degenerate.
struct TwrcSnncParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double q = 1.0;
  void validate() const;
};

struct TwrcRatePoint {
  double r1_prime = 0.0, r2_prime = 0.0;
  double r1_dprime = 0.0, r2_dprime = 0.0;
  double r1 = 0.0, r2 = 0.0, sum = 0.0;
  std::vector<std::string> binding_terms;
  std::string binding() const;
};

/// Evaluates the five-constraint inner bound (per-direction decoded-layer
/// rates, their sum constraint at the relay, and the two compression-layer
/// rates). The decoded-layer pair is taken on the dominant face maximizing
/// R1' + R2'; when the sum constraint binds, the face is a segment and the
/// split is chosen as close to equal as the individual caps allow.
TwrcRatePoint twrc_snnc_rate(const TwrcSpec& spec, const TwrcSnncParams& params);

/// Noisy network coding: all power fractions zero, prime rates identically 0.
TwrcRatePoint twrc_nnc_rate(const TwrcSpec& spec, double q);

/// Per-direction cut-set bounds with independent inputs: for direction 1->2,
///   min{ C(g12^2 P1 / N2 + g13^2 P1 / N3), C((g12^2 P1 + g32^2 P3) / N2) }
/// and symmetrically for direction 2->1.
std::pair<double, double> twrc_cutset(const TwrcSpec& spec);

struct TwrcCutsetDetail {
  double r1_max = 0.0, r2_max = 0.0;
  std::vector<std::string> binding_terms;
  std::string binding() const;
};
TwrcCutsetDetail twrc_cutset_detail(const TwrcSpec& spec);

struct TwrcOptimizeBudget {
  int grid_points = 13;
  int refine_iters = 50;
  double q_min = 1e-3;
  double q_max = 1e3;
};

struct OptimizedTwrcRate {
  TwrcRatePoint rate;
  TwrcSnncParams params;
  long evaluations = 0;
};

/// Deterministic maximization of the sum rate over (alpha1, alpha2, alpha3,
/// log q), with a restart on the all-zero-fraction plane so the optimized
/// SNNC sum never falls below the optimized NNC sum.
OptimizedTwrcRate optimize_twrc_snnc(const TwrcSpec& spec, const TwrcOptimizeBudget& budget = {});
OptimizedTwrcRate optimize_twrc_nnc(const TwrcSpec& spec, const TwrcOptimizeBudget& budget = {});

}  // namespace netrate::twrc
