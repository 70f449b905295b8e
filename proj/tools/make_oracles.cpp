// Dense-grid reference searches for the regression targets frozen into the
// test suites. Slow by design; run manually and paste the printed values.
//
//   oracle targets:
//     relay snnc optimum at d = 0.25 (101 x 101 x 200 grid + refinement)
//     relay snnc/nnc gap at d = 0.10
//     relay nnc optimum vs closed-form cf at d = 0.50
//     relay cutset at d = 0.50 (1e6-point rho grid)
//     twrc snnc optimum at d = 0.20 (21^3 x 100 grid + refinement)
//     twrc nnc optimum at d = 0.50 (1e4-point q grid)
//     twrc snnc/nnc gaps at d in {0.10, 0.90}
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <vector>

#include "netrate/parallel.hpp"
#include "netrate/relay.hpp"
#include "netrate/twrc.hpp"

namespace {

using netrate::relay::GaussianRelaySpec;
using netrate::relay::RelaySnncParams;
using netrate::twrc::TwrcSnncParams;
using netrate::twrc::TwrcSpec;

// Golden-section polish of one coordinate, independent of the production
// optimizer.
double polish_coordinate(const std::function<double(double)>& f, double lo, double hi,
                         double center, double halfwidth, double* best_x) {
  double a = std::max(lo, center - halfwidth);
  double b = std::min(hi, center + halfwidth);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double v1 = f(x1), v2 = f(x2);
  double bx = v1 >= v2 ? x1 : x2;
  double bv = std::max(v1, v2);
  for (int i = 0; i < 200 && (b - a) > 1e-13; ++i) {
    if (v1 < v2) {
      a = x1;
      x1 = x2;
      v1 = v2;
      x2 = a + invphi * (b - a);
      v2 = f(x2);
      if (v2 > bv) {
        bv = v2;
        bx = x2;
      }
    } else {
      b = x2;
      x2 = x1;
      v2 = v1;
      x1 = b - invphi * (b - a);
      v1 = f(x1);
      if (v1 > bv) {
        bv = v1;
        bx = x1;
      }
    }
  }
  *best_x = bx;
  return bv;
}

struct DensePoint {
  std::vector<double> x;
  double value = -1e300;
};

// Cyclic coordinate polish around a dense-grid incumbent.
DensePoint polish(const std::function<double(const std::vector<double>&)>& f, DensePoint start,
                  const std::vector<std::pair<double, double>>& bounds,
                  std::vector<double> halfwidth) {
  DensePoint cur = start;
  for (int cycle = 0; cycle < 60; ++cycle) {
    const double before = cur.value;
    for (std::size_t d = 0; d < cur.x.size(); ++d) {
      auto line = [&](double xd) {
        auto xx = cur.x;
        xx[d] = xd;
        return f(xx);
      };
      double bx = cur.x[d];
      const double bv =
          polish_coordinate(line, bounds[d].first, bounds[d].second, cur.x[d], halfwidth[d], &bx);
      if (bv > cur.value) {
        cur.value = bv;
        cur.x[d] = bx;
      }
    }
    if (cur.value - before < 1e-12) break;
  }
  return cur;
}

double relay_snnc_dense(const GaussianRelaySpec& spec, double* alpha, double* beta, double* q) {
  const int na = 101, nb = 101, nq = 200;
  const double lq_min = std::log(1e-3), lq_max = std::log(1e3);

  std::vector<DensePoint> row_best(na);
  netrate::parallel_for_index(na, 0, [&](std::size_t i) {
    const double av = static_cast<double>(i) / (na - 1);
    DensePoint best;
    for (int j = 0; j < nb; ++j) {
      const double bv = static_cast<double>(j) / (nb - 1);
      for (int k = 0; k < nq; ++k) {
        const double qv = std::exp(lq_min + (lq_max - lq_min) * k / (nq - 1));
        const double val = netrate::relay::snnc_rate(spec, {av, bv, qv}).total;
        if (val > best.value) best = DensePoint{{av, bv, std::log(qv)}, val};
      }
    }
    row_best[i] = best;
  });
  DensePoint best;
  for (const auto& rb : row_best) {
    if (rb.value > best.value) best = rb;
  }

  auto f = [&](const std::vector<double>& x) {
    return netrate::relay::snnc_rate(spec, {x[0], x[1], std::exp(x[2])}).total;
  };
  const DensePoint polished =
      polish(f, best, {{0.0, 1.0}, {0.0, 1.0}, {lq_min, lq_max}},
             {1.0 / (na - 1), 1.0 / (nb - 1), (lq_max - lq_min) / (nq - 1)});
  *alpha = polished.x[0];
  *beta = polished.x[1];
  *q = std::exp(polished.x[2]);
  return polished.value;
}

double relay_nnc_dense(const GaussianRelaySpec& spec, int points, double* q) {
  const double lq_min = std::log(1e-3), lq_max = std::log(1e3);
  DensePoint best;
  for (int k = 0; k < points; ++k) {
    const double lq = lq_min + (lq_max - lq_min) * k / (points - 1);
    const double val = netrate::relay::nnc_rate(spec, std::exp(lq)).total;
    if (val > best.value) best = DensePoint{{lq}, val};
  }
  auto f = [&](const std::vector<double>& x) {
    return netrate::relay::nnc_rate(spec, std::exp(x[0])).total;
  };
  const DensePoint polished =
      polish(f, best, {{lq_min, lq_max}}, {(lq_max - lq_min) / (points - 1)});
  *q = std::exp(polished.x[0]);
  return polished.value;
}

double relay_cutset_dense(const GaussianRelaySpec& spec) {
  auto value_at = [&](double rho) {
    const double bc =
        0.5 * std::log2(1.0 + (1.0 - rho * rho) * spec.p1 * (spec.a * spec.a / spec.n1 + 1.0 / spec.n2));
    const double mac = 0.5 * std::log2(1.0 + (spec.p1 + spec.b * spec.b * spec.p2 +
                                              2.0 * rho * spec.b * std::sqrt(spec.p1 * spec.p2)) /
                                                 spec.n2);
    return std::min(bc, mac);
  };
  const int n = 1000001;
  DensePoint best;
  for (int i = 0; i < n; ++i) {
    const double rho = static_cast<double>(i) / (n - 1);
    const double v = value_at(rho);
    if (v > best.value) best = DensePoint{{rho}, v};
  }
  auto f = [&](const std::vector<double>& x) { return value_at(x[0]); };
  return polish(f, best, {{0.0, 1.0}}, {1.0 / (n - 1)}).value;
}

double twrc_snnc_dense(const TwrcSpec& spec, std::vector<double>* params_out) {
  const int nf = 21, nq = 100;
  const double lq_min = std::log(1e-3), lq_max = std::log(1e3);

  std::vector<DensePoint> slice_best(nf);
  netrate::parallel_for_index(nf, 0, [&](std::size_t i) {
    const double a1 = static_cast<double>(i) / (nf - 1);
    DensePoint best;
    for (int j = 0; j < nf; ++j) {
      const double a2 = static_cast<double>(j) / (nf - 1);
      for (int k = 0; k < nf; ++k) {
        const double a3 = static_cast<double>(k) / (nf - 1);
        for (int m = 0; m < nq; ++m) {
          const double lq = lq_min + (lq_max - lq_min) * m / (nq - 1);
          const double val =
              netrate::twrc::twrc_snnc_rate(spec, {a1, a2, a3, std::exp(lq)}).sum;
          if (val > best.value) best = DensePoint{{a1, a2, a3, lq}, val};
        }
      }
    }
    slice_best[i] = best;
  });
  DensePoint best;
  for (const auto& sb : slice_best) {
    if (sb.value > best.value) best = sb;
  }

  auto f = [&](const std::vector<double>& x) {
    return netrate::twrc::twrc_snnc_rate(spec, {x[0], x[1], x[2], std::exp(x[3])}).sum;
  };
  const DensePoint polished =
      polish(f, best, {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {lq_min, lq_max}},
             {1.0 / (nf - 1), 1.0 / (nf - 1), 1.0 / (nf - 1), (lq_max - lq_min) / (nq - 1)});
  *params_out = {polished.x[0], polished.x[1], polished.x[2], std::exp(polished.x[3])};
  return polished.value;
}

double twrc_nnc_dense(const TwrcSpec& spec, int points) {
  const double lq_min = std::log(1e-3), lq_max = std::log(1e3);
  DensePoint best;
  for (int k = 0; k < points; ++k) {
    const double lq = lq_min + (lq_max - lq_min) * k / (points - 1);
    const double val = netrate::twrc::twrc_nnc_rate(spec, std::exp(lq)).sum;
    if (val > best.value) best = DensePoint{{lq}, val};
  }
  auto f = [&](const std::vector<double>& x) {
    return netrate::twrc::twrc_nnc_rate(spec, std::exp(x[0])).sum;
  };
  return polish(f, best, {{lq_min, lq_max}}, {(lq_max - lq_min) / (points - 1)}).value;
}

}  // namespace

int main() {
  std::printf("== single relay, P1 = P2 = 5, N1 = N2 = 1 ==\n");
  {
    const auto spec = GaussianRelaySpec::at_position(0.25);
    double alpha, beta, q;
    const double snnc = relay_snnc_dense(spec, &alpha, &beta, &q);
    std::printf("d=0.25 snnc_opt       = %.9f  (alpha=%.6f beta=%.6f q=%.6f)\n", snnc, alpha,
                beta, q);
  }
  {
    const auto spec = GaussianRelaySpec::at_position(0.10);
    double alpha, beta, q, qn;
    const double snnc = relay_snnc_dense(spec, &alpha, &beta, &q);
    const double nnc = relay_nnc_dense(spec, 100000, &qn);
    std::printf("d=0.10 snnc_opt       = %.9f  (alpha=%.6f beta=%.6f q=%.6f)\n", snnc, alpha,
                beta, q);
    std::printf("d=0.10 nnc_opt        = %.9f  (q=%.6f)\n", nnc, qn);
    std::printf("d=0.10 snnc-nnc gap   = %.9f\n", snnc - nnc);
  }
  {
    const auto spec = GaussianRelaySpec::at_position(0.50);
    double qn;
    const double nnc = relay_nnc_dense(spec, 100000, &qn);
    const double cf = netrate::relay::cf_rate(spec).total;
    std::printf("d=0.50 nnc_opt        = %.9f  (q=%.6f)\n", nnc, qn);
    std::printf("d=0.50 cf_closed_form = %.9f  (diff=%.3e)\n", cf, nnc - cf);
    std::printf("d=0.50 cutset         = %.9f\n", relay_cutset_dense(spec));
  }

  std::printf("\n== two-way relay, P = 10, N = 1, gamma = 3 ==\n");
  for (const double d : {0.20, 0.10, 0.50, 0.90}) {
    TwrcSpec spec;
    spec.d = d;
    std::vector<double> params;
    const double snnc = twrc_snnc_dense(spec, &params);
    const double nnc = twrc_nnc_dense(spec, 10000);
    std::printf("d=%.2f snnc_sum = %.9f  (a1=%.4f a2=%.4f a3=%.4f q=%.4f)\n", d, snnc, params[0],
                params[1], params[2], params[3]);
    std::printf("d=%.2f nnc_sum  = %.9f   gap = %.9f\n", d, nnc, snnc - nnc);
  }
  return 0;
}
