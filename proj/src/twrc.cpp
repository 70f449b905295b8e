#include "netrate/twrc.hpp"

#include <algorithm>
#include <stdexcept>

#include "netrate/gaussian.hpp"
#include "netrate/optimize.hpp"

namespace netrate::twrc {

namespace {

constexpr double kTieTol = 1e-12;

double cap(double snr) { return 0.5 * std::log2(1.0 + snr); }

double clamp0(double x) { return std::max(0.0, x); }

// Fractions within 1e-9 of the boundary evaluate at the boundary so the MI
// engine sees exact zero variances instead of threshold-straddling
// eigenvalues (see the matching helper in relay.cpp).
double snap01(double f) {
  if (std::abs(f) < 1e-9) return 0.0;
  if (std::abs(f - 1.0) < 1e-9) return 1.0;
  return f;
}

void append_min_group(std::vector<std::string>& out, double t1, const std::string& l1, double t2,
                      const std::string& l2) {
  const double m = std::min(t1, t2);
  std::string group;
  if (t1 <= m + kTieTol) group = l1;
  if (t2 <= m + kTieTol) {
    if (!group.empty()) group += "&";
    group += l2;
  }
  out.push_back(std::move(group));
}

}  // namespace

void TwrcSpec::validate() const {
  if (p1 < 0.0 || p2 < 0.0 || p3 < 0.0) {
    throw std::invalid_argument("TwrcSpec: powers must be >= 0");
  }
  if (!(n1 > 0.0) || !(n2 > 0.0) || !(n3 > 0.0)) {
    throw std::invalid_argument("TwrcSpec: noise variances must be > 0");
  }
  if (!(gamma > 0.0)) throw std::invalid_argument("TwrcSpec: gamma must be > 0");
  if (!(d > 0.0 && d < 1.0)) {
    throw std::invalid_argument("TwrcSpec: relay position d must lie strictly in (0,1)");
  }
}

void TwrcSnncParams::validate() const {
  auto frac = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!frac(alpha1) || !frac(alpha2) || !frac(alpha3)) {
    throw std::invalid_argument("TwrcSnncParams: power fractions must lie in [0,1]");
  }
  if (!(q > 0.0)) throw std::invalid_argument("TwrcSnncParams: q must be > 0");
}

std::string TwrcRatePoint::binding() const {
  std::string out;
  for (const auto& t : binding_terms) {
    if (!out.empty()) out += "+";
    out += t;
  }
  return out;
}

std::string TwrcCutsetDetail::binding() const {
  std::string out;
  for (const auto& t : binding_terms) {
    if (!out.empty()) out += "+";
    out += t;
  }
  return out;
}

TwrcRatePoint twrc_snnc_rate(const TwrcSpec& spec, const TwrcSnncParams& params) {
  spec.validate();
  params.validate();
  const double alpha1 = snap01(params.alpha1);
  const double alpha2 = snap01(params.alpha2);
  const double alpha3 = snap01(params.alpha3);

  using gauss::StructuralEquation;
  const auto sys = gauss::build_system(
      {{"U1", alpha1 * spec.p1},
       {"S1", (1.0 - alpha1) * spec.p1},
       {"U2", alpha2 * spec.p2},
       {"S2", (1.0 - alpha2) * spec.p2},
       {"V3", alpha3 * spec.p3},
       {"S3", (1.0 - alpha3) * spec.p3},
       {"Z1", spec.n1},
       {"Z2", spec.n2},
       {"Z3", spec.n3},
       {"Zh", params.q}},
      {StructuralEquation{"X1", {{1.0, "U1"}, {1.0, "S1"}}},
       StructuralEquation{"X2", {{1.0, "U2"}, {1.0, "S2"}}},
       StructuralEquation{"X3", {{1.0, "V3"}, {1.0, "S3"}}},
       StructuralEquation{"Y1", {{spec.g21(), "X2"}, {spec.g31(), "X3"}, {1.0, "Z1"}}},
       StructuralEquation{"Y2", {{spec.g12(), "X1"}, {spec.g32(), "X3"}, {1.0, "Z2"}}},
       StructuralEquation{"Y3", {{spec.g13(), "X1"}, {spec.g23(), "X2"}, {1.0, "Z3"}}},
       StructuralEquation{"Yh3", {{1.0, "Y3"}, {1.0, "Zh"}}}});

  auto mi = [&](std::initializer_list<std::string> a, std::initializer_list<std::string> b,
                std::initializer_list<std::string> c) {
    return gauss::mutual_information(sys, a, b, c);
  };

  const double a1_sep = mi({"U1"}, {"Y2"}, {"U2", "V3", "X3"});
  const double a1_coop = mi({"U1", "V3"}, {"Y2"}, {"U2", "X2"});
  const double a2_sep = mi({"U2"}, {"Y1"}, {"U1", "V3", "X3"});
  const double a2_coop = mi({"U2", "V3"}, {"Y1"}, {"U1", "X1"});
  const double a12 = mi({"U1", "U2"}, {"Y3"}, {"V3", "X3"});

  const double b1_quant = mi({"X1"}, {"Y2", "Yh3"}, {"X2", "X3", "U1", "U2"});
  const double b1_cut = mi({"X1", "X3"}, {"Y2"}, {"X2", "U1", "V3"}) -
                        mi({"Y3"}, {"Yh3"}, {"X1", "X2", "X3", "Y2", "U1", "U2"});
  const double b2_quant = mi({"X2"}, {"Y1", "Yh3"}, {"X1", "X3", "U1", "U2"});
  const double b2_cut = mi({"X2", "X3"}, {"Y1"}, {"X1", "U2", "V3"}) -
                        mi({"Y3"}, {"Yh3"}, {"X1", "X2", "X3", "Y1", "U1", "U2"});

  const double cap1 = clamp0(std::min(a1_sep, a1_coop));
  const double cap2 = clamp0(std::min(a2_sep, a2_coop));
  const double cap12 = clamp0(a12);

  TwrcRatePoint pt;
  append_min_group(pt.binding_terms, a1_sep, "R1p:sep", a1_coop, "R1p:coop");
  append_min_group(pt.binding_terms, a2_sep, "R2p:sep", a2_coop, "R2p:coop");
  if (cap1 + cap2 <= cap12) {
    pt.r1_prime = cap1;
    pt.r2_prime = cap2;
  } else {
    // Dominant face of the decoded-layer region: split the sum as evenly as
    // the individual caps allow.
    const double s = cap12;
    const double lo = std::max(0.0, s - cap2);
    const double hi = std::min(cap1, s);
    pt.r1_prime = std::clamp(s / 2.0, lo, hi);
    pt.r2_prime = s - pt.r1_prime;
    pt.binding_terms.push_back("sum");
  }

  pt.r1_dprime = clamp0(std::min(b1_quant, b1_cut));
  pt.r2_dprime = clamp0(std::min(b2_quant, b2_cut));
  append_min_group(pt.binding_terms, b1_quant, "R1pp:quant", b1_cut, "R1pp:cut");
  append_min_group(pt.binding_terms, b2_quant, "R2pp:quant", b2_cut, "R2pp:cut");

  pt.r1 = pt.r1_prime + pt.r1_dprime;
  pt.r2 = pt.r2_prime + pt.r2_dprime;
  pt.sum = pt.r1 + pt.r2;
  return pt;
}

TwrcRatePoint twrc_nnc_rate(const TwrcSpec& spec, double q) {
  TwrcRatePoint pt = twrc_snnc_rate(spec, TwrcSnncParams{0.0, 0.0, 0.0, q});
  std::vector<std::string> labels;
  for (auto& t : pt.binding_terms) {
    if (t.rfind("R1pp:", 0) == 0 || t.rfind("R2pp:", 0) == 0) labels.push_back(std::move(t));
  }
  pt.binding_terms = std::move(labels);
  return pt;
}

TwrcCutsetDetail twrc_cutset_detail(const TwrcSpec& spec) {
  spec.validate();
  const double bc1 = cap(spec.g12() * spec.g12() * spec.p1 / spec.n2 +
                         spec.g13() * spec.g13() * spec.p1 / spec.n3);
  const double mac1 =
      cap((spec.g12() * spec.g12() * spec.p1 + spec.g32() * spec.g32() * spec.p3) / spec.n2);
  const double bc2 = cap(spec.g21() * spec.g21() * spec.p2 / spec.n1 +
                         spec.g23() * spec.g23() * spec.p2 / spec.n3);
  const double mac2 =
      cap((spec.g21() * spec.g21() * spec.p2 + spec.g31() * spec.g31() * spec.p3) / spec.n1);

  TwrcCutsetDetail detail;
  detail.r1_max = std::min(bc1, mac1);
  detail.r2_max = std::min(bc2, mac2);
  append_min_group(detail.binding_terms, bc1, "R1:bc", mac1, "R1:mac");
  append_min_group(detail.binding_terms, bc2, "R2:bc", mac2, "R2:mac");
  return detail;
}

std::pair<double, double> twrc_cutset(const TwrcSpec& spec) {
  const auto detail = twrc_cutset_detail(spec);
  return {detail.r1_max, detail.r2_max};
}

OptimizedTwrcRate optimize_twrc_nnc(const TwrcSpec& spec, const TwrcOptimizeBudget& budget) {
  spec.validate();
  opt::SearchBox box{{{"q", budget.q_min, budget.q_max, opt::Scale::Log}}};
  const auto res = opt::grid_refine(
      [&](const std::vector<double>& v) { return twrc_nnc_rate(spec, v[0]).sum; }, box,
      budget.grid_points, budget.refine_iters, 1e-9);

  OptimizedTwrcRate out;
  out.params = TwrcSnncParams{0.0, 0.0, 0.0, res.best_params[0]};
  out.rate = twrc_nnc_rate(spec, out.params.q);
  out.evaluations = res.evaluations;
  return out;
}

OptimizedTwrcRate optimize_twrc_snnc(const TwrcSpec& spec, const TwrcOptimizeBudget& budget) {
  spec.validate();
  opt::SearchBox box{{{"alpha1", 0.0, 1.0, opt::Scale::Linear},
                      {"alpha2", 0.0, 1.0, opt::Scale::Linear},
                      {"alpha3", 0.0, 1.0, opt::Scale::Linear},
                      {"q", budget.q_min, budget.q_max, opt::Scale::Log}}};
  const auto full = opt::grid_refine(
      [&](const std::vector<double>& v) {
        return twrc_snnc_rate(spec, TwrcSnncParams{v[0], v[1], v[2], v[3]}).sum;
      },
      box, budget.grid_points, budget.refine_iters, 1e-9);

  // All-zero-fraction restart (the NNC subfamily) with the same q budget.
  // The plane solution wins unless the full search improves on it by more
  // than the refinement stop tolerance.
  const auto plane = optimize_twrc_nnc(spec, budget);

  OptimizedTwrcRate out;
  if (full.best_value > plane.rate.sum + 1e-6) {
    out.params =
        TwrcSnncParams{full.best_params[0], full.best_params[1], full.best_params[2],
                       full.best_params[3]};
  } else {
    out.params = plane.params;
  }
  out.rate = twrc_snnc_rate(spec, out.params);
  out.evaluations = full.evaluations + plane.evaluations;
  return out;
}

}  // namespace netrate::twrc
