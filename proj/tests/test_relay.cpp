#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "frozen_oracles.hpp"
#include "netrate/relay.hpp"

using namespace netrate::relay;

namespace {

const double kHalfLog6 = 0.5 * std::log2(6.0);  // C(5) with P1 = 5, N2 = 1

std::vector<double> unit_grid(int points, double lo = 0.05, double hi = 0.95) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(lo + (hi - lo) * i / (points - 1));
  return out;
}

}  // namespace

TEST_CASE("spec construction and validation") {
  const auto spec = GaussianRelaySpec::at_position(0.25);
  CHECK(spec.a == doctest::Approx(4.0));
  CHECK(spec.b == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(GaussianRelaySpec::at_position(0.0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianRelaySpec::at_position(1.0), std::invalid_argument);
  CHECK_THROWS_AS(snnc_rate(spec, RelaySnncParams{-0.1, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(snnc_rate(spec, RelaySnncParams{0.5, 0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("snnc at alpha = beta = 0 collapses to nnc exactly") {
  const auto spec = GaussianRelaySpec::at_position(0.3);
  for (double q : {1e-3, 0.37, 1.0, 42.0, 1e3}) {
    const auto s = snnc_rate(spec, RelaySnncParams{0.0, 0.0, q});
    const auto n = nnc_rate(spec, q);
    CHECK(s.r_prime == 0.0);
    CHECK(s.total == n.total);  // bitwise: nnc_rate is the same evaluation
    CHECK(s.r_dprime == n.r_dprime);
  }
}

TEST_CASE("silent relay leaves the direct link") {
  GaussianRelaySpec spec;
  spec.p2 = 0.0;
  spec.a = 2.0;
  spec.b = 2.0;
  OptimizeBudget wide;
  wide.q_max = 1e9;  // compression must be allowed to become useless
  const auto best = optimize_snnc(spec, wide);
  CHECK(std::abs(best.rate.total - kHalfLog6) < 1e-6);
  CHECK(std::abs(cf_rate(spec).total - kHalfLog6) < 1e-12);
}

TEST_CASE("regression: optimized snnc at d = 0.25 matches the dense oracle") {
  const auto best = optimize_snnc(GaussianRelaySpec::at_position(0.25));
  CHECK(std::abs(best.rate.total - frozen::kRelaySnncD025) < 1e-4);
  CHECK(best.rate.total == doctest::Approx(best.rate.r_prime + best.rate.r_dprime));
}

TEST_CASE("nnc: large q leaves the direct link") {
  const auto spec = GaussianRelaySpec::at_position(0.5);
  CHECK(std::abs(nnc_rate(spec, 1e6).total - kHalfLog6) < 1e-3);
}

TEST_CASE("nnc: useless relay observation never beats the direct link") {
  GaussianRelaySpec spec;
  spec.a = 0.0;
  spec.b = 2.0;
  for (double q : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
    CHECK(nnc_rate(spec, q).total <= kHalfLog6 + 1e-9);
  }
}

TEST_CASE("nnc optimum equals the compress-forward closed form") {
  const auto spec = GaussianRelaySpec::at_position(0.5);
  const auto best = optimize_nnc(spec);
  CHECK(std::abs(best.rate.total - cf_rate(spec).total) < 1e-6);
  CHECK(std::abs(best.rate.total - frozen::kRelayNncD050) < 1e-6);
}

TEST_CASE("cf closed form: degenerate relays") {
  GaussianRelaySpec spec;
  spec.a = 2.0;
  spec.b = 2.0;
  spec.p2 = 0.0;
  CHECK(std::abs(cf_rate(spec).total - kHalfLog6) < 1e-12);
  spec.p2 = 5.0;
  spec.b = 0.0;
  CHECK(std::abs(cf_rate(spec).total - kHalfLog6) < 1e-12);
}

TEST_CASE("cutset bound: degenerate cases and regression value") {
  GaussianRelaySpec spec;
  spec.a = 0.0;
  spec.b = 2.0;
  CHECK(std::abs(cutset_bound(spec) - kHalfLog6) < 1e-8);

  GaussianRelaySpec silent;
  silent.a = 2.0;
  silent.b = 2.0;
  silent.p2 = 0.0;
  CHECK(std::abs(cutset_bound(silent) - kHalfLog6) < 1e-8);

  CHECK(std::abs(cutset_bound(GaussianRelaySpec::at_position(0.5)) - frozen::kRelayCutsetD050) <
        1e-7);
}

TEST_CASE("regression: snnc advantage at d = 0.1") {
  const auto snnc = optimize_snnc(GaussianRelaySpec::at_position(0.1));
  const auto nnc = optimize_nnc(GaussianRelaySpec::at_position(0.1));
  const double gap = snnc.rate.total - nnc.rate.total;
  CHECK(gap > 0.0);
  CHECK(std::abs(gap - frozen::kRelayGapD010) < 1e-4);
  CHECK(std::abs(snnc.rate.total - frozen::kRelaySnncD010) < 1e-4);
  CHECK(std::abs(nnc.rate.total - frozen::kRelayNncD010) < 1e-4);
}

TEST_CASE("invariants across a coarse d grid") {
  double prev_snnc = -1.0, prev_nnc = -1.0, prev_cf = -1.0;
  bool have_prev = false;
  for (double d : unit_grid(10)) {
    const auto spec = GaussianRelaySpec::at_position(d);
    const auto snnc = optimize_snnc(spec);
    const auto nnc = optimize_nnc(spec);
    const double cf = cf_rate(spec).total;
    const double cut = cutset_bound(spec);

    CHECK(nnc.rate.total >= 0.0);
    CHECK(snnc.rate.total >= nnc.rate.total - 1e-9);
    CHECK(snnc.rate.total <= cut + 1e-9);
    CHECK(nnc.rate.total <= cut + 1e-9);
    CHECK(cf <= cut + 1e-9);
    CHECK(std::abs(nnc.rate.total - cf) < 1e-5);

    if (have_prev) {
      // 10-point grid spacing is twice the 50-point spacing; scale the
      // continuity allowance accordingly.
      CHECK(std::abs(snnc.rate.total - prev_snnc) < 0.05 * 49.0 / 9.0);
      CHECK(std::abs(nnc.rate.total - prev_nnc) < 0.05 * 49.0 / 9.0);
      CHECK(std::abs(cf - prev_cf) < 0.05 * 49.0 / 9.0);
    }
    prev_snnc = snnc.rate.total;
    prev_nnc = nnc.rate.total;
    prev_cf = cf;
    have_prev = true;
  }
}

TEST_CASE("boundary: vanishing relay power drives every scheme to the direct link") {
  GaussianRelaySpec spec;
  spec.p2 = 1e-9;
  spec.a = 2.0;
  spec.b = 2.0;
  OptimizeBudget wide;
  wide.q_max = 1e9;
  CHECK(std::abs(optimize_snnc(spec, wide).rate.total - kHalfLog6) < 1e-6);
  CHECK(std::abs(optimize_nnc(spec, wide).rate.total - kHalfLog6) < 1e-6);
  CHECK(std::abs(cf_rate(spec).total - kHalfLog6) < 1e-6);
}

TEST_CASE("binding labels identify the active minima") {
  const auto spec = GaussianRelaySpec::at_position(0.25);
  const auto pt = snnc_rate(spec, RelaySnncParams{0.5, 0.5, 1.0});
  REQUIRE(pt.binding_terms.size() == 2);
  CHECK(pt.binding_terms[0].rfind("Rp:", 0) == 0);
  CHECK(pt.binding_terms[1].rfind("Rpp:", 0) == 0);
  CHECK(pt.binding().find('+') != std::string::npos);

  const auto nn = nnc_rate(spec, 1.0);
  REQUIRE(nn.binding_terms.size() == 1);
  CHECK(nn.binding_terms[0].rfind("Rpp:", 0) == 0);

  const auto detail = cutset_bound_detail(spec);
  CHECK(!detail.binding_terms.empty());
}
