#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "netrate/gaussian.hpp"
#include "test_support.hpp"

using namespace netrate::gauss;

namespace {

std::vector<std::string> vars(std::initializer_list<std::string> names) { return names; }

}  // namespace

TEST_CASE("build_system: sum of independent variances") {
  const auto sys = build_system({{"X", 1.0}}, {StructuralEquation{"Y", {{1.0, "X"}}, 1.0}});
  CHECK(sys.cov()(sys.index_of("X"), sys.index_of("Y")) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sys.cov()(sys.index_of("Y"), sys.index_of("Y")) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("build_system: single exogenous variable") {
  const auto sys = build_system({{"A", 2.0}}, {});
  REQUIRE(sys.size() == 1);
  CHECK(sys.cov()(0, 0) == 2.0);
}

TEST_CASE("build_system: error paths") {
  CHECK_THROWS_AS(build_system({{"X", -1.0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_system({{"X", 1.0}, {"X", 2.0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_system({{"X", 1.0}}, {StructuralEquation{"Y", {{1.0, "W"}}}}),
                  std::invalid_argument);
  // Forward reference = cycle under the declaration-order rule.
  CHECK_THROWS_AS(build_system({{"X", 1.0}}, {StructuralEquation{"Y", {{1.0, "Z"}}},
                                              StructuralEquation{"Z", {{1.0, "X"}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_system({{"X", 1.0}}, {StructuralEquation{"Y", {{1.0, "X"}}, -0.5}}),
                  std::invalid_argument);
}

TEST_CASE("relay-layer system: var(Y3) by hand expansion and by sampling") {
  // alpha = beta = 0.5, q = 1, a = b = 2, P1 = P2 = 5, N1 = N2 = 1
  const auto sys = build_system(
      {{"U1", 2.5}, {"S1", 2.5}, {"V2", 2.5}, {"S2", 2.5}, {"Z1", 1.0}, {"Z2", 1.0}, {"Zh", 1.0}},
      {StructuralEquation{"X1", {{1.0, "U1"}, {1.0, "S1"}}},
       StructuralEquation{"X2", {{1.0, "V2"}, {1.0, "S2"}}},
       StructuralEquation{"Y2", {{2.0, "X1"}, {1.0, "Z1"}}},
       StructuralEquation{"Y3", {{1.0, "X1"}, {2.0, "X2"}, {1.0, "Z2"}}},
       StructuralEquation{"Yh2", {{1.0, "Y2"}, {1.0, "Zh"}}}});
  const int y3 = sys.index_of("Y3");
  CHECK(sys.cov()(y3, y3) == doctest::Approx(26.0).epsilon(1e-12));

  std::mt19937 rng(7);
  const auto draws = test_support::sample(sys, 10'000'000, rng);
  const auto col = draws.col(y3);
  const double mean = col.mean();
  const double var = (col.array() - mean).square().sum() / (draws.rows() - 1);
  CHECK(var == doctest::Approx(26.0).epsilon(0.01));
}

TEST_CASE("mutual_information: closed-form values") {
  const auto unit = build_system({{"X", 1.0}, {"Z", 1.0}, {"W", 3.0}},
                                 {StructuralEquation{"Y", {{1.0, "X"}, {1.0, "Z"}}}});
  CHECK(mutual_information(unit, {"X"}, {"Y"}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mutual_information(unit, {"X"}, {"W"}) == 0.0);

  const auto five = build_system({{"X", 5.0}, {"Z", 1.0}},
                                 {StructuralEquation{"Y", {{1.0, "X"}, {1.0, "Z"}}}});
  CHECK(std::abs(mutual_information(five, {"X"}, {"Y"}) - 0.5 * std::log2(6.0)) < 1e-12);
}

TEST_CASE("mutual_information: error paths") {
  const auto sys = build_system({{"X", 1.0}, {"Z", 1.0}},
                                {StructuralEquation{"Y", {{2.0, "X"}}}});
  CHECK_THROWS_AS((void)mutual_information(sys, {"X"}, {"X"}), std::invalid_argument);
  CHECK_THROWS_AS((void)mutual_information(sys, {"X"}, {"Q"}), std::invalid_argument);
  // Y = 2X deterministically: I(X;Y) is infinite.
  CHECK_THROWS_AS((void)mutual_information(sys, {"X"}, {"Y"}), DegenerateInputError);
}

TEST_CASE("rank-deficient layers evaluate to the correct limit") {
  // alpha = 0: U1 is a constant.
  auto zero_layer = build_system({{"U1", 0.0}, {"S1", 5.0}, {"Z", 1.0}, {"X2", 5.0}},
                                 {StructuralEquation{"X1", {{1.0, "U1"}, {1.0, "S1"}}},
                                  StructuralEquation{"Y", {{2.0, "X1"}, {1.0, "Z"}}}});
  CHECK(mutual_information(zero_layer, {"U1"}, {"Y"}, {"X2"}) == 0.0);

  // alpha = 1: X1 duplicates U1; conditioning on U1 determines X1.
  auto full_layer = build_system({{"U1", 5.0}, {"S1", 0.0}, {"Z", 1.0}},
                                 {StructuralEquation{"X1", {{1.0, "U1"}, {1.0, "S1"}}},
                                  StructuralEquation{"Y", {{2.0, "X1"}, {1.0, "Z"}}}});
  CHECK(mutual_information(full_layer, {"X1"}, {"Y"}, {"U1"}) == 0.0);
  // And the duplicated pair still carries the full information about Y.
  const double direct = mutual_information(full_layer, {"U1"}, {"Y"});
  const double via_pair = mutual_information(full_layer, {"U1", "X1"}, {"Y"});
  CHECK(std::abs(direct - via_pair) < 1e-9);
}

TEST_CASE("properties: nonnegativity, symmetry, chain rule on random systems") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> size_dist(3, 6);
  double worst_sym = 0.0, worst_chain = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size_dist(rng);
    const auto sys = test_support::random_system(rng, n);

    // Random disjoint nonempty sets A, B and a (possibly empty) condition C.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const int na = std::uniform_int_distribution<int>(1, n - 2)(rng);
    const int nb = std::uniform_int_distribution<int>(1, n - na - 1)(rng);
    const int nc = std::uniform_int_distribution<int>(0, n - na - nb)(rng);
    auto names_of = [&](int from, int count) {
      std::vector<std::string> out;
      for (int i = from; i < from + count; ++i) out.push_back(sys.names()[perm[i]]);
      return out;
    };
    const auto a = names_of(0, na);
    const auto b = names_of(na, nb);
    const auto c = names_of(na + nb, nc);

    const double iab = mutual_information(sys, a, b, c);
    const double iba = mutual_information(sys, b, a, c);
    CHECK(iab >= 0.0);
    worst_sym = std::max(worst_sym, std::abs(iab - iba));

    // Chain rule I(A,B;D|C') = I(A;D|C') + I(B;D|A,C') with D split off C.
    if (!c.empty()) {
      const std::vector<std::string> d = {c.front()};
      const std::vector<std::string> rest(c.begin() + 1, c.end());
      std::vector<std::string> ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      std::vector<std::string> a_rest = a;
      a_rest.insert(a_rest.end(), rest.begin(), rest.end());
      const double joint = mutual_information(sys, ab, d, rest);
      const double first = mutual_information(sys, a, d, rest);
      const double second = mutual_information(sys, b, d, a_rest);
      worst_chain = std::max(worst_chain, std::abs(joint - first - second));
    }
  }
  CHECK(worst_sym < 1e-9);
  CHECK(worst_chain < 1e-8);
}

TEST_CASE("data processing on structural chains") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_real_distribution<double> var(0.2, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sys = build_system(
        {{"X", var(rng)}, {"Z1", var(rng)}, {"Z2", var(rng)}},
        {StructuralEquation{"Y", {{coeff(rng), "X"}, {1.0, "Z1"}}},
         StructuralEquation{"W", {{coeff(rng), "Y"}, {1.0, "Z2"}}}});
    const double ixw = mutual_information(sys, {"X"}, {"W"});
    const double ixy = mutual_information(sys, {"X"}, {"Y"});
    CHECK(ixw <= ixy + 1e-9);
  }
}

TEST_CASE("Monte Carlo agreement on 4-variable systems") {
  std::mt19937 rng(2024);
  int tested = 0;
  while (tested < 5) {
    const auto sys = test_support::random_system(rng, 4, 1.0);
    const double analytic = mutual_information(sys, vars({"v0"}), vars({"v1"}));
    if (analytic > 2.0) continue;  // stay inside the estimator's useful range
    ++tested;
    const auto draws = test_support::sample(sys, 1'000'000, rng);
    std::vector<double> x(draws.rows()), y(draws.rows());
    for (Eigen::Index i = 0; i < draws.rows(); ++i) {
      x[i] = draws(i, 0);
      y[i] = draws(i, 1);
    }
    const double estimated = test_support::histogram_mi(x, y, 48);
    CHECK(std::abs(analytic - estimated) < 0.02);
  }
}

TEST_CASE("GaussianSystem: construction invariants") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.5, 0.4, 1.0;  // asymmetric
  CHECK_THROWS_AS(GaussianSystem({"a", "b"}, bad), std::invalid_argument);

  Eigen::MatrixXd indef(2, 2);
  indef << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS(GaussianSystem({"a", "b"}, indef), std::invalid_argument);

  Eigen::MatrixXd ok(2, 2);
  ok << 1.0, 0.5, 0.5, 1.0;
  CHECK_THROWS_AS(GaussianSystem({"a", "a"}, ok), std::invalid_argument);
}
