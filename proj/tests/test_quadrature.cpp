#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "kinetic/quadrature.hpp"
#include "oracles.hpp"

using kinetic::gauss_hermite_rule;
using kinetic::gauss_legendre_rule;
using kinetic::gauss_lobatto_rule;
using kinetic::tensor_rule_3d;

TEST_SUITE("quadrature") {

TEST_CASE("single-point rule is the weight's centroid") {
  const auto rule = gauss_hermite_rule(1);
  REQUIRE(rule.size() == 1);
  CHECK(rule.nodes[0] == 0.0);
  CHECK(rule.weights[0] == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
}

TEST_CASE("two-point rule has nodes +-1/sqrt(2) and equal weights") {
  const auto rule = gauss_hermite_rule(2);
  REQUIRE(rule.size() == 2);
  CHECK(std::abs(rule.nodes[0] + 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(rule.nodes[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(rule.weights[0] - 0.5 * std::sqrt(M_PI)) < 1e-15);
  CHECK(std::abs(rule.weights[1] - 0.5 * std::sqrt(M_PI)) < 1e-15);
  double second = 0.0;
  for (int i = 0; i < 2; ++i)
    second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
  CHECK(std::abs(second - 0.5 * std::sqrt(M_PI)) < 1e-14);
}

TEST_CASE("monomial exactness up to degree 2n-1 for orders up to 21 points") {
  for (int n = 1; n <= 21; ++n) {
    const auto rule = gauss_hermite_rule(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double quad = 0.0;
      double abs_sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double term = rule.weights[i] * std::pow(rule.nodes[i], k);
        quad += term;
        abs_sum += std::abs(term);
      }
      const double exact = oracle::hermite_monomial_integral(k);
      const double scale = std::max(std::abs(exact), std::max(abs_sum, 1.0));
      CHECK_MESSAGE(std::abs(quad - exact) <= 1e-12 * scale,
                    "n=", n, " k=", k, " quad=", quad, " exact=", exact);
    }
  }
}

TEST_CASE("nodes are symmetric, distinct and weights positive") {
  for (int n : {1, 2, 3, 5, 10, 16, 21}) {
    const auto rule = gauss_hermite_rule(n);
    for (int i = 0; i < n; ++i) {
      CHECK(rule.weights[i] > 0.0);
      CHECK(rule.nodes[i] == -rule.nodes[n - 1 - i]);  // exact by construction
      CHECK(rule.weights[i] == rule.weights[n - 1 - i]);
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
  }
}

TEST_CASE("invalid point counts are rejected") {
  CHECK_THROWS_AS(gauss_hermite_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_hermite_rule(-3), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre_rule(0), std::invalid_argument);
}

TEST_CASE("gauss-legendre rule integrates polynomials on [-1,1]") {
  const auto rule = gauss_legendre_rule(3);
  double w = 0.0, x2 = 0.0, x4 = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    w += rule.weights[i];
    x2 += rule.weights[i] * std::pow(rule.nodes[i], 2);
    x4 += rule.weights[i] * std::pow(rule.nodes[i], 4);
  }
  CHECK(std::abs(w - 2.0) < 1e-14);
  CHECK(std::abs(x2 - 2.0 / 3.0) < 1e-14);
  CHECK(std::abs(x4 - 2.0 / 5.0) < 1e-14);  // degree 4 <= 2*3-1
}

TEST_CASE("tensor rule: trivial order") {
  const auto t = tensor_rule_3d(gauss_hermite_rule(1));
  REQUIRE(t.size() == 1);
  CHECK(t.nodes[0][0] == 0.0);
  CHECK(t.nodes[0][1] == 0.0);
  CHECK(t.nodes[0][2] == 0.0);
  CHECK(std::abs(t.weights[0] - std::pow(M_PI, 1.5)) < 1e-14);
}

TEST_CASE("tensor rule: lexicographic index layout") {
  const auto t = tensor_rule_3d(gauss_hermite_rule(2));
  CHECK(t.index(1, 0, 1) == 5);
  const auto r = gauss_hermite_rule(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const int ip = t.index(i, j, k);
        CHECK(t.nodes[ip][0] == r.nodes[i]);
        CHECK(t.nodes[ip][1] == r.nodes[j]);
        CHECK(t.nodes[ip][2] == r.nodes[k]);
      }
}

TEST_CASE("gauss-lobatto: small rules have the textbook nodes and weights") {
  const auto two = gauss_lobatto_rule(2);
  REQUIRE(two.size() == 2);
  CHECK(two.nodes[0] == -1.0);
  CHECK(two.nodes[1] == 1.0);
  CHECK(two.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(two.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

  const auto three = gauss_lobatto_rule(3);
  CHECK(three.nodes[1] == 0.0);
  CHECK(three.weights[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(three.weights[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  const auto five = gauss_lobatto_rule(5);
  CHECK(five.nodes[0] == -1.0);
  CHECK(five.nodes[1] ==
        doctest::Approx(-std::sqrt(3.0 / 7.0)).epsilon(1e-14));
  CHECK(five.nodes[2] == 0.0);
  CHECK(five.weights[0] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(five.weights[1] == doctest::Approx(49.0 / 90.0).epsilon(1e-14));
  CHECK(five.weights[2] == doctest::Approx(32.0 / 45.0).epsilon(1e-14));

  CHECK_THROWS_AS(gauss_lobatto_rule(1), std::invalid_argument);
}

TEST_CASE("gauss-lobatto: endpoints, symmetry and monomial exactness") {
  for (int n = 2; n <= 10; ++n) {
    const auto rule = gauss_lobatto_rule(n);
    CHECK(rule.nodes.front() == -1.0);
    CHECK(rule.nodes.back() == 1.0);
    for (int i = 0; i < n; ++i) {
      CHECK(rule.nodes[i] == -rule.nodes[n - 1 - i]);
      CHECK(rule.weights[i] == rule.weights[n - 1 - i]);
      CHECK(rule.weights[i] > 0.0);
    }
    for (int k = 0; k <= 2 * n - 3; ++k) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        sum += rule.weights[i] * std::pow(rule.nodes[i], k);
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("tensor rule: total weight and isotropic second moment") {
  for (int n : {1, 3, 6, 10}) {
    const auto t = tensor_rule_3d(gauss_hermite_rule(n));
    double w = 0.0, vv = 0.0;
    for (int ip = 0; ip < t.size(); ++ip) {
      w += t.weights[ip];
      const auto& x = t.nodes[ip];
      vv += t.weights[ip] * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    }
    const double pi32 = std::pow(M_PI, 1.5);
    CHECK(std::abs(w - pi32) <= 1e-12 * pi32);
    if (n >= 2)
      CHECK(std::abs(vv - 1.5 * pi32) <= 1e-12 * pi32);
  }
}

}  // TEST_SUITE
