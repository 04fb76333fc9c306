#include <cmath>

#include "doctest.h"

#include "bergman/quadrature.hpp"

using namespace bergman;

namespace {
// Oracle: integral of z^n conj(z)^m dA = delta_{nm} / (n + 1).
Complex monomial_integral(const DiskQuadrature& q, int n, int m) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], n) * std::pow(std::conj(q.nodes[i]), m);
  return s;
}
}  // namespace

TEST_CASE("disk rule is exact on monomials in its range") {
  const DiskQuadrature q = build_rule(8, 17);
  CHECK(q.mass() == doctest::Approx(1.0).epsilon(1e-15));
  for (int n = 0; n <= 7; ++n) {
    for (int m = 0; m <= 7; ++m) {
      const Complex v = monomial_integral(q, n, m);
      const double want = n == m ? 1.0 / (n + 1) : 0.0;
      CHECK(std::abs(v - want) < 1e-14);
    }
  }
}

TEST_CASE("graded rule integrates a boundary singularity") {
  // integral of (1-|z|^2)^-1/2 dA = 2.
  const DiskQuadrature q = build_graded_rule(16, 20, 8);
  const double v = sum_rule([](Complex z) { return 1.0 / std::sqrt(1.0 - std::norm(z)); }, q);
  CHECK(v == doctest::Approx(2.0).epsilon(5e-4));
  const double coarse = sum_rule([](Complex z) { return 1.0 / std::sqrt(1.0 - std::norm(z)); }, build_graded_rule(16, 10, 8));
  CHECK(std::abs(v - 2.0) < std::abs(coarse - 2.0));
}

TEST_CASE("clipped rule integrates area and a linear function") {
  for (auto [c, s] : std::vector<std::pair<Complex, double>>{{0.9, 0.3}, {Complex(0, -1), 0.25}, {0.2, 0.4}}) {
    const DiskQuadrature q = clipped_disk_rule(c, s, 24, 48);
    CHECK(q.mass() == doctest::Approx(clipped_disk_area(c, s)).epsilon(1e-10));
  }
}

TEST_CASE("region refinement and integration") {
  const DiskQuadrature base = build_rule(16, 32);
  const PseudoDisk d = pseudo_disk(0.5, 0.25);
  CHECK(integrate_real([](Complex) { return 1.0; }, d, base) == doctest::Approx(d.area()).epsilon(1e-13));
  // Half-plane indicator: trapezoid angles avoid the axes, so the half count is exact.
  const IndicatorSet right{[](Complex z) { return z.real() > 0.0; }, "right"};
  CHECK(integrate_real([](Complex) { return 1.0; }, right, base) == doctest::Approx(0.5).epsilon(1e-14));
  const Region u = region_union({pseudo_disk(0.0, 0.5), Region(right)});
  CHECK(region_contains(u, Complex(-0.1, 0.0)));
  CHECK(!region_contains(u, Complex(-0.7, 0.0)));
  CHECK_THROWS_AS(region_area(right), ParameterError);
}

TEST_CASE("non-finite integrands are reported") {
  const DiskQuadrature q = build_rule(4, 8);
  CHECK_THROWS_AS(sum_rule([](Complex) { return std::nan(""); }, q), NumericalError);
  CHECK_THROWS_AS(build_rule(0, 8), ParameterError);
}
