#include <cmath>

#include "doctest.h"

#include "bergman/kernels.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

using namespace bergman;

TEST_CASE("analytic kernel reproduces polynomials") {
  const DiskQuadrature q = build_rule(24, 48);
  for (double a : {0.0, 1.0, 2.0}) {
    const Weight w = Weight::standard_alpha(a);
    const Complex z(0.3, -0.2);
    Complex s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const Complex l = q.nodes[i];
      s += q.weights[i] * w(l) * (l * l - 2.0 * l) * std::conj(analytic_kernel(a, z, l));
    }
    CHECK(std::abs(s - (z * z - 2.0 * z)) < 1e-12);
  }
}

TEST_CASE("harmonic kernel is real, symmetric and reproduces conj") {
  const Complex z(0.4, 0.1), l(-0.2, 0.6);
  CHECK(harmonic_kernel(0.5, z, l) == doctest::Approx(harmonic_kernel(0.5, l, z)).epsilon(1e-14));
  CHECK(harmonic_kernel(0.0, 0.0, l) == doctest::Approx(1.0));
  const DiskQuadrature q = build_rule(24, 48);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    s += q.weights[i] * std::conj(q.nodes[i]).real() * harmonic_kernel(0.0, z, q.nodes[i]);
  }
  CHECK(s == doctest::Approx(z.real()).epsilon(1e-12));
  CHECK_THROWS_AS(eval_kernel(KernelFamily{}, 1.0, 0.0), DomainError);
}

TEST_CASE("kernel norm closed form against quadrature") {
  const DiskQuadrature q = build_graded_rule(20, 10, 384);
  for (double a : {0.0, 0.5, 1.0}) {
    CHECK(kernel_norm_alpha(a, 0.0) == doctest::Approx(1.0));
    for (double m : {0.2, 0.6, 0.9}) {
      const Complex z = std::polar(m, 1.0);
      CHECK(kernel_norm_quadrature(a, z, q) == doctest::Approx(kernel_norm_alpha(a, z)).epsilon(1e-6));
    }
  }
}

TEST_CASE("pull-back density carries the kernel norm") {
  // integral of omega_a(w) density(w) dA = ||R^a_z||^2 / A... normalised form sums to 1.
  const DiskQuadrature q = build_graded_rule(16, 12, 512);
  for (double a : {0.0, 0.5}) {
    const Complex z = std::polar(0.95, 0.3);
    const double big_a = std::pow(1.0 - std::norm(z), 2.0 + a);
    const double s = sum_rule(
        [&](Complex w) {
          return (1.0 + a) * std::pow(1.0 - std::norm(w), a) * pullback_kernel_density(a, z, w) * big_a / (2.0 - big_a);
        },
        q);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
  }
  const double n2 = harmonic_kernel_norm_sq(Weight::standard_alpha(0.0), 0.7, q);
  CHECK(n2 == doctest::Approx(kernel_norm_alpha(0.0, 0.7)).epsilon(1e-8));
}

TEST_CASE("pointwise bounds: upper bound holds, lower bound needs small r") {
  const KernelBoundsReport center = kernel_bounds_check(0.0, 0.125, 200);
  CHECK(center.holds);
  const KernelBoundsReport edge = kernel_bounds_check(0.95, 0.125, 1000);
  CHECK(edge.max_scaled <= 3.0);
  CHECK(edge.empirical_r0 > 0.0);
  CHECK(edge.empirical_r0 <= 0.125);
  const auto pts = pseudo_disk_samples(0.5, 0.1, 300);
  CHECK(pts.size() == 300);
  for (Complex p : pts) CHECK(pseudo_distance(p, 0.5) < 0.1);
}

TEST_CASE("normalized bumps have the closed-form norm") {
  const DiskQuadrature q = build_graded_rule(16, 12, 256);
  for (double a : {0.0, 1.0}) {
    const DkBump b = dk_test_function(a, 0.25, 0.5, Complex(0.0, 1.0));
    const Weight w = Weight::standard_alpha(a);
    const double n2 = sum_rule([&](Complex l) { return b(l) * b(l) * w(l); }, q);
    CHECK(n2 == doctest::Approx(b.norm_sq()).epsilon(1e-7));
  }
}
