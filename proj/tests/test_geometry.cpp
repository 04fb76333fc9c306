#include <cmath>
#include <random>

#include "doctest.h"

#include "bergman/disk_geometry.hpp"

using namespace bergman;

namespace {
std::vector<Complex> random_points(std::size_t n, double rmax, unsigned seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::polar(rmax * std::sqrt(u(g)), 2.0 * kPi * u(g)));
  return out;
}
}  // namespace

TEST_CASE("mobius is an involution and swaps a and 0") {
  for (Complex a : random_points(50, 0.95, 1)) {
    CHECK(std::abs(mobius(a, 0.0) - a) < 1e-15);
    CHECK(std::abs(mobius(a, a)) < 1e-15);
    for (Complex z : random_points(5, 0.99, 2)) CHECK(std::abs(mobius(a, mobius(a, z)) - z) < 1e-12);
  }
}

TEST_CASE("pseudo distance is invariant under automorphisms") {
  const auto pts = random_points(40, 0.97, 3);
  for (std::size_t i = 0; i + 2 < pts.size(); i += 3) {
    const Complex a = pts[i], z = pts[i + 1], w = pts[i + 2];
    CHECK(pseudo_distance(mobius(a, z), mobius(a, w)) == doctest::Approx(pseudo_distance(z, w)).epsilon(1e-12));
    CHECK(pseudo_distance(z, w) == doctest::Approx(pseudo_distance(w, z)).epsilon(1e-14));
    CHECK(pseudo_distance(z, w) < 1.0);
  }
}

TEST_CASE("pseudo disk Euclidean description matches membership") {
  for (Complex a : random_points(30, 0.9, 4)) {
    const double r = 0.2;
    const PseudoDisk d = pseudo_disk(a, r);
    // Boundary points of the Euclidean circle lie at rho = r.
    for (int j = 0; j < 12; ++j) {
      const Complex b = d.center_euc + std::polar(d.radius_euc, 2.0 * kPi * j / 12);
      CHECK(pseudo_distance(b, a) == doctest::Approx(r).epsilon(1e-10));
    }
    CHECK(d.contains(a));
  }
  // a = 0: the disk is |z| < r.
  const PseudoDisk z0 = pseudo_disk(0.0, 0.3);
  CHECK(std::abs(z0.center_euc) == 0.0);
  CHECK(z0.radius_euc == doctest::Approx(0.3));
}

TEST_CASE("geometry rejects bad arguments") {
  CHECK_THROWS_AS(pseudo_disk(1.0, 0.1), DomainError);
  CHECK_THROWS_AS(pseudo_disk(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(pseudo_disk(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(generate_lattice(0.1), DomainError);
}

TEST_CASE("clipped disk area against a Monte Carlo-free grid count") {
  // Oracle: midpoint grid count on a fine Cartesian grid.
  auto grid_area = [](Complex c, double s) {
    const int n = 1500;
    long hits = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Complex z(-1.0 + 2.0 * (i + 0.5) / n, -1.0 + 2.0 * (j + 0.5) / n);
        if (std::abs(z) < 1.0 && std::abs(z - c) < s) ++hits;
      }
    }
    return 4.0 * hits / (double(n) * n) / kPi;
  };
  for (auto [c, s] : std::vector<std::pair<Complex, double>>{{1.0, 0.5}, {Complex(0, 0.9), 0.3}, {0.0, 0.5}}) {
    CHECK(clipped_disk_area(c, s) == doctest::Approx(grid_area(c, s)).epsilon(2e-3));
  }
  // Half-disk limit: a tiny ball centred on the circle is half inside.
  CHECK(clipped_disk_area(1.0, 1e-3) / (1e-6) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("lattice is certified and round-trips through JSON") {
  const Lattice lat = generate_lattice(0.05);
  CHECK(lat.is_certified());
  CHECK(lat.points.front() == Complex(0.0));
  CHECK(lat.separation >= 0.025);
  const LatticeCertificate cert = verify_lattice(lat, 150);
  CHECK(cert.cover_defect <= 0.05);
  const Lattice back = lattice_from_json(to_json(lat));
  REQUIRE(back.points.size() == lat.points.size());
  for (std::size_t i = 0; i < lat.points.size(); i += 97) CHECK(back.points[i] == lat.points[i]);
  CHECK(back.epsilon == lat.epsilon);
}

TEST_CASE("point index agrees with brute force") {
  const auto pts = random_points(3000, 0.99, 5);
  const PointIndex idx(pts, 0.1);
  for (Complex z : random_points(40, 0.99, 6)) {
    std::vector<std::size_t> brute;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pseudo_distance(z, pts[i]) < 0.15) brute.push_back(i);
    }
    auto got = idx.within(z, 0.15);
    std::sort(got.begin(), got.end());
    CHECK(got == brute);
  }
}
