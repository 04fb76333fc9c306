#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"

#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

using namespace bergman;

TEST_CASE("standard weights have unit mass") {
  const DiskQuadrature q = build_graded_rule(16, 12, 8);
  for (double a : {-0.5, 0.0, 0.5, 1.0, 3.0}) {
    const Weight w = Weight::standard_alpha(a);
    // the a < 0 endpoint singularity converges slowly in the last panel
    CHECK(region_mass(w, WholeDisk{}, q) == doctest::Approx(1.0).epsilon(a < 0 ? 2e-3 : 1e-6));
    CHECK(w.is_radial());
  }
  CHECK_THROWS_AS(Weight::standard_alpha(-1.0), ParameterError);
}

TEST_CASE("weight specs parse and evaluate") {
  CHECK(parse_weight_spec("alpha:1")(0.5) == doctest::Approx(2.0 * 0.75));
  const Weight p = parse_weight_spec("poly:-0.9,1");
  CHECK(p(0.0) == doctest::Approx(0.81));
  CHECK(p(Complex(0.0, 0.5)) == doctest::Approx(0.81 + 0.25));
  REQUIRE(p.zeros().size() == 1);
  CHECK(std::abs(p.zeros()[0] - 0.9) < 1e-12);
  CHECK_THROWS_AS(p(0.9), DomainError);
  CHECK(parse_weight_spec("dsl:2*(1-r^2)")(0.5) == doctest::Approx(1.5));
  CHECK_THROWS_AS(parse_weight_spec("beta:1"), ParameterError);
  CHECK_THROWS_AS(parse_weight_spec("alpha:x"), ParameterError);
  CHECK_THROWS_AS(parse_weight_spec("dsl:x"), std::exception);  // not positive
}

TEST_CASE("grid weights interpolate") {
  const std::string path = "grid_weight_test.csv";
  {
    std::ofstream f(path);
    f << "r,theta,value\n";
    for (double r : {0.0, 0.5, 0.99}) {
      for (int j = 0; j < 4; ++j) f << r << "," << j * kPi / 2 << "," << 1.0 + r << "\n";
    }
  }
  const Weight w = parse_weight_spec("grid:" + path);
  CHECK(w(0.25) == doctest::Approx(1.25));
  CHECK(w(Complex(0.0, 0.5)) == doctest::Approx(1.5));
  std::remove(path.c_str());
  CHECK_THROWS_AS(parse_weight_spec("grid:/nonexistent.csv"), ParameterError);
}

TEST_CASE("A2 constant of the unweighted measure is one") {
  const A2Estimate e = a2_constant_estimate(Weight::standard_alpha(0.0), a2_family(0, true), 8, 16);
  CHECK(e.estimate == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("A2 refinement verdicts") {
  const A2Report good = a2_refinement(Weight::standard_alpha(0.5), 3);
  CHECK(good.verdict == "stable");
  CHECK(good.estimate() > 1.0);
  // |z - 1|^2 vanishes on the boundary to second order: not A2.
  const A2Report bad = a2_refinement(parse_weight_spec("poly:-1,1"), 4);
  CHECK(bad.verdict == "not A2 at tested scales");
}

TEST_CASE("doubling on the unweighted disk") {
  const auto pairs = doubling_pairs(0.125, 20, 0.9, 17);
  CHECK(pairs == doubling_pairs(0.125, 20, 0.9, 17));
  const DoublingReport rep = doubling_check(Weight::standard_alpha(0.0), 0.125, pairs, 1.0, build_rule(8, 16));
  CHECK(rep.all_below);
  // Oracle: exact ratio of Euclidean areas of the two pseudo-disks.
  for (const auto& p : rep.pairs) {
    CHECK(p.ratio == doctest::Approx(pseudo_disk(p.z, 0.125).area() / pseudo_disk(p.xi, 0.125).area()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(doubling_check(Weight::standard_alpha(0.0), 0.5, pairs, 1.0, build_rule(8, 16)), ParameterError);
}
