#include <cmath>

#include "doctest.h"

#include "bergman/carleson.hpp"

using namespace bergman;

TEST_CASE("set specs") {
  CHECK(region_contains(parse_set_spec("halfplane:0"), Complex(0.1, 0.5)));
  CHECK(!region_contains(parse_set_spec("halfplane:0"), Complex(-0.1, 0.5)));
  CHECK(region_contains(parse_set_spec("halfplane:1.5707963267948966"), Complex(0.0, 0.3)));
  CHECK(region_contains(parse_set_spec("annulus:0.7,1"), 0.8));
  CHECK(!region_contains(parse_set_spec("complement:disk:0,0,0.1"), 0.05));
  CHECK(region_contains(parse_set_spec("union:disk:0,0,0.5;annulus:0.7,1"), 0.9));
  CHECK(!region_contains(parse_set_spec("union:disk:0,0,0.5;annulus:0.7,1"), 0.6));
  CHECK(region_contains(parse_set_spec("levelset:x+y,0.5"), Complex(0.4, 0.4)));
  CHECK_THROWS_AS(parse_set_spec("square:1"), ParameterError);
  CHECK_THROWS_AS(parse_set_spec("annulus:0.8,0.2"), ParameterError);
}

TEST_CASE("boundary and box densities") {
  const DensityReport all = boundary_density(WholeDisk{}, default_t_grid(), default_u_grid());
  CHECK(all.inf == doctest::Approx(1.0).epsilon(1e-10));
  // Ball around u = i is split evenly by the real axis only for Re > 0 sets along
  // the imaginary axis; at u = -1 the right half-plane is absent.
  const DensityReport half = boundary_density(parse_set_spec("halfplane:0"), {0.25}, {Complex(0, 1), -1.0});
  CHECK(half.sup == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(half.inf == 0.0);
  const DensityReport inner = box_density(parse_set_spec("disk:0,0,0.5"), 0.5, default_box_grid());
  CHECK(inner.inf == 0.0);
  CHECK(inner.sup == doctest::Approx(1.0));
}

TEST_CASE("Carleson sweep for the weight measure is identically one") {
  const DensityReport rep = carleson_ratio_sweep(SymbolMeasure::weight_measure(), Weight::standard_alpha(0.5), 0.125,
                                                 polar_grid({0.0, 0.5, 0.9}, 8));
  CHECK(rep.inf == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.sup == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(carleson_ratio_sweep(SymbolMeasure::weight_measure(), Weight::standard_alpha(0.0), 0.5, {0.0}),
                  ParameterError);
}

TEST_CASE("vanishing profile") {
  const Weight w = Weight::standard_alpha(0.0);
  const auto decay = SymbolMeasure::symbol([](Complex z) { return 1.0 - std::norm(z); }, "1-r^2");
  CHECK(vanishing_profile(decay, w, 0.125).vanishing);
  const auto flat = SymbolMeasure::symbol([](Complex) { return 1.0; }, "1");
  CHECK(vanishing_profile(flat, w, 0.125).verdict == "not vanishing");
}

TEST_CASE("random families are seeded") {
  const TruncatedBasis b(6);
  const auto a = random_harmonic_family(b, 3, 17);
  const auto c = random_harmonic_family(b, 3, 17);
  const auto d = random_harmonic_family(b, 3, 18);
  CHECK(a[2].coeffs == c[2].coeffs);
  CHECK(a[2].coeffs != d[2].coeffs);
}

TEST_CASE("frame bounds and atomic decomposition") {
  const DiskQuadrature q = build_rule(24, 48);
  const Weight w = Weight::standard_alpha(0.0);
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(8), w, q));
  const Lattice lat = generate_lattice(0.05);
  const auto masses = lattice_disk_masses(lat.points, w, 0.05, unit_disk_rule(6, 12));
  auto fam = random_harmonic_family(gs.basis, 10, 17);
  for (auto& k : kernel_bump_family(gs, 0.8, 4)) fam.push_back(k);
  const FrameBounds fb = frame_bounds(lat, masses, gs, fam);
  CHECK(fb.c1 > 0.0);
  CHECK(fb.ratio() < 100.0);
  CHECK(fb.per_function.size() == fam.size());
  for (auto flavor : {AtomFlavor::R, AtomFlavor::K}) {
    const Eigen::MatrixXcd atoms = atom_matrix(lat, masses, gs, flavor);
    const AtomicResult res = atomic_decompose(fam[0].coeffs, atoms, gs);
    CHECK(res.residual < 1e-8 * res.f_norm);
    CHECK(res.numerical_rank == gs.basis.dim());
  }
  TestFunction no_coeffs = dk_bump_family(0.0, 0.5, 1)[0];
  CHECK_THROWS_AS(frame_bounds(lat, masses, gs, {no_coeffs}), ParameterError);
}

TEST_CASE("reverse Carleson ratios") {
  const DiskQuadrature q = build_graded_rule(12, 6, 256);
  const auto fam = dk_bump_family(0.0, 0.9, 8);
  const Weight w = Weight::standard_alpha(0.0);
  CHECK(reverse_carleson_empirical(WholeDisk{}, w, fam, q).inf_ratio == doctest::Approx(1.0));
  CHECK(reverse_carleson_empirical(parse_set_spec("disk:0,0,0.5"), w, fam, q).inf_ratio < 0.05);
}
