#include <cmath>

#include "doctest.h"

#include "bergman/kernels.hpp"
#include "bergman/reference.hpp"
#include "bergman/toeplitz.hpp"

using namespace bergman;

namespace {
GramSystem unweighted(int n, const DiskQuadrature& q) {
  return orthonormalize(gram_matrix(TruncatedBasis(n), Weight::standard_alpha(0.0), q));
}
}  // namespace

TEST_CASE("T_{r^2} is diagonal (n+1)/(n+2) on both halves") {
  const DiskQuadrature q = build_rule(16, 32);
  const GramSystem gs = unweighted(3, q);
  const ToeplitzMatrix tm = assemble(SymbolMeasure::symbol([](Complex z) { return std::norm(z); }, "r^2"), gs, q);
  const double want[] = {1.0 / 2, 2.0 / 3, 3.0 / 4, 4.0 / 5, 2.0 / 3, 3.0 / 4, 4.0 / 5};
  for (int k = 0; k < 7; ++k) CHECK(tm.matrix(k, k).real() == doctest::Approx(want[k]).epsilon(1e-12));
  CHECK((tm.matrix - Eigen::MatrixXcd(tm.matrix.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-13);
  const Eigen::VectorXd s = singular_values(tm);
  for (Eigen::Index k = 1; k < s.size(); ++k) CHECK(s(k) <= s(k - 1));
  CHECK(s(0) == doctest::Approx(0.8));
}

TEST_CASE("Schatten norms") {
  Eigen::VectorXd s(3);
  s << 3.0, 4.0, 0.0;
  CHECK(schatten_norm(s, 2.0) == doctest::Approx(5.0));
  CHECK(schatten_norm(s, 1.0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(schatten_norm(s, 0.5), ParameterError);
}

TEST_CASE("point masses give rank-one pieces") {
  const DiskQuadrature q = build_rule(16, 32);
  const GramSystem gs = unweighted(4, q);
  const ToeplitzMatrix tm = assemble(SymbolMeasure::atomic({{Complex(0.3, 0.1), 2.0}}), gs, q);
  const Eigen::VectorXd s = singular_values(tm);
  // Oracle: the only nonzero eigenvalue is mass * K_N(a, a).
  CHECK(s(0) == doctest::Approx(2.0 * numeric_kernel_diagonal(gs, Complex(0.3, 0.1))).epsilon(1e-12));
  CHECK(s(1) < 1e-12);
}

TEST_CASE("trace identity") {
  const DiskQuadrature q = build_rule(32, 64);
  const GramSystem gs = unweighted(12, q);
  for (const auto& sm : {SymbolMeasure::weight_measure(), SymbolMeasure::atomic({{0.0, 1.0}, {0.5, 0.5}}),
                         SymbolMeasure::symbol([](Complex z) { return z.real() > 0 ? 1.0 : 0.0; }, "chi")}) {
    CHECK(trace_identity_check(sm, gs, q).holds);
  }
  // For d nu = dA the trace is the dimension.
  CHECK(trace_identity_check(SymbolMeasure::weight_measure(), gs, q).trace == doctest::Approx(25.0));
}

TEST_CASE("Berezin transform") {
  const DiskQuadrature q = build_rule(32, 64);
  const Weight w = Weight::standard_alpha(0.0);
  const SymbolMeasure one = SymbolMeasure::symbol([](Complex) { return 1.0; }, "1");
  for (Complex z : default_berezin_grid()) CHECK(berezin(one, z, w, q) == doctest::Approx(1.0).epsilon(1e-13));
  const SymbolMeasure r2 = SymbolMeasure::symbol([](Complex z) { return std::norm(z); }, "r2");
  const auto par = berezin_grid(r2, default_berezin_grid(), w, q);
  const auto ser = reference::berezin_grid(r2, default_berezin_grid(), w, q);
  for (std::size_t i = 0; i < par.size(); ++i) CHECK(par[i] == doctest::Approx(ser[i]).epsilon(1e-13));
  // Atom at the origin: |R_z(0)|^2 / ||R_z||^2 = 1 / (2/(1-|z|^2)^2 - 1).
  const SymbolMeasure d0 = SymbolMeasure::atomic({{0.0, 1.0}});
  CHECK(berezin(d0, 0.5, w, q) == doctest::Approx(1.0 / kernel_norm_alpha(0.0, 0.5)).epsilon(1e-8));
  // Standard-weight transforms of a constant.
  for (auto f : {BerezinFlavor::Harmonic, BerezinFlavor::Analytic}) {
    CHECK(berezin_alpha([](Complex) { return 3.0; }, 0.9, 1.0, f, q) == doctest::Approx(3.0).epsilon(1e-13));
  }
  // Analytic transform of |z|^2 at 0 with alpha = 0 is 1/2.
  CHECK(berezin_alpha([](Complex z) { return std::norm(z); }, 0.0, 0.0, BerezinFlavor::Analytic, q) == doctest::Approx(0.5));
}

TEST_CASE("disk measurer agrees with region integration") {
  const SymbolMeasure sm = SymbolMeasure::symbol([](Complex z) { return 1.0 + z.real(); }, "1+x");
  const Weight w = Weight::standard_alpha(1.0);
  const DiskMeasurer m(sm, w, 12, 24);
  const DiskQuadrature base = build_rule(12, 24);
  for (Complex a : {Complex(0.0), Complex(0.5, 0.2), Complex(-0.8, 0.1)}) {
    const auto got = m(a, 0.2);
    CHECK(got.nu == doctest::Approx(measure_of(sm, w, pseudo_disk(a, 0.2), base)).epsilon(1e-12));
    CHECK(got.omega == doctest::Approx(region_mass(w, pseudo_disk(a, 0.2), base)).epsilon(1e-12));
  }
}

TEST_CASE("boundedness report on the constant symbol") {
  const DiskQuadrature q = build_rule(32, 64);
  const GramSystem gs = unweighted(8, q);
  const SymbolMeasure one = SymbolMeasure::symbol([](Complex) { return 1.0; }, "1");
  const BoundednessReport rep =
      carleson_boundedness_report(one, gs, generate_lattice(0.05), q, unit_disk_rule(6, 12), default_berezin_grid());
  CHECK(rep.sigma_max == doctest::Approx(1.0));
  CHECK(rep.berezin_sup == doctest::Approx(1.0));
  CHECK(rep.carleson_sup == doctest::Approx(1.0));
  CHECK(rep.berezin_below_norm);
}
