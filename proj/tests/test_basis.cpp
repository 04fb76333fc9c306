#include <cmath>
#include <omp.h>

#include "doctest.h"

#include "bergman/basis_space.hpp"
#include "bergman/reference.hpp"

using namespace bergman;

namespace {
// Oracle for omega = 1: K_z(l) = sum_{n<=N} (n+1) (conj(z) l)^n + sum_{1<=n<=N} (n+1) (z conj(l))^n.
Complex truncated_unweighted_kernel(int n, Complex z, Complex l) {
  Complex s = 0.0;
  for (int k = 0; k <= n; ++k) s += double(k + 1) * std::pow(std::conj(z) * l, k);
  for (int k = 1; k <= n; ++k) s += double(k + 1) * std::pow(z * std::conj(l), k);
  return s;
}
}  // namespace

TEST_CASE("unweighted Gram matrix is diagonal 1/(n+1)") {
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(6), Weight::standard_alpha(0.0), build_rule(16, 32)));
  for (int j = 0; j < gs.basis.dim(); ++j) {
    for (int k = 0; k < gs.basis.dim(); ++k) {
      const int deg = j <= 6 ? j : j - 6;
      const double want = j == k ? 1.0 / (deg + 1) : 0.0;
      CHECK(std::abs(gs.gram(j, k) - want) < 1e-14);
    }
  }
  CHECK(gs.residual < 1e-12);
  CHECK(gs.condition_number == doctest::Approx(7.0));
}

TEST_CASE("numeric kernel matches the closed form for omega = 1") {
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(10), Weight::standard_alpha(0.0), build_rule(24, 48)));
  for (auto [z, l] : std::vector<std::pair<Complex, Complex>>{{{0.3, 0.2}, {-0.5, 0.1}}, {0.0, 0.7}, {{0.1, -0.6}, {0.1, -0.6}}}) {
    CHECK(std::abs(numeric_kernel(gs, z, l) - truncated_unweighted_kernel(10, z, l)) < 1e-10);
  }
  CHECK(numeric_kernel_diagonal(gs, 0.5) == doctest::Approx(truncated_unweighted_kernel(10, 0.5, 0.5).real()).epsilon(1e-12));
}

TEST_CASE("reproducing property for a non-radial weight") {
  const DiskQuadrature q = build_rule(32, 64);
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(8), parse_weight_spec("poly:-0.9,1"), q));
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(gs.basis.dim());
  c(2) = 1.0;
  c(gs.basis.conjugate_index(3)) = Complex(0.5, -0.25);
  const HarmonicPoly f{gs.basis, c};
  for (Complex z : {Complex(0.2, 0.3), Complex(-0.7, 0.0)}) CHECK(reproducing_error(gs, f, z, q) < 1e-9);
}

TEST_CASE("Gram assembly matches the serial reference and is thread-count invariant") {
  const DiskQuadrature q = build_rule(20, 40);
  const Weight w = Weight::standard_alpha(0.5);
  const Eigen::MatrixXcd ref = reference::gram_matrix(TruncatedBasis(8), w, q);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Eigen::MatrixXcd one = gram_matrix(TruncatedBasis(8), w, q).gram;
  omp_set_num_threads(4);
  const Eigen::MatrixXcd four = gram_matrix(TruncatedBasis(8), w, q).gram;
  omp_set_num_threads(saved);
  CHECK((one - ref).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((one - four).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Gram preconditions") {
  CHECK_THROWS_AS(gram_matrix(TruncatedBasis(10), Weight::standard_alpha(0.0), build_rule(8, 64)), ParameterError);
  CHECK_THROWS_AS(gram_matrix(TruncatedBasis(10), Weight::standard_alpha(0.0), build_rule(32, 16)), ParameterError);
}

TEST_CASE("kernel diagonal times disk mass is comparable to one") {
  const DiskQuadrature q = build_rule(32, 64);
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(12), Weight::standard_alpha(0.0), q));
  const SchattenLemmaReport rep = schatten_lemma_check(gs, 0.25, {0.0, 0.3, Complex(0.0, 0.5)}, q);
  CHECK(rep.min_product > 0.0);
  CHECK(rep.band < 10.0);
  CHECK_THROWS_AS(schatten_lemma_check(gs, 0.25, {0.95}, q), ParameterError);
}

TEST_CASE("sub-mean-value inequality for |f|^2") {
  TruncatedBasis b(3);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(b.dim());
  c(1) = 1.0;
  c(b.conjugate_index(2)) = 2.0;
  const MeanValueResult m = mean_value_check({b, c}, Complex(0.2, 0.1), 0.3, 16, 32);
  CHECK(m.value_sq <= m.average + 1e-12);
}
