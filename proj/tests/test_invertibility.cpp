#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "bergman/acceptance.hpp"
#include "bergman/invertibility.hpp"

using namespace bergman;

TEST_CASE("analytic Toeplitz and Hankel matrices for simple symbols") {
  const DiskQuadrature q = build_rule(16, 32);
  const AnalyticSystem sys = analytic_system(0.0, 5, q);
  const Eigen::MatrixXcd t = analytic_toeplitz([](Complex z) { return Complex(std::norm(z)); }, sys);
  for (int n = 0; n <= 5; ++n) CHECK(t(n, n).real() == doctest::Approx((n + 1.0) / (n + 2.0)).epsilon(1e-13));
  // <U e_k, e_j> = integral of conj(z)^(j+k) ...: only the (0,0) entry survives.
  const Eigen::MatrixXcd h = hankel_matrix([](Complex) { return Complex(1.0); }, sys);
  CHECK(std::abs(h(0, 0) - 1.0) < 1e-14);
  CHECK(h.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
  // Shift: T_z e_n = sqrt((n+1)/(n+2)) e_{n+1}.
  const Eigen::MatrixXcd s = analytic_toeplitz([](Complex z) { return z; }, sys);
  for (int n = 0; n < 5; ++n) CHECK(std::abs(s(n + 1, n) - std::sqrt((n + 1.0) / (n + 2.0))) < 1e-13);
}

TEST_CASE("block identity for polynomial and non-polynomial weights") {
  const DiskQuadrature q = build_rule(24, 48);
  for (double a : {0.0, 0.5, 1.0}) {
    const BlockCheck z = block_identity_check([](Complex w) { return w; }, a, 6, q);
    CHECK(z.deviation < 1e-10);
    CHECK(z.c_block_max < 1e-12);
    CHECK(z.rank_one_max < 1e-12);
    const BlockCheck mixed = block_identity_check([](Complex w) { return w + 2.0 * std::conj(w); }, a, 6, q);
    CHECK(mixed.deviation < 1e-10);
    CHECK(mixed.c_block_max > 1e-3);
  }
}

TEST_CASE("shift singular values on the harmonic space") {
  // Oracle: T_z maps e_n -> sqrt((n+1)/(n+2)) e_{n+1} on the analytic half and
  // conj(e_n) -> sqrt(n/(n+1)) conj(e_{n-1}) on the conjugate half.
  const int n = 7;
  std::vector<double> want;
  for (int k = 0; k <= n; ++k) want.push_back(std::sqrt((k + 1.0) / (k + 2.0)));
  for (int k = 1; k <= n; ++k) want.push_back(std::sqrt(k / (k + 1.0)));
  std::sort(want.rbegin(), want.rend());
  const Eigen::VectorXd s = restricted_singular_values({0.0, 1.0}, 0.0, n, build_rule(24, 48));
  REQUIRE(s.size() == static_cast<Eigen::Index>(want.size()));
  for (std::size_t k = 0; k < want.size(); ++k) CHECK(s(static_cast<Eigen::Index>(k)) == doctest::Approx(want[k]).epsilon(1e-12));
  CHECK(s(s.size() - 1) == doctest::Approx(acceptance::kShiftSigmaOracle).epsilon(1e-12));
}

TEST_CASE("invertibility verdicts") {
  const DiskQuadrature q = build_rule(32, 64);
  const DiskQuadrature bq = build_rule(32, 96);
  const auto decay = invertibility_report([](Complex z) { return 1.0 - std::norm(z); }, 0.0, {6, 10, 14}, {0.1, 0.5}, q, bq);
  CHECK(decay.verdict == "not invertible");
  CHECK(decay.sigma_decay);
  CHECK(decay.consistent);
  const auto flat = invertibility_report([](Complex) { return 0.5; }, 0.0, {6, 10, 14}, {0.1, 0.3}, q, bq);
  CHECK(flat.verdict == "invertible");
  CHECK(flat.rows.back().sigma_min_harmonic == doctest::Approx(0.5));
  CHECK(flat.inf_berezin_harmonic == doctest::Approx(0.5));
  CHECK_THROWS_AS(invertibility_report([](Complex) { return 1.0; }, 0.0, {6}, {0.5}, q, bq), ParameterError);
}

TEST_CASE("analytic check: z is bounded below although it vanishes at 0") {
  const AnalyticInvertibilityReport rep = analytic_invertibility_check({0.0, 1.0}, 0.0, {4, 8, 12}, build_rule(32, 64));
  CHECK(rep.inf_modulus == 0.0);
  CHECK(rep.bounded_below);
  CHECK(rep.c0 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}
