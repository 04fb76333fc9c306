#include <cmath>
#include <omp.h>
#include <stdexcept>

#include "doctest.h"

#include "bergman/parallel.hpp"

using namespace bergman;

TEST_CASE("reduce_sum is bit-identical across thread counts") {
  auto term = [](std::size_t i) { return std::sin(0.37 * double(i)) / (1.0 + double(i)); };
  const int saved = omp_get_max_threads();
  double first = 0.0;
  for (int t : {1, 2, 3, 8}) {
    omp_set_num_threads(t);
    const double s = parallel::reduce_sum<double>(100003, term);
    if (t == 1) first = s;
    CHECK(s == first);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("compensated sum beats naive summation") {
  // 1 + 1e-16 * 10^6: the naive loop loses every small term.
  const double s = parallel::reduce_sum<double>(1000001, [](std::size_t i) { return i == 0 ? 1.0 : 1e-16; });
  CHECK(s == doctest::Approx(1.0 + 1e-10).epsilon(1e-15));
}

TEST_CASE("exceptions inside parallel loops surface on the caller") {
  CHECK_THROWS_AS(parallel::for_each_index(1000,
                                           [](std::size_t i) {
                                             if (i == 500) throw std::runtime_error("boom");
                                           }),
                  std::runtime_error);
  CHECK_THROWS_AS(parallel::reduce_sum<double>(1000,
                                               [](std::size_t i) -> double {
                                                 if (i == 7) throw NumericalError("bad");
                                                 return 1.0;
                                               }),
                  NumericalError);
}

TEST_CASE("weighted products") {
  Eigen::MatrixXcd rows(3, 2);
  rows << 1.0, Complex(0, 1), 2.0, 1.0, 0.5, Complex(1, 1);
  const std::vector<double> w = {1.0, 0.5, 2.0};
  const Eigen::MatrixXcd g = parallel::weighted_gram(rows, w);
  const Eigen::MatrixXcd want = rows.adjoint() * Eigen::VectorXd::Map(w.data(), 3).asDiagonal() * rows;
  CHECK((g - want).cwiseAbs().maxCoeff() < 1e-15);
  const std::vector<Complex> cw = {Complex(1, 1), 2.0, Complex(0, -1)};
  const Eigen::MatrixXcd x = parallel::weighted_cross(rows, rows.conjugate(), cw);
  const Eigen::MatrixXcd xw = rows.adjoint() * Eigen::VectorXcd::Map(cw.data(), 3).asDiagonal() * rows.conjugate();
  CHECK((x - xw).cwiseAbs().maxCoeff() < 1e-15);
}
