#include "bergman/parallel.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace bergman {

std::string format_point(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", z.real(), z.imag());
  return buf;
}

namespace parallel {

void apply_thread_cap_from_env() {
  const char* env = std::getenv("BERGMAN_LAB_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  long cap = std::strtol(env, &end, 10);
  if (end == env || cap < 1) {
    throw ParameterError(std::string("BERGMAN_LAB_THREADS must be a positive integer, got '") +
                         env + "'");
  }
  omp_set_num_threads(static_cast<int>(cap));
}

int max_threads() { return omp_get_max_threads(); }

namespace {

template <typename WeightAt>
Eigen::MatrixXcd chunked_cross(const Eigen::MatrixXcd& left, const Eigen::MatrixXcd& right,
                               std::size_t n, WeightAt&& weight_at) {
  const Eigen::Index rows = left.cols();
  const Eigen::Index cols = right.cols();
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Eigen::MatrixXcd> partial(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    const auto len = static_cast<Eigen::Index>(hi - lo);
    Eigen::MatrixXcd scaled = right.middleRows(static_cast<Eigen::Index>(lo), len);
    for (Eigen::Index i = 0; i < len; ++i) {
      scaled.row(i) *= weight_at(lo + static_cast<std::size_t>(i));
    }
    partial[static_cast<std::size_t>(c)] =
        left.middleRows(static_cast<Eigen::Index>(lo), len).adjoint() * scaled;
  }
  std::vector<KahanSum<Complex>> acc(static_cast<std::size_t>(rows * cols));
  for (const auto& p : partial) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      for (Eigen::Index j = 0; j < rows; ++j) acc[static_cast<std::size_t>(k * rows + j)].add(p(j, k));
    }
  }
  Eigen::MatrixXcd total(rows, cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    for (Eigen::Index j = 0; j < rows; ++j) total(j, k) = acc[static_cast<std::size_t>(k * rows + j)].value();
  }
  return total;
}

}  // namespace

Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXcd& rows, std::span<const double> weights) {
  if (static_cast<std::size_t>(rows.rows()) != weights.size()) {
    throw ParameterError("weighted_gram: row count does not match weight count");
  }
  Eigen::MatrixXcd g = chunked_cross(rows, rows, weights.size(),
                                     [&](std::size_t i) { return Complex(weights[i], 0.0); });
  return 0.5 * (g + g.adjoint());
}

Eigen::MatrixXcd weighted_cross(const Eigen::MatrixXcd& left, const Eigen::MatrixXcd& right,
                                std::span<const Complex> weights) {
  if (left.rows() != right.rows() || static_cast<std::size_t>(left.rows()) != weights.size()) {
    throw ParameterError("weighted_cross: row counts do not match weight count");
  }
  return chunked_cross(left, right, weights.size(), [&](std::size_t i) { return weights[i]; });
}

}  // namespace parallel
}  // namespace bergman
