#pragma once

// OpenMP kernels shared by every module. All reductions are partitioned into
// fixed-size chunks that do not depend on the thread count, and the chunk
// partials are combined in index order with compensated summation, so results
// are bit-identical for any BERGMAN_LAB_THREADS setting.

#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bergman/common.hpp"

namespace bergman::parallel {

inline constexpr std::size_t kChunk = 256;

/// Applies the BERGMAN_LAB_THREADS cap (if set) to the OpenMP runtime.
void apply_thread_cap_from_env();

int max_threads();

/// Neumaier-compensated accumulator.
template <typename T>
class KahanSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    compensate(x, t);
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  void compensate(T x, T t);
  T sum_{};
  T comp_{};
};

template <>
inline void KahanSum<double>::compensate(double x, double t) {
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
}

template <>
inline void KahanSum<Complex>::compensate(Complex x, Complex t) {
  auto part = [](double s, double xx, double tt) {
    return std::abs(s) >= std::abs(xx) ? (s - tt) + xx : (xx - tt) + s;
  };
  comp_ += Complex(part(sum_.real(), x.real(), t.real()),
                   part(sum_.imag(), x.imag(), t.imag()));
}

/// Holds the exception thrown at the lowest index inside a parallel loop so
/// it can be rethrown on the calling thread, independent of scheduling.
class FirstError {
 public:
  void record(std::size_t index) {
#pragma omp critical(bergman_first_error)
    {
      if (index < index_) {
        index_ = index;
        error_ = std::current_exception();
      }
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::size_t index_ = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error_;
};

/// Deterministic sum of term(i) for i in [0, n).
template <typename T, typename Term>
T reduce_sum(std::size_t n, Term&& term) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<T> partial(chunks, T{});
  FirstError error;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    try {
      KahanSum<T> acc;
      const std::size_t hi = std::min(n, lo + kChunk);
      for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
      partial[static_cast<std::size_t>(c)] = acc.value();
    } catch (...) {
      error.record(lo);
    }
  }
  error.rethrow();
  KahanSum<T> total;
  for (const T& p : partial) total.add(p);
  return total.value();
}

/// Runs body(i) for i in [0, n) across threads. Bodies must write disjoint
/// outputs. An exception from any body is rethrown after the loop (the one
/// with the lowest index wins).
template <typename Body>
void for_each_index(std::size_t n, Body&& body) {
  FirstError error;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      error.record(static_cast<std::size_t>(i));
    }
  }
  error.rethrow();
}

/// Weighted Hermitian product B^H diag(w) B, where B holds one basis row per
/// quadrature node. Entry (j, k) is sum_i w_i B(i,k) conj(B(i,j)).
Eigen::MatrixXcd weighted_gram(const Eigen::MatrixXcd& rows,
                               std::span<const double> weights);

/// General form with distinct left and right factors and complex node
/// weights: entry (j, k) is sum_i w_i right(i,k) conj(left(i,j)).
Eigen::MatrixXcd weighted_cross(const Eigen::MatrixXcd& left,
                                const Eigen::MatrixXcd& right,
                                std::span<const Complex> weights);

}  // namespace bergman::parallel
