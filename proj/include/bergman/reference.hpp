#pragma once

// Single-threaded reference versions of the hot loops. Tests compare the
// OpenMP kernels against these; the benchmark times both.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bergman/basis_space.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/weights.hpp"

namespace bergman::reference {

/// G[j,k] = sum_i w_i omega(z_i) m_k(z_i) conj(m_j(z_i)), plain loops.
Eigen::MatrixXcd gram_matrix(const TruncatedBasis& basis, const Weight& w, const DiskQuadrature& quad);

/// sum_i w_i f(z_i), left to right.
double integrate(const std::function<double(Complex)>& f, const DiskQuadrature& quad);

/// Berezin transform of a density-only measure at each z, same substitution
/// as the parallel version.
std::vector<double> berezin_grid(const SymbolMeasure& sm, const std::vector<Complex>& zs, const Weight& w,
                                 const DiskQuadrature& quad);

}  // namespace bergman::reference
