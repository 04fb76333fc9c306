#pragma once

// Truncated harmonic polynomial space, its weighted Gram matrix, the
// symmetric orthonormalizing transform, and the numeric reproducing kernel.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bergman/common.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// Monomials ordered [1, z, ..., z^N, conj(z), ..., conj(z)^N].
struct TruncatedBasis {
  int degree = 0;

  explicit TruncatedBasis(int n);
  int dim() const { return 2 * degree + 1; }
  /// Index of z^n (n >= 0) and of conj(z)^n (n >= 1).
  int analytic_index(int n) const { return n; }
  int conjugate_index(int n) const { return degree + n; }
  /// "1", "z^3", "zbar^2".
  std::string label(int k) const;

  /// Row of basis values at z.
  Eigen::RowVectorXcd eval(Complex z) const;
  /// One row per node.
  Eigen::MatrixXcd rows(const std::vector<Complex>& nodes) const;
};

/// f = sum_k c_k m_k in the monomial basis.
struct HarmonicPoly {
  TruncatedBasis basis{0};
  Eigen::VectorXcd coeffs;

  Complex operator()(Complex z) const;
};

struct GramSystem {
  Weight weight = Weight::standard_alpha(0.0);
  TruncatedBasis basis{0};
  Eigen::MatrixXcd gram;       ///< G[j,k] = <m_k, m_j> in L^2(omega)
  Eigen::MatrixXcd transform;  ///< Q = G^{-1/2}; empty until orthonormalized
  Eigen::VectorXd eigenvalues; ///< of G, ascending
  double condition_number = 0.0;
  double residual = 0.0;       ///< max |Q* G Q - I|

  bool orthonormal() const { return transform.size() > 0; }

  /// Orthonormal basis row e(z) = m(z) Q.
  Eigen::RowVectorXcd orthonormal_row(Complex z) const;
  /// <f, g> in L^2(omega) for coefficient vectors in the monomial basis.
  Complex inner(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const;
};

/// Weighted Gram matrix by quadrature. Requires at least 2N+2 radial nodes
/// and more than 2N angular nodes. Throws NumericalError with the smallest
/// eigenvalue if G is not positive definite after symmetrization.
GramSystem gram_matrix(const TruncatedBasis& basis, const Weight& w, const DiskQuadrature& quad);

/// Fills Q = V diag(d^-1/2) V* from the eigendecomposition G = V diag(d) V*.
/// Throws NumericalError when cond(G) > 1e12.
GramSystem orthonormalize(const GramSystem& gs);

/// Truncated K_z(l) = e(l) e(z)* = m(l) G^{-1} m(z)*.
Complex numeric_kernel(const GramSystem& gs, Complex z, Complex lambda);

/// K_z(z) = |e(z)|^2 > 0.
double numeric_kernel_diagonal(const GramSystem& gs, Complex z);

/// Coefficients of K_z in the monomial basis, G^{-1} m(z)*.
Eigen::VectorXcd kernel_coefficients(const GramSystem& gs, Complex z);

/// |<f, K_z> - f(z)| with the inner product taken by quadrature on the
/// given rule (independent of the Gram algebra).
double reproducing_error(const GramSystem& gs, const HarmonicPoly& f, Complex z, const DiskQuadrature& quad);

struct SchattenLemmaRow {
  Complex z;
  double kernel_diagonal = 0.0;
  double disk_mass = 0.0;
  double product = 0.0;
};

struct SchattenLemmaReport {
  double r = 0.0;
  std::vector<SchattenLemmaRow> rows;
  double min_product = 0.0;
  double max_product = 0.0;
  double band = 0.0;  ///< max / min
};

/// K_z(z) |D(z,r)|_omega over the grid; points with |z| > 1 - margin are
/// rejected with ParameterError.
SchattenLemmaReport schatten_lemma_check(const GramSystem& gs, double r, const std::vector<Complex>& z_grid,
                                         const DiskQuadrature& quad, double margin = 0.1);

struct MeanValueResult {
  double value_sq = 0.0;  ///< |f(a)|^2
  double average = 0.0;   ///< (1/|B|) integral over B(a,r) of |f|^2
};

/// Sub-mean-value comparison on an interior ball B(a,r).
MeanValueResult mean_value_check(const HarmonicPoly& f, Complex a, double r, int radial_order, int angular_count);

/// Long-format CSV: row,col,re,im.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m);

}  // namespace bergman
