#include "bergman/basis_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "bergman/disk_geometry.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

TruncatedBasis::TruncatedBasis(int n) : degree(n) {
  if (n < 0) throw ParameterError("TruncatedBasis: degree must be nonnegative");
}

std::string TruncatedBasis::label(int k) const {
  if (k == 0) return "1";
  if (k <= degree) return k == 1 ? "z" : "z^" + std::to_string(k);
  const int n = k - degree;
  return n == 1 ? "zbar" : "zbar^" + std::to_string(n);
}

Eigen::RowVectorXcd TruncatedBasis::eval(Complex z) const {
  Eigen::RowVectorXcd row(dim());
  row(0) = 1.0;
  Complex p = 1.0;
  for (int n = 1; n <= degree; ++n) {
    p *= z;
    row(n) = p;
    row(degree + n) = std::conj(p);
  }
  return row;
}

Eigen::MatrixXcd TruncatedBasis::rows(const std::vector<Complex>& nodes) const {
  Eigen::MatrixXcd b(static_cast<Eigen::Index>(nodes.size()), dim());
  parallel::for_each_index(nodes.size(), [&](std::size_t i) { b.row(static_cast<Eigen::Index>(i)) = eval(nodes[i]); });
  return b;
}

Complex HarmonicPoly::operator()(Complex z) const { return (basis.eval(z) * coeffs)(0); }

Eigen::RowVectorXcd GramSystem::orthonormal_row(Complex z) const {
  if (!orthonormal()) throw ParameterError("GramSystem: not orthonormalized");
  return basis.eval(z) * transform;
}

Complex GramSystem::inner(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const {
  return g.dot(gram * f);  // g* G f
}

GramSystem gram_matrix(const TruncatedBasis& basis, const Weight& w, const DiskQuadrature& quad) {
  const int n = basis.degree;
  if (quad.radial_nodes() < 2 * n + 2) {
    throw ParameterError("gram_matrix: need at least " + std::to_string(2 * n + 2) + " radial nodes for N=" +
                         std::to_string(n) + " (have " + std::to_string(quad.radial_nodes()) + ")");
  }
  if (quad.angular_count <= 2 * n) {
    throw ParameterError("gram_matrix: need more than " + std::to_string(2 * n) + " angular nodes for N=" +
                         std::to_string(n));
  }
  std::vector<double> lw(quad.size());
  parallel::for_each_index(quad.size(), [&](std::size_t i) { lw[i] = quad.weights[i] * w(quad.nodes[i]); });
  GramSystem gs;
  gs.weight = w;
  gs.basis = basis;
  gs.gram = parallel::weighted_gram(basis.rows(quad.nodes), lw);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gs.gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("gram_matrix: eigensolver failed");
  gs.eigenvalues = eig.eigenvalues();
  if (!(gs.eigenvalues(0) > 0.0)) {
    throw NumericalError("gram_matrix: Gram matrix is not positive definite (smallest eigenvalue " +
                         std::to_string(gs.eigenvalues(0)) + "); weight too degenerate or quadrature too coarse");
  }
  gs.condition_number = gs.eigenvalues(gs.eigenvalues.size() - 1) / gs.eigenvalues(0);
  return gs;
}

GramSystem orthonormalize(const GramSystem& gs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gs.gram);
  if (eig.info() != Eigen::Success) throw NumericalError("orthonormalize: eigensolver failed");
  const Eigen::VectorXd& d = eig.eigenvalues();
  if (!(d(0) > 0.0)) {
    throw NumericalError("orthonormalize: Gram matrix is not positive definite (smallest eigenvalue " +
                         std::to_string(d(0)) + ")");
  }
  GramSystem out = gs;
  out.eigenvalues = d;
  out.condition_number = d(d.size() - 1) / d(0);
  if (out.condition_number > 1e12) {
    throw NumericalError("orthonormalize: condition number " + std::to_string(out.condition_number) +
                         " exceeds 1e12; use a smaller N or a finer quadrature");
  }
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  out.transform = v * d.cwiseSqrt().cwiseInverse().asDiagonal() * v.adjoint();
  const Eigen::MatrixXcd check = out.transform.adjoint() * gs.gram * out.transform;
  out.residual = (check - Eigen::MatrixXcd::Identity(check.rows(), check.cols())).cwiseAbs().maxCoeff();
  return out;
}

Complex numeric_kernel(const GramSystem& gs, Complex z, Complex lambda) {
  return gs.orthonormal_row(z).dot(gs.orthonormal_row(lambda));  // sum e_n(l) conj(e_n(z))
}

double numeric_kernel_diagonal(const GramSystem& gs, Complex z) { return gs.orthonormal_row(z).squaredNorm(); }

Eigen::VectorXcd kernel_coefficients(const GramSystem& gs, Complex z) {
  return gs.transform * gs.orthonormal_row(z).adjoint();
}

double reproducing_error(const GramSystem& gs, const HarmonicPoly& f, Complex z, const DiskQuadrature& quad) {
  const Eigen::VectorXcd k = kernel_coefficients(gs, z);
  const HarmonicPoly kz{gs.basis, k};
  const Complex ip = integrate([&](Complex l) { return f(l) * std::conj(kz(l)) * gs.weight(l); }, WholeDisk{}, quad);
  return std::abs(ip - f(z));
}

SchattenLemmaReport schatten_lemma_check(const GramSystem& gs, double r, const std::vector<Complex>& z_grid,
                                         const DiskQuadrature& quad, double margin) {
  if (!(r > 0.0 && r <= 0.25)) throw ParameterError("schatten_lemma_check: r must be in (0, 1/4]");
  if (z_grid.empty()) throw ParameterError("schatten_lemma_check: empty grid");
  SchattenLemmaReport rep;
  rep.r = r;
  for (Complex z : z_grid) {
    if (std::abs(z) > 1.0 - margin) {
      throw ParameterError("schatten_lemma_check: grid point " + format_point(z) + " is beyond the margin " +
                           std::to_string(margin));
    }
    SchattenLemmaRow row;
    row.z = z;
    row.kernel_diagonal = numeric_kernel_diagonal(gs, z);
    row.disk_mass = region_mass(gs.weight, pseudo_disk(z, r), quad);
    row.product = row.kernel_diagonal * row.disk_mass;
    rep.rows.push_back(row);
  }
  rep.min_product = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows) {
    rep.min_product = std::min(rep.min_product, row.product);
    rep.max_product = std::max(rep.max_product, row.product);
  }
  rep.band = rep.max_product / rep.min_product;
  return rep;
}

MeanValueResult mean_value_check(const HarmonicPoly& f, Complex a, double r, int radial_order, int angular_count) {
  if (!(r > 0.0) || std::abs(a) + r >= 1.0) throw ParameterError("mean_value_check: ball must lie inside the disk");
  const DiskQuadrature rule = disk_rule(a, r, radial_order, angular_count);
  MeanValueResult res;
  res.value_sq = std::norm(f(a));
  res.average = sum_rule([&](Complex z) { return std::norm(f(z)); }, rule) / (r * r);
  return res;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
  out.precision(17);
  out << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag() << '\n';
    }
  }
}

}  // namespace bergman
