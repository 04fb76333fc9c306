#include "bergman/reference.hpp"

#include "bergman/disk_geometry.hpp"
#include "bergman/kernels.hpp"

namespace bergman::reference {

Eigen::MatrixXcd gram_matrix(const TruncatedBasis& basis, const Weight& w, const DiskQuadrature& quad) {
  const int d = basis.dim();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const Eigen::RowVectorXcd m = basis.eval(quad.nodes[i]);
    const double lw = quad.weights[i] * w(quad.nodes[i]);
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) g(j, k) += lw * m(k) * std::conj(m(j));
    }
  }
  return g;
}

double integrate(const std::function<double(Complex)>& f, const DiskQuadrature& quad) {
  double s = 0.0;
  for (std::size_t i = 0; i < quad.size(); ++i) s += quad.weights[i] * f(quad.nodes[i]);
  return s;
}

std::vector<double> berezin_grid(const SymbolMeasure& sm, const std::vector<Complex>& zs, const Weight& w,
                                 const DiskQuadrature& quad) {
  if (!sm.has_density() || !sm.atoms.empty()) {
    throw ParameterError("reference::berezin_grid: density-only measures");
  }
  std::vector<double> out;
  for (Complex z : zs) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const Complex l = mobius(z, quad.nodes[i]);
      const double d = quad.weights[i] * w(l) * pullback_kernel_density(0.0, z, quad.nodes[i]);
      den += d;
      num += d * sm.density(l);
    }
    out.push_back(num / den);
  }
  return out;
}

}  // namespace bergman::reference
