#include "bergman/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bergman/kernels.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

SymbolMeasure SymbolMeasure::symbol(std::function<double(Complex)> phi, std::string label, bool nonnegative) {
  SymbolMeasure sm;
  sm.density = std::move(phi);
  sm.label = std::move(label);
  sm.nonnegative = nonnegative;
  return sm;
}

SymbolMeasure SymbolMeasure::weight_measure() {
  return symbol([](Complex) { return 1.0; }, "omega dA");
}

SymbolMeasure SymbolMeasure::atomic(std::vector<Atom> atoms, std::string label) {
  SymbolMeasure sm;
  sm.atoms = std::move(atoms);
  sm.label = std::move(label);
  validate(sm);
  return sm;
}

SymbolMeasure SymbolMeasure::zero() {
  SymbolMeasure sm;
  sm.label = "zero";
  return sm;
}

void validate(const SymbolMeasure& sm) {
  for (std::size_t i = 0; i < sm.atoms.size(); ++i) {
    const Atom& a = sm.atoms[i];
    if (!(std::abs(a.point) < 1.0)) {
      throw DomainError("measure: atom " + std::to_string(i) + " at " + format_point(a.point) +
                        " is not inside the disk");
    }
    if (!std::isfinite(a.mass) || (sm.nonnegative && a.mass < 0.0)) {
      throw ParameterError("measure: atom " + std::to_string(i) + " has an invalid mass");
    }
  }
}

std::vector<Atom> read_atoms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("atoms: cannot open " + path);
  std::vector<Atom> atoms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0, y = 0, m = 0;
    std::string extra;
    if (!(row >> x >> y >> m) || (row >> extra)) {
      throw ParameterError("atoms: malformed row " + std::to_string(line_no) + " in " + path);
    }
    atoms.push_back({Complex(x, y), m});
  }
  return atoms;
}

namespace {

std::vector<double> density_weights(const SymbolMeasure& sm, const Weight& w, const DiskQuadrature& quad) {
  std::vector<double> lw(quad.size(), 0.0);
  if (!sm.has_density()) return lw;
  parallel::for_each_index(quad.size(), [&](std::size_t i) {
    const double phi = sm.density(quad.nodes[i]);
    if (!std::isfinite(phi)) {
      throw NumericalError("measure '" + sm.label + "': density is not finite at node " + std::to_string(i) + " " +
                           format_point(quad.nodes[i]));
    }
    if (sm.nonnegative && phi < 0.0) {
      throw ParameterError("measure '" + sm.label + "' is flagged nonnegative but is " + std::to_string(phi) +
                           " at " + format_point(quad.nodes[i]));
    }
    lw[i] = quad.weights[i] * phi * w(quad.nodes[i]);
  });
  return lw;
}

}  // namespace

Eigen::MatrixXcd moment_matrix(const SymbolMeasure& sm, const GramSystem& gs, const DiskQuadrature& quad) {
  validate(sm);
  const int d = gs.basis.dim();
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(d, d);
  if (sm.has_density()) {
    const std::vector<double> lw = density_weights(sm, gs.weight, quad);
    n = parallel::weighted_gram(gs.basis.rows(quad.nodes), lw);
  }
  for (const Atom& a : sm.atoms) {
    const Eigen::RowVectorXcd m = gs.basis.eval(a.point);
    n.noalias() += a.mass * m.adjoint() * m;  // N[b,a] += mass m_a conj(m_b)
  }
  return n;
}

ToeplitzMatrix assemble(const SymbolMeasure& sm, const GramSystem& gs, const DiskQuadrature& quad) {
  if (!gs.orthonormal()) throw ParameterError("assemble: GramSystem is not orthonormalized");
  ToeplitzMatrix tm;
  tm.label = sm.label;
  tm.hermitian = true;
  const Eigen::MatrixXcd n = moment_matrix(sm, gs, quad);
  tm.matrix = gs.transform.adjoint() * n * gs.transform;
  tm.matrix = 0.5 * (tm.matrix + tm.matrix.adjoint()).eval();
  return tm;
}

ToeplitzMatrix assemble_complex(const std::function<Complex(Complex)>& phi, const GramSystem& gs,
                                const DiskQuadrature& quad, std::string label) {
  if (!gs.orthonormal()) throw ParameterError("assemble_complex: GramSystem is not orthonormalized");
  std::vector<Complex> lw(quad.size());
  parallel::for_each_index(quad.size(), [&](std::size_t i) {
    const Complex v = phi(quad.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalError("assemble_complex: symbol is not finite at " + format_point(quad.nodes[i]));
    }
    lw[i] = quad.weights[i] * gs.weight(quad.nodes[i]) * v;
  });
  const Eigen::MatrixXcd rows = gs.basis.rows(quad.nodes);
  ToeplitzMatrix tm;
  tm.label = std::move(label);
  tm.hermitian = false;
  tm.matrix = gs.transform.adjoint() * parallel::weighted_cross(rows, rows, lw) * gs.transform;
  return tm;
}

Eigen::VectorXd singular_values(const ToeplitzMatrix& tm) {
  Eigen::VectorXd s;
  if (tm.hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(tm.matrix, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericalError("singular_values: eigensolver did not converge");
    s = eig.eigenvalues().cwiseAbs();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(tm.matrix);
    if (svd.info() != Eigen::Success) throw NumericalError("singular_values: SVD did not converge");
    s = svd.singularValues();
  }
  std::sort(s.data(), s.data() + s.size(), std::greater<double>());
  return s;
}

double schatten_norm(const Eigen::VectorXd& sigma, double p) {
  if (!(p >= 1.0)) throw ParameterError("schatten_norm: p must be >= 1");
  if (sigma.size() == 0) return 0.0;
  const double top = sigma.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) acc += std::pow(std::abs(sigma(i)) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

double schatten_norm(const ToeplitzMatrix& tm, double p) { return schatten_norm(singular_values(tm), p); }

double berezin(const SymbolMeasure& sm, Complex z, const Weight& w, const DiskQuadrature& quad) {
  require_in_disk(z, "berezin");
  validate(sm);
  double num = 0.0;
  double den = 0.0;
  if (sm.has_density()) {
    // Both integrals share the substituted rule, so d nu = omega dA gives 1.
    std::vector<double> dens(quad.size());
    std::vector<double> phi(quad.size());
    parallel::for_each_index(quad.size(), [&](std::size_t i) {
      const Complex l = mobius(z, quad.nodes[i]);
      dens[i] = quad.weights[i] * w(l) * pullback_kernel_density(0.0, z, quad.nodes[i]);
      phi[i] = sm.density(l);
    });
    den = parallel::reduce_sum<double>(quad.size(), [&](std::size_t i) { return dens[i]; });
    num = parallel::reduce_sum<double>(quad.size(), [&](std::size_t i) { return dens[i] * phi[i]; });
  } else {
    den = harmonic_kernel_norm_sq(w, z, quad);
  }
  for (const Atom& a : sm.atoms) {
    const double r = harmonic_kernel(0.0, z, a.point);
    num += a.mass * r * r;
  }
  return num / den;
}

std::vector<double> berezin_grid(const SymbolMeasure& sm, const std::vector<Complex>& zs, const Weight& w,
                                 const DiskQuadrature& quad) {
  std::vector<double> out;
  out.reserve(zs.size());
  for (Complex z : zs) out.push_back(berezin(sm, z, w, quad));
  return out;
}

double berezin_alpha(const std::function<double(Complex)>& phi, Complex z, double alpha, BerezinFlavor flavor,
                     const DiskQuadrature& quad) {
  require_in_disk(z, "berezin_alpha");
  if (!(alpha > -1.0)) throw ParameterError("berezin_alpha: alpha must exceed -1");
  const double m = std::abs(z);
  const double a = std::pow((1.0 - m) * (1.0 + m), 2.0 + alpha);
  auto omega = [alpha](Complex w) {
    const double r = std::abs(w);
    return (1.0 + alpha) * std::pow((1.0 - r) * (1.0 + r), alpha);
  };
  // Normalize by the same rule so that phi >= c gives a transform >= c exactly.
  std::vector<double> dens(quad.size());
  std::vector<double> vals(quad.size());
  parallel::for_each_index(quad.size(), [&](std::size_t i) {
    const Complex w = quad.nodes[i];
    // |R^a_z|^2 omega_a dA / ||R^a_z||^2 = omega_a(w) |X + conj X - A|^2 / ((2 - A) |X|^2) dA(w)
    const double k = flavor == BerezinFlavor::Analytic ? 1.0 : pullback_kernel_density(alpha, z, w) * a / (2.0 - a);
    dens[i] = quad.weights[i] * omega(w) * k;
    vals[i] = phi(mobius(z, w));
  });
  const double num = parallel::reduce_sum<double>(quad.size(), [&](std::size_t i) { return dens[i] * vals[i]; });
  const double den = parallel::reduce_sum<double>(quad.size(), [&](std::size_t i) { return dens[i]; });
  if (!std::isfinite(num) || !(den > 0.0)) {
    throw NumericalError("berezin_alpha: non-finite transform at " + format_point(z));
  }
  return num / den;
}

DiskQuadrature unit_disk_rule(int radial_order, int angular_count) {
  return disk_rule(0.0, 1.0, radial_order, angular_count);
}

std::vector<double> lattice_disk_masses(const std::vector<Complex>& points, const Weight& w, double radius,
                                        const DiskQuadrature& unit) {
  std::vector<double> out(points.size());
  parallel::for_each_index(points.size(), [&](std::size_t n) {
    const PseudoDisk d = pseudo_disk(points[n], radius);
    parallel::KahanSum<double> acc;
    for (std::size_t i = 0; i < unit.size(); ++i) acc.add(unit.weights[i] * w(d.center_euc + d.radius_euc * unit.nodes[i]));
    out[n] = acc.value() * d.radius_euc * d.radius_euc;
  });
  return out;
}

DiskMeasurer::DiskMeasurer(const SymbolMeasure& sm, const Weight& w, int radial_order, int angular_count)
    : sm_(sm), w_(w), unit_(unit_disk_rule(radial_order, angular_count)) {
  validate(sm);
  for (const Atom& a : sm.atoms) atom_points_.push_back(a.point);
  if (atom_points_.size() > 64) atom_index_.emplace(atom_points_, 1.0 / 32.0);
}

DiskMeasurer::Masses DiskMeasurer::operator()(Complex a, double r) const {
  const PseudoDisk d = pseudo_disk(a, r);
  parallel::KahanSum<double> nu, om;
  for (std::size_t i = 0; i < unit_.size(); ++i) {
    const Complex z = d.center_euc + d.radius_euc * unit_.nodes[i];
    const double wz = unit_.weights[i] * w_(z);
    om.add(wz);
    if (sm_.has_density()) nu.add(wz * sm_.density(z));
  }
  const double scale = d.radius_euc * d.radius_euc;
  Masses out{nu.value() * scale, om.value() * scale};
  if (atom_index_) {
    for (std::size_t k : atom_index_->within(a, r)) out.nu += sm_.atoms[k].mass;
  } else {
    for (const Atom& at : sm_.atoms) {
      if (pseudo_distance(at.point, a) < r) out.nu += at.mass;
    }
  }
  return out;
}

double measure_of(const SymbolMeasure& sm, const Weight& w, const PseudoDisk& disk, const DiskQuadrature& quad) {
  validate(sm);
  double nu = 0.0;
  if (sm.has_density()) {
    nu = integrate_real([&](Complex z) { return sm.density(z) * w(z); }, disk, quad);
  }
  for (const Atom& a : sm.atoms) {
    if (disk.contains(a.point)) nu += a.mass;
  }
  return nu;
}

TraceIdentityReport trace_identity_check(const SymbolMeasure& sm, const GramSystem& gs, const DiskQuadrature& quad) {
  const ToeplitzMatrix tm = assemble(sm, gs, quad);
  TraceIdentityReport rep;
  rep.trace = tm.matrix.trace().real();
  double integral = 0.0;
  if (sm.has_density()) {
    const std::vector<double> lw = density_weights(sm, gs.weight, quad);
    integral = parallel::reduce_sum<double>(quad.size(), [&](std::size_t i) {
      return lw[i] == 0.0 ? 0.0 : lw[i] * numeric_kernel_diagonal(gs, quad.nodes[i]);
    });
  }
  for (const Atom& a : sm.atoms) integral += a.mass * numeric_kernel_diagonal(gs, a.point);
  rep.kernel_integral = integral;
  rep.difference = std::abs(rep.trace - rep.kernel_integral);
  rep.holds = rep.difference <= 1e-8 * (1.0 + std::abs(rep.trace));
  return rep;
}

LatticeSum lattice_schatten_sum(const SymbolMeasure& sm, const Lattice& lattice, const Weight& w, double p,
                                const DiskQuadrature& quad) {
  if (!(p >= 1.0)) throw ParameterError("lattice_schatten_sum: p must be >= 1");
  const DiskMeasurer measure(sm, w, quad.radial_order, quad.angular_count);
  const std::size_t n = lattice.points.size();
  std::vector<double> ratios(n);
  parallel::for_each_index(n, [&](std::size_t k) { ratios[k] = measure(lattice.points[k], lattice.epsilon).ratio(); });
  LatticeSum out;
  out.sum = parallel::reduce_sum<double>(n, [&](std::size_t k) { return std::pow(ratios[k], p); });
  for (double r : ratios) {
    out.max_term = std::max(out.max_term, r);
    out.nonzero_terms += r != 0.0;
  }
  return out;
}

std::vector<Complex> default_berezin_grid() {
  std::vector<Complex> g{0.0};
  for (double r : {0.3, 0.5, 0.7, 0.8, 0.9}) {
    for (int j = 0; j < 16; ++j) g.push_back(std::polar(r, 2.0 * kPi * j / 16.0));
  }
  return g;
}

BoundednessReport carleson_boundedness_report(const SymbolMeasure& sm, const GramSystem& gs, const Lattice& lattice,
                                              const DiskQuadrature& quad, const DiskQuadrature& small,
                                              const std::vector<Complex>& z_grid, double r, double tolerance) {
  BoundednessReport rep;
  rep.sigma_max = singular_values(assemble(sm, gs, quad))(0);
  for (double b : berezin_grid(sm, z_grid, gs.weight, quad)) rep.berezin_sup = std::max(rep.berezin_sup, b);
  const DiskMeasurer measure(sm, gs.weight, small.radial_order, small.angular_count);
  for (Complex z : z_grid) rep.carleson_sup = std::max(rep.carleson_sup, measure(z, r).ratio());
  rep.sampling_sup = lattice_schatten_sum(sm, lattice, gs.weight, 1.0, small).max_term;
  rep.slack = rep.berezin_sup - rep.sigma_max;
  rep.berezin_below_norm = rep.slack <= tolerance;
  return rep;
}

}  // namespace bergman
