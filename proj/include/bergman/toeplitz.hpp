#pragma once

// Truncated Toeplitz matrices of measures and symbols on the harmonic space,
// Berezin transforms, singular values, Schatten norms, and lattice sums.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bergman/basis_space.hpp"
#include "bergman/disk_geometry.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

namespace bergman {

struct Atom {
  Complex point;
  double mass = 0.0;
};

/// d nu = phi omega dA + sum_i m_i delta_{p_i}. Either part may be absent.
struct SymbolMeasure {
  std::function<double(Complex)> density;  ///< phi; empty means no density part
  std::vector<Atom> atoms;
  bool nonnegative = true;
  std::string label;

  bool has_density() const { return static_cast<bool>(density); }

  static SymbolMeasure symbol(std::function<double(Complex)> phi, std::string label, bool nonnegative = true);
  /// d nu = omega dA.
  static SymbolMeasure weight_measure();
  static SymbolMeasure atomic(std::vector<Atom> atoms, std::string label = "atoms");
  static SymbolMeasure zero();
};

/// Validates atoms (inside the disk, nonnegative masses when flagged).
void validate(const SymbolMeasure& sm);

/// Atoms file: one "x,y,mass" row per atom; '#' comments allowed.
std::vector<Atom> read_atoms(const std::string& path);

struct ToeplitzMatrix {
  Eigen::MatrixXcd matrix;  ///< M[j,k] = integral of e_k conj(e_j) d nu
  bool hermitian = true;    ///< true when built from a real measure
  std::string label;
};

/// Orthonormal-basis matrix of T_nu on the truncation carried by gs.
ToeplitzMatrix assemble(const SymbolMeasure& sm, const GramSystem& gs, const DiskQuadrature& quad);

/// Matrix of T_phi for a complex symbol, M = Q* N Q with
/// N[b,a] = integral of phi m_a conj(m_b) omega dA.
ToeplitzMatrix assemble_complex(const std::function<Complex(Complex)>& phi, const GramSystem& gs,
                                const DiskQuadrature& quad, std::string label = "");

/// Monomial-basis moment matrix N[b,a] = integral of m_a conj(m_b) d nu.
Eigen::MatrixXcd moment_matrix(const SymbolMeasure& sm, const GramSystem& gs, const DiskQuadrature& quad);

/// Descending singular values (Hermitian eigenvalues in modulus when
/// tm.hermitian, general SVD otherwise).
Eigen::VectorXd singular_values(const ToeplitzMatrix& tm);

/// (sum sigma_i^p)^(1/p), p >= 1.
double schatten_norm(const Eigen::VectorXd& sigma, double p);
double schatten_norm(const ToeplitzMatrix& tm, double p);

/// Unweighted-kernel Berezin transform
///   nu~(z) = (1/||R_z||^2_omega) integral |R_z|^2 d nu,
/// with the density part integrated after the substitution l = phi_z(w) on
/// the given rule.
double berezin(const SymbolMeasure& sm, Complex z, const Weight& w, const DiskQuadrature& quad);

std::vector<double> berezin_grid(const SymbolMeasure& sm, const std::vector<Complex>& zs, const Weight& w,
                                 const DiskQuadrature& quad);

enum class BerezinFlavor { Harmonic, Analytic };

/// Standard-weight transforms: harmonic uses |R^a_z|^2 / ||R^a_z||^2,
/// analytic uses |K^a_z|^2 / ||K^a_z||^2, both against omega_a dA.
double berezin_alpha(const std::function<double(Complex)>& phi, Complex z, double alpha, BerezinFlavor flavor,
                     const DiskQuadrature& quad);

/// nu(E) for a pseudo-disk E: density part by a rule refined to E, plus atoms
/// inside E.
double measure_of(const SymbolMeasure& sm, const Weight& w, const PseudoDisk& disk, const DiskQuadrature& quad);

struct TraceIdentityReport {
  double trace = 0.0;
  double kernel_integral = 0.0;  ///< integral of K_z(z) d nu with the truncated kernel
  double difference = 0.0;
  bool holds = false;  ///< difference <= 1e-8 (1 + trace)
};

TraceIdentityReport trace_identity_check(const SymbolMeasure& sm, const GramSystem& gs, const DiskQuadrature& quad);

struct LatticeSum {
  double sum = 0.0;
  double max_term = 0.0;  ///< best sampling constant when p = 1
  std::size_t nonzero_terms = 0;
};

/// sum_n (nu(D(a_n, eps)) / |D(a_n, eps)|_omega)^p over the lattice. Disk
/// integrals use a disk rule with the orders of `quad`.
LatticeSum lattice_schatten_sum(const SymbolMeasure& sm, const Lattice& lattice, const Weight& w, double p,
                                const DiskQuadrature& quad);

/// Unit-disk rule of the given orders, for repeated affine copies.
DiskQuadrature unit_disk_rule(int radial_order, int angular_count);

/// |D(a_n, radius)|_omega for every lattice point, each disk integrated with
/// an affine copy of `unit`.
std::vector<double> lattice_disk_masses(const std::vector<Complex>& points, const Weight& w, double radius,
                                        const DiskQuadrature& unit);

/// Evaluates nu(D(a,r)) and |D(a,r)|_omega together for many disks, with an
/// affine copy of one unit-disk rule per disk and an index over the atoms.
class DiskMeasurer {
 public:
  DiskMeasurer(const SymbolMeasure& sm, const Weight& w, int radial_order, int angular_count);

  struct Masses {
    double nu = 0.0;
    double omega = 0.0;
    double ratio() const { return nu / omega; }
  };
  Masses operator()(Complex a, double r) const;

 private:
  const SymbolMeasure& sm_;
  const Weight& w_;
  DiskQuadrature unit_;
  std::vector<Complex> atom_points_;
  std::optional<PointIndex> atom_index_;
};

/// 16 rays x radii {0, 0.3, 0.5, 0.7, 0.8, 0.9} (origin once).
std::vector<Complex> default_berezin_grid();

struct BoundednessReport {
  double sigma_max = 0.0;
  double berezin_sup = 0.0;
  double carleson_sup = 0.0;   ///< sup over the grid of nu(D(z,r)) / |D(z,r)|_omega
  double sampling_sup = 0.0;   ///< max over the lattice of nu(D(a_n,eps)) / |D(a_n,eps)|_omega
  double slack = 0.0;          ///< berezin_sup - sigma_max
  bool berezin_below_norm = false;  ///< slack <= tolerance
};

/// The four boundedness indicators on one truncation. `quad` is the
/// assembly rule; `small` sets the orders used for disk integrals.
BoundednessReport carleson_boundedness_report(const SymbolMeasure& sm, const GramSystem& gs, const Lattice& lattice,
                                              const DiskQuadrature& quad, const DiskQuadrature& small,
                                              const std::vector<Complex>& z_grid, double r = 0.125,
                                              double tolerance = 0.05);

}  // namespace bergman
