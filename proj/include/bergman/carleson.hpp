#pragma once

// Carleson ratio sweeps, set densities on boundary balls and boxes, lattice
// frame bounds, atomic decomposition, and empirical reverse-Carleson ratios.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "bergman/basis_space.hpp"
#include "bergman/disk_geometry.hpp"
#include "bergman/kernels.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/weights.hpp"

namespace bergman {

struct DensityEntry {
  Complex point;       ///< z, u, or a depending on the family
  double scale = 0.0;  ///< |z|, t, or |a|
  double ratio = 0.0;
};

struct DensityReport {
  std::string family;
  std::vector<DensityEntry> entries;
  double inf = 0.0;
  double sup = 0.0;
  Complex argmin;
  /// (scale, inf over entries at that scale), in grid order.
  std::vector<std::pair<double, double>> trend_inf;
  /// (scale, sup over entries at that scale), in grid order.
  std::vector<std::pair<double, double>> trend_sup;
};

nlohmann::json to_json(const DensityReport& rep);

/// nu(D(z,r)) / |D(z,r)|_omega over the grid, 0 < r <= 1/4.
DensityReport carleson_ratio_sweep(const SymbolMeasure& sm, const Weight& w, double r,
                                   const std::vector<Complex>& z_grid, int radial_order = 8, int angular_count = 16);

/// `directions` rays at each radius of `radial_grid`.
std::vector<Complex> polar_grid(const std::vector<double>& radii, int directions);

struct VanishingProfile {
  std::vector<double> radii;
  std::vector<double> band_max;
  bool vanishing = false;
  std::string verdict;  ///< "vanishing at tested scales" or "not vanishing"
};

/// Band maxima of the Carleson ratio on 16 rays per radius. Vanishing iff
/// the last band max < tolerance * first band max.
VanishingProfile vanishing_profile(const SymbolMeasure& sm, const Weight& w, double r,
                                   const std::vector<double>& radial_grid = {0.0, 0.5, 0.8, 0.9, 0.95, 0.99},
                                   double tolerance = 0.1, int radial_order = 8, int angular_count = 16);

/// t = 2^-1 .. 2^-6.
std::vector<double> default_t_grid();
/// 64 equally spaced unit directions starting at 1.
std::vector<Complex> default_u_grid();

/// |G ∩ K| / |D ∩ K| over boundary balls K = {|z - u| < t}; the inf is the
/// empirical delta.
DensityReport boundary_density(const Region& g, const std::vector<double>& t_grid, const std::vector<Complex>& u_grid,
                               int radial_order = 24, int angular_count = 48);

/// Centers: origin plus 64 directions at |a| = 1 - 2^-k, k = 1..6.
std::vector<Complex> default_box_grid();

/// |G ∩ S(a,r)| / |S(a,r)| over the a-grid.
DensityReport box_density(const Region& g, double r, const std::vector<Complex>& a_grid, int radial_order = 24,
                          int angular_count = 48);

/// A test function with a label; values may be complex.
struct TestFunction {
  std::string label;
  std::function<Complex(Complex)> f;
  Eigen::VectorXcd coeffs;  ///< monomial coefficients when the function lies in a truncation; else empty
};

/// f = sum_k c_k m_k with c_k ~ CN(0,1) sqrt(k' + 1), k' the monomial degree.
std::vector<TestFunction> random_harmonic_family(const TruncatedBasis& basis, std::size_t count, std::uint64_t seed);

/// Truncated numeric kernels K_{z0} at z0 = modulus * u for `directions` u.
std::vector<TestFunction> kernel_bump_family(const GramSystem& gs, double modulus, int directions);

/// Closed-form normalized bumps of the standard weight alpha at z0 = modulus * u.
std::vector<TestFunction> dk_bump_family(double alpha, double modulus, int directions);

struct FrameBounds {
  double c1 = 0.0;
  double c2 = 0.0;
  double ratio() const { return c2 / c1; }
  std::size_t lattice_size = 0;
  std::vector<double> per_function;  ///< lattice sum / ||f||^2
};

/// Lattice sampling sums sum_n |f(a_n)|^2 masses[n] against ||f||^2_omega for
/// functions in the truncation of gs (coeffs required). Throws
/// ParameterError on a zero-norm member.
FrameBounds frame_bounds(const Lattice& lattice, const std::vector<double>& masses, const GramSystem& gs,
                         const std::vector<TestFunction>& family);

enum class AtomFlavor { R, K };

/// Coefficients of the atoms: R-atoms (1 - |a|^2)^2 |D(a,eps)|^-1/2 R_a,
/// truncated exactly to degree N; K-atoms K_a |D(a,eps)|^1/2.
Eigen::MatrixXcd atom_matrix(const Lattice& lattice, const std::vector<double>& masses, const GramSystem& gs,
                             AtomFlavor flavor);

struct AtomicResult {
  Eigen::VectorXcd coefficients;
  double residual = 0.0;        ///< ||f - sum c_n atom_n||_omega
  double coefficient_norm = 0.0;
  double f_norm = 0.0;
  int numerical_rank = 0;
  bool ridge_used = false;
};

/// Minimal-norm least squares in orthonormal coordinates. Throws
/// NumericalError with the numerical rank when the atoms do not span the
/// truncation; adds a 1e-12 ridge when the system is ill-conditioned.
AtomicResult atomic_decompose(const Eigen::VectorXcd& f_coeffs, const Eigen::MatrixXcd& atoms, const GramSystem& gs);

struct ReverseCarlesonResult {
  double inf_ratio = 0.0;
  std::string argmin;
  std::vector<double> ratios;
};

/// inf over the family of integral_G |f|^2 omega / integral_D |f|^2 omega by
/// node filtering on `quad`.
ReverseCarlesonResult reverse_carleson_empirical(const Region& g, const Weight& w, const std::vector<TestFunction>& family,
                                                 const DiskQuadrature& quad);

/// "halfplane:angle" | "annulus:r1,r2" | "disk:x,y,r" | "complement:<spec>" |
/// "union:<spec>;<spec>" | "levelset:<dsl>,<threshold>" | "all".
Region parse_set_spec(const std::string& spec);

}  // namespace bergman
