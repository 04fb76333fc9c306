#pragma once

// Closed-form reproducing kernels of the unweighted and standard-weight
// Bergman spaces, pointwise bound sweeps, and normalized kernel bumps.

#include <string>
#include <vector>

#include "bergman/common.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

namespace bergman {

enum class KernelFlavor { HarmonicUnweighted, AnalyticUnweighted, HarmonicAlpha, AnalyticAlpha };

struct KernelFamily {
  KernelFlavor flavor = KernelFlavor::HarmonicUnweighted;
  double alpha = 0.0;  ///< used by the alpha flavors only
};

/// K^a_z(l) = (1 - conj(z) l)^-(2+a), principal branch (Re(1 - conj(z) l) > 0).
Complex analytic_kernel(double alpha, Complex z, Complex lambda);

/// R^a_z(l) = 2 Re K^a_z(l) - 1. Real and symmetric in (z, l).
double harmonic_kernel(double alpha, Complex z, Complex lambda);

/// Dispatch on the family; harmonic flavors return a real value. Throws
/// DomainError outside the disk.
Complex eval_kernel(const KernelFamily& family, Complex z, Complex lambda);

/// ||R^a_z||^2 in L^2(omega_a) = 2 / (1 - |z|^2)^(2+a) - 1.
double kernel_norm_alpha(double alpha, Complex z);

/// Direct quadrature of the integral of |R^a_z|^2 omega_a over the disk.
double kernel_norm_quadrature(double alpha, Complex z, const DiskQuadrature& quad);

/// Density of |R^a_z(l)|^2 omega_a(l) dA(l) after the substitution
/// l = phi_z(w), divided by omega_a(w):
///   |X + conj(X) - A|^2 / (A |X|^2),  X = (1 - conj(z) w)^(2+a),
///   A = (1 - |z|^2)^(2+a).
/// Smooth in w, which keeps near-boundary kernel integrals well resolved.
double pullback_kernel_density(double alpha, Complex z, Complex w);

/// ||R_z||^2 in L^2(omega) for a general weight, via the pull-back.
double harmonic_kernel_norm_sq(const Weight& w, Complex z, const DiskQuadrature& quad);

struct KernelBoundsReport {
  Complex lambda;
  double r = 0.0;
  std::size_t samples = 0;
  double min_scaled = 0.0;  ///< min over samples of |R_l(z)| (1 - |l|)^2
  double max_scaled = 0.0;
  double lower_margin = 0.0;  ///< min_scaled - 1/2
  double upper_margin = 0.0;  ///< 3 - max_scaled
  bool holds = false;
  /// Largest r on the ladder 1/4, 1/8, ..., 2^-12 at which both bounds hold
  /// on the same sample pattern; 0 if none.
  double empirical_r0 = 0.0;
};

/// Sunflower sample of `count` points in D(lambda, r), mapped from the disk
/// of radius r by phi_lambda.
std::vector<Complex> pseudo_disk_samples(Complex lambda, double r, std::size_t count);

/// Checks 1/2 <= |R_l(z)| (1 - |l|)^2 <= 3 on samples z in D(l, r), 0 < r <= 1/4.
KernelBoundsReport kernel_bounds_check(Complex lambda, double r, std::size_t sample_count);

/// Normalized kernel bump sqrt(1+a) R^a_{z0}(l) (1 - |z0|^2)^((2+a)/2) with
/// z0 = (1 - s t) u.
struct DkBump {
  double alpha = 0.0;
  Complex z0;

  double operator()(Complex lambda) const;
  /// Closed-form squared L^2(omega_a) norm: (1+a)(2 - (1-|z0|^2)^(2+a)).
  double norm_sq() const;
};

DkBump dk_test_function(double alpha, double t, double s, Complex u);

/// Integral of |f|^2 (1 - |l|)^a over the disk minus the lens D ∩ {|l - u| < t}.
double dk_mass_outside(const DkBump& f, Complex u, double t, const DiskQuadrature& whole,
                       int radial_order, int angular_count);

struct NormOfKernelRow {
  Complex lambda;
  double norm_sq = 0.0;    ///< ||R_l||^2 in L^2(omega)
  double disk_mass = 0.0;  ///< |D(l, r)|_omega
  double scaled = 0.0;     ///< norm_sq (1 - |l|)^4 / disk_mass
};

struct NormOfKernelReport {
  double r = 0.0;
  std::vector<NormOfKernelRow> rows;
  double min_scaled = 0.0;  ///< lower bound holds iff >= 1/2
  double max_scaled = 0.0;  ///< empirical upper constant
  bool lower_holds = false;
};

/// Two-sided comparison of ||R_l||^2 with |D(l,r)|_omega / (1 - |l|)^4.
NormOfKernelReport norm_of_kernel_check(const Weight& w, double r, const std::vector<Complex>& lambdas,
                                        const DiskQuadrature& quad);

}  // namespace bergman
