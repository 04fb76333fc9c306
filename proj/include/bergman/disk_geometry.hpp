#pragma once

// Pseudohyperbolic geometry on the unit disk: the metric, its disks, Carleson
// boxes S(a,r), boundary balls, and finite epsilon-lattices.

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

#include "bergman/common.hpp"

namespace bergman {

/// rho(z, w) = |z - w| / |1 - conj(w) z|.
double pseudo_distance(Complex z, Complex w);

/// The disk automorphism phi_a(z) = (a - z) / (1 - conj(a) z). It is an
/// involution and an isometry of rho.
Complex mobius(Complex a, Complex z);

/// D(a, r) = { z : rho(z, a) < r }, stored with its Euclidean description.
struct PseudoDisk {
  Complex center_hyp;
  double radius_hyp = 0.0;
  Complex center_euc;
  double radius_euc = 0.0;

  bool contains(Complex z) const;
  /// Normalized area (radius_euc squared).
  double area() const { return radius_euc * radius_euc; }
};

PseudoDisk pseudo_disk(Complex a, double r);

/// S(a, r) = { z in D : |z - a| < r (1 - |a|) }.
struct CarlesonBox {
  Complex center;
  double ratio = 0.0;

  double radius_euc() const { return ratio * (1.0 - std::abs(center)); }
  bool contains(Complex z) const;
  double area() const { return radius_euc() * radius_euc(); }
};

CarlesonBox carleson_box(Complex a, double r);

/// K ∩ D with K = { |z - u| < t } and |u| = 1.
struct BoundaryBall {
  Complex boundary_point;
  double radius = 0.0;

  bool contains(Complex z) const;
  /// Normalized area of the lens D ∩ K.
  double area() const;
};

BoundaryBall boundary_ball(Complex u, double t);

/// Euclidean ball B(a, r) intersected with the disk.
struct MetricBall {
  Complex center;
  double radius = 0.0;

  bool contains(Complex z) const;
  double area() const;
};

MetricBall metric_ball(Complex a, double r);

/// Normalized area of { |z - c| < s } ∩ D for |c| <= 1.
double clipped_disk_area(Complex c, double s);

struct LatticeCertificate {
  double separation = 1.0;   ///< min_{n != m} rho(a_n, a_m); 1 for a single point
  double cover_defect = 0.0; ///< max over probes of min_n rho(probe, a_n)
  Complex worst_probe;       ///< probe point attaining cover_defect
  std::size_t probe_count = 0;
};

struct Lattice {
  double epsilon = 0.0;
  double cutoff = 0.0;
  std::vector<Complex> points;
  double separation = 1.0;
  double cover_defect = 0.0;

  /// True when pairwise separation >= eps/2 and cover_defect <= eps.
  bool is_certified() const;
};

struct LatticeOptions {
  double cutoff = 0.02;
  /// Polar probe grid is probe_grid x probe_grid.
  std::size_t probe_grid = 200;
};

/// Concentric rings at pseudohyperbolic spacing eps/2 with equally spaced
/// points (adjacent rho-distance <= eps), alternate rings staggered by half a
/// step. The origin is always the first point. Throws NumericalError naming
/// the worst probe if the cover certificate fails.
Lattice generate_lattice(double epsilon, const LatticeOptions& options = {});

/// Recomputes both certificate numbers from scratch on a polar probe grid of
/// probe_grid x probe_grid points with |z| <= 1 - lattice.cutoff.
LatticeCertificate verify_lattice(const Lattice& lattice, std::size_t probe_grid);

/// Spatial index for rho-neighbourhood queries over a point set. Bins are
/// uniform in artanh|z| and angle, scaled so one bin spans about `scale` in
/// rho.
class PointIndex {
 public:
  PointIndex(const std::vector<Complex>& points, double scale);

  /// Indices of points p with rho(z, p) < radius.
  std::vector<std::size_t> within(Complex z, double radius) const;

  /// Smallest rho(z, p) over indexed points, searched up to `radius`;
  /// returns radius when nothing closer exists.
  double nearest_distance(Complex z, double radius, Complex* nearest = nullptr) const;

 private:
  struct Shell {
    std::size_t angular_bins = 1;
    std::vector<std::vector<std::size_t>> bins;
  };
  std::size_t shell_of(double modulus) const;
  std::size_t angular_bin(const Shell& shell, double angle) const;

  std::vector<Complex> points_;
  double shell_width_;
  std::vector<Shell> shells_;
};

nlohmann::json to_json(const Lattice& lattice);
Lattice lattice_from_json(const nlohmann::json& j);

}  // namespace bergman
