#pragma once

// Product rules for the normalized area measure dA = dx dy / pi on the unit
// disk and on its sub-regions.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "bergman/common.hpp"
#include "bergman/disk_geometry.hpp"

namespace bergman {

/// Nodes and weights on the unit disk (or a sub-region). Weights carry the
/// normalization of dA, so the whole-disk rule sums to one.
struct DiskQuadrature {
  std::vector<Complex> nodes;
  std::vector<double> weights;
  int radial_order = 0;   ///< Gauss-Legendre points per radial panel
  int radial_panels = 1;  ///< 1 for the plain rule; > 1 for graded rules
  int angular_count = 0;

  std::size_t size() const { return nodes.size(); }
  /// Total radial node count (order x panels).
  int radial_nodes() const { return radial_order * radial_panels; }
  double mass() const;
};

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;
};
GaussLegendre gauss_legendre(int order);

/// Gauss-Legendre in the radius (Jacobian 2r) times a uniform trapezoid in
/// angle. Exact for z^n conj(z)^m whenever |n - m| < angular_count and
/// n = m <= radial_order - 1.
DiskQuadrature build_rule(int radial_order, int angular_count);

/// Composite radial rule on panels [0, 1/2], [1/2, 3/4], ... geometrically
/// graded toward the boundary, for integrands that concentrate near or are
/// singular at |z| = 1.
DiskQuadrature build_graded_rule(int order_per_panel, int panels, int angular_count);

/// Rule for the Euclidean disk |z - c| < s, assumed to lie inside D.
DiskQuadrature disk_rule(Complex center, double radius, int radial_order, int angular_count);

/// Rule for { |z - c| < s } ∩ D. Each radial circle is clipped to the arc
/// inside D and integrated with Gauss-Legendre in angle.
DiskQuadrature clipped_disk_rule(Complex center, double radius, int radial_order,
                                 int angular_count);

struct WholeDisk {};

/// Measurable set given only by a membership predicate.
struct IndicatorSet {
  std::function<bool(Complex)> member;
  std::string label;
};

struct RegionPart;
/// Finite union of regions.
using RegionUnion = std::vector<RegionPart>;

/// A sub-region of the disk.
using Region = std::variant<WholeDisk, PseudoDisk, CarlesonBox, BoundaryBall, MetricBall,
                            IndicatorSet, RegionUnion>;

struct RegionPart {
  Region region;
};

Region region_union(std::vector<Region> parts);

bool region_contains(const Region& region, Complex z);

/// Closed-form normalized area; throws ParameterError for predicate regions.
double region_area(const Region& region);

/// True for regions with a dedicated geometric rule.
bool region_is_analytic(const Region& region);

/// A rule adapted to the region. Disk-shaped regions get an affine copy of a
/// disk rule with the base orders; boundary and metric balls get the clipped
/// rule; predicate regions and unions keep the base nodes that fall inside.
DiskQuadrature region_refine(const Region& region, const DiskQuadrature& base);

/// Sum of weight * f(node) over region_refine(region, quad). Throws
/// NumericalError naming the node when f is not finite.
Complex integrate(const std::function<Complex(Complex)>& f, const Region& region,
                  const DiskQuadrature& quad);

/// Real-valued overload.
double integrate_real(const std::function<double(Complex)>& f, const Region& region,
                      const DiskQuadrature& quad);

/// Sum of weight * f(node) over exactly the given nodes.
double sum_rule(const std::function<double(Complex)>& f, const DiskQuadrature& quad);

}  // namespace bergman
