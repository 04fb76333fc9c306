#pragma once

// Weights on the disk, their region masses, A2 estimates over ball families,
// and the pseudo-disk doubling check.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "bergman/common.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbol_dsl.hpp"

namespace bergman {

enum class WeightKind { StandardAlpha, PolyModulus, Dsl, Grid };

/// Tabulated weight on a polar tensor grid, interpolated bilinearly in
/// (r, theta) with theta periodic. Outside the tabulated radii the nearest
/// ring is used.
struct WeightGrid {
  std::vector<double> radii;   ///< strictly increasing, in [0, 1)
  std::vector<double> angles;  ///< strictly increasing, in [0, 2 pi)
  std::vector<double> values;  ///< row-major: values[i * angles.size() + j]
};

/// CSV with one "r,theta,value" row per grid node; lines starting with '#'
/// and a non-numeric header line are skipped.
WeightGrid read_weight_grid(const std::string& path);

class Weight {
 public:
  static Weight standard_alpha(double alpha);
  /// omega = |p(z)|^2 with coefficients from low to high degree.
  static Weight poly_modulus(std::vector<Complex> coefficients);
  static Weight from_dsl(const std::string& source);
  static Weight from_grid(WeightGrid grid);

  /// Evaluates omega(z). Throws DomainError naming z when the value is not
  /// finite or not above the positivity floor, or (poly weights) when z lies
  /// within 1e-12 of a zero of p.
  double operator()(Complex z) const;

  WeightKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::vector<Complex>& coefficients() const { return coefficients_; }
  /// Zeros of p that lie in the closed disk (poly weights only).
  const std::vector<Complex>& zeros() const { return zeros_; }
  /// True when omega depends on |z| only (standard weights, z^k monomials).
  bool is_radial() const { return radial_; }
  /// Canonical CLI spec string.
  const std::string& spec() const { return spec_; }

  double floor() const { return floor_; }
  void set_floor(double floor) { floor_ = floor; }

 private:
  Weight() = default;
  double raw(Complex z) const;
  void check_integrable();

  WeightKind kind_ = WeightKind::StandardAlpha;
  double alpha_ = 0.0;
  std::vector<Complex> coefficients_;
  std::vector<Complex> zeros_;
  dsl::Expr expr_;
  std::shared_ptr<const WeightGrid> grid_;
  bool radial_ = true;
  double floor_ = 0.0;
  std::string spec_;
};

/// "alpha:0.5" | "poly:1,-0.9" | "dsl:(1-r^2)^0.5" | "grid:path.csv".
/// Throws ParameterError on malformed specs.
Weight parse_weight_spec(const std::string& spec);

/// |E|_omega = integral of omega over the region.
double region_mass(const Weight& w, const Region& region, const DiskQuadrature& quad);

struct A2Ball {
  Complex center;
  double radius = 0.0;
};

/// Ball family for refinement level l: centers at |a| in {0} and 1 - 2^-k
/// for k = 1..3+l (one direction for radial weights, 16 otherwise), radii
/// 2^-1 .. 2^-(7+l).
std::vector<A2Ball> a2_family(int level, bool radial);

struct A2Estimate {
  std::size_t family_size = 0;
  double estimate = 1.0;  ///< max ratio; +inf if any ball overflowed
  std::size_t infinite_balls = 0;
  std::vector<std::pair<double, double>> per_radius_max;  ///< (radius, max ratio)
  A2Ball worst;
};

/// max over the family of |B|_w |B|_{1/w} / |B|^2 with B = B(a, r) ∩ D,
/// each ball integrated with clipped_disk_rule(a, r, radial_order,
/// angular_count). Balls where 1/w overflows count as +inf.
A2Estimate a2_constant_estimate(const Weight& w, const std::vector<A2Ball>& family,
                                int radial_order, int angular_count);

struct A2Report {
  std::vector<A2Estimate> levels;
  std::vector<double> relative_changes;
  /// "stable", "not A2 at tested scales", or "inconclusive".
  std::string verdict;
  double estimate() const { return levels.empty() ? 1.0 : levels.back().estimate; }
};

/// Runs levels 0..refinements-1 with orders (8 * 2^l, 16 * 2^l). Stable when
/// the last relative change is <= 5%; not A2 when the estimate grows at every
/// step and the last change exceeds 5%.
A2Report a2_refinement(const Weight& w, int refinements);

nlohmann::json to_json(const A2Report& report);

struct DoublingPair {
  Complex z;
  Complex xi;
  double ratio = 0.0;  ///< |D(z,r)|_w / |D(xi,r)|_w
};

struct DoublingReport {
  double r = 0.0;
  double a2_estimate = 1.0;
  double bound = 8.0;  ///< 8 * a2_estimate
  std::vector<DoublingPair> pairs;
  double worst_ratio = 0.0;
  bool all_below = true;
};

/// Random pairs: |z| <= max_modulus, xi = phi_z(s e^{it}) with s < r.
std::vector<std::pair<Complex, Complex>> doubling_pairs(double r, std::size_t count,
                                                        double max_modulus, std::uint64_t seed);

/// Checks |D(z,r)|_w < 8 a2 |D(xi,r)|_w on every pair; r must be in (0, 1/4].
DoublingReport doubling_check(const Weight& w, double r,
                              const std::vector<std::pair<Complex, Complex>>& pairs,
                              double a2_estimate, const DiskQuadrature& quad);

}  // namespace bergman
