#include "bergman/quadrature.hpp"

#include <cmath>
#include <numeric>

#include <gsl/gsl_integration.h>

#include "bergman/parallel.hpp"

namespace bergman {

double DiskQuadrature::mass() const {
  return parallel::reduce_sum<double>(weights.size(), [&](std::size_t i) { return weights[i]; });
}

GaussLegendre gauss_legendre(int order) {
  if (order < 1) throw ParameterError("gauss_legendre: order must be positive");
  gsl_integration_glfixed_table* table =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order));
  if (table == nullptr) throw NumericalError("gauss_legendre: table allocation failed");
  GaussLegendre gl;
  gl.x.resize(static_cast<std::size_t>(order));
  gl.w.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    gsl_integration_glfixed_point(0.0, 1.0, static_cast<std::size_t>(i), &gl.x[static_cast<std::size_t>(i)],
                                  &gl.w[static_cast<std::size_t>(i)], table);
  }
  gsl_integration_glfixed_table_free(table);
  return gl;
}

namespace {

void check_orders(int radial_order, int angular_count, const char* what) {
  if (radial_order < 2 || angular_count < 4) {
    throw ParameterError(std::string(what) + ": need radial_order >= 2 and angular_count >= 4 (got " +
                         std::to_string(radial_order) + ", " + std::to_string(angular_count) + ")");
  }
}

// Appends the full circle of radius rho around c with uniform trapezoid
// weights summing to 2 rho w_r. Angles sit at half steps so no node lands on
// the coordinate axes, where half-plane indicators switch.
void add_circle(DiskQuadrature& q, Complex c, double rho, double w_r, int angular_count) {
  const double w = 2.0 * rho * w_r / angular_count;
  for (int j = 0; j < angular_count; ++j) {
    q.nodes.push_back(c + std::polar(rho, 2.0 * kPi * (j + 0.5) / angular_count));
    q.weights.push_back(w);
  }
}

}  // namespace

DiskQuadrature build_rule(int radial_order, int angular_count) {
  check_orders(radial_order, angular_count, "build_rule");
  const GaussLegendre gl = gauss_legendre(radial_order);
  DiskQuadrature q;
  q.radial_order = radial_order;
  q.angular_count = angular_count;
  q.nodes.reserve(static_cast<std::size_t>(radial_order * angular_count));
  q.weights.reserve(q.nodes.capacity());
  for (int i = 0; i < radial_order; ++i) {
    add_circle(q, 0.0, gl.x[static_cast<std::size_t>(i)], gl.w[static_cast<std::size_t>(i)], angular_count);
  }
  return q;
}

DiskQuadrature build_graded_rule(int order_per_panel, int panels, int angular_count) {
  check_orders(order_per_panel, angular_count, "build_graded_rule");
  if (panels < 1) throw ParameterError("build_graded_rule: need at least one panel");
  const GaussLegendre gl = gauss_legendre(order_per_panel);
  DiskQuadrature q;
  q.radial_order = order_per_panel;
  q.radial_panels = panels;
  q.angular_count = angular_count;
  for (int k = 0; k < panels; ++k) {
    const double lo = k == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -k);
    const double hi = k + 1 == panels ? 1.0 : 1.0 - std::ldexp(1.0, -(k + 1));
    for (int i = 0; i < order_per_panel; ++i) {
      const double r = lo + (hi - lo) * gl.x[static_cast<std::size_t>(i)];
      add_circle(q, 0.0, r, (hi - lo) * gl.w[static_cast<std::size_t>(i)], angular_count);
    }
  }
  return q;
}

DiskQuadrature disk_rule(Complex center, double radius, int radial_order, int angular_count) {
  check_orders(radial_order, angular_count, "disk_rule");
  if (!(radius > 0.0)) throw ParameterError("disk_rule: radius must be positive");
  const GaussLegendre gl = gauss_legendre(radial_order);
  DiskQuadrature q;
  q.radial_order = radial_order;
  q.angular_count = angular_count;
  for (int i = 0; i < radial_order; ++i) {
    add_circle(q, center, radius * gl.x[static_cast<std::size_t>(i)],
               radius * gl.w[static_cast<std::size_t>(i)], angular_count);
  }
  return q;
}

DiskQuadrature clipped_disk_rule(Complex center, double radius, int radial_order, int angular_count) {
  check_orders(radial_order, angular_count, "clipped_disk_rule");
  if (!(radius > 0.0)) throw ParameterError("clipped_disk_rule: radius must be positive");
  const double cm = std::abs(center);
  if (cm > 1.0 + 1e-12) throw DomainError("clipped_disk_rule: center outside the closed disk");
  const GaussLegendre gl_r = gauss_legendre(radial_order);
  const GaussLegendre gl_t = gauss_legendre(angular_count);

  // The clipped arc length has a kink where the circle first touches the
  // boundary, at s = 1 - |c|; split the radial integral there.
  std::vector<double> breaks{0.0};
  if (1.0 - cm > 0.0 && 1.0 - cm < radius) breaks.push_back(1.0 - cm);
  breaks.push_back(radius);

  DiskQuadrature q;
  q.radial_order = radial_order;
  q.radial_panels = static_cast<int>(breaks.size()) - 1;
  q.angular_count = angular_count;
  const double toward_origin = std::arg(center) + kPi;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double lo = breaks[p];
    const double hi = breaks[p + 1];
    // Past the kink the arc length behaves like sqrt(s - lo); s = lo + (hi - lo) u^2 smooths it.
    const bool kink = p > 0;
    for (int i = 0; i < radial_order; ++i) {
      const double x = gl_r.x[static_cast<std::size_t>(i)];
      const double s = kink ? lo + (hi - lo) * x * x : lo + (hi - lo) * x;
      const double w_r = (kink ? 2.0 * x : 1.0) * (hi - lo) * gl_r.w[static_cast<std::size_t>(i)];
      // |c + s e^{i t}| < 1  <=>  cos(t - arg c) < (1 - |c|^2 - s^2) / (2 s |c|).
      const double bound = cm < 1e-15 ? (s < 1.0 ? 2.0 : -2.0)
                                       : (1.0 - cm * cm - s * s) / (2.0 * s * cm);
      if (bound >= 1.0) {
        add_circle(q, center, s, w_r, angular_count);
        continue;
      }
      if (bound <= -1.0) continue;
      const double half = kPi - std::acos(bound);
      for (int j = 0; j < angular_count; ++j) {
        const double t = toward_origin - half + 2.0 * half * gl_t.x[static_cast<std::size_t>(j)];
        const Complex z = center + std::polar(s, t);
        if (!(std::abs(z) < 1.0)) continue;  // rounding at the arc ends
        q.nodes.push_back(z);
        q.weights.push_back(w_r * s * 2.0 * half * gl_t.w[static_cast<std::size_t>(j)] / kPi);
      }
    }
  }
  return q;
}

Region region_union(std::vector<Region> parts) {
  RegionUnion u;
  u.reserve(parts.size());
  for (auto& p : parts) u.push_back(RegionPart{std::move(p)});
  return u;
}

bool region_contains(const Region& region, Complex z) {
  return std::visit(
      [z](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, WholeDisk>) {
          return std::abs(z) < 1.0;
        } else if constexpr (std::is_same_v<T, IndicatorSet>) {
          return std::abs(z) < 1.0 && r.member(z);
        } else if constexpr (std::is_same_v<T, RegionUnion>) {
          for (const auto& part : r) {
            if (region_contains(part.region, z)) return true;
          }
          return false;
        } else {
          return r.contains(z);
        }
      },
      region);
}

bool region_is_analytic(const Region& region) {
  return !std::holds_alternative<IndicatorSet>(region) &&
         !std::holds_alternative<RegionUnion>(region);
}

double region_area(const Region& region) {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, WholeDisk>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, IndicatorSet> || std::is_same_v<T, RegionUnion>) {
          throw ParameterError("region_area: no closed form for predicate regions");
        } else {
          return r.area();
        }
      },
      region);
}

namespace {

DiskQuadrature filter_rule(const DiskQuadrature& base, const Region& region) {
  DiskQuadrature q;
  q.radial_order = base.radial_order;
  q.radial_panels = base.radial_panels;
  q.angular_count = base.angular_count;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (region_contains(region, base.nodes[i])) {
      q.nodes.push_back(base.nodes[i]);
      q.weights.push_back(base.weights[i]);
    }
  }
  return q;
}

}  // namespace

DiskQuadrature region_refine(const Region& region, const DiskQuadrature& base) {
  if (region_is_analytic(region) && region_area(region) < 1e-14) {
    throw ParameterError("region_refine: degenerate region (area below 1e-14)");
  }
  const int q = base.radial_order;
  const int m = base.angular_count;
  DiskQuadrature out = std::visit(
      [&](const auto& r) -> DiskQuadrature {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, WholeDisk>) {
          return base;
        } else if constexpr (std::is_same_v<T, PseudoDisk>) {
          return disk_rule(r.center_euc, r.radius_euc, q, m);
        } else if constexpr (std::is_same_v<T, CarlesonBox>) {
          return disk_rule(r.center, r.radius_euc(), q, m);
        } else if constexpr (std::is_same_v<T, BoundaryBall>) {
          return clipped_disk_rule(r.boundary_point, r.radius, q, m);
        } else if constexpr (std::is_same_v<T, MetricBall>) {
          return clipped_disk_rule(r.center, r.radius, q, m);
        } else {
          return filter_rule(base, region);
        }
      },
      region);
  if (out.size() == 0) throw ParameterError("region_refine: no quadrature node falls inside the region");
  return out;
}

namespace {

template <typename T, typename F>
T integrate_rule(const F& f, const DiskQuadrature& rule) {
  std::vector<T> values(rule.size());
  parallel::for_each_index(rule.size(), [&](std::size_t i) { values[i] = f(rule.nodes[i]); });
  for (std::size_t i = 0; i < values.size(); ++i) {
    bool finite;
    if constexpr (std::is_same_v<T, Complex>) {
      finite = std::isfinite(values[i].real()) && std::isfinite(values[i].imag());
    } else {
      finite = std::isfinite(values[i]);
    }
    if (!finite) {
      throw NumericalError("integrate: integrand is not finite at node " + std::to_string(i) + " " +
                           format_point(rule.nodes[i]));
    }
  }
  return parallel::reduce_sum<T>(values.size(), [&](std::size_t i) { return rule.weights[i] * values[i]; });
}

DiskQuadrature rule_for(const Region& region, const DiskQuadrature& quad) {
  if (!region_is_analytic(region)) return filter_rule(quad, region);
  return region_refine(region, quad);
}

}  // namespace

Complex integrate(const std::function<Complex(Complex)>& f, const Region& region,
                  const DiskQuadrature& quad) {
  return integrate_rule<Complex>(f, rule_for(region, quad));
}

double integrate_real(const std::function<double(Complex)>& f, const Region& region,
                      const DiskQuadrature& quad) {
  return integrate_rule<double>(f, rule_for(region, quad));
}

double sum_rule(const std::function<double(Complex)>& f, const DiskQuadrature& quad) {
  return integrate_rule<double>(f, quad);
}

}  // namespace bergman
