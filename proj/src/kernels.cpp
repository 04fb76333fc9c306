#include "bergman/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/disk_geometry.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > -1.0)) throw ParameterError("kernel: alpha must exceed -1");
}

// 1 - |z|^2 without cancellation near the circle.
double one_minus_sq(Complex z) {
  const double m = std::abs(z);
  return (1.0 - m) * (1.0 + m);
}

Complex power(Complex base, double exponent) {
  if (exponent == std::round(exponent) && std::abs(exponent) < 64) {
    const int n = static_cast<int>(exponent);
    Complex acc = 1.0;
    Complex b = n >= 0 ? base : 1.0 / base;
    for (int k = std::abs(n); k > 0; k >>= 1) {
      if (k & 1) acc *= b;
      b *= b;
    }
    return acc;
  }
  return std::pow(base, exponent);
}

}  // namespace

Complex analytic_kernel(double alpha, Complex z, Complex lambda) {
  const Complex d = 1.0 - std::conj(z) * lambda;  // formed first, then powered
  return power(d, -(2.0 + alpha));
}

double harmonic_kernel(double alpha, Complex z, Complex lambda) {
  return 2.0 * analytic_kernel(alpha, z, lambda).real() - 1.0;
}

Complex eval_kernel(const KernelFamily& family, Complex z, Complex lambda) {
  require_in_disk(z, "eval_kernel");
  require_in_disk(lambda, "eval_kernel");
  switch (family.flavor) {
    case KernelFlavor::HarmonicUnweighted:
      return harmonic_kernel(0.0, z, lambda);
    case KernelFlavor::AnalyticUnweighted:
      return analytic_kernel(0.0, z, lambda);
    case KernelFlavor::HarmonicAlpha:
      check_alpha(family.alpha);
      return harmonic_kernel(family.alpha, z, lambda);
    case KernelFlavor::AnalyticAlpha:
      check_alpha(family.alpha);
      return analytic_kernel(family.alpha, z, lambda);
  }
  return 0.0;
}

double kernel_norm_alpha(double alpha, Complex z) {
  check_alpha(alpha);
  require_in_disk(z, "kernel_norm_alpha");
  return 2.0 / std::pow(one_minus_sq(z), 2.0 + alpha) - 1.0;
}

double kernel_norm_quadrature(double alpha, Complex z, const DiskQuadrature& quad) {
  check_alpha(alpha);
  require_in_disk(z, "kernel_norm_quadrature");
  return sum_rule(
      [&](Complex l) {
        const double r = harmonic_kernel(alpha, z, l);
        return r * r * (1.0 + alpha) * std::pow(one_minus_sq(l), alpha);
      },
      quad);
}

double pullback_kernel_density(double alpha, Complex z, Complex w) {
  const Complex x = power(1.0 - std::conj(z) * w, 2.0 + alpha);
  const double a = std::pow(one_minus_sq(z), 2.0 + alpha);
  return std::norm(x + std::conj(x) - a) / (a * std::norm(x));
}

double harmonic_kernel_norm_sq(const Weight& w, Complex z, const DiskQuadrature& quad) {
  require_in_disk(z, "harmonic_kernel_norm_sq");
  return sum_rule([&](Complex v) { return w(mobius(z, v)) * pullback_kernel_density(0.0, z, v); }, quad);
}

std::vector<Complex> pseudo_disk_samples(Complex lambda, double r, std::size_t count) {
  require_in_disk(lambda, "pseudo_disk_samples");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Complex> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double rad = r * std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(count));
    out.push_back(mobius(lambda, std::polar(rad, golden * static_cast<double>(k))));
  }
  return out;
}

namespace {

std::pair<double, double> scaled_range(Complex lambda, double r, std::size_t count) {
  const double scale = (1.0 - std::abs(lambda)) * (1.0 - std::abs(lambda));
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Complex z : pseudo_disk_samples(lambda, r, count)) {
    const double v = std::abs(harmonic_kernel(0.0, lambda, z)) * scale;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

KernelBoundsReport kernel_bounds_check(Complex lambda, double r, std::size_t sample_count) {
  if (!(r > 0.0 && r <= 0.25)) throw ParameterError("kernel_bounds_check: r must be in (0, 1/4]");
  if (sample_count == 0) throw ParameterError("kernel_bounds_check: need at least one sample");
  KernelBoundsReport rep;
  rep.lambda = lambda;
  rep.r = r;
  rep.samples = sample_count;
  std::tie(rep.min_scaled, rep.max_scaled) = scaled_range(lambda, r, sample_count);
  rep.lower_margin = rep.min_scaled - 0.5;
  rep.upper_margin = 3.0 - rep.max_scaled;
  rep.holds = rep.lower_margin >= 0.0 && rep.upper_margin >= 0.0;
  for (int k = 2; k <= 12; ++k) {
    const double rk = std::ldexp(1.0, -k);
    const auto [lo, hi] = scaled_range(lambda, rk, sample_count);
    if (lo >= 0.5 && hi <= 3.0) {
      rep.empirical_r0 = rk;
      break;
    }
  }
  return rep;
}

double DkBump::operator()(Complex lambda) const {
  return std::sqrt(1.0 + alpha) * harmonic_kernel(alpha, z0, lambda) *
         std::pow(one_minus_sq(z0), (2.0 + alpha) / 2.0);
}

double DkBump::norm_sq() const { return (1.0 + alpha) * (2.0 - std::pow(one_minus_sq(z0), 2.0 + alpha)); }

DkBump dk_test_function(double alpha, double t, double s, Complex u) {
  check_alpha(alpha);
  if (!(t > 0.0 && t < 1.0) || !(s > 0.0 && s < 1.0)) throw ParameterError("dk_test_function: s and t must be in (0,1)");
  if (std::abs(std::abs(u) - 1.0) > 1e-12) throw ParameterError("dk_test_function: u must be unimodular");
  return DkBump{alpha, (1.0 - s * t) * u};
}

double dk_mass_outside(const DkBump& f, Complex u, double t, const DiskQuadrature& whole, int radial_order,
                       int angular_count) {
  auto g = [&](Complex l) {
    const double v = f(l);
    return v * v * std::pow(1.0 - std::abs(l), f.alpha);
  };
  const double total = sum_rule(g, whole);
  const double inside = sum_rule(g, clipped_disk_rule(u, t, radial_order, angular_count));
  return std::max(0.0, total - inside);
}

NormOfKernelReport norm_of_kernel_check(const Weight& w, double r, const std::vector<Complex>& lambdas,
                                        const DiskQuadrature& quad) {
  if (!(r > 0.0 && r <= 0.25)) throw ParameterError("norm_of_kernel_check: r must be in (0, 1/4]");
  NormOfKernelReport rep;
  rep.r = r;
  rep.rows.resize(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    NormOfKernelRow& row = rep.rows[i];
    row.lambda = lambdas[i];
    row.norm_sq = harmonic_kernel_norm_sq(w, lambdas[i], quad);
    row.disk_mass = region_mass(w, pseudo_disk(lambdas[i], r), quad);
    const double d = 1.0 - std::abs(lambdas[i]);
    row.scaled = row.norm_sq * d * d * d * d / row.disk_mass;
  }
  rep.min_scaled = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows) {
    rep.min_scaled = std::min(rep.min_scaled, row.scaled);
    rep.max_scaled = std::max(rep.max_scaled, row.scaled);
  }
  rep.lower_holds = rep.min_scaled >= 0.5;
  return rep;
}

}  // namespace bergman
