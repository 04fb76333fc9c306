#include "bergman/disk_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "bergman/parallel.hpp"

namespace bergman {

double pseudo_distance(Complex z, Complex w) {
  require_in_disk(z, "pseudo_distance");
  require_in_disk(w, "pseudo_distance");
  return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
}

Complex mobius(Complex a, Complex z) { return (a - z) / (1.0 - std::conj(a) * z); }

namespace {

void require_radius(double r, const char* what) {
  if (!(r > 0.0 && r < 1.0)) {
    throw DomainError(std::string(what) + ": radius " + std::to_string(r) +
                      " is outside (0, 1)");
  }
}

// rho without the domain checks, for hot loops over validated points.
inline double rho_unchecked(Complex z, Complex w) {
  return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z);
}

}  // namespace

bool PseudoDisk::contains(Complex z) const {
  return std::abs(z) < 1.0 && rho_unchecked(z, center_hyp) < radius_hyp;
}

PseudoDisk pseudo_disk(Complex a, double r) {
  require_in_disk(a, "pseudo_disk");
  require_radius(r, "pseudo_disk");
  const double a2 = std::norm(a);
  const double r2 = r * r;
  const double denom = 1.0 - r2 * a2;
  PseudoDisk d;
  d.center_hyp = a;
  d.radius_hyp = r;
  d.center_euc = ((1.0 - r2) / denom) * a;
  d.radius_euc = r * (1.0 - a2) / denom;
  return d;
}

bool CarlesonBox::contains(Complex z) const {
  return std::abs(z) < 1.0 && std::abs(z - center) < radius_euc();
}

CarlesonBox carleson_box(Complex a, double r) {
  require_in_disk(a, "carleson_box");
  require_radius(r, "carleson_box");
  return CarlesonBox{a, r};
}

double clipped_disk_area(Complex c, double s) {
  const double d = std::abs(c);
  if (s <= 0.0) return 0.0;
  if (d + s <= 1.0) return s * s;
  if (s >= d + 1.0) return 1.0;
  if (d >= 1.0 + s) return 0.0;
  const double a1 = std::acos(std::clamp((d * d + s * s - 1.0) / (2.0 * d * s), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + 1.0 - s * s) / (2.0 * d), -1.0, 1.0));
  const double k = (-d + s + 1.0) * (d + s - 1.0) * (d - s + 1.0) * (d + s + 1.0);
  return (s * s * a1 + a2 - 0.5 * std::sqrt(std::max(0.0, k))) / kPi;
}

bool BoundaryBall::contains(Complex z) const {
  return std::abs(z) < 1.0 && std::abs(z - boundary_point) < radius;
}

double BoundaryBall::area() const { return clipped_disk_area(boundary_point, radius); }

BoundaryBall boundary_ball(Complex u, double t) {
  if (std::abs(std::abs(u) - 1.0) > 1e-12) {
    throw DomainError("boundary_ball: center " + format_point(u) + " is not on the unit circle");
  }
  if (!(t > 0.0 && t <= 1.0)) {
    throw DomainError("boundary_ball: radius must lie in (0, 1]");
  }
  return BoundaryBall{u / std::abs(u), t};
}

bool MetricBall::contains(Complex z) const {
  return std::abs(z) < 1.0 && std::abs(z - center) < radius;
}

double MetricBall::area() const { return clipped_disk_area(center, radius); }

MetricBall metric_ball(Complex a, double r) {
  require_in_disk(a, "metric_ball");
  if (!(r > 0.0)) throw DomainError("metric_ball: radius must be positive");
  return MetricBall{a, r};
}

bool Lattice::is_certified() const {
  return separation >= 0.5 * epsilon * (1.0 - 1e-12) && cover_defect <= epsilon;
}

// ---------------------------------------------------------------------------
// PointIndex

PointIndex::PointIndex(const std::vector<Complex>& points, double scale)
    : points_(points), shell_width_(std::atanh(std::clamp(scale, 1e-6, 0.5))) {
  double max_u = 0.0;
  for (Complex p : points) max_u = std::max(max_u, std::atanh(std::min(std::abs(p), 1.0 - 1e-16)));
  const auto shell_count = static_cast<std::size_t>(max_u / shell_width_) + 1;
  shells_.resize(shell_count);
  for (std::size_t j = 0; j < shell_count; ++j) {
    const double s_out = std::tanh(static_cast<double>(j + 1) * shell_width_);
    // rho-length of the full circle of radius s is about 2 pi s / (1 - s^2).
    const double circumference = 2.0 * kPi * s_out / (1.0 - s_out * s_out);
    const double bins = std::ceil(circumference / std::tanh(shell_width_));
    shells_[j].angular_bins = static_cast<std::size_t>(std::clamp(bins, 1.0, 1.0e6));
    shells_[j].bins.resize(shells_[j].angular_bins);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    Shell& shell = shells_[shell_of(std::abs(points[i]))];
    shell.bins[angular_bin(shell, std::arg(points[i]))].push_back(i);
  }
}

std::size_t PointIndex::shell_of(double modulus) const {
  const double u = std::atanh(std::min(modulus, 1.0 - 1e-16));
  return std::min(static_cast<std::size_t>(u / shell_width_), shells_.size() - 1);
}

std::size_t PointIndex::angular_bin(const Shell& shell, double angle) const {
  double t = angle / (2.0 * kPi);
  t -= std::floor(t);
  return std::min(static_cast<std::size_t>(t * static_cast<double>(shell.angular_bins)),
                  shell.angular_bins - 1);
}

std::vector<std::size_t> PointIndex::within(Complex z, double radius) const {
  std::vector<std::size_t> out;
  const auto& pts = points_;
  const PseudoDisk disk = pseudo_disk(z, std::min(radius, 1.0 - 1e-12));
  const double uz = std::atanh(std::abs(z));
  const double du = std::atanh(disk.radius_hyp);
  const double u_lo = std::max(0.0, uz - du);
  const std::size_t j_lo = std::min(static_cast<std::size_t>(u_lo / shell_width_), shells_.size() - 1);
  const std::size_t j_hi = std::min(static_cast<std::size_t>((uz + du) / shell_width_), shells_.size() - 1);
  const double c_mod = std::abs(disk.center_euc);
  const bool all_angles = disk.radius_euc >= c_mod;
  const double half = all_angles ? kPi : std::asin(disk.radius_euc / c_mod);
  const double mid = std::arg(disk.center_euc);
  for (std::size_t j = j_lo; j <= j_hi; ++j) {
    const Shell& shell = shells_[j];
    const double width = 2.0 * kPi / static_cast<double>(shell.angular_bins);
    std::size_t count = all_angles ? shell.angular_bins
                                   : static_cast<std::size_t>(std::ceil(2.0 * half / width)) + 2;
    count = std::min(count, shell.angular_bins);
    const std::size_t first = all_angles ? 0 : angular_bin(shell, mid - half - 0.5 * width);
    for (std::size_t k = 0; k < count; ++k) {
      for (std::size_t idx : shell.bins[(first + k) % shell.angular_bins]) {
        if (rho_unchecked(z, pts[idx]) < radius) out.push_back(idx);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double PointIndex::nearest_distance(Complex z, double radius, Complex* nearest) const {
  double best = radius;
  for (std::size_t idx : within(z, radius)) {
    const double d = rho_unchecked(z, points_[idx]);
    if (d < best) {
      best = d;
      if (nearest != nullptr) *nearest = points_[idx];
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Lattices

namespace {

std::vector<Complex> ring_points(double epsilon, double max_modulus) {
  std::vector<Complex> pts{Complex(0.0, 0.0)};
  // Rings one step of rho = eps/2 apart, nudged so floating point never lands
  // just under the separation bound.
  const double step = std::atanh(0.5 * epsilon) * (1.0 + 1e-9);
  for (std::size_t k = 1;; ++k) {
    const double s = std::tanh(static_cast<double>(k) * step);
    if (s > max_modulus) break;
    // rho(s, s e^{i theta}) = s |1 - e^{i theta}| / |1 - s^2 e^{i theta}|; find
    // the largest theta in (0, pi] with that distance <= eps by bisection.
    auto chord = [s](double theta) {
      const Complex e = std::polar(1.0, theta);
      return s * std::abs(1.0 - e) / std::abs(1.0 - s * s * e);
    };
    double theta_max = kPi;
    if (chord(kPi) > epsilon) {
      double lo = 0.0, hi = kPi;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (chord(mid) <= epsilon ? lo : hi) = mid;
      }
      theta_max = lo;
    }
    const auto count = static_cast<std::size_t>(std::ceil(2.0 * kPi / theta_max - 1e-12));
    const std::size_t n = std::max<std::size_t>(count, 2);
    const double dtheta = 2.0 * kPi / static_cast<double>(n);
    const double offset = (k % 2 == 0) ? 0.5 * dtheta : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(std::polar(s, offset + dtheta * static_cast<double>(i)));
    }
  }
  return pts;
}

constexpr std::size_t kBruteForceWork = 20'000'000;

}  // namespace

LatticeCertificate verify_lattice(const Lattice& lattice, std::size_t probe_grid) {
  const auto& pts = lattice.points;
  if (pts.empty()) throw ParameterError("verify_lattice: lattice has no points");
  if (probe_grid < 2) throw ParameterError("verify_lattice: probe grid must be at least 2");
  for (Complex p : pts) require_in_disk(p, "verify_lattice");

  LatticeCertificate cert;
  const std::size_t n = pts.size();
  const double eps = lattice.epsilon;
  const bool brute = n * n <= kBruteForceWork;
  const double search = std::min(0.999, std::max(2.0 * eps, 1e-3));
  std::unique_ptr<PointIndex> index;
  if (!brute || n * probe_grid * probe_grid > kBruteForceWork) {
    index = std::make_unique<PointIndex>(pts, std::max(eps, 1e-3));
  }

  // Separation. A single point has no pairs; the convention is 1.
  std::vector<double> sep(n, 1.0);
  if (n > 1) {
    parallel::for_each_index(n, [&](std::size_t i) {
      double best = brute ? 1.0 : eps;
      if (brute) {
        for (std::size_t m = 0; m < n; ++m) {
          if (m != i) best = std::min(best, rho_unchecked(pts[i], pts[m]));
        }
      } else {
        for (std::size_t m : index->within(pts[i], eps)) {
          if (m != i) best = std::min(best, rho_unchecked(pts[i], pts[m]));
        }
      }
      sep[i] = best;
    });
  }
  cert.separation = *std::min_element(sep.begin(), sep.end());

  // Cover defect on the polar probe grid.
  const double outer = 1.0 - lattice.cutoff;
  const std::size_t probes = probe_grid * probe_grid;
  std::vector<double> defect(probes);
  std::vector<Complex> probe_at(probes);
  const bool brute_probe = index == nullptr;
  parallel::for_each_index(probes, [&](std::size_t p) {
    const std::size_t i = p / probe_grid;
    const std::size_t j = p % probe_grid;
    const double radius = outer * static_cast<double>(i) / static_cast<double>(probe_grid - 1);
    const Complex z = std::polar(radius, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(probe_grid));
    probe_at[p] = z;
    if (brute_probe) {
      double best = std::numeric_limits<double>::infinity();
      for (Complex a : pts) best = std::min(best, rho_unchecked(z, a));
      defect[p] = best;
    } else {
      defect[p] = index->nearest_distance(z, search);
    }
  });
  const auto worst = std::max_element(defect.begin(), defect.end());
  cert.cover_defect = *worst;
  cert.worst_probe = probe_at[static_cast<std::size_t>(worst - defect.begin())];
  cert.probe_count = probes;
  return cert;
}

Lattice generate_lattice(double epsilon, const LatticeOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0 / 16.0)) {
    throw DomainError("generate_lattice: epsilon must lie in (0, 1/16)");
  }
  if (!(options.cutoff > 0.0 && options.cutoff < 1.0)) {
    throw DomainError("generate_lattice: cutoff must lie in (0, 1)");
  }
  Lattice lattice;
  lattice.epsilon = epsilon;
  lattice.cutoff = options.cutoff;
  lattice.points = ring_points(epsilon, 1.0 - options.cutoff);
  const LatticeCertificate cert = verify_lattice(lattice, options.probe_grid);
  lattice.separation = cert.separation;
  lattice.cover_defect = cert.cover_defect;
  if (cert.cover_defect > epsilon) {
    throw NumericalError("generate_lattice: cover defect " + std::to_string(cert.cover_defect) +
                         " exceeds epsilon at probe " + format_point(cert.worst_probe));
  }
  return lattice;
}

nlohmann::json to_json(const Lattice& lattice) {
  nlohmann::json pts = nlohmann::json::array();
  for (Complex p : lattice.points) pts.push_back({p.real(), p.imag()});
  return {{"epsilon", lattice.epsilon},
          {"cutoff", lattice.cutoff},
          {"points", std::move(pts)},
          {"separation", lattice.separation},
          {"cover_defect", lattice.cover_defect}};
}

Lattice lattice_from_json(const nlohmann::json& j) {
  Lattice lattice;
  lattice.epsilon = j.at("epsilon").get<double>();
  lattice.cutoff = j.at("cutoff").get<double>();
  for (const auto& p : j.at("points")) {
    lattice.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  }
  lattice.separation = j.at("separation").get<double>();
  lattice.cover_defect = j.at("cover_defect").get<double>();
  return lattice;
}

}  // namespace bergman
