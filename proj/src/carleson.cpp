#include "bergman/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "bergman/parallel.hpp"
#include "bergman/symbol_dsl.hpp"

namespace bergman {

namespace {

void finish(DensityReport& rep) {
  rep.inf = std::numeric_limits<double>::infinity();
  rep.sup = -std::numeric_limits<double>::infinity();
  std::vector<double> scales;
  std::map<double, std::pair<double, double>> by_scale;
  for (const auto& e : rep.entries) {
    if (e.ratio < rep.inf) {
      rep.inf = e.ratio;
      rep.argmin = e.point;
    }
    rep.sup = std::max(rep.sup, e.ratio);
    auto it = by_scale.find(e.scale);
    if (it == by_scale.end()) {
      scales.push_back(e.scale);
      by_scale.emplace(e.scale, std::make_pair(e.ratio, e.ratio));
    } else {
      it->second.first = std::min(it->second.first, e.ratio);
      it->second.second = std::max(it->second.second, e.ratio);
    }
  }
  for (double s : scales) {
    rep.trend_inf.emplace_back(s, by_scale[s].first);
    rep.trend_sup.emplace_back(s, by_scale[s].second);
  }
}

double filtered_fraction(const Region& g, const DiskQuadrature& rule) {
  parallel::KahanSum<double> in, all;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    all.add(rule.weights[i]);
    if (region_contains(g, rule.nodes[i])) in.add(rule.weights[i]);
  }
  return in.value() / all.value();
}

}  // namespace

nlohmann::json to_json(const DensityReport& rep) {
  nlohmann::json j;
  j["family"] = rep.family;
  j["inf"] = rep.inf;
  j["sup"] = rep.sup;
  j["argmin"] = {rep.argmin.real(), rep.argmin.imag()};
  nlohmann::json trend = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.trend_inf.size(); ++i) {
    trend.push_back({{"scale", rep.trend_inf[i].first}, {"inf", rep.trend_inf[i].second}, {"sup", rep.trend_sup[i].second}});
  }
  j["trend"] = trend;
  j["count"] = rep.entries.size();
  return j;
}

std::vector<Complex> polar_grid(const std::vector<double>& radii, int directions) {
  std::vector<Complex> g;
  for (double r : radii) {
    if (r == 0.0) {
      g.push_back(0.0);
      continue;
    }
    for (int j = 0; j < directions; ++j) g.push_back(std::polar(r, 2.0 * kPi * j / directions));
  }
  return g;
}

DensityReport carleson_ratio_sweep(const SymbolMeasure& sm, const Weight& w, double r,
                                   const std::vector<Complex>& z_grid, int radial_order, int angular_count) {
  if (!(r > 0.0 && r <= 0.25)) throw ParameterError("carleson_ratio_sweep: r must be in (0, 1/4]");
  const DiskMeasurer measure(sm, w, radial_order, angular_count);
  DensityReport rep;
  rep.family = "nu(D(z,r))/|D(z,r)|_w, r=" + std::to_string(r);
  rep.entries.resize(z_grid.size());
  parallel::for_each_index(z_grid.size(), [&](std::size_t i) {
    rep.entries[i] = {z_grid[i], std::abs(z_grid[i]), measure(z_grid[i], r).ratio()};
  });
  finish(rep);
  return rep;
}

VanishingProfile vanishing_profile(const SymbolMeasure& sm, const Weight& w, double r,
                                   const std::vector<double>& radial_grid, double tolerance, int radial_order,
                                   int angular_count) {
  if (radial_grid.size() < 2) throw ParameterError("vanishing_profile: need at least two radii");
  const DensityReport sweep =
      carleson_ratio_sweep(sm, w, r, polar_grid(radial_grid, 16), radial_order, angular_count);
  VanishingProfile prof;
  for (const auto& [scale, mx] : sweep.trend_sup) {
    prof.radii.push_back(scale);
    prof.band_max.push_back(mx);
  }
  prof.vanishing = prof.band_max.back() < tolerance * prof.band_max.front();
  prof.verdict = prof.vanishing ? "vanishing at tested scales" : "not vanishing";
  return prof;
}

std::vector<double> default_t_grid() {
  std::vector<double> t;
  for (int k = 1; k <= 6; ++k) t.push_back(std::ldexp(1.0, -k));
  return t;
}

std::vector<Complex> default_u_grid() {
  std::vector<Complex> u;
  for (int j = 0; j < 64; ++j) u.push_back(std::polar(1.0, 2.0 * kPi * j / 64.0));
  return u;
}

DensityReport boundary_density(const Region& g, const std::vector<double>& t_grid, const std::vector<Complex>& u_grid,
                               int radial_order, int angular_count) {
  if (t_grid.empty() || u_grid.empty()) throw ParameterError("boundary_density: empty grid");
  DensityReport rep;
  rep.family = "|G∩K|/|D∩K| over boundary balls";
  rep.entries.resize(t_grid.size() * u_grid.size());
  parallel::for_each_index(rep.entries.size(), [&](std::size_t k) {
    const double t = t_grid[k / u_grid.size()];
    const Complex u = u_grid[k % u_grid.size()];
    const BoundaryBall ball = boundary_ball(u, t);
    const DiskQuadrature rule = clipped_disk_rule(ball.boundary_point, t, radial_order, angular_count);
    rep.entries[k] = {ball.boundary_point, t, filtered_fraction(g, rule)};
  });
  finish(rep);
  return rep;
}

std::vector<Complex> default_box_grid() {
  std::vector<double> radii{0.0};
  for (int k = 1; k <= 6; ++k) radii.push_back(1.0 - std::ldexp(1.0, -k));
  return polar_grid(radii, 64);
}

DensityReport box_density(const Region& g, double r, const std::vector<Complex>& a_grid, int radial_order,
                          int angular_count) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("box_density: r must be in (0,1)");
  DensityReport rep;
  rep.family = "|G∩S(a,r)|/|S(a,r)|, r=" + std::to_string(r);
  rep.entries.resize(a_grid.size());
  parallel::for_each_index(a_grid.size(), [&](std::size_t k) {
    const CarlesonBox box = carleson_box(a_grid[k], r);
    const DiskQuadrature rule = disk_rule(box.center, box.radius_euc(), radial_order, angular_count);
    rep.entries[k] = {a_grid[k], std::abs(a_grid[k]), filtered_fraction(g, rule)};
  });
  finish(rep);
  return rep;
}

std::vector<TestFunction> random_harmonic_family(const TruncatedBasis& basis, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<TestFunction> fam;
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXcd c(basis.dim());
    for (int k = 0; k < basis.dim(); ++k) {
      const int deg = k <= basis.degree ? k : k - basis.degree;
      const double x = gauss(rng);
      const double y = gauss(rng);
      c(k) = Complex(x, y) * std::sqrt((deg + 1) / 2.0);
    }
    HarmonicPoly p{basis, c};
    fam.push_back({"random#" + std::to_string(i), [p](Complex z) { return p(z); }, c});
  }
  return fam;
}

std::vector<TestFunction> kernel_bump_family(const GramSystem& gs, double modulus, int directions) {
  std::vector<TestFunction> fam;
  for (int j = 0; j < directions; ++j) {
    const Complex z0 = std::polar(modulus, 2.0 * kPi * j / directions);
    const Eigen::VectorXcd c = kernel_coefficients(gs, z0);
    HarmonicPoly p{gs.basis, c};
    fam.push_back({"kernel@" + format_point(z0), [p](Complex z) { return p(z); }, c});
  }
  return fam;
}

std::vector<TestFunction> dk_bump_family(double alpha, double modulus, int directions) {
  std::vector<TestFunction> fam;
  for (int j = 0; j < directions; ++j) {
    const Complex u = std::polar(1.0, 2.0 * kPi * j / directions);
    const DkBump b{alpha, modulus * u};
    fam.push_back({"dk@" + format_point(b.z0), [b](Complex z) { return Complex(b(z)); }, Eigen::VectorXcd()});
  }
  return fam;
}

FrameBounds frame_bounds(const Lattice& lattice, const std::vector<double>& masses, const GramSystem& gs,
                         const std::vector<TestFunction>& family) {
  if (masses.size() != lattice.points.size()) throw ParameterError("frame_bounds: one mass per lattice point required");
  if (family.empty()) throw ParameterError("frame_bounds: empty family");
  const Eigen::Index f = static_cast<Eigen::Index>(family.size());
  Eigen::MatrixXcd c(gs.basis.dim(), f);
  for (Eigen::Index k = 0; k < f; ++k) {
    const auto& member = family[static_cast<std::size_t>(k)];
    if (member.coeffs.size() != gs.basis.dim()) {
      throw ParameterError("frame_bounds: " + member.label + " has no coefficients in the truncation");
    }
    c.col(k) = member.coeffs;
  }
  const std::size_t n = lattice.points.size();
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<Eigen::VectorXd> partial(blocks);
  parallel::for_each_index(blocks, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    Eigen::MatrixXcd rows(static_cast<Eigen::Index>(hi - lo), gs.basis.dim());
    for (std::size_t i = lo; i < hi; ++i) rows.row(static_cast<Eigen::Index>(i - lo)) = gs.basis.eval(lattice.points[i]);
    const Eigen::MatrixXcd vals = rows * c;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(f);
    for (Eigen::Index i = 0; i < vals.rows(); ++i) {
      acc += masses[lo + static_cast<std::size_t>(i)] * vals.row(i).cwiseAbs2().transpose();
    }
    partial[b] = acc;
  });
  FrameBounds out;
  out.lattice_size = n;
  out.c1 = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < f; ++k) {
    parallel::KahanSum<double> s;
    for (const auto& p : partial) s.add(p(k));
    const double norm = gs.inner(c.col(k), c.col(k)).real();
    if (!(norm > 0.0)) throw ParameterError("frame_bounds: " + family[static_cast<std::size_t>(k)].label + " has zero norm");
    const double ratio = s.value() / norm;
    out.per_function.push_back(ratio);
    out.c1 = std::min(out.c1, ratio);
    out.c2 = std::max(out.c2, ratio);
  }
  return out;
}

Eigen::MatrixXcd atom_matrix(const Lattice& lattice, const std::vector<double>& masses, const GramSystem& gs,
                             AtomFlavor flavor) {
  if (masses.size() != lattice.points.size()) throw ParameterError("atom_matrix: one mass per lattice point required");
  const int n = gs.basis.degree;
  Eigen::MatrixXcd a(gs.basis.dim(), static_cast<Eigen::Index>(lattice.points.size()));
  parallel::for_each_index(lattice.points.size(), [&](std::size_t k) {
    const Complex p = lattice.points[k];
    const auto col = static_cast<Eigen::Index>(k);
    if (flavor == AtomFlavor::R) {
      // R_p(z) = 1 + sum_{n>=1} (n+1) (conj(p) z)^n + (n+1) (p conj(z))^n.
      const double m = std::abs(p);
      const double scale = (1.0 - m) * (1.0 + m) * (1.0 - m) * (1.0 + m) / std::sqrt(masses[k]);
      a(0, col) = scale;
      Complex pw = 1.0;
      for (int j = 1; j <= n; ++j) {
        pw *= p;
        a(j, col) = scale * (j + 1.0) * std::conj(pw);
        a(n + j, col) = scale * (j + 1.0) * pw;
      }
    } else {
      a.col(col) = kernel_coefficients(gs, p) * std::sqrt(masses[k]);
    }
  });
  return a;
}

AtomicResult atomic_decompose(const Eigen::VectorXcd& f_coeffs, const Eigen::MatrixXcd& atoms, const GramSystem& gs) {
  const Eigen::Index d = gs.basis.dim();
  if (f_coeffs.size() != d || atoms.rows() != d) throw ParameterError("atomic_decompose: dimension mismatch");
  if (atoms.cols() < d) {
    throw ParameterError("atomic_decompose: need at least " + std::to_string(d) + " atoms (have " +
                         std::to_string(atoms.cols()) + ")");
  }
  // Orthonormal coordinates: v -> G^{1/2} v preserves the L^2(omega) norm.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eg(gs.gram);
  const Eigen::MatrixXcd half = eg.eigenvectors() * eg.eigenvalues().cwiseSqrt().asDiagonal() * eg.eigenvectors().adjoint();
  const Eigen::MatrixXcd a = half * atoms;
  const Eigen::VectorXcd b = half * f_coeffs;

  const std::size_t cols = static_cast<std::size_t>(a.cols());
  constexpr std::size_t kBlock = 2048;
  const std::size_t blocks = (cols + kBlock - 1) / kBlock;
  std::vector<Eigen::MatrixXcd> partial(blocks);
  parallel::for_each_index(blocks, [&](std::size_t k) {
    const Eigen::Index lo = static_cast<Eigen::Index>(k * kBlock);
    const Eigen::Index len = static_cast<Eigen::Index>(std::min(cols, (k + 1) * kBlock)) - lo;
    const auto blk = a.middleCols(lo, len);
    partial[k] = blk * blk.adjoint();
  });
  Eigen::MatrixXcd aat = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& p : partial) aat += p;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(aat);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double top = ev(d - 1);
  AtomicResult res;
  for (Eigen::Index i = 0; i < d; ++i) res.numerical_rank += ev(i) > 1e-14 * top;
  if (res.numerical_rank < d) {
    throw NumericalError("atomic_decompose: atom system is rank deficient (numerical rank " +
                         std::to_string(res.numerical_rank) + " of " + std::to_string(d) + ")");
  }
  Eigen::VectorXd inv = ev.cwiseInverse();
  if (top / ev(0) > 1e12) {
    res.ridge_used = true;
    inv = (ev.array() + 1e-12 * top).inverse().matrix();
  }
  const Eigen::VectorXcd y = es.eigenvectors() * (inv.asDiagonal() * (es.eigenvectors().adjoint() * b));
  res.coefficients = a.adjoint() * y;
  res.residual = (b - a * res.coefficients).norm();
  res.coefficient_norm = res.coefficients.norm();
  res.f_norm = b.norm();
  return res;
}

ReverseCarlesonResult reverse_carleson_empirical(const Region& g, const Weight& w, const std::vector<TestFunction>& family,
                                                 const DiskQuadrature& quad) {
  if (family.empty()) throw ParameterError("reverse_carleson_empirical: empty family");
  std::vector<double> lw(quad.size());
  std::vector<char> inside(quad.size());
  parallel::for_each_index(quad.size(), [&](std::size_t i) {
    lw[i] = quad.weights[i] * w(quad.nodes[i]);
    inside[i] = region_contains(g, quad.nodes[i]);
  });
  ReverseCarlesonResult res;
  res.inf_ratio = std::numeric_limits<double>::infinity();
  for (const auto& member : family) {
    std::vector<double> sq(quad.size());
    parallel::for_each_index(quad.size(), [&](std::size_t i) { sq[i] = lw[i] * std::norm(member.f(quad.nodes[i])); });
    const double total = parallel::reduce_sum<double>(quad.size(), [&](std::size_t i) { return sq[i]; });
    const double on_g = parallel::reduce_sum<double>(quad.size(), [&](std::size_t i) { return inside[i] ? sq[i] : 0.0; });
    if (!(total > 0.0)) throw ParameterError("reverse_carleson_empirical: " + member.label + " has zero norm");
    const double ratio = on_g / total;
    res.ratios.push_back(ratio);
    if (ratio < res.inf_ratio) {
      res.inf_ratio = ratio;
      res.argmin = member.label;
    }
  }
  return res;
}

namespace {

std::vector<double> parse_numbers(const std::string& body, std::size_t expected, const std::string& spec) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t comma = body.find(',', start);
    const std::string part = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (part.empty() || end != part.c_str() + part.size()) throw ParameterError("set spec '" + spec + "': bad number '" + part + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != expected) throw ParameterError("set spec '" + spec + "': expected " + std::to_string(expected) + " numbers");
  return out;
}

}  // namespace

Region parse_set_spec(const std::string& spec) {
  if (spec == "all") return WholeDisk{};
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParameterError("set spec '" + spec + "' lacks a kind prefix");
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (kind == "halfplane") {
    const double angle = parse_numbers(body, 1, spec)[0];
    const Complex dir = std::polar(1.0, -angle);
    return IndicatorSet{[dir](Complex z) { return (z * dir).real() > 0.0; }, spec};
  }
  if (kind == "annulus") {
    const auto v = parse_numbers(body, 2, spec);
    if (!(v[0] >= 0.0 && v[0] < v[1])) throw ParameterError("set spec '" + spec + "': need 0 <= r1 < r2");
    const double r1 = v[0], r2 = v[1];
    return IndicatorSet{[r1, r2](Complex z) { return std::abs(z) > r1 && std::abs(z) < r2; }, spec};
  }
  if (kind == "disk") {
    const auto v = parse_numbers(body, 3, spec);
    if (!(v[2] > 0.0)) throw ParameterError("set spec '" + spec + "': radius must be positive");
    const Complex c(v[0], v[1]);
    const double r = v[2];
    return IndicatorSet{[c, r](Complex z) { return std::abs(z - c) < r; }, spec};
  }
  if (kind == "complement") {
    const Region inner = parse_set_spec(body);
    return IndicatorSet{[inner](Complex z) { return !region_contains(inner, z); }, spec};
  }
  if (kind == "union") {
    std::vector<Region> parts;
    std::size_t start = 0;
    for (;;) {
      const std::size_t semi = body.find(';', start);
      parts.push_back(parse_set_spec(body.substr(start, semi == std::string::npos ? std::string::npos : semi - start)));
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    return region_union(std::move(parts));
  }
  if (kind == "levelset") {
    const auto comma = body.rfind(',');
    if (comma == std::string::npos) throw ParameterError("set spec '" + spec + "': expected <dsl>,<threshold>");
    const dsl::Expr e = dsl::parse(body.substr(0, comma));
    const double threshold = parse_numbers(body.substr(comma + 1), 1, spec)[0];
    return IndicatorSet{[e, threshold](Complex z) { return dsl::eval(e, z) > threshold; }, spec};
  }
  throw ParameterError("set spec '" + spec + "': unknown kind '" + kind + "'");
}

}  // namespace bergman
