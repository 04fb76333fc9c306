#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bergman/disk_geometry.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<Complex> polynomial_zeros(const std::vector<Complex>& c) {
  std::size_t deg = c.size() - 1;
  while (deg > 0 && c[deg] == Complex(0.0)) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(deg),
                                                      static_cast<Eigen::Index>(deg));
  for (std::size_t i = 1; i < deg; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  for (std::size_t i = 0; i < deg; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -c[i] / c[deg];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<Complex> zeros;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    zeros.push_back(solver.eigenvalues()(i));
  }
  return zeros;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

WeightGrid read_weight_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("grid weight: cannot open " + path);
  std::map<std::pair<double, double>, double> table;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cols = split(t, ',');
    double r = 0, th = 0, v = 0;
    if (cols.size() != 3 || !parse_double(cols[0], r) || !parse_double(cols[1], th) ||
        !parse_double(cols[2], v)) {
      if (!seen_data) {  // header
        seen_data = true;
        continue;
      }
      throw ParameterError("grid weight: malformed row " + std::to_string(line_no) + " in " + path);
    }
    seen_data = true;
    if (r < 0.0 || r >= 1.0) throw ParameterError("grid weight: radius out of [0,1) on row " + std::to_string(line_no));
    th = std::fmod(th, 2.0 * kPi);
    if (th < 0.0) th += 2.0 * kPi;
    table[{r, th}] = v;
  }
  WeightGrid g;
  for (const auto& [key, v] : table) {
    if (g.radii.empty() || g.radii.back() != key.first) g.radii.push_back(key.first);
    g.angles.push_back(key.second);
  }
  std::sort(g.angles.begin(), g.angles.end());
  g.angles.erase(std::unique(g.angles.begin(), g.angles.end()), g.angles.end());
  if (g.radii.empty() || g.angles.empty()) throw ParameterError("grid weight: no data in " + path);
  if (table.size() != g.radii.size() * g.angles.size()) {
    throw ParameterError("grid weight: rows do not form a full (r, theta) tensor grid in " + path);
  }
  g.values.reserve(table.size());
  for (const auto& [key, v] : table) g.values.push_back(v);
  return g;
}

Weight Weight::standard_alpha(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw ParameterError("standard weight needs alpha > -1 (got " + format_number(alpha) + ")");
  }
  Weight w;
  w.kind_ = WeightKind::StandardAlpha;
  w.alpha_ = alpha;
  w.radial_ = true;
  w.spec_ = "alpha:" + format_number(alpha);
  return w;
}

Weight Weight::poly_modulus(std::vector<Complex> coefficients) {
  if (coefficients.empty()) throw ParameterError("poly weight: no coefficients");
  bool any = false;
  for (Complex c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ParameterError("poly weight: non-finite coefficient");
    any = any || c != Complex(0.0);
  }
  if (!any) throw ParameterError("poly weight: zero polynomial");
  Weight w;
  w.kind_ = WeightKind::PolyModulus;
  w.coefficients_ = std::move(coefficients);
  for (Complex z : polynomial_zeros(w.coefficients_)) {
    if (std::abs(z) <= 1.0 + 1e-12) w.zeros_.push_back(z);
  }
  std::size_t nonzero = 0;
  for (Complex c : w.coefficients_) nonzero += c != Complex(0.0);
  w.radial_ = nonzero == 1;
  w.spec_ = "poly:";
  for (std::size_t i = 0; i < w.coefficients_.size(); ++i) {
    if (i) w.spec_ += ',';
    const Complex c = w.coefficients_[i];
    w.spec_ += format_number(c.real());
    if (c.imag() != 0.0) w.spec_ += (c.imag() < 0 ? "-" : "+") + format_number(std::abs(c.imag())) + "i";
  }
  return w;
}

Weight Weight::from_dsl(const std::string& source) {
  Weight w;
  w.kind_ = WeightKind::Dsl;
  w.expr_ = dsl::parse(source);
  w.radial_ = false;
  w.spec_ = "dsl:" + source;
  w.check_integrable();
  return w;
}

Weight Weight::from_grid(WeightGrid grid) {
  if (grid.radii.empty() || grid.angles.empty() ||
      grid.values.size() != grid.radii.size() * grid.angles.size()) {
    throw ParameterError("grid weight: inconsistent grid dimensions");
  }
  for (double v : grid.values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("grid weight: values must be finite and positive");
  }
  Weight w;
  w.kind_ = WeightKind::Grid;
  w.radial_ = grid.angles.size() == 1;
  w.grid_ = std::make_shared<const WeightGrid>(std::move(grid));
  w.spec_ = "grid";
  w.check_integrable();
  return w;
}

void Weight::check_integrable() {
  const DiskQuadrature q = build_rule(16, 32);
  const double mass = sum_rule([this](Complex z) { return (*this)(z); }, q);
  if (!std::isfinite(mass) || !(mass > 0.0)) {
    throw ParameterError("weight " + spec_ + " has non-finite or zero total mass");
  }
}

double Weight::raw(Complex z) const {
  switch (kind_) {
    case WeightKind::StandardAlpha: {
      const double m = std::abs(z);
      return (1.0 + alpha_) * std::pow((1.0 - m) * (1.0 + m), alpha_);
    }
    case WeightKind::PolyModulus: {
      for (Complex zero : zeros_) {
        if (std::abs(z - zero) < 1e-12) {
          throw DomainError("poly weight: node " + format_point(z) + " lies within 1e-12 of the zero " +
                            format_point(zero));
        }
      }
      Complex p = 0.0;
      for (std::size_t i = coefficients_.size(); i-- > 0;) p = p * z + coefficients_[i];
      return std::norm(p);
    }
    case WeightKind::Dsl:
      return dsl::eval(expr_, z);
    case WeightKind::Grid: {
      const WeightGrid& g = *grid_;
      const double r = std::abs(z);
      double th = std::atan2(z.imag(), z.real());
      if (th < 0.0) th += 2.0 * kPi;
      std::size_t i0 = 0, i1 = 0;
      double fr = 0.0;
      if (r <= g.radii.front()) {
        i0 = i1 = 0;
      } else if (r >= g.radii.back()) {
        i0 = i1 = g.radii.size() - 1;
      } else {
        i1 = static_cast<std::size_t>(std::upper_bound(g.radii.begin(), g.radii.end(), r) - g.radii.begin());
        i0 = i1 - 1;
        fr = (r - g.radii[i0]) / (g.radii[i1] - g.radii[i0]);
      }
      const std::size_t na = g.angles.size();
      std::size_t j0 = 0, j1 = 0;
      double ft = 0.0;
      if (na > 1) {
        const auto it = std::upper_bound(g.angles.begin(), g.angles.end(), th);
        if (it == g.angles.begin() || it == g.angles.end()) {
          j0 = na - 1;
          j1 = 0;
          double span = g.angles.front() + 2.0 * kPi - g.angles.back();
          double off = th >= g.angles.back() ? th - g.angles.back() : th + 2.0 * kPi - g.angles.back();
          ft = off / span;
        } else {
          j1 = static_cast<std::size_t>(it - g.angles.begin());
          j0 = j1 - 1;
          ft = (th - g.angles[j0]) / (g.angles[j1] - g.angles[j0]);
        }
      }
      auto at = [&](std::size_t i, std::size_t j) { return g.values[i * na + j]; };
      return (1 - fr) * ((1 - ft) * at(i0, j0) + ft * at(i0, j1)) + fr * ((1 - ft) * at(i1, j0) + ft * at(i1, j1));
    }
  }
  return 0.0;
}

double Weight::operator()(Complex z) const {
  require_in_disk(z, "weight");
  const double v = raw(z);
  if (!std::isfinite(v) || !(v > floor_)) {
    throw DomainError("weight " + spec_ + " at " + format_point(z) + " evaluates to " + format_number(v) +
                      " (must be finite and > " + format_number(floor_) + ")");
  }
  return v;
}

Weight parse_weight_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParameterError("weight spec '" + spec + "' lacks a kind prefix");
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  if (kind == "alpha") {
    double a = 0.0;
    if (!parse_double(body, a)) throw ParameterError("weight spec '" + spec + "': bad alpha");
    return Weight::standard_alpha(a);
  }
  if (kind == "poly") {
    std::vector<Complex> coeffs;
    for (const std::string& part : split(body, ',')) {
      double v = 0.0;
      if (!parse_double(part, v)) throw ParameterError("weight spec '" + spec + "': bad coefficient '" + part + "'");
      coeffs.emplace_back(v, 0.0);
    }
    return Weight::poly_modulus(std::move(coeffs));
  }
  if (kind == "dsl") return Weight::from_dsl(body);
  if (kind == "grid") {
    Weight w = Weight::from_grid(read_weight_grid(body));
    return w;
  }
  throw ParameterError("weight spec '" + spec + "': unknown kind '" + kind + "'");
}

double region_mass(const Weight& w, const Region& region, const DiskQuadrature& quad) {
  return integrate_real([&w](Complex z) { return w(z); }, region, quad);
}

std::vector<A2Ball> a2_family(int level, bool radial) {
  if (level < 0) throw ParameterError("a2_family: negative level");
  std::vector<double> moduli{0.0};
  for (int k = 1; k <= 3 + level; ++k) moduli.push_back(1.0 - std::ldexp(1.0, -k));
  const int directions = radial ? 1 : 16;
  std::vector<A2Ball> family;
  for (double m : moduli) {
    const int dirs = m == 0.0 ? 1 : directions;
    for (int j = 0; j < dirs; ++j) {
      const Complex a = std::polar(m, 2.0 * kPi * j / dirs);
      for (int k = 1; k <= 7 + level; ++k) family.push_back({a, std::ldexp(1.0, -k)});
    }
  }
  return family;
}

A2Estimate a2_constant_estimate(const Weight& w, const std::vector<A2Ball>& family, int radial_order,
                                int angular_count) {
  if (family.empty()) throw ParameterError("a2_constant_estimate: empty ball family");
  std::vector<double> ratios(family.size());
  parallel::for_each_index(family.size(), [&](std::size_t b) {
    const DiskQuadrature rule =
        clipped_disk_rule(family[b].center, family[b].radius, radial_order, angular_count);
    parallel::KahanSum<double> area, mass, inverse;
    try {
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double v = w(rule.nodes[i]);
        area.add(rule.weights[i]);
        mass.add(rule.weights[i] * v);
        inverse.add(rule.weights[i] / v);
      }
      const double ratio = mass.value() * inverse.value() / (area.value() * area.value());
      ratios[b] = std::isfinite(ratio) ? ratio : std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
      ratios[b] = std::numeric_limits<double>::infinity();
    }
  });
  A2Estimate est;
  est.family_size = family.size();
  est.estimate = 0.0;
  std::map<double, double> by_radius;
  for (std::size_t b = 0; b < family.size(); ++b) {
    if (std::isinf(ratios[b])) ++est.infinite_balls;
    if (ratios[b] > est.estimate) {
      est.estimate = ratios[b];
      est.worst = family[b];
    }
    auto [it, fresh] = by_radius.emplace(family[b].radius, ratios[b]);
    if (!fresh) it->second = std::max(it->second, ratios[b]);
  }
  for (auto it = by_radius.rbegin(); it != by_radius.rend(); ++it) est.per_radius_max.emplace_back(it->first, it->second);
  return est;
}

A2Report a2_refinement(const Weight& w, int refinements) {
  if (refinements < 1) throw ParameterError("a2_refinement: need at least one level");
  A2Report rep;
  for (int l = 0; l < refinements; ++l) {
    rep.levels.push_back(a2_constant_estimate(w, a2_family(l, w.is_radial()), 8 << l, 16 << l));
  }
  bool infinite = false;
  for (const auto& lv : rep.levels) infinite = infinite || std::isinf(lv.estimate);
  for (std::size_t l = 1; l < rep.levels.size(); ++l) {
    const double prev = rep.levels[l - 1].estimate;
    rep.relative_changes.push_back((rep.levels[l].estimate - prev) / prev);
  }
  if (infinite) {
    rep.verdict = "not A2 at tested scales";
  } else if (rep.relative_changes.empty()) {
    rep.verdict = "inconclusive";
  } else if (std::abs(rep.relative_changes.back()) <= 0.05) {
    rep.verdict = "stable";
  } else if (std::all_of(rep.relative_changes.begin(), rep.relative_changes.end(),
                         [](double c) { return c > 0.0; })) {
    rep.verdict = "not A2 at tested scales";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

namespace {
nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}
}  // namespace

nlohmann::json to_json(const A2Report& report) {
  nlohmann::json j;
  const A2Estimate& last = report.levels.back();
  j["family_size"] = last.family_size;
  j["estimate"] = finite_or_null(last.estimate);
  j["infinite_balls"] = last.infinite_balls;
  nlohmann::json per = nlohmann::json::array();
  for (auto [r, m] : last.per_radius_max) per.push_back({{"radius", r}, {"max_ratio", finite_or_null(m)}});
  j["per_radius_max"] = per;
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t l = 0; l < report.levels.size(); ++l) {
    levels.push_back({{"level", l},
                      {"family_size", report.levels[l].family_size},
                      {"estimate", finite_or_null(report.levels[l].estimate)}});
  }
  j["refinement_trend"] = {{"levels", levels},
                           {"relative_changes", report.relative_changes},
                           {"verdict", report.verdict}};
  return j;
}

std::vector<std::pair<Complex, Complex>> doubling_pairs(double r, std::size_t count, double max_modulus,
                                                        std::uint64_t seed) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("doubling_pairs: r must be in (0,1)");
  if (!(max_modulus >= 0.0 && max_modulus < 1.0)) throw ParameterError("doubling_pairs: max_modulus must be in [0,1)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<Complex, Complex>> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Complex z = std::polar(max_modulus * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
    const Complex w = std::polar(r * u(rng), 2.0 * kPi * u(rng));
    pairs.emplace_back(z, mobius(z, w));
  }
  return pairs;
}

DoublingReport doubling_check(const Weight& w, double r, const std::vector<std::pair<Complex, Complex>>& pairs,
                              double a2_estimate, const DiskQuadrature& quad) {
  if (!(r > 0.0 && r <= 0.25)) throw ParameterError("doubling_check: r must be in (0, 1/4]");
  DoublingReport rep;
  rep.r = r;
  rep.a2_estimate = a2_estimate;
  rep.bound = 8.0 * a2_estimate;
  rep.pairs.resize(pairs.size());
  parallel::for_each_index(pairs.size(), [&](std::size_t i) {
    const auto [z, xi] = pairs[i];
    if (pseudo_distance(z, xi) >= r) {
      throw ParameterError("doubling_check: pair " + std::to_string(i) + " has xi outside D(z,r)");
    }
    const double num = region_mass(w, pseudo_disk(z, r), quad);
    const double den = region_mass(w, pseudo_disk(xi, r), quad);
    rep.pairs[i] = {z, xi, num / den};
  });
  for (const auto& p : rep.pairs) {
    rep.worst_ratio = std::max(rep.worst_ratio, p.ratio);
    if (!(p.ratio < rep.bound)) rep.all_below = false;
  }
  return rep;
}

}  // namespace bergman
