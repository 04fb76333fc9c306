#include "bergman/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "bergman/basis_space.hpp"
#include "bergman/carleson.hpp"
#include "bergman/disk_geometry.hpp"
#include "bergman/invertibility.hpp"
#include "bergman/kernels.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbol_dsl.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/weights.hpp"

namespace bergman::acceptance {

namespace {

using nlohmann::json;

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// Collects failed checks for one criterion.
struct Checker {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::vector<Complex> rays(const std::vector<double>& radii, int directions) {
  std::vector<Complex> out;
  for (double r : radii) {
    for (int j = 0; j < directions; ++j) out.push_back(std::polar(r, 2.0 * kPi * j / directions));
  }
  return out;
}

double chi_right(Complex z) { return z.real() > 0.0 ? 1.0 : 0.0; }

// 1. closed-form kernel norm
json kernel_norm(Checker& c) {
  const DiskQuadrature quad = build_graded_rule(20, 10, 384);
  json rows = json::array();
  double worst = 0.0;
  for (double alpha : {0.0, 0.5, 1.0}) {
    double worst_alpha = 0.0;
    for (Complex z : rays({0.1, 0.3, 0.5, 0.7, 0.9}, 16)) {
      const double exact = kernel_norm_alpha(alpha, z);
      const double q = kernel_norm_quadrature(alpha, z, quad);
      worst_alpha = std::max(worst_alpha, std::abs(q - exact) / exact);
    }
    rows.push_back({{"alpha", alpha}, {"max_relative_error", worst_alpha}});
    worst = std::max(worst, worst_alpha);
    c.expect(worst_alpha <= 1e-6, fmt("alpha=%g: relative error %.3e > 1e-6", alpha, worst_alpha));
  }
  return {{"per_alpha", rows}, {"max_relative_error", worst}};
}

// 2. doubling with 8 [w]_A2
json doubling(Checker& c, std::uint64_t seed) {
  const std::vector<std::string> specs = {"alpha:0", "alpha:0.5", "alpha:-0.5", "poly:-0.9,1"};
  const auto pairs = doubling_pairs(0.125, 100, 0.9, seed);
  const DiskQuadrature quad = build_rule(16, 32);
  json rows = json::array();
  for (const auto& s : specs) {
    const Weight w = parse_weight_spec(s);
    const A2Report a2 = a2_refinement(w, 3);
    const DoublingReport rep = doubling_check(w, 0.125, pairs, a2.estimate(), quad);
    rows.push_back({{"weight", s},
                    {"a2_estimate", a2.estimate()},
                    {"a2_verdict", a2.verdict},
                    {"bound", rep.bound},
                    {"worst_ratio", rep.worst_ratio},
                    {"all_below", rep.all_below}});
    c.expect(std::isfinite(a2.estimate()), s + ": A2 estimate is not finite");
    c.expect(rep.all_below, s + fmt(": worst ratio %.4g >= bound %.4g", rep.worst_ratio, rep.bound));
  }
  return {{"pairs", pairs.size()}, {"r", 0.125}, {"weights", rows}};
}

// 3. pointwise kernel bounds on D(l, 1/8)
json kernel_bounds(Checker& c) {
  json rows = json::array();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double r0 = 1.0;
  std::size_t failing = 0;
  for (Complex l : rays({0.0, 0.5, 0.7, 0.8, 0.9, 0.95}, 16)) {
    const KernelBoundsReport rep = kernel_bounds_check(l, 0.125, 1000);
    lo = std::min(lo, rep.min_scaled);
    hi = std::max(hi, rep.max_scaled);
    r0 = std::min(r0, rep.empirical_r0);
    if (!rep.holds) ++failing;
    if (std::abs(l.imag()) < 1e-15 && l.real() >= 0.0) {
      rows.push_back({{"modulus", std::abs(l)},
                      {"min_scaled", rep.min_scaled},
                      {"max_scaled", rep.max_scaled},
                      {"holds", rep.holds},
                      {"empirical_r0", rep.empirical_r0}});
    }
  }
  c.expect(failing == 0, fmt("%g of 96 centers violate the bounds; min scaled value %.4f", double(failing), lo));
  return {{"min_scaled", lo}, {"max_scaled", hi}, {"failing_centers", failing}, {"empirical_r0", r0}, {"ray0", rows}};
}

// 4. lattice frame bounds
json frames(Checker& c, std::uint64_t seed) {
  const int n = 12;
  const DiskQuadrature quad = build_rule(32, 64);
  const DiskQuadrature unit = unit_disk_rule(6, 12);
  json rows = json::array();
  for (const char* spec : {"alpha:0", "alpha:0.5"}) {
    const Weight w = parse_weight_spec(spec);
    const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(n), w, quad));
    auto family = random_harmonic_family(gs.basis, 50, seed);
    for (auto& k : kernel_bump_family(gs, 0.9, 16)) family.push_back(std::move(k));
    std::vector<double> ratios;
    for (double eps : {1.0 / 32.0, 1.0 / 64.0}) {
      const Lattice lat = generate_lattice(eps);
      const auto masses = lattice_disk_masses(lat.points, w, eps, unit);
      const FrameBounds fb = frame_bounds(lat, masses, gs, family);
      ratios.push_back(fb.ratio());
      rows.push_back({{"weight", spec},
                      {"epsilon", eps},
                      {"lattice_size", fb.lattice_size},
                      {"c1", fb.c1},
                      {"c2", fb.c2},
                      {"ratio", fb.ratio()}});
      c.expect(fb.c1 > 0.0, std::string(spec) + fmt(": C1 = %g at eps %g", fb.c1, eps));
      c.expect(fb.ratio() <= 100.0, std::string(spec) + fmt(": C2/C1 = %.4g > 100 at eps %g", fb.ratio(), eps));
    }
    const double change = ratios[1] / ratios[0];
    c.expect(change >= 0.5 && change <= 2.0, std::string(spec) + fmt(": ratio changed by factor %.4g", change));
  }
  return {{"N", n}, {"family_size", 66}, {"rows", rows}};
}

std::vector<SymbolMeasure> trace_battery() {
  return {SymbolMeasure::weight_measure(),
          SymbolMeasure::symbol([](Complex z) { return std::norm(z); }, "|z|^2"),
          SymbolMeasure::symbol(chi_right, "chi(Re z>0)"),
          SymbolMeasure::symbol([](Complex z) { return std::pow(1.0 - std::norm(z), 2); }, "(1-|z|^2)^2"),
          SymbolMeasure::atomic({{0.0, 1.0}, {0.5, 0.5}}, "delta_0+0.5delta_0.5")};
}

// 5. trace identity
json trace_identity(Checker& c) {
  const DiskQuadrature quad = build_rule(32, 64);
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(12), Weight::standard_alpha(0.0), quad));
  json rows = json::array();
  for (const auto& sm : trace_battery()) {
    const TraceIdentityReport rep = trace_identity_check(sm, gs, quad);
    rows.push_back({{"measure", sm.label}, {"trace", rep.trace}, {"kernel_integral", rep.kernel_integral},
                    {"difference", rep.difference}});
    c.expect(rep.holds, sm.label + fmt(": |difference| %.3e vs trace %.6g", rep.difference, rep.trace));
  }
  return {{"N", 12}, {"measures", rows}};
}

std::vector<SymbolMeasure> berezin_battery() {
  return {SymbolMeasure::symbol([](Complex) { return 1.0; }, "1"),
          SymbolMeasure::symbol([](Complex z) { return std::norm(z); }, "|z|^2"),
          SymbolMeasure::symbol(chi_right, "chi(Re z>0)"),
          SymbolMeasure::symbol([](Complex z) { return 1.0 + 0.5 * std::pow(std::abs(z), 3) * std::cos(3.0 * std::arg(z)); },
                                "1+0.5r^3cos3theta"),
          SymbolMeasure::atomic({{0.0, 1.0}, {0.5, 0.5}}, "delta_0+0.5delta_0.5")};
}

// 6. Berezin transform below the norm
json berezin_vs_norm(Checker& c) {
  const Weight w = Weight::standard_alpha(0.0);
  const DiskQuadrature quad = build_rule(48, 96);
  const DiskQuadrature small = unit_disk_rule(6, 12);
  const Lattice lat = generate_lattice(0.05);
  const auto grid = default_berezin_grid();
  std::vector<GramSystem> systems;
  for (int n : {12, 20}) systems.push_back(orthonormalize(gram_matrix(TruncatedBasis(n), w, quad)));
  json rows = json::array();
  for (const auto& sm : berezin_battery()) {
    std::vector<double> slack;
    for (const auto& gs : systems) {
      const BoundednessReport rep = carleson_boundedness_report(sm, gs, lat, quad, small, grid);
      slack.push_back(rep.slack);
      rows.push_back({{"measure", sm.label}, {"N", gs.basis.degree}, {"sigma_max", rep.sigma_max},
                      {"berezin_sup", rep.berezin_sup}, {"slack", rep.slack}, {"carleson_sup", rep.carleson_sup},
                      {"sampling_sup", rep.sampling_sup}});
      c.expect(rep.berezin_below_norm,
               sm.label + fmt(": Berezin sup exceeds sigma_max by %.4g at N=%g", rep.slack, gs.basis.degree));
    }
    c.expect(slack[1] <= slack[0] + 1e-9, sm.label + fmt(": slack grew from %.4g to %.4g", slack[0], slack[1]));
  }
  return {{"rows", rows}};
}

// 7. compactness trend
json compactness(Checker& c) {
  const Weight w = Weight::standard_alpha(0.0);
  const DiskQuadrature quad = build_rule(48, 96);
  const SymbolMeasure decaying =
      SymbolMeasure::symbol([](Complex z) { return std::pow(1.0 - std::norm(z), 2); }, "(1-|z|^2)^2");
  const SymbolMeasure one = SymbolMeasure::symbol([](Complex) { return 1.0; }, "1");
  json rows = json::array();
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {8, 12, 16, 20}) {
    const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(n), w, quad));
    const Eigen::VectorXd s = singular_values(assemble(decaying, gs, quad));
    const double tenth = s(s.size() - 10);
    const Eigen::VectorXd s1 = singular_values(assemble(one, gs, quad));
    const double smin1 = s1(s1.size() - 1);
    rows.push_back({{"N", n}, {"tenth_smallest", tenth}, {"sigma_min_one", smin1}});
    c.expect(tenth < prev, fmt("10th smallest singular value %.6g did not decrease at N=%g", tenth, n));
    c.expect(std::abs(smin1 - 1.0) <= 1e-10, fmt("sigma_min for phi=1 is %.12g at N=%g", smin1, n));
    prev = tenth;
  }
  const VanishingProfile vp = vanishing_profile(decaying, w, 0.125);
  const VanishingProfile flat = vanishing_profile(one, w, 0.125);
  double flat_dev = 0.0;
  for (double b : flat.band_max) flat_dev = std::max(flat_dev, std::abs(b - 1.0));
  c.expect(vp.vanishing, "profile of (1-|z|^2)^2: " + vp.verdict);
  c.expect(flat_dev <= 1e-8, fmt("profile of 1 deviates from 1 by %.3e", flat_dev));
  return {{"rows", rows},
          {"profile", {{"radii", vp.radii}, {"band_max", vp.band_max}, {"verdict", vp.verdict}}},
          {"flat_profile", {{"band_max", flat.band_max}, {"max_deviation", flat_dev}}}};
}

// 8. block identity
json block_identity(Checker& c) {
  const DiskQuadrature quad = build_rule(24, 48);
  struct Sym {
    const char* label;
    ComplexSymbol f;
    bool analytic;
  };
  const std::vector<Sym> syms = {{"1", [](Complex) { return Complex(1.0); }, true},
                                 {"z", [](Complex z) { return z; }, true},
                                 {"zbar", [](Complex z) { return std::conj(z); }, false},
                                 {"|z|^2", [](Complex z) { return Complex(std::norm(z)); }, false},
                                 {"Re z", [](Complex z) { return Complex(z.real()); }, false}};
  json rows = json::array();
  for (double alpha : {0.0, 1.0}) {
    for (const auto& s : syms) {
      const BlockCheck bc = block_identity_check(s.f, alpha, 8, quad);
      rows.push_back({{"symbol", s.label}, {"alpha", alpha}, {"deviation", bc.deviation},
                      {"c_block_max", bc.c_block_max}, {"rank_one_max", bc.rank_one_max}});
      const std::string tag = std::string(s.label) + fmt(" alpha=%g", alpha);
      c.expect(bc.deviation <= 1e-8, tag + fmt(": deviation %.3e", bc.deviation));
      if (s.analytic) {
        c.expect(bc.c_block_max <= 1e-10, tag + fmt(": C block %.3e", bc.c_block_max));
        c.expect(bc.rank_one_max <= 1e-10, tag + fmt(": rank-one term %.3e", bc.rank_one_max));
      }
    }
  }
  return {{"N", 8}, {"rows", rows}};
}

// 9. invertibility indicators
json invertibility(Checker& c) {
  const DiskQuadrature quad = build_rule(48, 96);
  const DiskQuadrature bq = build_rule(48, 128);
  const std::vector<int> degrees = {8, 12, 16, 20};
  const std::vector<double> thresholds = {0.1, 0.3, 0.5};

  const InvertibilityReport pos =
      invertibility_report([](Complex z) { return 0.2 + 0.8 * chi_right(z); }, 0.0, degrees, thresholds, quad, bq);
  double d05 = 0.0;
  for (auto [r, d] : pos.density_by_threshold) {
    if (r == 0.5) d05 = d;
  }
  c.expect(pos.sigma_floor, "0.2+0.8chi: sigma_min does not settle above the floor");
  c.expect(pos.inf_berezin_harmonic >= 0.2 - 1e-9, fmt("0.2+0.8chi: inf harmonic Berezin %.6g", pos.inf_berezin_harmonic));
  c.expect(pos.inf_berezin_analytic >= 0.2 - 1e-9, fmt("0.2+0.8chi: inf analytic Berezin %.6g", pos.inf_berezin_analytic));
  c.expect(std::abs(d05 - 0.5) <= 0.05, fmt("0.2+0.8chi: boundary density of {phi>0.5} is %.4g, not 0.5 +- 0.05", d05));

  const InvertibilityReport neg =
      invertibility_report([](Complex z) { return 1.0 - std::norm(z); }, 0.0, degrees, thresholds, quad, bq);
  c.expect(neg.verdict == "not invertible", "1-|z|^2: verdict " + neg.verdict);

  const DiskQuadrature aq = build_rule(56, 112);
  const AnalyticInvertibilityReport shift =
      analytic_invertibility_check({0.0, 1.0}, 0.0, {8, 12, 16, 20, 24}, aq);
  c.expect(shift.inf_modulus < 1e-12, fmt("z: inf |phi| = %.3g", shift.inf_modulus));
  c.expect(std::abs(shift.c0 - kShiftSigmaOracle) <= 1e-9, fmt("z: sigma_min at N=8 is %.12g, oracle %.12g", shift.c0, kShiftSigmaOracle));
  for (auto [n, s] : shift.sigma_min) {
    c.expect(s >= kShiftSigmaOracle * (1.0 - 1e-8), fmt("z: sigma_min %.12g below c0 at N=%g", s, n));
  }
  json shift_rows = json::array();
  for (auto [n, s] : shift.sigma_min) shift_rows.push_back({{"N", n}, {"sigma_min", s}});
  return {{"positive_symbol", to_json(pos)},
          {"decaying_symbol", to_json(neg)},
          {"analytic_z", {{"inf_modulus", shift.inf_modulus}, {"c0_oracle", kShiftSigmaOracle}, {"rows", shift_rows},
                          {"bounded_below", shift.bounded_below}}}};
}

// 10. reverse-Carleson catalog
json reverse_carleson(Checker& c) {
  const Weight w = Weight::standard_alpha(0.0);
  const DiskQuadrature quad = build_graded_rule(12, 8, 512);
  std::vector<TestFunction> family;
  for (double m : {0.5, 0.9, 0.97}) {
    for (auto& f : dk_bump_family(0.0, m, 32)) family.push_back(std::move(f));
  }
  const std::vector<std::string> catalog = {"all",
                                            "complement:disk:0,0,0.1",
                                            "disk:0,0,0.5",
                                            "halfplane:0",
                                            "levelset:cos(20*log(1-r)),0",
                                            "union:disk:0,0,0.5;annulus:0.7,1"};
  constexpr double kPositive = 0.05;
  json rows = json::array();
  for (const auto& spec : catalog) {
    const Region g = parse_set_spec(spec);
    const DensityReport bd = boundary_density(g, default_t_grid(), default_u_grid());
    const DensityReport box = box_density(g, 0.5, default_box_grid());
    const ReverseCarlesonResult rc = reverse_carleson_empirical(g, w, family, quad);
    const bool a = bd.inf >= kPositive;
    const bool b = box.inf >= kPositive;
    const bool r = rc.inf_ratio >= kPositive;
    rows.push_back({{"set", spec}, {"boundary_density", bd.inf}, {"box_density", box.inf},
                    {"reverse_carleson", rc.inf_ratio}, {"argmin", rc.argmin}, {"agree", a == b && b == r}});
    c.expect(a == b && b == r, spec + fmt(": indicators disagree (boundary %.3g, box %.3g", bd.inf, box.inf) +
                                   fmt(", reverse Carleson %.3g)", rc.inf_ratio));
    if (spec == "disk:0,0,0.5") c.expect(!a && !b && !r, spec + ": expected to fail all three");
    if (spec == "halfplane:0") {
      c.expect(a && b && r, spec + ": expected to pass all three");
      c.expect(std::abs(bd.inf - 0.5) <= 0.05, spec + fmt(": boundary density %.4g, not 0.5 +- 0.05", bd.inf));
    }
  }
  return {{"threshold", kPositive}, {"family_size", family.size()}, {"sets", rows}};
}

// 11. DSL corpus and precedence
json dsl(Checker& c) {
  std::size_t ok = 0;
  for (const auto& s : dsl_corpus()) {
    const dsl::Expr e = dsl::parse(s);
    const bool same = dsl::parse(dsl::print(e)) == e;
    if (same) ++ok;
    c.expect(same, "round trip failed: " + s);
  }
  const double p1 = dsl::eval(dsl::parse("2^3^2"), 0.0);
  const double p2 = dsl::eval(dsl::parse("-2^2"), 0.0);
  const dsl::Expr r2 = dsl::parse("r^2");
  const dsl::Expr xy = dsl::parse("x*x+y*y");
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    // golden-angle spiral through the disk
    const Complex z = std::polar(std::sqrt((i + 0.5) / 1000.0) * 0.999, i * 2.399963229728653);
    worst = std::max(worst, std::abs(r2(z) - xy(z)));
  }
  c.expect(p1 == 512.0, fmt("2^3^2 = %g", p1));
  c.expect(p2 == -4.0, fmt("-2^2 = %g", p2));
  c.expect(worst <= 1e-14, fmt("r^2 vs x*x+y*y differ by %.3e", worst));
  return {{"corpus_size", dsl_corpus().size()}, {"round_trips", ok}, {"pow_right_assoc", p1}, {"neg_pow", p2},
          {"r2_vs_xy", worst}};
}

struct Spec {
  const char* name;
  double budget;
};

constexpr Spec kSpecs[kCriteria] = {
    {"kernel norm closed form", 10}, {"doubling constant", 30},   {"kernel pointwise bounds", 10},
    {"frame bounds", 60},            {"trace identity", 10},      {"Berezin below norm", 30},
    {"compactness trend", 60},       {"block identity", 20},      {"invertibility indicators", 120},
    {"reverse Carleson catalog", 60}, {"symbol language", 1}};

}  // namespace

CriterionResult run_criterion(int id, const Options& opts) {
  if (id < 1 || id > kCriteria) throw ParameterError("acceptance: criterion id must be in 1..11");
  CriterionResult res;
  res.id = id;
  res.name = kSpecs[id - 1].name;
  res.budget_seconds = kSpecs[id - 1].budget;
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: res.data = kernel_norm(c); break;
      case 2: res.data = doubling(c, opts.seed); break;
      case 3: res.data = kernel_bounds(c); break;
      case 4: res.data = frames(c, opts.seed); break;
      case 5: res.data = trace_identity(c); break;
      case 6: res.data = berezin_vs_norm(c); break;
      case 7: res.data = compactness(c); break;
      case 8: res.data = block_identity(c); break;
      case 9: res.data = invertibility(c); break;
      case 10: res.data = reverse_carleson(c); break;
      default: res.data = dsl(c); break;
    }
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.failures = c.failures;
  res.checks_pass = c.failures.empty();
  if (res.checks_pass && !res.pass()) {
    res.failures.push_back(fmt("runtime %.2f s over budget %.0f s", res.seconds, res.budget_seconds));
  }
  return res;
}

std::vector<CriterionResult> run_all(const Options& opts) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    out.push_back(run_criterion(id, opts));
  }
  return out;
}

std::string summary_line(const CriterionResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %2d %s (%.2f s, budget %.0f s)", r.pass() ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.budget_seconds);
  std::string s = buf;
  for (const auto& f : r.failures) s += "\n       - " + f;
  return s;
}

nlohmann::json to_json(const CriterionResult& r) {
  return {{"id", r.id},         {"name", r.name},         {"pass", r.pass()}, {"checks_pass", r.checks_pass},
          {"seconds", r.seconds}, {"budget_seconds", r.budget_seconds}, {"failures", r.failures}, {"data", r.data}};
}

const std::vector<std::string>& dsl_corpus() {
  static const std::vector<std::string> corpus = {
      "1",
      "0.5",
      "1e-3",
      "2.5e+2",
      "x",
      "y",
      "r",
      "theta",
      "pi",
      "-x",
      "--x",
      "x+y",
      "x-y-r",
      "x*y/r",
      "x/y/2",
      "2^3^2",
      "-2^2",
      "(-2)^2",
      "1-r^2",
      "(1-r^2)^0.5",
      "2*(1-r^2)",
      "(1-r^2)^-0.5",
      "x*x+y*y",
      "abs(x)",
      "exp(-r)",
      "log(1-r)",
      "sin(theta)",
      "cos(3*theta)",
      "sqrt(1-r*r)",
      "re(x)",
      "im(y)",
      "chi_pos(x)",
      "0.2+0.8*chi_pos(x)",
      "1+0.5*r^3*cos(3*theta)",
      "cos(20*log(1-r))",
      "abs(x-0.9)^2+y^2",
      "exp(-1/(1-r))",
      "(1-r)^2*(1+r)^2",
      "x^2-y^2",
      "2*x*y",
      "-(x+y)*-(x-y)",
      "1/(1+r)",
      "r^2^0.5",
      "-r^-2",
      "sqrt(abs(sin(pi*x)))",
      "log(2+cos(theta))*exp(x)",
      "chi_pos(r-0.5)*chi_pos(0.7-r)",
      "(((x)))",
      "1-2+3-4",
      "2*3^2/4-1",
  };
  return corpus;
}

}  // namespace bergman::acceptance
