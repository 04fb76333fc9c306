// bergman-lab: every analysis as a subcommand. Each subcommand's flags map
// one-to-one onto the keys of its config object (--quad-radial sets
// quad_radial), so `run --config file.json` and the flag form are
// interchangeable. Reports always embed the full config.
//
// Exit codes: 0 ok, 1 numerical failure, 2 config error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bergman/acceptance.hpp"
#include "bergman/basis_space.hpp"
#include "bergman/carleson.hpp"
#include "bergman/disk_geometry.hpp"
#include "bergman/invertibility.hpp"
#include "bergman/kernels.hpp"
#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbol_dsl.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/weights.hpp"

using nlohmann::json;
using namespace bergman;

namespace {

struct Report {
  json result;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json pt(Complex z) { return json::array({z.real(), z.imag()}); }

// ---- config defaults -------------------------------------------------------

json io_defaults() { return {{"format", "json"}, {"output", ""}}; }

json common_defaults(int radial, int angular) {
  json d = io_defaults();
  d.update({{"quad_radial", radial}, {"quad_angular", angular}});
  return d;
}

json defaults_for(const std::string& sub) {
  json d;
  if (sub == "a2") {
    d = io_defaults();
    d.update({{"weight", "alpha:0"}, {"refinements", 3}});
  } else if (sub == "lattice") {
    d = io_defaults();
    d.update({{"epsilon", 0.05}, {"cutoff", 0.02}, {"probe_grid", 200}});
  } else if (sub == "kernel-bounds") {
    d = io_defaults();
    d.update({{"r", 0.125}, {"samples", 1000}, {"radii", {0.0, 0.5, 0.7, 0.8, 0.9, 0.95}}, {"directions", 16}});
  } else if (sub == "space-report") {
    d = common_defaults(32, 64);
    d.update({{"weight", "alpha:0"}, {"N", 8}, {"gram_csv", ""}, {"transform_csv", ""}});
  } else if (sub == "toeplitz" || sub == "schatten") {
    d = common_defaults(48, 96);
    d.update({{"weight", "alpha:0"}, {"symbol", ""}, {"atoms", ""}, {"N", sub == "toeplitz" ? 8 : 12},
              {"p", {1.0, 2.0}}, {"epsilon", 0.05}, {"r", 0.125}});
  } else if (sub == "berezin") {
    d = common_defaults(48, 128);
    d.update({{"weight", "alpha:0"}, {"symbol", ""}, {"atoms", ""}, {"points", ""}, {"flavor", "unweighted"},
              {"alpha", 0.0}});
  } else if (sub == "carleson") {
    d = common_defaults(8, 16);
    d.update({{"weight", "alpha:0"}, {"symbol", ""}, {"atoms", ""}, {"r", 0.125},
              {"radii", {0.0, 0.5, 0.8, 0.9, 0.95, 0.99}}, {"directions", 16}, {"tolerance", 0.1}});
  } else if (sub == "reverse-carleson") {
    d = common_defaults(12, 512);
    d.update({{"set", "halfplane:0"}, {"weight", "alpha:0"}, {"panels", 8}, {"box_r", 0.5},
              {"moduli", {0.5, 0.9, 0.97}}, {"directions", 32}, {"threshold", 0.05}});
  } else if (sub == "frame") {
    d = common_defaults(32, 64);
    d.update({{"weight", "alpha:0"}, {"N", 12}, {"epsilon", 0.03125}, {"family_size", 50}, {"bumps", 16},
              {"bump_modulus", 0.9}, {"seed", 17}});
  } else if (sub == "atomic") {
    d = common_defaults(32, 64);
    d.update({{"weight", "alpha:0"}, {"N", 8}, {"epsilon", 0.05}, {"flavor", "K"}, {"count", 5}, {"seed", 17}});
  } else if (sub == "invertibility") {
    d = common_defaults(48, 96);
    d.update({{"alpha", 0.0}, {"symbol", ""}, {"coeffs", ""}, {"N_list", {8, 12, 16, 20}},
              {"thresholds", {0.1, 0.3, 0.5}}, {"floor", 0.05}, {"berezin_angular", 128}});
  } else if (sub == "block-check") {
    d = common_defaults(24, 48);
    d.update({{"alpha", 0.0}, {"N", 8}, {"symbol", "z"}});
  } else if (sub == "suite") {
    d = io_defaults();
    d.update({{"only", json::array()}, {"seed", 17}});
  } else {
    throw ParameterError("unknown subcommand '" + sub + "'");
  }
  d["subcommand"] = sub;
  return d;
}

const std::vector<std::pair<std::string, std::string>> kSubcommands = {
    {"a2", "A2 constant estimate with refinement trend"},
    {"lattice", "generate and certify an epsilon-lattice"},
    {"kernel-bounds", "pointwise bounds of the unweighted harmonic kernel"},
    {"space-report", "Gram conditioning of the truncated space"},
    {"toeplitz", "truncated Toeplitz matrix: singular values, Schatten norms, Berezin and Carleson sups"},
    {"berezin", "Berezin transform on a grid"},
    {"carleson", "Carleson ratio sweep and vanishing profile"},
    {"reverse-carleson", "set densities and empirical reverse-Carleson ratio"},
    {"frame", "lattice frame bounds"},
    {"atomic", "atomic decomposition of random functions"},
    {"schatten", "Schatten norms against lattice sums"},
    {"invertibility", "invertibility indicators for a symbol"},
    {"block-check", "block form of T_phi under the W conjugation"},
    {"suite", "run the acceptance battery"},
};

// Converts a flag string to the JSON type of the default.
json coerce(const json& like, const std::string& key, const std::string& text) {
  try {
    if (like.is_number_integer()) {
      std::size_t pos = 0;
      const long long v = std::stoll(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
      return v;
    }
    if (like.is_number()) {
      std::size_t pos = 0;
      const double v = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
      return v;
    }
    if (like.is_array()) {
      json out = json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        json elem = like.empty() || like[0].is_number_integer() ? json(std::stoll(item)) : json(std::stod(item));
        out.push_back(elem);
      }
      return out;
    }
  } catch (const std::logic_error&) {
    throw ParameterError("--" + key + ": cannot parse '" + text + "'");
  }
  return text;
}

// Checks a loaded config against the defaults: known keys, matching types.
json merge_config(const json& user) {
  if (!user.is_object()) throw ParameterError("config must be a JSON object");
  if (!user.contains("subcommand") || !user["subcommand"].is_string()) {
    throw ParameterError("config needs a string field 'subcommand'");
  }
  json cfg = defaults_for(user["subcommand"].get<std::string>());
  for (const auto& [k, v] : user.items()) {
    if (!cfg.contains(k)) throw ParameterError("config: unknown field '" + k + "'");
    const json& d = cfg[k];
    const bool ok = (d.is_number() && v.is_number()) || (d.is_string() && v.is_string()) ||
                    (d.is_array() && v.is_array()) || (d.is_boolean() && v.is_boolean());
    if (!ok) throw ParameterError("config: field '" + k + "' has the wrong type");
    cfg[k] = v;
  }
  return cfg;
}

// ---- shared builders -------------------------------------------------------

DiskQuadrature quad_of(const json& cfg) {
  return build_rule(cfg["quad_radial"].get<int>(), cfg["quad_angular"].get<int>());
}

std::vector<double> doubles(const json& a) { return a.get<std::vector<double>>(); }

dsl::Expr symbol_expr(const std::string& spec) {
  const std::string src = spec.rfind("dsl:", 0) == 0 ? spec.substr(4) : spec;
  return dsl::parse(src);
}

SymbolMeasure measure_of_config(const json& cfg) {
  const std::string sym = cfg["symbol"];
  const std::string atoms = cfg["atoms"];
  if (sym.empty() && atoms.empty()) throw ParameterError("give --symbol and/or --atoms");
  SymbolMeasure sm;
  if (!sym.empty()) {
    const dsl::Expr e = symbol_expr(sym);
    sm = SymbolMeasure::symbol([e](Complex z) { return e(z); }, sym);
  }
  if (!atoms.empty()) {
    sm.atoms = read_atoms(atoms);
    sm.label = sm.label.empty() ? "atoms:" + atoms : sm.label + "+atoms:" + atoms;
  }
  validate(sm);
  return sm;
}

std::vector<Complex> parse_points(const std::string& s) {
  std::vector<Complex> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw ParameterError("points: expected x,y pairs separated by ';'");
    try {
      out.emplace_back(std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw ParameterError("points: cannot parse '" + item + "'");
    }
  }
  return out;
}

// "c0;c1;..." with each coefficient "re" or "re,im".
std::vector<Complex> parse_coeffs(const std::string& s) {
  std::vector<Complex> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    try {
      const auto comma = item.find(',');
      if (comma == std::string::npos) {
        out.emplace_back(std::stod(item), 0.0);
      } else {
        out.emplace_back(std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1)));
      }
    } catch (const std::logic_error&) {
      throw ParameterError("coeffs: cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw ParameterError("coeffs: empty list");
  return out;
}

ComplexSymbol complex_symbol(const std::string& spec) {
  if (spec == "1") return [](Complex) { return Complex(1.0); };
  if (spec == "z") return [](Complex z) { return z; };
  if (spec == "zbar") return [](Complex z) { return std::conj(z); };
  if (spec == "|z|^2") return [](Complex z) { return Complex(std::norm(z)); };
  if (spec == "re") return [](Complex z) { return Complex(z.real()); };
  if (spec.rfind("poly:", 0) == 0) {
    const auto c = parse_coeffs(spec.substr(5));
    return [c](Complex z) {
      Complex p = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) p = p * z + c[k];
      return p;
    };
  }
  const dsl::Expr e = symbol_expr(spec);
  return [e](Complex z) { return Complex(e(z)); };
}

json sigma_json(const Eigen::VectorXd& s) { return std::vector<double>(s.data(), s.data() + s.size()); }

// ---- handlers ---------------------------------------------------------------

Report do_a2(const json& cfg) {
  const Weight w = parse_weight_spec(cfg["weight"]);
  const int levels = cfg["refinements"];
  if (levels < 1) throw ParameterError("--refinements must be >= 1");
  const A2Report rep = a2_refinement(w, levels);
  Report out{to_json(rep), {"radius", "max_ratio"}, {}};
  for (auto [r, m] : rep.levels.back().per_radius_max) out.csv_rows.push_back({num(r), num(m)});
  return out;
}

Report do_lattice(const json& cfg) {
  LatticeOptions opt;
  opt.cutoff = cfg["cutoff"];
  opt.probe_grid = cfg["probe_grid"].get<std::size_t>();
  const Lattice lat = generate_lattice(cfg["epsilon"], opt);
  json j = to_json(lat);
  j["size"] = lat.points.size();
  j["certified"] = lat.is_certified();
  Report out{j, {"x", "y"}, {}};
  for (Complex p : lat.points) out.csv_rows.push_back({num(p.real()), num(p.imag())});
  return out;
}

Report do_kernel_bounds(const json& cfg) {
  const double r = cfg["r"];
  const std::size_t samples = cfg["samples"];
  json rows = json::array();
  Report out{{}, {"lambda_x", "lambda_y", "r", "lower_margin", "upper_margin"}, {}};
  double lo = 1e300, hi = 0.0, r0 = 1.0;
  bool holds = true;
  for (Complex l : polar_grid(doubles(cfg["radii"]), cfg["directions"])) {
    const KernelBoundsReport rep = kernel_bounds_check(l, r, samples);
    rows.push_back({{"lambda", pt(l)}, {"min_scaled", rep.min_scaled}, {"max_scaled", rep.max_scaled},
                    {"lower_margin", rep.lower_margin}, {"upper_margin", rep.upper_margin}, {"holds", rep.holds},
                    {"empirical_r0", rep.empirical_r0}});
    out.csv_rows.push_back({num(l.real()), num(l.imag()), num(r), num(rep.lower_margin), num(rep.upper_margin)});
    lo = std::min(lo, rep.min_scaled);
    hi = std::max(hi, rep.max_scaled);
    r0 = std::min(r0, rep.empirical_r0);
    holds = holds && rep.holds;
  }
  out.result = {{"rows", rows}, {"min_scaled", lo}, {"max_scaled", hi}, {"holds", holds}, {"empirical_r0", r0}};
  return out;
}

Report do_space_report(const json& cfg) {
  const Weight w = parse_weight_spec(cfg["weight"]);
  const int n = cfg["N"];
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(n), w, quad_of(cfg)));
  auto dump_csv = [](const std::string& path, const Eigen::MatrixXcd& m) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw ParameterError("cannot write " + path);
    write_matrix_csv(f, m);
  };
  dump_csv(cfg["gram_csv"], gs.gram);
  dump_csv(cfg["transform_csv"], gs.transform);
  Report out{{{"N", n},
              {"dim", gs.basis.dim()},
              {"condition_number", gs.condition_number},
              {"gram_residual", gs.residual},
              {"eigenvalues", sigma_json(gs.eigenvalues)}},
             {"index", "eigenvalue"},
             {}};
  for (Eigen::Index k = 0; k < gs.eigenvalues.size(); ++k) out.csv_rows.push_back({std::to_string(k), num(gs.eigenvalues(k))});
  return out;
}

Report do_toeplitz(const json& cfg) {
  const Weight w = parse_weight_spec(cfg["weight"]);
  const SymbolMeasure sm = measure_of_config(cfg);
  const DiskQuadrature quad = quad_of(cfg);
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(cfg["N"]), w, quad));
  const ToeplitzMatrix tm = assemble(sm, gs, quad);
  const Eigen::VectorXd s = singular_values(tm);
  const Lattice lat = generate_lattice(cfg["epsilon"]);
  const DiskQuadrature small = unit_disk_rule(6, 12);
  const BoundednessReport b = carleson_boundedness_report(sm, gs, lat, quad, small, default_berezin_grid(), cfg["r"]);
  json schatten = json::object(), lattice_sum = json::object();
  for (double p : doubles(cfg["p"])) {
    schatten[num(p)] = schatten_norm(s, p);
    lattice_sum[num(p)] = lattice_schatten_sum(sm, lat, w, p, small).sum;
  }
  std::vector<double> diag;
  for (Eigen::Index k = 0; k < tm.matrix.rows(); ++k) diag.push_back(tm.matrix(k, k).real());
  Report out{{{"measure", sm.label},
              {"sigma", sigma_json(s)},
              {"diagonal", diag},
              {"schatten", schatten},
              {"berezin_sup", b.berezin_sup},
              {"carleson_sup", b.carleson_sup},
              {"sampling_sup", b.sampling_sup},
              {"lattice_sum", lattice_sum},
              {"lattice_size", lat.points.size()}},
             {"index", "sigma"},
             {}};
  for (Eigen::Index k = 0; k < s.size(); ++k) out.csv_rows.push_back({std::to_string(k), num(s(k))});
  return out;
}

Report do_berezin(const json& cfg) {
  const std::string flavor = cfg["flavor"];
  const DiskQuadrature quad = quad_of(cfg);
  const std::string pts = cfg["points"];
  const std::vector<Complex> zs = pts.empty() ? default_berezin_grid() : parse_points(pts);
  std::vector<double> vals;
  if (flavor == "unweighted") {
    const Weight w = parse_weight_spec(cfg["weight"]);
    vals = berezin_grid(measure_of_config(cfg), zs, w, quad);
  } else if (flavor == "harmonic" || flavor == "analytic") {
    if (!cfg["atoms"].get<std::string>().empty()) throw ParameterError("--flavor " + flavor + " takes a --symbol only");
    const dsl::Expr e = symbol_expr(cfg["symbol"]);
    const auto f = flavor == "harmonic" ? BerezinFlavor::Harmonic : BerezinFlavor::Analytic;
    for (Complex z : zs) vals.push_back(berezin_alpha([&e](Complex l) { return e(l); }, z, cfg["alpha"], f, quad));
  } else {
    throw ParameterError("--flavor must be unweighted, harmonic or analytic");
  }
  json rows = json::array();
  Report out{{}, {"x", "y", "value"}, {}};
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    rows.push_back({{"z", pt(zs[i])}, {"value", vals[i]}});
    out.csv_rows.push_back({num(zs[i].real()), num(zs[i].imag()), num(vals[i])});
    lo = std::min(lo, vals[i]);
    hi = std::max(hi, vals[i]);
  }
  out.result = {{"rows", rows}, {"inf", lo}, {"sup", hi}};
  return out;
}

Report do_carleson(const json& cfg) {
  const Weight w = parse_weight_spec(cfg["weight"]);
  const SymbolMeasure sm = measure_of_config(cfg);
  const double r = cfg["r"];
  const auto radii = doubles(cfg["radii"]);
  const int dirs = cfg["directions"];
  const DensityReport sweep = carleson_ratio_sweep(sm, w, r, polar_grid(radii, dirs), cfg["quad_radial"], cfg["quad_angular"]);
  const VanishingProfile vp = vanishing_profile(sm, w, r, radii, cfg["tolerance"], cfg["quad_radial"], cfg["quad_angular"]);
  Report out{{{"sweep", to_json(sweep)},
              {"profile", {{"radii", vp.radii}, {"band_max", vp.band_max}, {"vanishing", vp.vanishing}, {"verdict", vp.verdict}}}},
             {"x", "y", "modulus", "ratio"},
             {}};
  for (const auto& e : sweep.entries) out.csv_rows.push_back({num(e.point.real()), num(e.point.imag()), num(e.scale), num(e.ratio)});
  return out;
}

Report do_reverse_carleson(const json& cfg) {
  const Region g = parse_set_spec(cfg["set"]);
  const Weight w = parse_weight_spec(cfg["weight"]);
  const double thr = cfg["threshold"];
  const DensityReport bd = boundary_density(g, default_t_grid(), default_u_grid());
  const DensityReport box = box_density(g, cfg["box_r"], default_box_grid());
  std::vector<TestFunction> fam;
  const double alpha = w.kind() == WeightKind::StandardAlpha ? w.alpha() : 0.0;
  for (double m : doubles(cfg["moduli"])) {
    for (auto& f : dk_bump_family(alpha, m, cfg["directions"])) fam.push_back(std::move(f));
  }
  const DiskQuadrature quad = build_graded_rule(cfg["quad_radial"], cfg["panels"], cfg["quad_angular"]);
  const ReverseCarlesonResult rc = reverse_carleson_empirical(g, w, fam, quad);
  const bool a = bd.inf >= thr, b = box.inf >= thr, c = rc.inf_ratio >= thr;
  Report out{{{"boundary_density", to_json(bd)},
              {"box_density", to_json(box)},
              {"reverse_carleson", {{"inf_ratio", rc.inf_ratio}, {"argmin", rc.argmin}, {"family_size", fam.size()}}},
              {"positive", {{"boundary_density", a}, {"box_density", b}, {"reverse_carleson", c}}},
              {"agree", a == b && b == c}},
             {"indicator", "value", "positive"},
             {}};
  out.csv_rows = {{"boundary_density", num(bd.inf), a ? "1" : "0"},
                  {"box_density", num(box.inf), b ? "1" : "0"},
                  {"reverse_carleson", num(rc.inf_ratio), c ? "1" : "0"}};
  return out;
}

Report do_frame(const json& cfg) {
  const Weight w = parse_weight_spec(cfg["weight"]);
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(cfg["N"]), w, quad_of(cfg)));
  auto fam = random_harmonic_family(gs.basis, cfg["family_size"], cfg["seed"].get<std::uint64_t>());
  for (auto& k : kernel_bump_family(gs, cfg["bump_modulus"], cfg["bumps"])) fam.push_back(std::move(k));
  const double eps = cfg["epsilon"];
  const Lattice lat = generate_lattice(eps);
  const FrameBounds fb = frame_bounds(lat, lattice_disk_masses(lat.points, w, eps, unit_disk_rule(6, 12)), gs, fam);
  Report out{{{"c1", fb.c1}, {"c2", fb.c2}, {"ratio", fb.ratio()}, {"lattice_size", fb.lattice_size},
              {"per_function", fb.per_function}},
             {"function", "ratio"},
             {}};
  for (std::size_t i = 0; i < fam.size(); ++i) out.csv_rows.push_back({fam[i].label, num(fb.per_function[i])});
  return out;
}

Report do_atomic(const json& cfg) {
  const Weight w = parse_weight_spec(cfg["weight"]);
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(cfg["N"]), w, quad_of(cfg)));
  const std::string fl = cfg["flavor"];
  if (fl != "R" && fl != "K") throw ParameterError("--flavor must be R or K");
  const double eps = cfg["epsilon"];
  const Lattice lat = generate_lattice(eps);
  const auto masses = lattice_disk_masses(lat.points, w, eps, unit_disk_rule(6, 12));
  const Eigen::MatrixXcd atoms = atom_matrix(lat, masses, gs, fl == "R" ? AtomFlavor::R : AtomFlavor::K);
  json rows = json::array();
  Report out{{}, {"function", "f_norm", "coefficient_norm", "residual", "rank"}, {}};
  double worst_ratio = 0.0;
  for (const auto& f : random_harmonic_family(gs.basis, cfg["count"], cfg["seed"].get<std::uint64_t>())) {
    const AtomicResult res = atomic_decompose(f.coeffs, atoms, gs);
    rows.push_back({{"function", f.label}, {"f_norm", res.f_norm}, {"coefficient_norm", res.coefficient_norm},
                    {"residual", res.residual}, {"numerical_rank", res.numerical_rank}, {"ridge_used", res.ridge_used}});
    out.csv_rows.push_back({f.label, num(res.f_norm), num(res.coefficient_norm), num(res.residual),
                            std::to_string(res.numerical_rank)});
    worst_ratio = std::max(worst_ratio, res.coefficient_norm / res.f_norm);
  }
  out.result = {{"flavor", fl}, {"lattice_size", lat.points.size()}, {"rows", rows}, {"max_coefficient_ratio", worst_ratio}};
  return out;
}

Report do_schatten(const json& cfg) {
  const Weight w = parse_weight_spec(cfg["weight"]);
  const SymbolMeasure sm = measure_of_config(cfg);
  const DiskQuadrature quad = quad_of(cfg);
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(cfg["N"]), w, quad));
  const Eigen::VectorXd s = singular_values(assemble(sm, gs, quad));
  const Lattice lat = generate_lattice(cfg["epsilon"]);
  const DiskQuadrature small = unit_disk_rule(6, 12);
  json rows = json::array();
  Report out{{}, {"p", "matrix_norm", "lattice_sum"}, {}};
  for (double p : doubles(cfg["p"])) {
    const double m = schatten_norm(s, p);
    const LatticeSum ls = lattice_schatten_sum(sm, lat, w, p, small);
    const double lp = std::pow(ls.sum, 1.0 / p);
    rows.push_back({{"p", p}, {"matrix_norm", m}, {"lattice_norm", lp}, {"lattice_sum", ls.sum},
                    {"nonzero_terms", ls.nonzero_terms}, {"ratio", lp > 0.0 ? m / lp : 0.0}});
    out.csv_rows.push_back({num(p), num(m), num(ls.sum)});
  }
  out.result = {{"measure", sm.label}, {"N", gs.basis.degree}, {"lattice_size", lat.points.size()}, {"rows", rows}};
  return out;
}

Report do_invertibility(const json& cfg) {
  const double alpha = cfg["alpha"];
  const auto degrees = cfg["N_list"].get<std::vector<int>>();
  const DiskQuadrature quad = quad_of(cfg);
  const std::string coeffs = cfg["coeffs"];
  const std::string sym = cfg["symbol"];
  if (coeffs.empty() == sym.empty()) throw ParameterError("give exactly one of --symbol and --coeffs");
  Report out{{}, {"N", "sigma_min_harmonic", "sigma_min_analytic"}, {}};
  if (!coeffs.empty()) {
    const AnalyticInvertibilityReport rep = analytic_invertibility_check(parse_coeffs(coeffs), alpha, degrees, quad);
    json rows = json::array();
    for (auto [n, s] : rep.sigma_min) {
      rows.push_back({{"N", n}, {"sigma_min", s}});
      out.csv_rows.push_back({std::to_string(n), "", num(s)});
    }
    out.result = {{"analytic", true}, {"inf_modulus", rep.inf_modulus}, {"rows", rows}, {"c0", rep.c0},
                  {"min_sigma", rep.min_sigma}, {"bounded_below", rep.bounded_below}};
    return out;
  }
  const dsl::Expr e = symbol_expr(sym);
  const DiskQuadrature bq = build_rule(cfg["quad_radial"], cfg["berezin_angular"]);
  const InvertibilityReport rep = invertibility_report([e](Complex z) { return e(z); }, alpha, degrees,
                                                       doubles(cfg["thresholds"]), quad, bq, cfg["floor"]);
  out.result = to_json(rep);
  for (const auto& r : rep.rows) out.csv_rows.push_back({std::to_string(r.degree), num(r.sigma_min_harmonic), num(r.sigma_min_analytic)});
  return out;
}

Report do_block_check(const json& cfg) {
  const BlockCheck bc = block_identity_check(complex_symbol(cfg["symbol"]), cfg["alpha"], cfg["N"], quad_of(cfg));
  Report out{{{"deviation", bc.deviation}, {"c_block_max", bc.c_block_max}, {"rank_one_max", bc.rank_one_max}},
             {"quantity", "value"},
             {}};
  out.csv_rows = {{"deviation", num(bc.deviation)}, {"c_block_max", num(bc.c_block_max)}, {"rank_one_max", num(bc.rank_one_max)}};
  return out;
}

Report do_suite(const json& cfg) {
  acceptance::Options opt;
  opt.seed = cfg["seed"];
  opt.only = cfg["only"].get<std::vector<int>>();
  json rows = json::array();
  Report out{{}, {"id", "name", "pass"}, {}};
  int failed = 0;
  for (const auto& r : acceptance::run_all(opt)) {
    // timings go to stderr only, so the report stays identical across runs
    std::cerr << acceptance::summary_line(r) << "\n";
    json row = acceptance::to_json(r);
    row.erase("seconds");
    rows.push_back(row);
    out.csv_rows.push_back({std::to_string(r.id), r.name, r.pass() ? "PASS" : "FAIL"});
    if (!r.pass()) ++failed;
  }
  out.result = {{"criteria", rows}, {"failed", failed}};
  return out;
}

Report dispatch(const json& cfg) {
  static const std::map<std::string, Report (*)(const json&)> table = {
      {"a2", do_a2},
      {"lattice", do_lattice},
      {"kernel-bounds", do_kernel_bounds},
      {"space-report", do_space_report},
      {"toeplitz", do_toeplitz},
      {"schatten", do_schatten},
      {"berezin", do_berezin},
      {"carleson", do_carleson},
      {"reverse-carleson", do_reverse_carleson},
      {"frame", do_frame},
      {"atomic", do_atomic},
      {"invertibility", do_invertibility},
      {"block-check", do_block_check},
      {"suite", do_suite},
  };
  return table.at(cfg["subcommand"].get<std::string>())(cfg);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void emit(const json& cfg, const Report& rep) {
  const std::string format = cfg["format"];
  std::ostringstream os;
  if (format == "json") {
    os << json{{"config", cfg}, {"result", rep.result}}.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < rep.csv_header.size(); ++i) os << (i ? "," : "") << csv_field(rep.csv_header[i]);
    os << "\n";
    for (const auto& row : rep.csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
      os << "\n";
    }
  }
  const std::string path = cfg["output"];
  if (path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(path);
    if (!f) throw ParameterError("cannot write output file " + path);
    f << os.str();
  }
}

// Validates fields that every handler relies on before any work starts.
void check_common(const json& cfg) {
  const std::string format = cfg["format"];
  if (format != "json" && format != "csv") throw ParameterError("--format must be json or csv");
}

std::string flag_of(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParameterError("cannot open config file " + path);
  try {
    return merge_config(json::parse(f));
  } catch (const json::exception& e) {
    throw ParameterError("config " + path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  parallel::apply_thread_cap_from_env();
  CLI::App app{"Numerical lab for weighted harmonic Bergman spaces"};
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    subs[name] = sub;
    const json defaults = defaults_for(name);
    for (const auto& [key, val] : defaults.items()) {
      if (key == "subcommand") continue;
      const std::string flag = flag_of(key);
      std::string shown = val.is_string() ? val.get<std::string>() : val.dump();
      if (val.is_array()) {
        shown.clear();
        for (std::size_t i = 0; i < val.size(); ++i) shown += (i ? "," : "") + val[i].dump();
      }
      sub->add_option("--" + flag, flag_values[name][key], "default: " + (shown.empty() ? "(none)" : shown));
    }
  }
  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run a saved config");
  run->add_option("--config", config_path, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  json cfg;
  try {
    if (run->parsed()) {
      cfg = load_config(config_path);
    } else {
      for (const auto& [name, sub] : subs) {
        if (!sub->parsed()) continue;
        cfg = defaults_for(name);
        for (const auto& [key, text] : flag_values[name]) {
          if (sub->count("--" + flag_of(key)) == 0) continue;
          cfg[key] = coerce(cfg[key], key, text);
        }
      }
    }
    check_common(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    emit(cfg, dispatch(cfg));
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
