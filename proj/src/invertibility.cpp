#include "bergman/invertibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bergman/carleson.hpp"
#include "bergman/parallel.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/weights.hpp"

namespace bergman {

std::pair<ComplexSymbol, ComplexSymbol> conjugate_symbols(const ComplexSymbol& phi) {
  ComplexSymbol star = [phi](Complex z) { return phi(std::conj(z)); };
  ComplexSymbol conj = [phi](Complex z) { return std::conj(phi(std::conj(z))); };
  return {star, conj};
}

Eigen::MatrixXcd AnalyticSystem::rows(bool conjugate_nodes) const {
  Eigen::MatrixXcd e(static_cast<Eigen::Index>(nodes.size()), degree + 1);
  parallel::for_each_index(nodes.size(), [&](std::size_t i) {
    const Complex z = conjugate_nodes ? std::conj(nodes[i]) : nodes[i];
    Complex p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      e(static_cast<Eigen::Index>(i), k) = p / norms[static_cast<std::size_t>(k)];
      p *= z;
    }
  });
  return e;
}

AnalyticSystem analytic_system(double alpha, int degree, const DiskQuadrature& quad) {
  if (degree < 0) throw ParameterError("analytic_system: degree must be nonnegative");
  const Weight w = Weight::standard_alpha(alpha);
  AnalyticSystem sys;
  sys.alpha = alpha;
  sys.degree = degree;
  sys.nodes = quad.nodes;
  sys.measure.resize(quad.size());
  parallel::for_each_index(quad.size(), [&](std::size_t i) { sys.measure[i] = quad.weights[i] * w(quad.nodes[i]); });
  for (int k = 0; k <= degree; ++k) {
    const double n2 = parallel::reduce_sum<double>(quad.size(), [&](std::size_t i) {
      return sys.measure[i] * std::pow(std::norm(sys.nodes[i]), k);
    });
    sys.norms.push_back(std::sqrt(n2));
  }
  return sys;
}

namespace {

std::vector<Complex> symbol_measure(const ComplexSymbol& phi, const AnalyticSystem& sys) {
  std::vector<Complex> w(sys.nodes.size());
  parallel::for_each_index(sys.nodes.size(), [&](std::size_t i) { w[i] = sys.measure[i] * phi(sys.nodes[i]); });
  return w;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

Eigen::MatrixXcd analytic_toeplitz(const ComplexSymbol& phi, const AnalyticSystem& sys) {
  const Eigen::MatrixXcd e = sys.rows(false);
  return parallel::weighted_cross(e, e, symbol_measure(phi, sys));
}

Eigen::MatrixXcd hankel_matrix(const ComplexSymbol& phi, const AnalyticSystem& sys) {
  return parallel::weighted_cross(sys.rows(false), sys.rows(true), symbol_measure(phi, sys));
}

Eigen::MatrixXcd rank_one_matrix(const ComplexSymbol& g, const AnalyticSystem& sys) {
  const Eigen::MatrixXcd e = sys.rows(false);
  std::vector<Complex> w(sys.nodes.size());
  parallel::for_each_index(sys.nodes.size(), [&](std::size_t i) { w[i] = sys.measure[i] * std::conj(g(sys.nodes[i])); });
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(sys.degree + 1, sys.degree + 1);
  // <e_k, g> = sum w_i e_k(z_i); the constant row carries <1, e_0> = ||1||.
  const Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(static_cast<Eigen::Index>(sys.nodes.size()), 1);
  m.row(0) = parallel::weighted_cross(ones, e, w).row(0) * sys.norms[0];
  return m;
}

BlockDecomposition block_decomposition(const ComplexSymbol& phi, double alpha, int degree, const DiskQuadrature& quad) {
  if (degree < 1) throw ParameterError("block_decomposition: degree must be >= 1");
  const AnalyticSystem sys = analytic_system(alpha, degree, quad);
  const auto [star, conj_sym] = conjugate_symbols(phi);
  const ComplexSymbol phi_bar = [phi](Complex z) { return std::conj(phi(z)); };
  const int n = degree;

  const Eigen::MatrixXcd t_phi = analytic_toeplitz(phi, sys);
  const Eigen::MatrixXcd r_bar = rank_one_matrix(phi_bar, sys);
  const Eigen::MatrixXcd h_phi = hankel_matrix(phi, sys);
  const Eigen::MatrixXcd r_conj = rank_one_matrix(conj_sym, sys);
  const Eigen::MatrixXcd h_star = hankel_matrix(star, sys);
  const Eigen::MatrixXcd t_star = analytic_toeplitz(star, sys);

  BlockDecomposition bd;
  bd.degree = n;
  bd.a = (t_phi - r_bar).block(1, 1, n, n);
  bd.b = (h_phi - r_conj).block(1, 0, n, n + 1);
  bd.c = h_star.block(0, 1, n + 1, n);
  bd.d = t_star;
  bd.assembled.resize(2 * n + 1, 2 * n + 1);
  bd.assembled << bd.a, bd.b, bd.c, bd.d;
  bd.rank_one_on_z_la = max_abs(r_bar.block(0, 1, 1, n));
  return bd;
}

Eigen::MatrixXcd direct_w_conjugate(const ComplexSymbol& phi, const GramSystem& gs, const DiskQuadrature& quad) {
  const int n = gs.basis.degree;
  const Eigen::MatrixXcd m = assemble_complex(phi, gs, quad).matrix;
  // Orthonormal basis e = m Q; normalized monomials are e S with S = G^{1/2} D^{-1/2}.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gs.gram);
  const Eigen::MatrixXcd half =
      eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() * eig.eigenvectors().adjoint();
  const Eigen::VectorXd dinv = gs.gram.diagonal().real().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXcd s = half * dinv.asDiagonal();
  const Eigen::MatrixXcd mn = s.adjoint() * m * s;
  std::vector<int> order;
  for (int k = 1; k <= n; ++k) order.push_back(k);
  order.push_back(0);
  for (int k = 1; k <= n; ++k) order.push_back(n + k);
  Eigen::MatrixXcd out(2 * n + 1, 2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) {
    for (int j = 0; j <= 2 * n; ++j) out(i, j) = mn(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  return out;
}

BlockCheck block_identity_check(const ComplexSymbol& phi, double alpha, int degree, const DiskQuadrature& quad) {
  const BlockDecomposition bd = block_decomposition(phi, alpha, degree, quad);
  const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(degree), Weight::standard_alpha(alpha), quad));
  const Eigen::MatrixXcd direct = direct_w_conjugate(phi, gs, quad);
  BlockCheck chk;
  chk.deviation = max_abs(direct - bd.assembled);
  chk.c_block_max = max_abs(bd.c);
  chk.rank_one_max = bd.rank_one_on_z_la;
  return chk;
}

std::vector<Complex> invertibility_berezin_grid() { return polar_grid({0.5, 0.8, 0.9, 0.95, 0.99}, 16); }

InvertibilityReport invertibility_report(const std::function<double(Complex)>& phi, double alpha,
                                         const std::vector<int>& degrees, const std::vector<double>& thresholds,
                                         const DiskQuadrature& quad, const DiskQuadrature& berezin_quad,
                                         double floor) {
  if (degrees.size() < 2) throw ParameterError("invertibility_report: need at least two truncation degrees");
  const Weight w = Weight::standard_alpha(alpha);
  const SymbolMeasure sm = SymbolMeasure::symbol(phi, "phi");
  InvertibilityReport rep;
  rep.alpha = alpha;
  rep.floor = floor;
  for (int n : degrees) {
    const GramSystem gs = orthonormalize(gram_matrix(TruncatedBasis(n), w, quad));
    const Eigen::VectorXd sh = singular_values(assemble(sm, gs, quad));
    const AnalyticSystem sys = analytic_system(alpha, n, quad);
    const Eigen::MatrixXcd ta = analytic_toeplitz([&](Complex z) { return Complex(phi(z)); }, sys);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (ta + ta.adjoint()), Eigen::EigenvaluesOnly);
    rep.rows.push_back({n, sh(sh.size() - 1), eig.eigenvalues().cwiseAbs().minCoeff()});
  }
  rep.inf_berezin_harmonic = rep.inf_berezin_analytic = std::numeric_limits<double>::infinity();
  for (Complex z : invertibility_berezin_grid()) {
    rep.inf_berezin_harmonic =
        std::min(rep.inf_berezin_harmonic, berezin_alpha(phi, z, alpha, BerezinFlavor::Harmonic, berezin_quad));
    rep.inf_berezin_analytic =
        std::min(rep.inf_berezin_analytic, berezin_alpha(phi, z, alpha, BerezinFlavor::Analytic, berezin_quad));
  }
  double best_density = 0.0;
  for (double r : thresholds) {
    const Region g = IndicatorSet{[phi, r](Complex z) { return phi(z) > r; }, "phi>" + std::to_string(r)};
    const double d = boundary_density(g, default_t_grid(), default_u_grid()).inf;
    rep.density_by_threshold.emplace_back(r, d);
    best_density = std::max(best_density, d);
  }

  auto stable = [&](auto get) {
    const double last = get(rep.rows.back());
    const double prev = get(rep.rows[rep.rows.size() - 2]);
    return last >= floor && std::abs(last - prev) <= 0.1 * prev;
  };
  auto decays = [&](auto get) {
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
      if (!(get(rep.rows[k]) < get(rep.rows[k - 1]))) return false;
    }
    return get(rep.rows.back()) < 0.9 * get(rep.rows.front());
  };
  auto harmonic = [](const InvertibilityRow& r) { return r.sigma_min_harmonic; };
  auto analytic = [](const InvertibilityRow& r) { return r.sigma_min_analytic; };
  rep.sigma_floor = stable(harmonic) && stable(analytic);
  rep.sigma_decay = decays(harmonic) && decays(analytic);
  rep.berezin_positive = std::min(rep.inf_berezin_harmonic, rep.inf_berezin_analytic) >= floor;
  rep.density_positive = best_density >= floor;
  const bool all_pos = rep.sigma_floor && rep.berezin_positive && rep.density_positive;
  const bool all_neg = rep.sigma_decay && !rep.berezin_positive && !rep.density_positive;
  rep.consistent = all_pos || all_neg;
  rep.verdict = all_pos ? "invertible" : all_neg ? "not invertible" : "inconclusive";
  return rep;
}

nlohmann::json to_json(const InvertibilityReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"N", r.degree}, {"sigma_min_harmonic", r.sigma_min_harmonic}, {"sigma_min_analytic", r.sigma_min_analytic}});
  }
  nlohmann::json dens = nlohmann::json::array();
  for (auto [r, d] : rep.density_by_threshold) dens.push_back({{"threshold", r}, {"boundary_density", d}});
  return {{"alpha", rep.alpha},
          {"rows", rows},
          {"inf_berezin_harmonic", rep.inf_berezin_harmonic},
          {"inf_berezin_analytic", rep.inf_berezin_analytic},
          {"density", dens},
          {"floor", rep.floor},
          {"indicators",
           {{"sigma_floor", rep.sigma_floor},
            {"sigma_decay", rep.sigma_decay},
            {"berezin_positive", rep.berezin_positive},
            {"density_positive", rep.density_positive}}},
          {"consistent", rep.consistent},
          {"verdict", rep.verdict}};
}

Eigen::VectorXd restricted_singular_values(const std::vector<Complex>& coeffs, double alpha, int degree,
                                           const DiskQuadrature& quad) {
  std::size_t d = coeffs.size();
  while (d > 1 && coeffs[d - 1] == Complex(0.0)) --d;
  if (d == 0) throw ParameterError("restricted_singular_values: empty coefficient list");
  const int extra = static_cast<int>(d) - 1;
  const Weight w = Weight::standard_alpha(alpha);
  const GramSystem small = orthonormalize(gram_matrix(TruncatedBasis(degree), w, quad));
  const GramSystem large = orthonormalize(gram_matrix(TruncatedBasis(degree + extra), w, quad));
  std::vector<Complex> lw(quad.size());
  parallel::for_each_index(quad.size(), [&](std::size_t i) {
    Complex p = 0.0;
    for (std::size_t k = d; k-- > 0;) p = p * quad.nodes[i] + coeffs[k];
    lw[i] = quad.weights[i] * w(quad.nodes[i]) * p;
  });
  const Eigen::MatrixXcd x =
      parallel::weighted_cross(large.basis.rows(quad.nodes), small.basis.rows(quad.nodes), lw);
  const Eigen::MatrixXcd m = large.transform.adjoint() * x * small.transform;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  if (svd.info() != Eigen::Success) throw NumericalError("restricted_singular_values: SVD did not converge");
  return svd.singularValues();
}

AnalyticInvertibilityReport analytic_invertibility_check(const std::vector<Complex>& coeffs, double alpha,
                                                         const std::vector<int>& degrees, const DiskQuadrature& quad) {
  if (degrees.empty()) throw ParameterError("analytic_invertibility_check: no truncation degrees");
  AnalyticInvertibilityReport rep;
  rep.coeffs = coeffs;
  rep.inf_modulus = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j < 256; ++j) {
      const Complex z = std::polar(i / 200.0, 2.0 * kPi * j / 256.0);
      Complex p = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 0;) p = p * z + coeffs[k];
      rep.inf_modulus = std::min(rep.inf_modulus, std::abs(p));
    }
  }
  for (int n : degrees) {
    const Eigen::VectorXd s = restricted_singular_values(coeffs, alpha, n, quad);
    rep.sigma_min.emplace_back(n, s(s.size() - 1));
  }
  rep.c0 = rep.sigma_min.front().second;
  rep.min_sigma = rep.c0;
  for (const auto& [n, s] : rep.sigma_min) rep.min_sigma = std::min(rep.min_sigma, s);
  rep.bounded_below = rep.c0 > 0.0 && rep.min_sigma >= 0.5 * rep.c0;
  return rep;
}

}  // namespace bergman
