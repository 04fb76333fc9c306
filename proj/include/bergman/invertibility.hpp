#pragma once

// Invertibility indicators on standard-weight spaces: Berezin infima,
// minimal singular values across truncations, level-set densities, and the
// block form of T_phi on z L_a ⊕ L_a.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "bergman/basis_space.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

using ComplexSymbol = std::function<Complex(Complex)>;

/// (phi_star, phi_conj) with phi_star(z) = phi(conj z) and
/// phi_conj(z) = conj(phi(conj z)).
std::pair<ComplexSymbol, ComplexSymbol> conjugate_symbols(const ComplexSymbol& phi);

/// Normalized analytic monomials e_k = z^k / ||z^k|| (k = 0..N) in
/// L^2(omega_alpha), norms taken on the given rule.
struct AnalyticSystem {
  double alpha = 0.0;
  int degree = 0;
  std::vector<double> norms;  ///< ||z^k||
  std::vector<Complex> nodes;
  std::vector<double> measure;  ///< rule weight times omega_alpha at each node

  Eigen::MatrixXcd rows(bool conjugate_nodes) const;  ///< e_k at nodes (or at conj(nodes))
};

AnalyticSystem analytic_system(double alpha, int degree, const DiskQuadrature& quad);

/// [j,k] = <phi e_k, e_j>.
Eigen::MatrixXcd analytic_toeplitz(const ComplexSymbol& phi, const AnalyticSystem& sys);

/// [j,k] = <phi U e_k, e_j> with U f(z) = f(conj z).
Eigen::MatrixXcd hankel_matrix(const ComplexSymbol& phi, const AnalyticSystem& sys);

/// Matrix of h -> <h, g> 1 on the analytic basis: only row 0 is nonzero
/// (e_0 = 1 because ||1|| = 1 for omega_alpha).
Eigen::MatrixXcd rank_one_matrix(const ComplexSymbol& g, const AnalyticSystem& sys);

struct BlockDecomposition {
  int degree = 0;
  Eigen::MatrixXcd a;  ///< T_phi - 1⊗conj(phi) on z L_a (N x N)
  Eigen::MatrixXcd b;  ///< H_phi - 1⊗phi_conj, L_a -> z L_a (N x (N+1))
  Eigen::MatrixXcd c;  ///< H_{phi_star}, z L_a -> L_a ((N+1) x N)
  Eigen::MatrixXcd d;  ///< T_{phi_star} on L_a
  Eigen::MatrixXcd assembled;
  /// Largest entry of (1⊗conj(phi)) on z L_a columns.
  double rank_one_on_z_la = 0.0;
};

BlockDecomposition block_decomposition(const ComplexSymbol& phi, double alpha, int degree, const DiskQuadrature& quad);

/// Harmonic-truncation T_phi conjugated by W (identity on z..z^N, U on the
/// rest, constant sent to L_a), in normalized monomials, ordered
/// [z..z^N | 1, z..z^N].
Eigen::MatrixXcd direct_w_conjugate(const ComplexSymbol& phi, const GramSystem& gs, const DiskQuadrature& quad);

struct BlockCheck {
  double deviation = 0.0;      ///< max |blocks - W T W*|
  double c_block_max = 0.0;    ///< max |C|
  double rank_one_max = 0.0;   ///< max |(1⊗conj(phi)) on z L_a|
};

BlockCheck block_identity_check(const ComplexSymbol& phi, double alpha, int degree, const DiskQuadrature& quad);

/// 16 rays x radii {0.5, 0.8, 0.9, 0.95, 0.99}.
std::vector<Complex> invertibility_berezin_grid();

struct InvertibilityRow {
  int degree = 0;
  double sigma_min_harmonic = 0.0;
  double sigma_min_analytic = 0.0;
};

struct InvertibilityReport {
  double alpha = 0.0;
  std::vector<InvertibilityRow> rows;
  double inf_berezin_harmonic = 0.0;
  double inf_berezin_analytic = 0.0;
  std::vector<std::pair<double, double>> density_by_threshold;  ///< (r, inf boundary density of {phi > r})
  double floor = 0.05;
  bool sigma_floor = false;   ///< sigma_min stabilizes above the floor
  bool sigma_decay = false;   ///< sigma_min decreases at every step
  bool berezin_positive = false;
  bool density_positive = false;  ///< some threshold has density >= floor
  bool consistent = false;
  std::string verdict;  ///< "invertible", "not invertible", "inconclusive"
};

/// Indicator table for a nonnegative bounded symbol. `quad` is the
/// assembly rule, `berezin_quad` the rule for the substituted Berezin
/// integrals.
InvertibilityReport invertibility_report(const std::function<double(Complex)>& phi, double alpha,
                                         const std::vector<int>& degrees, const std::vector<double>& thresholds,
                                         const DiskQuadrature& quad, const DiskQuadrature& berezin_quad,
                                         double floor = 0.05);

nlohmann::json to_json(const InvertibilityReport& rep);

/// Singular values of T_phi restricted to V_N, mapping into V_{N+deg phi}
/// (exact for polynomial phi), in orthonormal bases.
Eigen::VectorXd restricted_singular_values(const std::vector<Complex>& coeffs, double alpha, int degree,
                                           const DiskQuadrature& quad);

struct AnalyticInvertibilityReport {
  std::vector<Complex> coeffs;
  double inf_modulus = 0.0;  ///< min |phi| on a polar grid up to |z| = 1
  std::vector<std::pair<int, double>> sigma_min;  ///< (N, sigma_min)
  double c0 = 0.0;           ///< sigma_min at the first N
  double min_sigma = 0.0;    ///< min over all N
  bool bounded_below = false;  ///< c0 > 0 and min_sigma >= c0 / 2
};

AnalyticInvertibilityReport analytic_invertibility_check(const std::vector<Complex>& coeffs, double alpha,
                                                         const std::vector<int>& degrees, const DiskQuadrature& quad);

}  // namespace bergman
