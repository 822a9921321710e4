#pragma once

#include "geim/check.hpp"
#include "geim/greedy.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace geim {

struct Projection {
  DiscreteFunction best_approx;
  double dist;
};

/// Best approximation from span(basis): orthogonal projection (Hilbert) or
/// discrete Chebyshev fit on the grid (Sup). Factorizes the basis once.
class SubspaceProjector {
 public:
  /// basis: grid values as columns. Throws RankDeficientError.
  SubspaceProjector(GridPtr grid, const Eigen::MatrixXd& basis, NormMode mode);

  Projection project(const DiscreteFunction& f) const;
  double distance(const DiscreteFunction& f) const;
  std::size_t dim() const noexcept { return static_cast<std::size_t>(basis_.cols()); }

 private:
  GridPtr grid_;
  NormMode mode_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd U_;  // orthonormal columns of W^{1/2} basis (Hilbert)
};

Projection project(const DiscreteFunction& f, std::span<const DiscreteFunction> basis,
                   NormMode mode);

/// Row n holds dist(F[j], X_n) for n = 0..result.size().
Eigen::MatrixXd distance_table(const FunctionSet& F, const GreedyResult& result, NormMode mode);

/// tau_n = max_f dist(f, X_n), n = 0..result.size(); tau_0 = max ||f||.
std::vector<double> compute_tau(const FunctionSet& F, const GreedyResult& result, NormMode mode);

struct WidthOptions {
  bool polish = true;
  std::size_t max_iterations = 150;  ///< descent steps per starting plane
  std::size_t qp_iterations = 50;
  double relative_tol = 1e-13;       ///< stop when the predicted decrease is below this
  std::size_t random_starts = 2;
  std::uint64_t seed = 0;
};

/// L2 widths of the finite set, n = 0..n_max. d_pod uses the top-n left
/// singular subspace; d additionally polishes that subspace (and the
/// optional starting guesses) towards the minimax one. Each d_n is the max
/// distance to the explicit subspace stored in `subspaces[n]`.
struct WidthResult {
  std::vector<double> d;
  std::vector<double> d_pod;
  std::vector<Eigen::MatrixXd> subspaces;  ///< L2-orthonormal grid values
};

/// Throws UnsupportedModeError unless mode is Hilbert. `starts[n]`, when
/// present, is an extra n-column starting basis.
WidthResult compute_widths(const FunctionSet& F, std::size_t n_max,
                           NormMode mode = NormMode::Hilbert, const WidthOptions& options = {},
                           std::span<const Eigen::MatrixXd> starts = {});

struct InfSup {
  double lambda;
  double beta;
};

/// beta_n = smallest singular value of the cross-Gramian between X_n and the
/// span of the selected Riesz representers; Lambda_n = 1 / beta_n.
InfSup lebesgue_hilbert(const GreedyResult& result, std::size_t n);

/// Exact discrete sup-norm Lebesgue constant: max_x sum_k |L(x, k)|.
double lebesgue_sup(const GreedyResult& result, std::size_t n);

/// Operator norm of J_n in the given norm, from the grid matrix.
double lebesgue_operator_norm(const GreedyResult& result, std::size_t n, NormMode mode);

/// max over nonzero probes of ||J_n f|| / ||f||.
double lebesgue_empirical(const GreedyResult& result, const FunctionSet& probes, std::size_t n,
                          NormMode mode);

/// 2^{n-1} max_{i<n} ||q_i||; 0 for n = 0.
double lebesgue_upper(const GreedyResult& result, std::size_t n, NormMode mode);

/// Gram-Schmidt data of the selected phi's (L2).
struct AppendixMatrices {
  Eigen::MatrixXd A;         ///< a(i,j) = <phi_i, phi_j*>, lower triangular
  Eigen::MatrixXd phi_star;  ///< orthonormal system, grid values as columns
};

/// Throws UnsupportedModeError in Sup mode, RankDeficientError if the
/// selected phi's are dependent.
AppendixMatrices appendix_matrix(const GreedyResult& result, NormMode mode = NormMode::Hilbert);

/// gamma_n tau_n <= |a_nn| <= tau_n for n = 1..min(|gamma|, rows) - 1.
std::vector<CheckRecord> check_s1(const Eigen::MatrixXd& A, std::span<const double> tau,
                                  std::span<const double> gamma);
/// sum_{j=n}^{m} a_mj^2 <= tau_n^2 for 1 <= n <= m < rows.
std::vector<CheckRecord> check_s2(const Eigen::MatrixXd& A, std::span<const double> tau);

/// Rows and columns N+1..N+K of A.
Eigen::MatrixXd extract_block(const Eigen::MatrixXd& A, std::size_t N, std::size_t K);

/// Product inequality for a K x K lower-triangular G and the subspace W of
/// R^K spanned by the columns of W_basis (rank m):
///   prod g_ii^2 <= {(1/m) sum |P g_i|^2}^m {(1/(K-m)) sum |g_i - P g_i|^2}^{K-m}.
/// Both sides are reported as K-th roots so they stay representable.
struct ProductInequality {
  double lhs;
  double rhs;
  bool pass;
};
ProductInequality projection_lemma_check(const Eigen::MatrixXd& G, const Eigen::MatrixXd& W_basis,
                                         std::size_t m);

/// Intermediate steps of the Hilbert product-bound argument for one (N,K,m):
/// |g_i| <= tau_{N+1}, |g_i - P g_i| <= d_m with W the restriction of Y_m to
/// the phi* coordinates, the product inequality itself, and the diagonal
/// lower bound prod |g_ii| >= prod gamma tau.
std::vector<CheckRecord> proof_structure_checks(const AppendixMatrices& app,
                                                const Eigen::MatrixXd& Y_m, const GridPtr& grid,
                                                std::span<const double> tau,
                                                std::span<const double> gamma, double d_m,
                                                std::size_t N, std::size_t K, std::size_t m);

struct AnalysisOptions {
  bool widths = true;
  bool appendix = true;
  WidthOptions width;
};

/// Everything the audits compare. Sequences are indexed by n starting at 0;
/// gamma has one entry fewer than tau (it needs the eta of step n).
struct AnalysisReport {
  NormMode mode = NormMode::Hilbert;
  GridPtr grid;
  std::size_t size = 0;
  std::vector<double> tau;
  std::vector<double> d;       ///< min(width, tau) in Hilbert mode; L2 widths in Sup mode
  std::vector<double> d_pod;
  std::vector<std::string> d_source;  ///< "width" or "greedy"
  bool hilbert_surrogate = false;     ///< d holds L2 widths of a Sup run
  std::vector<double> lambda;
  std::vector<double> beta_infsup;  ///< Hilbert only
  std::vector<double> gamma;
  std::vector<double> eta;
  std::vector<double> lebesgue_upper;
  std::vector<double> lambda_empirical;
  Eigen::MatrixXd dist;  ///< dist(F[j], X_n), row n
  Eigen::MatrixXd eps;   ///< eps_n(F[j]), row n
  std::vector<double> selected_residual;  ///< dist(phi_n, X_n), n < size
  std::vector<Eigen::MatrixXd> witness;   ///< subspace realizing d[n] (Hilbert)
  std::optional<AppendixMatrices> appendix;
};

AnalysisReport analyze_run(const FunctionSet& F, const GreedyResult& result,
                           const AnalysisOptions& options = {});

}  // namespace geim
