#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace geim::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

/// minimize c^T x  subject to  A x = b,  x >= 0.
struct LpProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-11;
  double pivot_tol = 1e-9;
  std::size_t max_iterations = 20000;
  std::size_t refactor_every = 32;
};

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  Eigen::VectorXd x;
  /// Simplex multipliers y with A^T y <= c at optimality.
  Eigen::VectorXd duals;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Two-phase revised simplex. Dantzig pricing, switching to Bland's rule
/// after a run of degenerate pivots.
LpSolution solve_standard_form(const LpProblem& problem, const LpOptions& options = {});

/// Discrete Chebyshev approximation: min_c max_i |f_i - (basis c)_i|.
struct ChebyshevFit {
  Eigen::VectorXd coeffs;  ///< in terms of the given basis columns
  Eigen::VectorXd approx;  ///< basis * coeffs
  double deviation = 0.0;  ///< max_i |f_i - approx_i| (primal, achieved)
  double lower_bound = 0.0;  ///< dual objective; equals deviation at optimality
};

/// Throws RankDeficientError if the basis columns are dependent.
ChebyshevFit chebyshev_fit(const Eigen::MatrixXd& basis, const Eigen::VectorXd& f,
                           const LpOptions& options = {});

}  // namespace geim::lp
