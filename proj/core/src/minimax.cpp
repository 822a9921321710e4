#include "geim/minimax.hpp"

#include "geim/error.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace geim::lp {

namespace {

struct Tableau {
  const Eigen::MatrixXd& A;  // rows x (original + artificial) columns
  const Eigen::VectorXd& b;
  std::vector<Eigen::Index> basis;
  std::vector<bool> in_basis;
  Eigen::MatrixXd Binv;
  std::size_t since_refactor = 0;

  void refactor() {
    const auto m = A.rows();
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = A.col(basis[static_cast<std::size_t>(i)]);
    Binv = B.partialPivLu().inverse();
    since_refactor = 0;
  }

  void pivot(Eigen::Index row, Eigen::Index entering, const Eigen::VectorXd& u) {
    const double pr = u[row];
    Binv.row(row) /= pr;
    for (Eigen::Index i = 0; i < Binv.rows(); ++i)
      if (i != row && u[i] != 0.0) Binv.row(i) -= u[i] * Binv.row(row);
    in_basis[static_cast<std::size_t>(basis[static_cast<std::size_t>(row)])] = false;
    basis[static_cast<std::size_t>(row)] = entering;
    in_basis[static_cast<std::size_t>(entering)] = true;
    ++since_refactor;
  }
};

enum class PhaseResult { Optimal, Unbounded, IterationLimit };

// Minimizes cost over the columns flagged in `allowed`.
PhaseResult run_phase(Tableau& t, const Eigen::VectorXd& cost, const std::vector<bool>& allowed,
                      const LpOptions& opt, std::size_t& iterations) {
  const auto m = t.A.rows();
  const auto ncols = t.A.cols();
  std::size_t degenerate_run = 0;
  const std::size_t bland_after = static_cast<std::size_t>(2 * m + 10);

  while (true) {
    if (iterations >= opt.max_iterations) return PhaseResult::IterationLimit;
    if (t.since_refactor >= opt.refactor_every) t.refactor();

    Eigen::VectorXd cB(m);
    for (Eigen::Index i = 0; i < m; ++i) cB[i] = cost[t.basis[static_cast<std::size_t>(i)]];
    const Eigen::VectorXd y = t.Binv.transpose() * cB;
    const Eigen::VectorXd xB = t.Binv * t.b;
    const bool bland = degenerate_run >= bland_after;

    Eigen::Index entering = -1;
    double best = -opt.optimality_tol;
    for (Eigen::Index j = 0; j < ncols; ++j) {
      if (!allowed[static_cast<std::size_t>(j)] || t.in_basis[static_cast<std::size_t>(j)]) continue;
      const double d = cost[j] - y.dot(t.A.col(j));
      if (d < best) {
        entering = j;
        if (bland) break;
        best = d;
      }
    }
    if (entering < 0) return PhaseResult::Optimal;

    const Eigen::VectorXd u = t.Binv * t.A.col(entering);
    Eigen::Index row = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (u[i] <= opt.pivot_tol) continue;
      const double r = std::max(xB[i], 0.0) / u[i];
      const bool better =
          r < best_ratio - 1e-14 ||
          (r <= best_ratio + 1e-14 && row >= 0 &&
           (bland ? t.basis[static_cast<std::size_t>(i)] < t.basis[static_cast<std::size_t>(row)]
                  : u[i] > u[row]));
      if (row < 0 || better) {
        row = i;
        best_ratio = std::min(best_ratio, r);
      }
    }
    if (row < 0) return PhaseResult::Unbounded;
    degenerate_run = best_ratio <= 1e-14 ? degenerate_run + 1 : 0;
    t.pivot(row, entering, u);
    ++iterations;
  }
}

}  // namespace

LpSolution solve_standard_form(const LpProblem& problem, const LpOptions& opt) {
  const auto m = problem.A.rows();
  const auto n = problem.A.cols();
  if (problem.b.size() != m || problem.c.size() != n)
    throw StructuralError("lp: inconsistent problem dimensions");

  // Flip rows so b >= 0, then append one artificial column per row.
  Eigen::MatrixXd A(m, n + m);
  Eigen::VectorXd b = problem.b;
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  A.leftCols(n) = problem.A;
  A.rightCols(m).setIdentity();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      sign[i] = -1.0;
      b[i] = -b[i];
      A.row(i).head(n) *= -1.0;
    }
  }

  Tableau t{A, b, {}, std::vector<bool>(static_cast<std::size_t>(n + m), false), {}, 0};
  for (Eigen::Index i = 0; i < m; ++i) {
    t.basis.push_back(n + i);
    t.in_basis[static_cast<std::size_t>(n + i)] = true;
  }
  t.Binv = Eigen::MatrixXd::Identity(m, m);

  LpSolution sol;
  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  std::vector<bool> allowed(static_cast<std::size_t>(n + m), true);
  auto r = run_phase(t, phase1_cost, allowed, opt, sol.iterations);
  if (r == PhaseResult::IterationLimit) return sol;
  t.refactor();
  {
    const Eigen::VectorXd xB = t.Binv * b;
    double infeas = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (t.basis[static_cast<std::size_t>(i)] >= n) infeas += std::max(xB[i], 0.0);
    if (infeas > opt.feasibility_tol * (1.0 + b.lpNorm<Eigen::Infinity>())) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
  }
  // Drive zero-level artificials out of the basis where a pivot exists.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (t.basis[static_cast<std::size_t>(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (t.in_basis[static_cast<std::size_t>(j)]) continue;
      const Eigen::VectorXd u = t.Binv * A.col(j);
      if (std::abs(u[i]) > opt.pivot_tol) {
        t.pivot(i, j, u);
        break;
      }
    }
  }
  t.refactor();

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + m);
  cost.head(n) = problem.c;
  for (Eigen::Index j = n; j < n + m; ++j) allowed[static_cast<std::size_t>(j)] = false;
  r = run_phase(t, cost, allowed, opt, sol.iterations);
  if (r == PhaseResult::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  if (r == PhaseResult::IterationLimit) return sol;
  t.refactor();

  const Eigen::VectorXd xB = t.Binv * b;
  sol.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto j = t.basis[static_cast<std::size_t>(i)];
    if (j < n) sol.x[j] = std::max(xB[i], 0.0);
  }
  Eigen::VectorXd cB(m);
  for (Eigen::Index i = 0; i < m; ++i) cB[i] = cost[t.basis[static_cast<std::size_t>(i)]];
  sol.duals = (t.Binv.transpose() * cB).cwiseProduct(sign);
  sol.objective = problem.c.dot(sol.x);
  sol.status = LpStatus::Optimal;
  return sol;
}

ChebyshevFit chebyshev_fit(const Eigen::MatrixXd& basis, const Eigen::VectorXd& f,
                           const LpOptions& options) {
  const auto M = basis.rows();
  const auto n = basis.cols();
  if (f.size() != M) throw StructuralError("chebyshev_fit: size mismatch");
  ChebyshevFit fit;
  if (n == 0) {
    fit.coeffs = Eigen::VectorXd::Zero(0);
    fit.approx = Eigen::VectorXd::Zero(M);
    fit.deviation = fit.lower_bound = f.lpNorm<Eigen::Infinity>();
    return fit;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  qr.setThreshold(1e-12);
  if (qr.rank() < n) throw RankDeficientError("chebyshev_fit: basis is rank deficient");
  const Eigen::MatrixXd Qo = qr.householderQ() * Eigen::MatrixXd::Identity(M, n);

  // Dual of  min t  s.t.  -t <= f - Qo c <= t :
  //   max f^T (u - v)  s.t.  Qo^T (u - v) = 0,  1^T (u + v) = 1,  u, v >= 0.
  LpProblem lp;
  lp.A.resize(n + 1, 2 * M);
  lp.A.topLeftCorner(n, M) = Qo.transpose();
  lp.A.topRightCorner(n, M) = -Qo.transpose();
  lp.A.row(n).setOnes();
  lp.b = Eigen::VectorXd::Zero(n + 1);
  lp.b[n] = 1.0;
  lp.c.resize(2 * M);
  lp.c.head(M) = -f;
  lp.c.tail(M) = f;

  const LpSolution sol = solve_standard_form(lp, options);
  if (sol.status != LpStatus::Optimal)
    throw Error("chebyshev_fit: linear program did not reach optimality");

  const Eigen::VectorXd c_orth = -sol.duals.head(n);
  fit.approx = Qo * c_orth;
  fit.deviation = (f - fit.approx).lpNorm<Eigen::Infinity>();
  fit.lower_bound = -sol.objective;
  fit.coeffs = qr.solve(fit.approx);
  return fit;
}

}  // namespace geim::lp
