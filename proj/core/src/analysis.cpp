#include "geim/analysis.hpp"

#include "geim/error.hpp"
#include "geim/interp.hpp"
#include "geim/minimax.hpp"
#include "geim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace geim {

namespace {

constexpr double kRankTol = 1e-12;

// Orthonormal basis of the column span; throws unless full column rank.
Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& X, const char* where) {
  if (X.cols() == 0) return Eigen::MatrixXd(X.rows(), 0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(kRankTol);
  if (qr.rank() < X.cols())
    throw RankDeficientError(std::string(where) + ": basis is rank deficient");
  return qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), X.cols());
}

double max_residual_norm(const Eigen::MatrixXd& A, const Eigen::MatrixXd& U) {
  if (A.cols() == 0) return 0.0;
  const Eigen::MatrixXd R = A - U * (U.transpose() * A);
  return R.colwise().norm().maxCoeff();
}

Eigen::MatrixXd basis_matrix(const GreedyResult& result, std::size_t n) {
  return as_columns(std::span<const DiscreteFunction>(result.basis_q.data(), n));
}

void require_n(const GreedyResult& result, std::size_t n, const char* where) {
  if (n > result.size())
    throw StructuralError(std::string(where) + ": n exceeds the basis size");
}

}  // namespace

SubspaceProjector::SubspaceProjector(GridPtr grid, const Eigen::MatrixXd& basis, NormMode mode)
    : grid_(std::move(grid)), mode_(mode), basis_(basis) {
  if (static_cast<std::size_t>(basis.rows()) != grid_->size())
    throw StructuralError("SubspaceProjector: basis rows do not match the grid");
  if (mode_ == NormMode::Hilbert) {
    U_ = orthonormal_columns(grid_->sqrt_weights().asDiagonal() * basis_, "SubspaceProjector");
  } else if (basis_.cols() > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis_);
    qr.setThreshold(kRankTol);
    if (qr.rank() < basis_.cols())
      throw RankDeficientError("SubspaceProjector: basis is rank deficient");
  }
}

Projection SubspaceProjector::project(const DiscreteFunction& f) const {
  require_same_grid(f.grid(), grid_, "project");
  if (mode_ == NormMode::Hilbert) {
    const Eigen::VectorXd& sw = grid_->sqrt_weights();
    const Eigen::VectorXd g = sw.cwiseProduct(f.values());
    const Eigen::VectorXd p = U_ * (U_.transpose() * g);
    return {f.with_values(p.cwiseQuotient(sw)), (g - p).norm()};
  }
  const auto fit = lp::chebyshev_fit(basis_, f.values());
  return {f.with_values(fit.approx), fit.deviation};
}

double SubspaceProjector::distance(const DiscreteFunction& f) const { return project(f).dist; }

Projection project(const DiscreteFunction& f, std::span<const DiscreteFunction> basis,
                   NormMode mode) {
  for (const auto& b : basis) require_same_grid(f.grid(), b.grid(), "project");
  const Eigen::MatrixXd B =
      basis.empty() ? Eigen::MatrixXd(f.size(), 0) : as_columns(basis);
  return SubspaceProjector(f.grid(), B, mode).project(f);
}

Eigen::MatrixXd distance_table(const FunctionSet& F, const GreedyResult& result, NormMode mode) {
  require_same_grid(F.grid(), result.grid, "distance_table");
  const std::size_t n = result.size();
  const auto P = static_cast<Eigen::Index>(F.size());
  Eigen::MatrixXd dist(static_cast<Eigen::Index>(n + 1), P);
  for (Eigen::Index j = 0; j < P; ++j) dist(0, j) = norm(F[static_cast<std::size_t>(j)], mode);
  if (n == 0) return dist;

  const Eigen::MatrixXd Q = basis_matrix(result, n);
  if (mode == NormMode::Hilbert) {
    const Eigen::VectorXd& sw = result.grid->sqrt_weights();
    // Unpivoted QR: the leading k columns of U span X_k.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(sw.asDiagonal() * Q);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(static_cast<Eigen::Index>(n))
                                  .triangularView<Eigen::Upper>();
    const double rmax = R.diagonal().cwiseAbs().maxCoeff();
    if (R.diagonal().cwiseAbs().minCoeff() <= kRankTol * rmax)
      throw RankDeficientError("distance_table: greedy basis is rank deficient");
    const Eigen::MatrixXd U =
        qr.householderQ() * Eigen::MatrixXd::Identity(Q.rows(), static_cast<Eigen::Index>(n));
    parallel_for(F.size(), [&](std::size_t j) {
      Eigen::VectorXd r = sw.cwiseProduct(F[j].values());
      for (std::size_t k = 0; k < n; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        r -= U.col(kk).dot(r) * U.col(kk);
        dist(kk + 1, static_cast<Eigen::Index>(j)) = r.norm();
      }
    });
  } else {
    parallel_for(F.size(), [&](std::size_t j) {
      for (std::size_t k = 1; k <= n; ++k) {
        const auto fit =
            lp::chebyshev_fit(Q.leftCols(static_cast<Eigen::Index>(k)), F[j].values());
        dist(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = fit.deviation;
      }
    });
  }
  return dist;
}

std::vector<double> compute_tau(const FunctionSet& F, const GreedyResult& result, NormMode mode) {
  const Eigen::MatrixXd dist = distance_table(F, result, mode);
  std::vector<double> tau(static_cast<std::size_t>(dist.rows()));
  for (Eigen::Index k = 0; k < dist.rows(); ++k)
    tau[static_cast<std::size_t>(k)] = dist.row(k).maxCoeff();
  return tau;
}

namespace {

Eigen::MatrixXd retract(const Eigen::MatrixXd& Y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(Y.rows(), Y.cols());
}

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    css += u[k];
    const double t = (css - 1.0) / static_cast<double>(k + 1);
    if (u[k] > t) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

// max_w  w.r - (rho/2) w'Hw  over the simplex, accelerated projected gradient.
Eigen::VectorXd simplex_qp(const Eigen::VectorXd& r, const Eigen::MatrixXd& H, double rho,
                           Eigen::VectorXd w, std::size_t iterations) {
  const double L = rho * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                             H, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  if (!(L > 0.0)) {
    Eigen::Index j = 0;
    r.maxCoeff(&j);
    return Eigen::VectorXd::Unit(r.size(), j);
  }
  Eigen::VectorXd y = w;
  double t = 1.0;
  for (std::size_t k = 0; k < iterations; ++k) {
    const Eigen::VectorXd g = rho * (H * y) - r;
    const Eigen::VectorXd wn = project_simplex(y - g / L);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = wn + ((t - 1.0) / tn) * (wn - w);
    const double change = (wn - w).lpNorm<Eigen::Infinity>();
    w = wn;
    t = tn;
    if (change <= 1e-15) break;
  }
  return w;
}

// Proximal minimax descent on the Grassmannian of n-planes in R^r for
// max_j |c_j - Y Y' c_j|^2. Each step minimizes the linearized max plus
// |Z|^2 / (2 rho) over tangent directions Z; the dual of that step is a
// small QP over the simplex whose Gram matrix is 4 (R'R) o (A'A).
Eigen::MatrixXd polish_subspace(const Eigen::MatrixXd& C, Eigen::MatrixXd Y,
                                const WidthOptions& opt) {
  const auto P = C.cols();
  if (Y.cols() == 0 || Y.cols() >= C.rows()) return Y;
  Eigen::MatrixXd A = Y.transpose() * C;
  Eigen::MatrixXd R = C - Y * A;
  Eigen::VectorXd rr = R.colwise().squaredNorm().transpose();
  double f = rr.maxCoeff();
  double rho = 1.0;
  Eigen::VectorXd w = Eigen::VectorXd::Constant(P, 1.0 / static_cast<double>(P));
  for (std::size_t it = 0; it < opt.max_iterations && f > 0.0; ++it) {
    const Eigen::MatrixXd H = 4.0 * (R.transpose() * R).cwiseProduct(A.transpose() * A);
    w = simplex_qp(rr, H, rho, w, opt.qp_iterations);
    const Eigen::MatrixXd Z = 2.0 * rho * R * w.asDiagonal() * A.transpose();
    // linear model of each residual along Z
    const Eigen::VectorXd lin =
        rr - 2.0 * (R.transpose() * Z).cwiseProduct(A.transpose()).rowwise().sum();
    const double predicted = f - lin.maxCoeff();
    if (predicted <= opt.relative_tol * f) break;
    const Eigen::MatrixXd Yn = retract(Y + Z);
    const Eigen::MatrixXd An = Yn.transpose() * C;
    const Eigen::MatrixXd Rn = C - Yn * An;
    const Eigen::VectorXd rrn = Rn.colwise().squaredNorm().transpose();
    const double fn = rrn.maxCoeff();
    if (f - fn >= 0.1 * predicted) {
      Y = Yn;
      A = An;
      R = Rn;
      rr = rrn;
      f = fn;
      rho *= 2.0;
    } else {
      rho *= 0.25;
      if (rho < 1e-300) break;
    }
  }
  return Y;
}

// Small seeded tangent perturbation; moves starts off saddle points.
Eigen::MatrixXd perturb(const Eigen::MatrixXd& Y, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Eigen::MatrixXd Z(Y.rows(), Y.cols());
  for (Eigen::Index i = 0; i < Z.size(); ++i) Z.data()[i] = N(rng);
  Z -= Y * (Y.transpose() * Z);
  return retract(Y + scale * Z);
}

}  // namespace

WidthResult compute_widths(const FunctionSet& F, std::size_t n_max, NormMode mode,
                           const WidthOptions& options, std::span<const Eigen::MatrixXd> starts) {
  if (mode != NormMode::Hilbert)
    throw UnsupportedModeError("compute_widths: only L2 widths are available");
  const Eigen::VectorXd& sw = F.grid()->sqrt_weights();
  const Eigen::MatrixXd A = sw.asDiagonal() * F.matrix();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] > 1e-14 * s[0]) ++rank;
  const Eigen::MatrixXd Ur = svd.matrixU().leftCols(rank);
  const Eigen::MatrixXd C = Ur.transpose() * A;  // coordinates of the snapshots

  WidthResult out;
  const double d0 = A.colwise().norm().maxCoeff();
  out.d.push_back(d0);
  out.d_pod.push_back(d0);
  out.subspaces.emplace_back(A.rows(), 0);

  Eigen::MatrixXd prev(rank, 0);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd best_grid;
    double best = std::numeric_limits<double>::infinity();

    const auto consider = [&](const Eigen::MatrixXd& Ugrid) {
      const double v = max_residual_norm(A, Ugrid);
      if (v < best) {
        best = v;
        best_grid = Ugrid;
      }
    };

    if (nn >= rank) {
      // Span(F) itself (plus nothing) is an admissible n-plane.
      const Eigen::MatrixXd U = Ur;
      out.d_pod.push_back(max_residual_norm(A, U));
      consider(U);
      prev = Eigen::MatrixXd::Identity(rank, rank);
    } else {
      const Eigen::MatrixXd pod = Eigen::MatrixXd::Identity(rank, nn);
      out.d_pod.push_back(max_residual_norm(A, Ur * pod));

      std::vector<Eigen::MatrixXd> seeds{pod};
      // previous plane plus the leading singular direction outside it: never
      // worse than d_{n-1}
      {
        Eigen::MatrixXd aug(rank, nn);
        aug.leftCols(prev.cols()) = prev;
        Eigen::Index col = prev.cols();
        for (Eigen::Index k = 0; k < rank && col < nn; ++k) {
          Eigen::VectorXd e = Eigen::VectorXd::Unit(rank, k);
          e -= aug.leftCols(col) * (aug.leftCols(col).transpose() * e);
          if (e.norm() > 1e-6) aug.col(col++) = e.normalized();
        }
        seeds.push_back(retract(aug));
      }
      if (n < starts.size() && starts[n].cols() == nn) {
        const Eigen::MatrixXd coords = Ur.transpose() * (sw.asDiagonal() * starts[n]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(coords);
        qr.setThreshold(kRankTol);
        if (qr.rank() == nn) seeds.push_back(retract(coords));
      }
      if (options.polish) {
        std::mt19937_64 rng(options.seed + n);
        seeds.push_back(perturb(pod, 1e-3, rng));
        std::normal_distribution<double> N;
        for (std::size_t k = 0; k < options.random_starts; ++k) {
          Eigen::MatrixXd G(rank, nn);
          for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = N(rng);
          seeds.push_back(retract(G));
        }
      }
      Eigen::MatrixXd best_coords;
      for (const auto& seed : seeds) {
        const Eigen::MatrixXd Y = options.polish ? polish_subspace(C, seed, options) : seed;
        const double before = best;
        consider(Ur * Y);
        if (best < before) best_coords = Y;
      }
      if (best_coords.size() > 0) prev = best_coords;
    }
    out.d.push_back(best);
    out.subspaces.push_back(best_grid.array().colwise() / sw.array());
  }
  return out;
}

InfSup lebesgue_hilbert(const GreedyResult& result, std::size_t n) {
  require_n(result, n, "lebesgue_hilbert");
  if (n == 0) return {0.0, 1.0};
  const Eigen::VectorXd& sw = result.grid->sqrt_weights();
  Eigen::MatrixXd R(sw.size(), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    R.col(static_cast<Eigen::Index>(i)) = result.selected_sigma[i].density();
  const Eigen::MatrixXd U = orthonormal_columns(sw.asDiagonal() * basis_matrix(result, n),
                                                "lebesgue_hilbert");
  const Eigen::MatrixXd V = orthonormal_columns(sw.asDiagonal() * R, "lebesgue_hilbert");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(U.transpose() * V);
  const double beta = svd.singularValues().minCoeff();
  if (!(beta > 0.0))
    throw UnisolvenceError(n, "lebesgue_hilbert: singular cross-Gramian");
  return {1.0 / beta, beta};
}

double lebesgue_sup(const GreedyResult& result, std::size_t n) {
  require_n(result, n, "lebesgue_sup");
  if (n == 0) return 0.0;
  return interpolation_operator(result, n).cwiseAbs().rowwise().sum().maxCoeff();
}

double lebesgue_operator_norm(const GreedyResult& result, std::size_t n, NormMode mode) {
  if (mode == NormMode::Sup) return lebesgue_sup(result, n);
  require_n(result, n, "lebesgue_operator_norm");
  if (n == 0) return 0.0;
  const Eigen::VectorXd& sw = result.grid->sqrt_weights();
  const Eigen::MatrixXd L = interpolation_operator(result, n);
  const Eigen::MatrixXd S = sw.asDiagonal() * L * sw.cwiseInverse().asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(S);
  return svd.singularValues()[0];
}

double lebesgue_empirical(const GreedyResult& result, const FunctionSet& probes, std::size_t n,
                          NormMode mode) {
  require_n(result, n, "lebesgue_empirical");
  double best = 0.0;
  for (const auto& f : probes.members()) {
    const double nf = norm(f, mode);
    if (nf == 0.0) continue;
    best = std::max(best, norm(interpolate(f, result, n), mode) / nf);
  }
  return best;
}

double lebesgue_upper(const GreedyResult& result, std::size_t n, NormMode mode) {
  require_n(result, n, "lebesgue_upper");
  if (n == 0) return 0.0;
  double mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, norm(result.basis_q[i], mode));
  return std::ldexp(mx, static_cast<int>(n) - 1);
}

AppendixMatrices appendix_matrix(const GreedyResult& result, NormMode mode) {
  if (mode != NormMode::Hilbert)
    throw UnsupportedModeError("appendix_matrix: the Gram-Schmidt matrix needs an inner product");
  const std::size_t n = result.size();
  const Eigen::VectorXd& sw = result.grid->sqrt_weights();
  AppendixMatrices out;
  if (n == 0) {
    out.A.resize(0, 0);
    out.phi_star.resize(sw.size(), 0);
    return out;
  }
  const Eigen::MatrixXd Phi = sw.asDiagonal() * as_columns(result.selected_phi);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Phi);
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd R = qr.matrixQR().topRows(nn).triangularView<Eigen::Upper>();
  Eigen::MatrixXd U = qr.householderQ() * Eigen::MatrixXd::Identity(Phi.rows(), nn);
  for (Eigen::Index j = 0; j < nn; ++j) {
    if (std::abs(R(j, j)) <= kRankTol * Phi.col(j).norm())
      throw RankDeficientError("appendix_matrix: selected functions are dependent");
    if (R(j, j) < 0) {
      R.row(j) *= -1.0;
      U.col(j) *= -1.0;
    }
  }
  out.A = R.transpose();
  out.phi_star = U.array().colwise() / sw.array();
  return out;
}

std::vector<CheckRecord> check_s1(const Eigen::MatrixXd& A, std::span<const double> tau,
                                  std::span<const double> gamma) {
  std::vector<CheckRecord> out;
  const auto rows = static_cast<std::size_t>(A.rows());
  for (std::size_t n = 1; n < rows; ++n) {
    const std::string idx = "n=" + std::to_string(n);
    if (n >= tau.size()) {
      out.push_back(skipped_check("S1.upper", idx, "tau_n not available"));
      continue;
    }
    const double a = std::abs(A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    out.push_back(make_check("S1.upper", idx, a, tau[n]));
    if (n < gamma.size())
      out.push_back(make_check("S1.lower", idx, gamma[n] * tau[n], a));
    else
      out.push_back(skipped_check("S1.lower", idx, "gamma_n not available"));
  }
  return out;
}

std::vector<CheckRecord> check_s2(const Eigen::MatrixXd& A, std::span<const double> tau) {
  std::vector<CheckRecord> out;
  const auto rows = static_cast<std::size_t>(A.rows());
  for (std::size_t n = 1; n < rows && n < tau.size(); ++n) {
    for (std::size_t m = n; m < rows; ++m) {
      const auto mi = static_cast<Eigen::Index>(m);
      const auto ni = static_cast<Eigen::Index>(n);
      const double tail = A.row(mi).segment(ni, mi - ni + 1).norm();
      out.push_back(make_check("S2", "n=" + std::to_string(n) + ",m=" + std::to_string(m), tail,
                               tau[n], "square roots of both sides"));
    }
  }
  return out;
}

Eigen::MatrixXd extract_block(const Eigen::MatrixXd& A, std::size_t N, std::size_t K) {
  if (N + K >= static_cast<std::size_t>(A.rows()) || A.rows() != A.cols())
    throw StructuralError("extract_block: block exceeds the matrix");
  const auto s = static_cast<Eigen::Index>(N + 1);
  const auto k = static_cast<Eigen::Index>(K);
  return A.block(s, s, k, k);
}

namespace {

// log of the right-hand side pieces; P projects onto span(U), U orthonormal.
struct LemmaSides {
  double log_lhs;
  double log_rhs;
};

LemmaSides lemma_sides(const Eigen::MatrixXd& G, const Eigen::MatrixXd& U, std::size_t m) {
  const auto K = static_cast<std::size_t>(G.rows());
  double log_lhs = 0.0;
  for (Eigen::Index i = 0; i < G.rows(); ++i) log_lhs += 2.0 * std::log(std::abs(G(i, i)));
  const Eigen::MatrixXd Gt = G.transpose();  // rows of G as columns
  const Eigen::MatrixXd PG = U * (U.transpose() * Gt);
  const double in = PG.colwise().squaredNorm().sum();
  const double out = (Gt - PG).colwise().squaredNorm().sum();
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(K - m);
  const double log_rhs = md * std::log(in / md) + kd * std::log(out / kd);
  return {log_lhs, log_rhs};
}

Eigen::MatrixXd orthonormal_span(const Eigen::MatrixXd& X, Eigen::Index& rank) {
  if (X.cols() == 0) {
    rank = 0;
    return Eigen::MatrixXd(X.rows(), 0);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  rank = qr.rank();
  return qr.householderQ() * Eigen::MatrixXd::Identity(X.rows(), rank);
}

}  // namespace

ProductInequality projection_lemma_check(const Eigen::MatrixXd& G, const Eigen::MatrixXd& W_basis,
                                         std::size_t m) {
  const auto K = static_cast<std::size_t>(G.rows());
  if (G.cols() != G.rows() || W_basis.rows() != G.rows())
    throw StructuralError("projection_lemma_check: dimension mismatch");
  if (m < 1 || m >= K) throw StructuralError("projection_lemma_check: need 1 <= m < K");
  Eigen::Index rank = 0;
  const Eigen::MatrixXd U = orthonormal_span(W_basis, rank);
  if (static_cast<std::size_t>(rank) != m)
    throw StructuralError("projection_lemma_check: W must have dimension m");
  const auto s = lemma_sides(G, U, m);
  const double k2 = 2.0 * static_cast<double>(K);
  ProductInequality r;
  r.lhs = std::exp(s.log_lhs / k2);
  r.rhs = std::exp(s.log_rhs / k2);
  r.pass = audit_holds(r.lhs, r.rhs);
  return r;
}

std::vector<CheckRecord> proof_structure_checks(const AppendixMatrices& app,
                                                const Eigen::MatrixXd& Y_m, const GridPtr& grid,
                                                std::span<const double> tau,
                                                std::span<const double> gamma, double d_m,
                                                std::size_t N, std::size_t K, std::size_t m) {
  const std::string idx =
      "N=" + std::to_string(N) + ",K=" + std::to_string(K) + ",m=" + std::to_string(m);
  std::vector<CheckRecord> out;
  if (N + K >= static_cast<std::size_t>(app.A.rows()) || N + K >= gamma.size() ||
      N + K >= tau.size()) {
    out.push_back(skipped_check("proof.structure", idx, "indices beyond the run"));
    return out;
  }
  const Eigen::MatrixXd G = extract_block(app.A, N, K);
  const auto k = static_cast<Eigen::Index>(K);

  // Restriction of Y_m to the phi* coordinates N+1..N+K, completed to dim m.
  const Eigen::MatrixXd Pstar = app.phi_star.middleCols(static_cast<Eigen::Index>(N + 1), k);
  const Eigen::MatrixXd T = Pstar.transpose() * grid->weights().asDiagonal() * Y_m;
  Eigen::Index rank = 0;
  Eigen::MatrixXd U = orthonormal_span(T, rank);
  if (static_cast<std::size_t>(rank) > m) rank = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd W(k, static_cast<Eigen::Index>(m));
  W.leftCols(rank) = U.leftCols(rank);
  Eigen::Index col = rank;
  for (Eigen::Index e = 0; e < k && col < static_cast<Eigen::Index>(m); ++e) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(k, e);
    v -= W.leftCols(col) * (W.leftCols(col).transpose() * v);
    if (v.norm() > 1e-6) W.col(col++) = v.normalized();
  }

  const Eigen::MatrixXd Gt = G.transpose();
  const Eigen::MatrixXd PG = W * (W.transpose() * Gt);
  out.push_back(make_check("proof.row_norm", idx, Gt.colwise().norm().maxCoeff(), tau[N + 1]));
  out.push_back(
      make_check("proof.row_residual", idx, (Gt - PG).colwise().norm().maxCoeff(), d_m));

  const auto s = lemma_sides(G, W, m);
  const double k2 = 2.0 * static_cast<double>(K);
  out.push_back(make_check("proof.lemma_A1", idx, std::exp(s.log_lhs / k2),
                           std::exp(s.log_rhs / k2), "2K-th roots"));

  double log_gt = 0.0;
  for (std::size_t i = 1; i <= K; ++i) log_gt += std::log(gamma[N + i] * tau[N + i]);
  out.push_back(make_check("proof.diagonal", idx, std::exp(log_gt / static_cast<double>(K)),
                           std::exp(s.log_lhs / k2), "geometric means"));
  return out;
}

AnalysisReport analyze_run(const FunctionSet& F, const GreedyResult& result,
                           const AnalysisOptions& options) {
  require_same_grid(F.grid(), result.grid, "analyze_run");
  AnalysisReport rep;
  rep.mode = result.mode;
  rep.grid = result.grid;
  const std::size_t n = result.size();
  rep.size = n;

  rep.dist = distance_table(F, result, rep.mode);
  for (Eigen::Index k = 0; k < rep.dist.rows(); ++k) rep.tau.push_back(rep.dist.row(k).maxCoeff());

  const auto P = static_cast<Eigen::Index>(F.size());
  rep.eps.resize(static_cast<Eigen::Index>(n + 1), P);
  parallel_for(F.size(), [&](std::size_t j) {
    for (std::size_t k = 0; k <= n; ++k)
      rep.eps(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          interp_error(F[j], result, k, rep.mode);
  });

  for (std::size_t k = 0; k <= n; ++k) {
    if (rep.mode == NormMode::Hilbert) {
      const auto ls = lebesgue_hilbert(result, k);
      rep.lambda.push_back(ls.lambda);
      rep.beta_infsup.push_back(ls.beta);
    } else {
      rep.lambda.push_back(lebesgue_sup(result, k));
    }
    rep.lebesgue_upper.push_back(lebesgue_upper(result, k, rep.mode));
    rep.lambda_empirical.push_back(lebesgue_empirical(result, F, k, rep.mode));
  }
  rep.eta = result.effective_eta;
  for (std::size_t k = 0; k < n; ++k) rep.gamma.push_back(rep.eta[k] / (1.0 + rep.lambda[k]));
  for (std::size_t k = 0; k < n; ++k)
    rep.selected_residual.push_back(
        rep.dist(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(result.phi_index[k])));

  if (options.widths) {
    std::vector<Eigen::MatrixXd> starts;
    for (std::size_t k = 0; k <= n; ++k) starts.push_back(basis_matrix(result, k));
    const WidthResult w = compute_widths(F, n, NormMode::Hilbert, options.width, starts);
    rep.d_pod = w.d_pod;
    if (rep.mode == NormMode::Hilbert) {
      const Eigen::VectorXd& sw = result.grid->sqrt_weights();
      for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0 && rep.tau[k] < w.d[k]) {
          rep.d.push_back(rep.tau[k]);
          rep.d_source.push_back("greedy");
          const Eigen::MatrixXd U =
              orthonormal_columns(sw.asDiagonal() * starts[k], "analyze_run");
          rep.witness.push_back(U.array().colwise() / sw.array());
        } else {
          rep.d.push_back(w.d[k]);
          rep.d_source.push_back("width");
          rep.witness.push_back(w.subspaces[k]);
        }
      }
    } else {
      rep.d = w.d;
      rep.d_source.assign(n + 1, "width");
      rep.witness = w.subspaces;
      rep.hilbert_surrogate = true;
    }
  }
  if (options.appendix && rep.mode == NormMode::Hilbert && n > 0)
    rep.appendix = appendix_matrix(result, rep.mode);
  return rep;
}

}  // namespace geim
