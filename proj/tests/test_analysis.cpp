#include "fixtures.hpp"

#include "geim/analysis.hpp"
#include "geim/error.hpp"
#include "geim/interp.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

using namespace geim;
using geim::test::fn;
using geim::test::unit_grid;

namespace {

GreedyResult hand_run() {
  test::HandExample h;
  GreedyConfig cfg;
  cfg.n_max = 3;
  return run_geim(h.F, h.sigmas, cfg);
}

// max over the set of dist to the line through direction u (Euclidean).
double line_width(const Eigen::MatrixXd& X, const Eigen::VectorXd& u) {
  double worst = 0;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const Eigen::VectorXd v = X.col(j);
    worst = std::max(worst, (v - v.dot(u) * u).norm());
  }
  return worst;
}

}  // namespace

TEST_CASE("project: hand values in both modes") {
  auto g3 = unit_grid(3);
  std::vector<DiscreteFunction> b{fn(g3, {1, 0, 0})};
  CHECK(project(fn(g3, {0, 0, 0.5}), b, NormMode::Hilbert).dist == doctest::Approx(0.5));
  CHECK(project(fn(g3, {2, 0, 0}), b, NormMode::Hilbert).dist <= 1e-10);
  CHECK(project(fn(g3, {2, 0, 0}), b, NormMode::Sup).dist <= 1e-10);

  auto g2 = unit_grid(2);
  std::vector<DiscreteFunction> ones{fn(g2, {1, 1})};
  auto p = project(fn(g2, {1, -1}), ones, NormMode::Sup);
  CHECK(p.dist == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.best_approx.values().cwiseAbs().maxCoeff() <= 1e-12);

  std::vector<DiscreteFunction> dep{fn(g3, {1, 0, 0}), fn(g3, {2, 0, 0})};
  CHECK_THROWS_AS(project(fn(g3, {0, 0, 1}), dep, NormMode::Hilbert), RankDeficientError);
  CHECK_THROWS_AS(project(fn(g3, {0, 0, 1}), dep, NormMode::Sup), RankDeficientError);
}

TEST_CASE("hand example: tau, beta, appendix") {
  test::HandExample h;
  auto r = hand_run();
  auto tau = compute_tau(h.F, r, NormMode::Hilbert);
  CHECK(tau[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(tau[3] <= 1e-10);
  auto ls = lebesgue_hilbert(r, 2);
  CHECK(std::abs(ls.beta - 1.0) <= 1e-12);
  CHECK(std::abs(ls.lambda - 1.0) <= 1e-12);
  auto app = appendix_matrix(r);
  CHECK(app.A(1, 1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(std::abs(app.A(1, 1) - tau[1]) <= 1e-12);
}

TEST_CASE("hand example: width of the 3-vector set") {
  test::HandExample h;
  auto w = compute_widths(h.F, 3);
  // POD is not minimax here
  CHECK(w.d_pod[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w.d[1] == doctest::Approx(std::sqrt(0.238095238095238)).epsilon(1e-6));
  CHECK(w.d[3] <= 1e-10);
  CHECK_THROWS_AS(compute_widths(h.F, 1, NormMode::Sup), UnsupportedModeError);
}

TEST_CASE("widths: orthonormal set and rank-deficient set") {
  auto g = unit_grid(4);
  FunctionSet E({fn(g, {1, 0, 0, 0}), fn(g, {0, 1, 0, 0}), fn(g, {0, 0, 1, 0})});
  auto w = compute_widths(E, 3);
  CHECK(w.d[0] == doctest::Approx(1.0));
  for (int n = 1; n < 3; ++n) CHECK(w.d[n] >= w.d_pod[n] * 0 + std::sqrt(1.0 - double(n) / 3) - 1e-9);
  CHECK(w.d[3] <= 1e-10);

  FunctionSet R({fn(g, {1, 1, 0, 0}), fn(g, {2, 2, 0, 0}), fn(g, {0, 0, 1, 0})});
  auto wr = compute_widths(R, 3);
  CHECK(wr.d[2] <= 1e-10);
  CHECK(wr.d[3] <= 1e-10);
}

TEST_CASE("widths agree with brute-force line sweeps (2D and 3D)") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> N;
  for (int trial = 0; trial < 5; ++trial) {
    auto g2 = unit_grid(2);
    std::vector<DiscreteFunction> m2;
    for (int j = 0; j < 6; ++j) m2.push_back(fn(g2, {0.4 * N(rng), 0.4 * N(rng)}));
    FunctionSet S2(m2);
    double brute = 1e300;
    for (int a = 0; a < 721; ++a) {
      const double th = std::numbers::pi * a / 720.0;
      brute = std::min(brute, line_width(S2.matrix(), Eigen::Vector2d(std::cos(th), std::sin(th))));
    }
    const double d1 = compute_widths(S2, 1).d[1];
    CHECK(d1 <= brute + 1e-12);
    CHECK(std::abs(d1 - brute) <= 1e-3);
  }
}

TEST_CASE("lebesgue constants: consistency and basis invariance") {
  test::GaussianSetup s;
  GreedyConfig cfg;
  cfg.n_max = 10;
  auto r = run_geim(s.F, s.sigmas, cfg);
  for (std::size_t n = 1; n <= r.size(); ++n) {
    auto ls = lebesgue_hilbert(r, n);
    CHECK(ls.beta <= 1.0 + 1e-12);
    CHECK(ls.beta > 0.0);
    const double op = lebesgue_operator_norm(r, n, NormMode::Hilbert);
    CHECK(std::abs(op - ls.lambda) <= 1e-8 * ls.lambda);
    const double emp = lebesgue_empirical(r, s.F, n, NormMode::Hilbert);
    CHECK(emp <= ls.lambda + 1e-9);
    CHECK(ls.lambda <= lebesgue_upper(r, n, NormMode::Hilbert) * (1 + 1e-12));
  }
  // rotate the basis inside X_n: the subspace quantities do not move
  const std::size_t n = 6;
  auto ls = lebesgue_hilbert(r, n);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N;
  Eigen::MatrixXd M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) = N(rng);
  Eigen::MatrixXd Rot = Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ();
  GreedyResult rot = r;
  Eigen::MatrixXd Q = as_columns(std::span<const DiscreteFunction>(r.basis_q.data(), n)) * Rot;
  for (std::size_t j = 0; j < n; ++j)
    rot.basis_q[j] = r.basis_q[j].with_values(Q.col(static_cast<Eigen::Index>(j)));
  rot.basis_q.erase(rot.basis_q.begin() + static_cast<long>(n), rot.basis_q.end());
  auto lr = lebesgue_hilbert(rot, n);
  CHECK(std::abs(lr.beta - ls.beta) <= 1e-10);
  CHECK(std::abs(lr.lambda - ls.lambda) <= 1e-10 * ls.lambda);
}

TEST_CASE("lebesgue: probes inside X_n give ratio 1, sup bound") {
  test::GaussianSetup s(NormMode::Sup);
  GreedyConfig cfg;
  cfg.mode = NormMode::Sup;
  cfg.n_max = 8;
  auto r = run_geim(s.F, s.sigmas, cfg);
  FunctionSet probes(r.basis_q);
  CHECK(lebesgue_empirical(r, probes, 8, NormMode::Sup) == doctest::Approx(1.0).epsilon(1e-10));
  for (std::size_t n = 1; n <= 8; ++n) {
    const double emp = lebesgue_empirical(r, s.F, n, NormMode::Sup);
    const double exact = lebesgue_sup(r, n);
    CHECK(emp <= exact * (1 + 1e-12));
    CHECK(exact >= 1.0 - 1e-12);
    CHECK(exact <= lebesgue_upper(r, n, NormMode::Sup) * (1 + 1e-12));
  }
}

TEST_CASE("appendix matrix: orthogonal selections give a diagonal A") {
  test::HandExample h;
  auto r = hand_run();
  auto app = appendix_matrix(r);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j && !(i == 1 && j == 0)) CHECK(std::abs(app.A(i, j)) <= 1e-15);
  auto g = unit_grid(3);
  FunctionSet orth({fn(g, {2, 0, 0}), fn(g, {0, 1, 0}), fn(g, {0, 0, 0.5})});
  GreedyConfig cfg;
  cfg.n_max = 3;
  auto r2 = run_geim(orth, h.sigmas, cfg);
  auto a2 = appendix_matrix(r2);
  CHECK((a2.A - Eigen::MatrixXd(a2.A.diagonal().asDiagonal())).norm() <= 1e-15);
  CHECK_THROWS_AS(appendix_matrix(r2, NormMode::Sup), UnsupportedModeError);
}

TEST_CASE("projection lemma: identity, zero diagonal, random instances") {
  for (std::size_t K = 2; K <= 6; ++K)
    for (std::size_t m = 1; m < K; ++m) {
      Eigen::MatrixXd W = Eigen::MatrixXd::Identity(K, m);
      auto r = projection_lemma_check(Eigen::MatrixXd::Identity(K, K), W, m);
      CHECK(r.pass);
      CHECK(r.lhs == doctest::Approx(1.0));
      CHECK(r.rhs >= 1.0 - 1e-12);
    }
  Eigen::MatrixXd G = Eigen::MatrixXd::Identity(4, 4);
  G(2, 2) = 0.0;
  auto z = projection_lemma_check(G, Eigen::MatrixXd::Identity(4, 2), 2);
  CHECK(z.lhs == 0.0);
  CHECK(z.pass);
  CHECK_THROWS_AS(projection_lemma_check(G, Eigen::MatrixXd::Identity(3, 2), 2), StructuralError);
  CHECK_THROWS_AS(projection_lemma_check(G, Eigen::MatrixXd::Identity(4, 2), 4), StructuralError);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  std::uniform_int_distribution<int> Kd(2, 12);
  for (int trial = 0; trial < 300; ++trial) {
    const int K = Kd(rng);
    const int m = std::uniform_int_distribution<int>(1, K - 1)(rng);
    Eigen::MatrixXd A(K, K), B(K, m);
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) A(i, j) = j <= i ? N(rng) : 0.0;
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < m; ++j) B(i, j) = N(rng);
    CHECK(projection_lemma_check(A, B, static_cast<std::size_t>(m)).pass);
  }
}

TEST_CASE("analysis report on Hilbert Gaussian run") {
  test::GaussianSetup s;
  GreedyConfig cfg;
  cfg.n_max = 20;
  auto r = run_geim(s.F, s.sigmas, cfg);
  auto t0 = std::chrono::steady_clock::now();
  auto rep = analyze_run(s.F, r);
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("analyze_run (Hilbert, n=20): " << secs << " s");
  const std::size_t n = rep.size;
  REQUIRE(n == 20);
  REQUIRE(rep.appendix.has_value());
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) {
      CHECK(rep.tau[k] <= rep.tau[k - 1] + 1e-14);
      CHECK(rep.d[k] <= rep.d[k - 1] + 1e-14);
      CHECK(rep.lambda[k] >= 1.0 - 1e-12);
      CHECK(std::abs(rep.lambda[k] * rep.beta_infsup[k] - 1.0) <= 1e-12);
    }
    CHECK(rep.d[k] <= rep.tau[k] + 1e-14);
    CHECK(rep.d[k] <= rep.d_pod[k] + 1e-14);
    CHECK(rep.tau[k] <= 1.0 + 1e-12);
    CHECK(rep.lambda_empirical[k] <= rep.lambda[k] + 1e-9);
  }
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(rep.gamma[k] > 0.0);
    CHECK(rep.gamma[k] <= 1.0);
    CHECK(audit_holds(rep.gamma[k] * rep.tau[k], rep.selected_residual[k]));
  }
  // witness subspaces realize d
  for (std::size_t k = 1; k <= n; ++k) {
    SubspaceProjector P(s.grid, rep.witness[k], NormMode::Hilbert);
    double mx = 0;
    for (const auto& f : s.F.members()) mx = std::max(mx, P.distance(f));
    CHECK(std::abs(mx - rep.d[k]) <= 1e-12 + 1e-9 * rep.d[k]);
  }
  for (const auto& c : check_s1(rep.appendix->A, rep.tau, rep.gamma))
    CHECK_MESSAGE(c.status != CheckStatus::Fail, c.id << " " << c.index);
  for (const auto& c : check_s2(rep.appendix->A, rep.tau))
    CHECK_MESSAGE(c.status != CheckStatus::Fail, c.id << " " << c.index);
  for (std::size_t N = 0; N + 2 < n; ++N)
    for (std::size_t K = 2; N + K < n; ++K)
      for (std::size_t m = 1; m < K; ++m)
        for (const auto& c : proof_structure_checks(*rep.appendix, rep.witness[m], s.grid, rep.tau,
                                                    rep.gamma, rep.d[m], N, K, m))
          CHECK_MESSAGE(c.status == CheckStatus::Pass, c.id << " " << c.index << " " << c.lhs
                                                           << " " << c.rhs);
}

TEST_CASE("analysis report on Sup run") {
  test::GaussianSetup s(NormMode::Sup);
  GreedyConfig cfg;
  cfg.mode = NormMode::Sup;
  cfg.n_max = 20;
  auto r = run_geim(s.F, s.sigmas, cfg);
  auto t0 = std::chrono::steady_clock::now();
  auto rep = analyze_run(s.F, r);
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("analyze_run (Sup, n=20): " << secs << " s");
  CHECK(rep.hilbert_surrogate);
  CHECK(!rep.appendix.has_value());
  for (std::size_t k = 1; k <= rep.size; ++k) {
    CHECK(rep.tau[k] <= rep.tau[k - 1] * (1 + 1e-9) + 1e-12);
    for (Eigen::Index j = 0; j < rep.eps.cols(); ++j) {
      const auto kk = static_cast<Eigen::Index>(k);
      CHECK(audit_holds(rep.eps(kk, j), (1 + rep.lambda[k]) * rep.dist(kk, j)));
      CHECK(rep.dist(kk, j) <= rep.eps(kk, j) * (1 + 1e-9) + 1e-12);
    }
  }
}
