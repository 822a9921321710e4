// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "fixtures.hpp"

#include "geim/analysis.hpp"
#include "geim/interp.hpp"
#include "geim/rates.hpp"
#include "geim_app/artifact.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace geim;

namespace {

constexpr std::size_t kSteps = 20;
constexpr double kTriangularTol = 1e-12;
constexpr double kInterpTol = 1e-10;
constexpr double kRelSlack = 1e-9;
constexpr double kAbsSlack = 1e-12;
constexpr double kRunSeconds = 1.0;
constexpr double kSweepSeconds = 10.0;
constexpr std::size_t kSweepLimit = 16;
constexpr std::size_t kRateMaxN = 15;
constexpr double kFitR2 = 0.95;
constexpr std::size_t kProjectionInstances = 1000;
constexpr std::size_t kProjectionMaxK = 12;
constexpr double kProjectionSlack = -1e-9;
constexpr double kProjectionSeconds = 5.0;
constexpr double kHandTol = 1e-12;
constexpr std::size_t kAngles = 721;
constexpr double kWidthTol = 1e-3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool holds(double lhs, double rhs) { return lhs <= rhs * (1.0 + kRelSlack) + kAbsSlack; }

struct Run {
  std::string label;
  NormMode mode;
  FamilyKind kind;
  bool weak = false;
  FunctionSet F;
  std::vector<Functional> sigmas;
  GreedyResult result;
  double build_seconds = 0.0;
  AnalysisReport report;
};

Run make_run(std::string label, NormMode mode, FamilyKind kind, bool weak) {
  test::GaussianSetup setup(mode, kind);
  Run r{std::move(label), mode, kind, weak, setup.F, setup.sigmas, {}, 0.0, {}};
  GreedyConfig cfg;
  cfg.n_max = kSteps;
  cfg.mode = mode;
  if (weak) {
    cfg.subset = {SubsetKind::FixedSize, 10};
    cfg.eta_target = 0.5;
    cfg.seed = 7;
  }
  const auto t0 = Clock::now();
  r.result = run_geim(r.F, r.sigmas, cfg);
  r.build_seconds = seconds_since(t0);
  r.report = analyze_run(r.F, r.result);
  return r;
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s %2d %-24s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Tally {
  std::size_t pass = 0, fail = 0;
  std::string first_fail;
  void add(const CheckRecord& c) {
    if (c.status == CheckStatus::Pass) ++pass;
    if (c.status == CheckStatus::Fail) {
      if (!fail) first_fail = c.id + " " + c.index;
      ++fail;
    }
  }
  std::string str() const {
    return std::to_string(pass) + " pass, " + std::to_string(fail) + " fail" +
           (fail ? " (first " + first_fail + ")" : "");
  }
};

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

// Brute force over directions: max distance of the columns of X to a line.
double line_width(const Eigen::MatrixXd& X, const Eigen::VectorXd& u) {
  double worst = 0;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const Eigen::VectorXd v = X.col(j);
    worst = std::max(worst, (v - v.dot(u) * u).norm());
  }
  return worst;
}

double brute_width(const Eigen::MatrixXd& X) {
  const double pi = std::numbers::pi;
  const double step = pi / static_cast<double>(kAngles - 1);
  double best = 1e300;
  if (X.rows() == 2) {
    for (std::size_t a = 0; a < kAngles; ++a)
      best = std::min(best, line_width(X, Eigen::Vector2d(std::cos(a * step), std::sin(a * step))));
    return best;
  }
  for (std::size_t a = 0; a < kAngles; ++a)
    for (std::size_t b = 0; b < kAngles; ++b) {
      const double th = a * step, ph = 2.0 * b * step;
      best = std::min(best, line_width(X, Eigen::Vector3d(std::sin(th) * std::cos(ph),
                                                          std::sin(th) * std::sin(ph),
                                                          std::cos(th))));
    }
  return best;
}

}  // namespace

int main() {
  std::vector<Run> runs;
  for (FamilyKind kind : {FamilyKind::GaussianBump, FamilyKind::RationalPeak})
    for (NormMode mode : {NormMode::Hilbert, NormMode::Sup})
      runs.push_back(make_run(to_string(kind) + "/" + to_string(mode), mode, kind, false));
  for (FamilyKind kind : {FamilyKind::GaussianBump, FamilyKind::RationalPeak})
    runs.push_back(make_run(to_string(kind) + "/hilbert/weak", NormMode::Hilbert, kind, true));

  {
    double worst = 0.0, slowest = 0.0;
    for (const Run& r : runs) {
      const auto& B = r.result.B;
      for (Eigen::Index i = 0; i < B.rows(); ++i) {
        worst = std::max(worst, std::abs(B(i, i) - 1.0));
        for (Eigen::Index j = i + 1; j < B.cols(); ++j) worst = std::max(worst, std::abs(B(i, j)));
      }
      slowest = std::max(slowest, r.build_seconds);
    }
    report(1, "triangular_structure", worst <= kTriangularTol && slowest < kRunSeconds,
           fmt("max deviation %.2e", worst) + fmt(", slowest run %.3f s", slowest) + ", " +
               std::to_string(runs.size()) + " runs");
  }

  {
    double worst = 0.0;
    for (const Run& r : runs)
      for (std::size_t n = 1; n <= r.result.size(); ++n)
        for (const auto& f : r.F.members()) {
          const DiscreteFunction Jf = interpolate(f, r.result, n);
          for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(apply(r.result.selected_sigma[i], Jf) -
                                             apply(r.result.selected_sigma[i], f)));
        }
    report(2, "interpolation_property", worst <= kInterpTol, fmt("max |sigma_i(J_n f) - sigma_i(f)| %.2e", worst));
  }

  {
    std::size_t checked = 0, failed = 0;
    double worst_ratio = 0.0;
    for (const Run& r : runs) {
      const AnalysisReport& rep = r.report;
      for (std::size_t n = 1; n <= rep.size; ++n)
        for (Eigen::Index j = 0; j < rep.eps.cols(); ++j) {
          const double lam = rep.mode == NormMode::Hilbert ? rep.lambda[n] : 1.0 + rep.lambda[n];
          const double lhs = rep.eps(static_cast<Eigen::Index>(n), j);
          const double rhs = lam * rep.dist(static_cast<Eigen::Index>(n), j);
          ++checked;
          if (!holds(lhs, rhs)) ++failed;
          if (rhs > 1e-9) worst_ratio = std::max(worst_ratio, lhs / rhs);
        }
    }
    report(3, "error_bound", failed == 0,
           std::to_string(checked) + " (n, f) pairs, " + std::to_string(failed) + " fail" +
               fmt(", max eps/bound %.4f", worst_ratio));
  }

  {
    bool ok = true;
    std::string detail;
    for (const Run& r : runs) {
      if (r.mode != NormMode::Hilbert) continue;
      const AnalysisReport& rep = r.report;
      const double eta0 = rep.eta[0];
      const double rhs = 2.0 * (1.0 + 1.0 / eta0) * rep.d[1];
      ok = ok && holds(rep.tau[1], rhs);
      const double eta_min = *std::min_element(rep.eta.begin(), rep.eta.end());
      if (!detail.empty()) detail += "; ";
      detail += r.label + fmt(" tau1/bound %.3f", rep.tau[1] / rhs) + fmt(" (min eta %.3f)", eta_min);
    }
    report(4, "first_width", ok, detail);
  }

  std::vector<RateAudit> audits;
  double sweep_seconds = 0.0;
  for (const Run& r : runs) {
    AuditOptions opt;
    opt.sweep_theorem = true;
    opt.limit = kSweepLimit;
    const auto t0 = Clock::now();
    audits.push_back(audit_run(r.report, opt));
    sweep_seconds = std::max(sweep_seconds, seconds_since(t0));
  }

  auto tally = [&](std::initializer_list<const char*> prefixes, bool hilbert_only) {
    Tally t;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (hilbert_only && runs[i].mode != NormMode::Hilbert) continue;
      for (const auto& c : audits[i].checks)
        for (const char* p : prefixes)
          if (starts_with(c.id, p)) t.add(c);
    }
    return t;
  };

  {
    const Tally t = tally({"product_bound.", "tail_bound."}, false);
    report(5, "theorem_sweep", t.fail == 0 && t.pass > 0 && sweep_seconds < kSweepSeconds,
           t.str() + fmt(", slowest audit %.3f s", sweep_seconds));
  }

  {
    const Tally t = tally({"pairs."}, false);
    report(6, "pair_corollaries", t.fail == 0 && t.pass > 0, t.str());
  }

  {
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const Run& r = runs[i];
      if (r.kind != FamilyKind::GaussianBump || r.weak) continue;
      const auto& fit = audits[i].fits.exponential;
      if (!fit) {
        ok = false;
        detail += r.label + " no exponential fit; ";
        continue;
      }
      ok = ok && fit->r_squared > kFitR2;
      std::vector<const char*> ids = {"rate.exp_banach"};
      if (r.mode == NormMode::Hilbert) ids.push_back("rate.exp_hilbert");
      for (const char* id : ids)
        for (std::size_t n = 1; n <= kRateMaxN; ++n) {
          const std::string idx = "n=" + std::to_string(n);
          bool found = false;
          for (const auto& c : audits[i].checks)
            if (c.id == id && c.index == idx) {
              found = true;
              ok = ok && c.status == CheckStatus::Pass;
            }
          ok = ok && found;
        }
      detail += r.label + fmt(" R2 %.4f", fit->r_squared) + fmt(" alpha %.2f; ", fit->alpha);
    }
    report(7, "exponential_rate", ok, detail + "n = 1.." + std::to_string(kRateMaxN));
  }

  {
    const Tally t = tally({"S1.", "S2"}, true);
    report(8, "gram_schmidt_diagonal", t.fail == 0 && t.pass > 0, t.str());
  }

  {
    std::mt19937_64 rng(20260501);
    std::normal_distribution<double> N;
    std::uniform_int_distribution<std::size_t> Kd(2, kProjectionMaxK);
    std::size_t failed = 0;
    double worst = 1e300;
    const auto t0 = Clock::now();
    for (std::size_t trial = 0; trial < kProjectionInstances; ++trial) {
      const std::size_t K = Kd(rng);
      const std::size_t m = std::uniform_int_distribution<std::size_t>(1, K - 1)(rng);
      Eigen::MatrixXd G = Eigen::MatrixXd::Zero(K, K), W(K, m);
      for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j <= i; ++j) G(i, j) = N(rng);
      for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < m; ++j) W(i, j) = N(rng);
      const ProductInequality p = projection_lemma_check(G, W, m);
      const double slack = (p.rhs - p.lhs) / std::max(1.0, p.rhs);
      worst = std::min(worst, slack);
      if (slack < kProjectionSlack) ++failed;
    }
    const double secs = seconds_since(t0);
    report(9, "projection_lemma", failed == 0 && secs < kProjectionSeconds,
           std::to_string(kProjectionInstances) + " instances, " + std::to_string(failed) + " fail" +
               fmt(", min relative slack %.3e", worst) + fmt(", %.3f s", secs));
  }

  {
    test::HandExample h;
    GreedyConfig cfg;
    cfg.n_max = 3;
    const GreedyResult r = run_geim(h.F, h.sigmas, cfg);
    const bool order = r.phi_index == std::vector<std::size_t>{0, 1, 2} &&
                       r.sigma_index == std::vector<std::size_t>{0, 1, 2};
    const double tau1 = compute_tau(h.F, r, NormMode::Hilbert)[1];
    const double beta2 = lebesgue_hilbert(r, 2).beta;
    const double eps2 = interp_error(h.F[2], r, 2, NormMode::Hilbert);
    const bool ok = order && std::abs(tau1 - 0.8) <= kHandTol && std::abs(beta2 - 1.0) <= kHandTol &&
                    std::abs(eps2 - 0.5) <= kHandTol;
    report(10, "hand_example", ok,
           std::string("order ") + (order ? "0,1,2" : "wrong") + fmt(", tau1 %.15g", tau1) +
               fmt(", beta2 %.15g", beta2) + fmt(", eps2 %.15g", eps2));
  }

  {
    std::mt19937_64 rng(33);
    std::normal_distribution<double> N;
    std::vector<Eigen::MatrixXd> sets;
    sets.push_back((Eigen::MatrixXd(3, 3) << 1, 0.6, 0, 0, 0.8, 0, 0, 0, 0.5).finished());
    for (int dim : {2, 3})
      for (int trial = 0; trial < 3; ++trial) {
        Eigen::MatrixXd X(dim, 6);
        for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = 0.4 * N(rng);
        sets.push_back(X);
      }
    double worst = 0.0;
    bool below = true;
    for (const auto& X : sets) {
      const GridPtr g = test::unit_grid(static_cast<std::size_t>(X.rows()));
      std::vector<DiscreteFunction> members;
      for (Eigen::Index j = 0; j < X.cols(); ++j) members.emplace_back(g, X.col(j));
      const double d1 = compute_widths(FunctionSet(members), 1).d[1];
      const double brute = brute_width(X);
      worst = std::max(worst, std::abs(d1 - brute));
      below = below && d1 <= brute + kAbsSlack;
    }
    report(11, "width_oracle", worst <= kWidthTol && below,
           std::to_string(sets.size()) + " sets" + fmt(", max |d1 - brute| %.2e", worst));
  }

  {
    const Run a = make_run("a", NormMode::Hilbert, FamilyKind::GaussianBump, true);
    const Run b = make_run("b", NormMode::Hilbert, FamilyKind::GaussianBump, true);
    const std::string sa = app::artifact_to_string(a.result);
    const std::string sb = app::artifact_to_string(b.result);
    const bool same = sa == sb;
    const bool round = app::artifact_to_string(app::artifact_from_string(sa)) == sa;
    const std::string ra = app::report_to_string(a.report);
    const bool report_round = app::report_to_string(app::report_from_string(ra)) == ra;
    report(12, "determinism_round_trip", same && round && report_round,
           std::string("same seed ") + (same ? "identical" : "differs") + ", artifact round trip " +
               (round ? "identical" : "differs") + ", analysis round trip " +
               (report_round ? "identical" : "differs"));
  }

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
