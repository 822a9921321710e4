#include "geim/rates.hpp"

#include "geim/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace geim {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::string n_index(std::size_t n) { return "n=" + std::to_string(n); }

std::string nkm_index(std::size_t N, std::size_t K, std::size_t m) {
  return "N=" + std::to_string(N) + ",K=" + std::to_string(K) + ",m=" + std::to_string(m);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    ss_res += e * e;
  }
  if (syy > 0.0) f.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  else f.r2 = ss_res == 0.0 ? 1.0 : 0.0;
  return f;
}

LineFit exp_fit(const std::vector<double>& n, const std::vector<double>& logs, double alpha) {
  std::vector<double> x(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) x[i] = std::pow(n[i], alpha);
  return least_squares(x, logs);
}

double exp_score(const std::vector<double>& n, const std::vector<double>& logs, double alpha) {
  const LineFit f = exp_fit(n, logs, alpha);
  return f.slope < 0.0 ? f.r2 : -1.0;
}

void check_gamma_entry(double g) {
  if (!(g > 0.0) || g > 1.0)
    throw DegenerateInputError("gamma entries must lie in (0, 1]");
}

void check_eta(double eta) {
  if (!(eta > 0.0) || eta > 1.0) throw DegenerateInputError("eta must lie in (0, 1]");
}

/// sum_{i=from}^{to} log gamma_i
double log_gamma_sum(std::span<const double> gamma, std::size_t from, std::size_t to) {
  if (to >= gamma.size())
    throw InsufficientHistoryError("needs gamma_" + std::to_string(to) + ", have " +
                                   std::to_string(gamma.size()) + " entries");
  double s = 0.0;
  for (std::size_t i = from; i <= to; ++i) {
    check_gamma_entry(gamma[i]);
    s += std::log(gamma[i]);
  }
  return s;
}

double log_beta(std::size_t n, Regime regime, double alpha, double eta,
                std::span<const double> gamma) {
  if (n == 1) return std::log(2.0 * (1.0 + 1.0 / eta));
  const double log_2sqrt2 = 1.5 * kLn2;
  switch (regime) {
    case Regime::PolyBanach:
    case Regime::PolyHilbert: {
      const IndexSplit s = index_split(n);
      const std::size_t shift = (s.k + 3) / 4;
      const std::size_t start = s.l1 - shift + 1;
      const double lg = log_gamma_sum(gamma, start, start + s.l2 - 1) / static_cast<double>(s.l2);
      const double rec = log_beta(s.l1, regime, alpha, eta, gamma);
      const double lead = regime == Regime::PolyBanach
                              ? std::log(2.0 * static_cast<double>(s.l2))
                              : kLn2;
      return -lg + 0.5 * (lead + rec) + alpha * log_2sqrt2;
    }
    case Regime::ExpBanach:
    case Regime::ExpHilbert: {
      const std::size_t p = 2 * (n / 2);
      const double lg = log_gamma_sum(gamma, 1, p) / static_cast<double>(p);
      double v = -lg + 0.5 * kLn2;
      if (regime == Regime::ExpBanach) v += 0.5 * std::log(static_cast<double>(n));
      return v;
    }
  }
  return 0.0;
}

void require_block(std::span<const double> tau, std::span<const double> gamma,
                   std::span<const double> d, std::size_t N, std::size_t K, std::size_t m) {
  if (K < 2 || m < 1 || m >= K)
    throw std::invalid_argument("need K >= 2 and 1 <= m < K");
  if (N + K >= tau.size() || N + K >= gamma.size() || m >= d.size())
    throw std::out_of_range("(N,K,m) = (" + std::to_string(N) + "," + std::to_string(K) + "," +
                            std::to_string(m) + ") beyond the measured sequences");
}

const char* space_tag(Space s) { return s == Space::Banach ? "banach" : "hilbert"; }

double safe_log(double v) {
  return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

}  // namespace

std::string to_string(DecayKind kind) {
  return kind == DecayKind::Polynomial ? "polynomial" : "exponential";
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::PolyBanach: return "poly_banach";
    case Regime::ExpBanach: return "exp_banach";
    case Regime::PolyHilbert: return "poly_hilbert";
    case Regime::ExpHilbert: return "exp_hilbert";
  }
  return "?";
}

double DecayFit::shape(double n) const {
  if (kind == DecayKind::Polynomial) return std::pow(n, -alpha);
  return std::exp(-c1 * std::pow(n, alpha));
}

DecayFit fit_decay(std::span<const double> seq, DecayKind kind, std::size_t first) {
  if (seq.size() < 4) throw DegenerateInputError("fit_decay needs at least 4 entries");
  if (first < 1) throw DegenerateInputError("fit_decay: first index must be >= 1");
  std::vector<double> n(seq.size()), logs(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!(seq[i] > 0.0) || !std::isfinite(seq[i]))
      throw DegenerateInputError("fit_decay: entry " + std::to_string(first + i) +
                                 " is not positive");
    n[i] = static_cast<double>(first + i);
    logs[i] = std::log(seq[i]);
  }

  DecayFit fit;
  fit.kind = kind;
  fit.first = first;
  fit.last = first + seq.size() - 1;

  if (kind == DecayKind::Polynomial) {
    std::vector<double> x(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) x[i] = std::log(n[i]);
    const LineFit f = least_squares(x, logs);
    if (!(f.slope < 0.0)) throw DegenerateInputError("fit_decay: sequence does not decay");
    fit.alpha = -f.slope;
    fit.r_squared = f.r2;
  } else {
    double best = 0.25, best_score = -2.0;
    for (int k = 0; k <= 175; ++k) {
      const double a = 0.25 + 0.01 * k;
      const double s = exp_score(n, logs, a);
      if (s > best_score) {
        best_score = s;
        best = a;
      }
    }
    if (best_score < 0.0) throw DegenerateInputError("fit_decay: sequence does not decay");
    // golden-section refinement around the best grid point
    double lo = std::max(0.25, best - 0.01), hi = std::min(2.0, best + 0.01);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = exp_score(n, logs, x1), f2 = exp_score(n, logs, x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = exp_score(n, logs, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = exp_score(n, logs, x2);
      }
    }
    const double a = 0.5 * (lo + hi);
    if (exp_score(n, logs, a) >= best_score) best = a;
    const LineFit f = exp_fit(n, logs, best);
    fit.alpha = best;
    fit.c1 = -f.slope;
    fit.r_squared = f.r2;
  }

  double log_c0 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n.size(); ++i)
    log_c0 = std::max(log_c0, logs[i] - std::log(fit.shape(n[i])));
  fit.C0 = std::exp(log_c0);
  return fit;
}

std::vector<double> gamma_sequence(std::span<const double> eta, std::span<const double> lambda) {
  const std::size_t n = std::min(eta.size(), lambda.size());
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    check_eta(eta[i]);
    if (!(lambda[i] >= 0.0)) throw DegenerateInputError("Lebesgue constants must be >= 0");
    g[i] = eta[i] / (1.0 + lambda[i]);
  }
  return g;
}

IndexSplit index_split(std::size_t n) {
  if (n < 1) throw DegenerateInputError("index_split needs n >= 1");
  IndexSplit s;
  s.l = n / 4;
  s.k = n % 4;
  s.l1 = 2 * s.l + (2 * s.k) / 3;
  s.l2 = 2 * (s.l + (s.k + 3) / 4);
  return s;
}

double beta_coeff(std::size_t n, Regime regime, double alpha, double eta,
                  std::span<const double> gamma) {
  if (n < 1) throw DegenerateInputError("beta_coeff needs n >= 1");
  check_eta(eta);
  return std::exp(log_beta(n, regime, alpha, eta, gamma));
}

double monotone_coeffs(std::size_t n, Regime regime, double alpha, double eta, double gamma_n) {
  if (n < 1) throw DegenerateInputError("monotone_coeffs needs n >= 1");
  check_eta(eta);
  if (n == 1) return 2.0 * (1.0 + 1.0 / eta);
  check_gamma_entry(gamma_n);
  switch (regime) {
    case Regime::PolyBanach:
      return std::exp2(3.0 * alpha + 1.0) * static_cast<double>(index_split(n).l2) /
             (gamma_n * gamma_n);
    case Regime::ExpBanach: return std::sqrt(2.0 * static_cast<double>(n)) / gamma_n;
    case Regime::PolyHilbert: return std::exp2(3.0 * alpha + 1.0) / (gamma_n * gamma_n);
    case Regime::ExpHilbert: return std::sqrt(2.0) / gamma_n;
  }
  return 0.0;
}

double c1_zeta_constant(double alpha, double zeta, double beta_exponent, double C0,
                        double Czeta) {
  if (!(beta_exponent > 0.5)) throw DegenerateInputError("beta_exponent must exceed 1/2");
  if (!(zeta > 0.0) || !(alpha > 0.0))
    throw DegenerateInputError("alpha and zeta must be positive");
  const double zb = zeta + beta_exponent;
  const double first = C0 * std::exp2(2.0 * alpha * alpha / zeta) *
                       std::pow(zb / (beta_exponent - 0.5), alpha) *
                       std::max(1.0, std::pow(Czeta, zb / zeta));
  const auto n_max = static_cast<std::size_t>(2.0 * std::floor(2.0 * zb) + 1.0);
  double second = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n)
    second = std::max(second, std::pow(static_cast<double>(n), alpha - zb));
  return std::max(first, second);
}

CheckRecord check_main_theorem(std::span<const double> tau, std::span<const double> gamma,
                               std::span<const double> d, std::size_t N, std::size_t K,
                               std::size_t m, Space space) {
  require_block(tau, gamma, d, N, K, m);
  const double k = static_cast<double>(K);
  const double mm = static_cast<double>(m);
  double log_lhs = 0.0, sum_sq = 0.0;
  for (std::size_t i = 1; i <= K; ++i) {
    log_lhs += safe_log(tau[N + i]);
    sum_sq += tau[N + i] * tau[N + i];
  }
  log_lhs /= k;
  double log_rhs = -log_gamma_sum(gamma, N + 1, N + K) / k +
                   ((k - mm) / k) * safe_log(d[m]);
  if (space == Space::Banach) {
    log_rhs += 0.5 * kLn2 + ((k - mm) / (2.0 * k)) * std::log(k) +
               (mm / (2.0 * k)) * safe_log(sum_sq);
  } else {
    log_rhs += (mm / (2.0 * k)) * std::log(k / mm) +
               ((k - mm) / (2.0 * k)) * std::log(k / (k - mm)) + (mm / k) * safe_log(tau[N + 1]);
  }
  return make_check(std::string("product_bound.") + space_tag(space), nkm_index(N, K, m),
                    std::exp(log_lhs), std::exp(log_rhs), "2K-th roots");
}

CheckRecord check_tail_bound(std::span<const double> tau, std::span<const double> gamma,
                             std::span<const double> d, std::size_t N, std::size_t K,
                             std::size_t m, Space space) {
  require_block(tau, gamma, d, N, K, m);
  const double k = static_cast<double>(K);
  const double r = static_cast<double>(m) / k;
  double log_rhs = -log_gamma_sum(gamma, N + 1, N + K) / k + r * safe_log(tau[N + 1]) +
                   (1.0 - r) * safe_log(d[m]);
  log_rhs += space == Space::Banach ? 0.5 * std::log(2.0 * k) : 0.5 * kLn2;
  return make_check(std::string("tail_bound.") + space_tag(space), nkm_index(N, K, m),
                    tau[N + K], std::exp(log_rhs));
}

CheckRecord check_min_bound(std::span<const double> tau, std::span<const double> gamma,
                            std::span<const double> d, std::size_t n, Space space) {
  if (n < 2) throw std::invalid_argument("check_min_bound needs n >= 2");
  if (n >= tau.size() || n >= gamma.size() || n > d.size())
    throw std::out_of_range("n = " + std::to_string(n) + " beyond the measured sequences");
  const double nn = static_cast<double>(n);
  double sum_sq = 0.0;
  for (std::size_t i = 1; i <= n; ++i) sum_sq += tau[i] * tau[i];
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m < n; ++m) {
    const double mm = static_cast<double>(m);
    double v = ((nn - mm) / nn) * safe_log(d[m]);
    if (space == Space::Banach)
      v += ((nn - mm) / (2.0 * nn)) * std::log(nn) + (mm / (2.0 * nn)) * safe_log(sum_sq);
    best = std::min(best, v);
  }
  const double log_rhs = -log_gamma_sum(gamma, 1, n) / nn + 0.5 * kLn2 + best;
  return make_check(std::string("min_bound.") + space_tag(space), n_index(n), tau[n],
                    std::exp(log_rhs));
}

CheckRecord check_pairs(std::span<const double> tau, std::span<const double> gamma,
                        std::span<const double> d, std::size_t l, Space space) {
  if (l < 1) throw std::invalid_argument("check_pairs needs l >= 1");
  const std::size_t n = 2 * l;
  if (n >= tau.size() || n >= gamma.size() || l >= d.size())
    throw std::out_of_range("2l = " + std::to_string(n) + " beyond the measured sequences");
  double log_rhs = -log_gamma_sum(gamma, 1, n) / static_cast<double>(n);
  if (space == Space::Banach)
    log_rhs += kLn2 + 0.5 * safe_log(static_cast<double>(l) * d[l]);
  else
    log_rhs += 0.5 * kLn2 + 0.5 * safe_log(d[l]);
  return make_check(std::string("pairs.") + space_tag(space), "l=" + std::to_string(l), tau[n],
                    std::exp(log_rhs));
}

std::vector<CheckRecord> sweep_main_theorem(std::span<const double> tau,
                                            std::span<const double> gamma,
                                            std::span<const double> d, std::size_t limit,
                                            Space space, bool full) {
  std::size_t top = limit;
  if (!tau.empty()) top = std::min(top, tau.size() - 1);
  top = gamma.empty() ? 0 : std::min(top, gamma.size() - 1);
  std::vector<CheckRecord> out;
  for (std::size_t N = 0; N + 2 <= top; ++N) {
    if (!full && N > 0) break;
    for (std::size_t K = 2; N + K <= top; ++K) {
      for (std::size_t m = 1; m < K; ++m) {
        if (m >= d.size()) continue;
        out.push_back(check_main_theorem(tau, gamma, d, N, K, m, space));
        out.push_back(check_tail_bound(tau, gamma, d, N, K, m, space));
      }
    }
  }
  return out;
}

HypothesisFits fit_hypotheses(const AnalysisReport& report) {
  HypothesisFits fits;
  const std::vector<double>& src = report.mode == NormMode::Hilbert ? report.d : report.tau;
  std::vector<double> seq;
  for (std::size_t n = 1; n < src.size() && n <= report.size; ++n) {
    if (!(src[n] > 0.0)) break;
    seq.push_back(src[n]);
  }
  if (seq.size() < 4) {
    fits.note = "fewer than 4 positive entries to fit";
    return fits;
  }
  for (DecayKind kind : {DecayKind::Polynomial, DecayKind::Exponential}) {
    try {
      DecayFit f = fit_decay(seq, kind, 1);
      if (kind == DecayKind::Polynomial) fits.polynomial = f;
      else fits.exponential = f;
    } catch (const DegenerateInputError& e) {
      if (!fits.note.empty()) fits.note += "; ";
      fits.note += to_string(kind) + ": " + e.what();
    }
  }
  return fits;
}

namespace {

class Auditor {
 public:
  Auditor(const AnalysisReport& rep, const HypothesisFits& fits, const AuditOptions& opt)
      : rep_(rep), fits_(fits), opt_(opt), hilbert_(rep.mode == NormMode::Hilbert) {
    d_ = hilbert_ ? rep.d : rep.tau;
    d_note_ = hilbert_ ? std::string() : std::string("d:=tau (sup run)");
    if (!rep.eta.empty()) eta_c_ = *std::min_element(rep.eta.begin(), rep.eta.end());
    for (std::size_t n = 0; n < rep.gamma.size() && n < rep.lambda.size(); ++n)
      gamma_c_.push_back(eta_c_ / (1.0 + rep.lambda[n]));
    rate_top_ = rep.size;
    if (opt.rate_limit > 0) rate_top_ = std::min(rate_top_, opt.rate_limit);
  }

  std::vector<CheckRecord> run() {
    invariants();
    weak_greedy();
    first_width();
    error_bounds();
    theorems();
    appendix();
    rate_lemmas();
    monotone();
    zeta_lemma();
    return std::move(out_);
  }

 private:
  void add(CheckRecord r) {
    if (!d_note_.empty() && r.note.find("d:=") == std::string::npos &&
        uses_d(r.id)) {
      r.note = r.note.empty() ? d_note_ : r.note + "; " + d_note_;
    }
    out_.push_back(std::move(r));
  }

  static bool uses_d(const std::string& id) {
    return id.rfind("invariant", 0) != 0 && id != "weak_greedy" && id != "error_bound";
  }

  void skip(const std::string& id, const std::string& idx, const std::string& why) {
    out_.push_back(skipped_check(id, idx, why));
  }

  double eps_max(std::size_t n) const {
    return rep_.eps.row(static_cast<Eigen::Index>(n)).maxCoeff();
  }

  bool have_eps() const { return rep_.eps.rows() == static_cast<Eigen::Index>(rep_.size + 1); }
  bool have_d() const { return d_.size() == rep_.size + 1; }

  void invariants() {
    if (rep_.tau.size() != rep_.size + 1) {
      skip("invariant.tau_nonincreasing", "all", "tau missing");
      return;
    }
    out_.push_back(make_check("invariant.tau_unit", n_index(0), rep_.tau[0], 1.0,
                              "bounds assume max ||f|| <= 1"));
    for (std::size_t n = 1; n <= rep_.size; ++n)
      out_.push_back(make_check("invariant.tau_nonincreasing", n_index(n), rep_.tau[n],
                                rep_.tau[n - 1]));
    for (std::size_t n = 0; n < rep_.gamma.size(); ++n) {
      CheckRecord r = make_check("invariant.gamma_range", n_index(n), rep_.gamma[n], 1.0);
      if (!(rep_.gamma[n] > 0.0)) {
        r.status = CheckStatus::Fail;
        r.note = "gamma must be positive";
      }
      out_.push_back(r);
    }
    if (hilbert_ && have_d())
      for (std::size_t n = 0; n <= rep_.size; ++n)
        out_.push_back(make_check("invariant.d_le_tau", n_index(n), rep_.d[n], rep_.tau[n]));
  }

  void weak_greedy() {
    if (rep_.selected_residual.size() < rep_.gamma.size()) {
      skip("weak_greedy", "all", "selected residuals missing");
      return;
    }
    for (std::size_t n = 0; n < rep_.gamma.size(); ++n)
      out_.push_back(make_check("weak_greedy", n_index(n), rep_.gamma[n] * rep_.tau[n],
                                rep_.selected_residual[n]));
  }

  void first_width() {
    if (rep_.size < 1 || rep_.eta.empty() || !have_d()) {
      skip("first_width", n_index(1), "needs one step, eta_0 and d_1");
      return;
    }
    add(make_check("first_width", n_index(1), rep_.tau[1],
                   2.0 * (1.0 + 1.0 / rep_.eta[0]) * d_[1]));
  }

  void error_bounds() {
    if (!have_eps() || rep_.dist.rows() != rep_.eps.rows()) {
      skip("error_bound", "all", "eps or dist missing");
      return;
    }
    for (std::size_t n = 1; n <= rep_.size; ++n) {
      const double factor = hilbert_ ? rep_.lambda[n] : 1.0 + rep_.lambda[n];
      const auto row = static_cast<Eigen::Index>(n);
      Eigen::Index worst = 0;
      double worst_excess = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < rep_.eps.cols(); ++j) {
        const double rhs = factor * rep_.dist(row, j);
        const double excess = rep_.eps(row, j) - rhs * (1.0 + kAuditRelSlack);
        if (excess > worst_excess) {
          worst_excess = excess;
          worst = j;
        }
      }
      out_.push_back(make_check("error_bound", n_index(n), rep_.eps(row, worst),
                                factor * rep_.dist(row, worst),
                                "f=" + std::to_string(worst) +
                                    (hilbert_ ? ", Lambda*dist" : ", (1+Lambda)*dist")));
    }
  }

  void theorems() {
    if (!have_d()) {
      skip("product_bound", "all", "widths not computed");
      return;
    }
    std::vector<Space> spaces{Space::Banach};
    if (hilbert_) {
      spaces.push_back(Space::Hilbert);
    } else {
      for (const char* id :
           {"product_bound.hilbert", "tail_bound.hilbert", "min_bound.hilbert", "pairs.hilbert"})
        skip(id, "all", "Hilbert-only form on a sup run");
    }
    for (Space s : spaces) {
      for (auto& r : sweep_main_theorem(rep_.tau, rep_.gamma, d_, opt_.limit, s,
                                        opt_.sweep_theorem))
        add(std::move(r));
      for (std::size_t n = 2; n <= opt_.limit && n < rep_.gamma.size(); ++n)
        add(check_min_bound(rep_.tau, rep_.gamma, d_, n, s));
      for (std::size_t l = 1; 2 * l <= opt_.limit && 2 * l < rep_.gamma.size(); ++l)
        add(check_pairs(rep_.tau, rep_.gamma, d_, l, s));
    }
  }

  void appendix() {
    if (!hilbert_) {
      skip("S1", "all", "Hilbert-only form on a sup run");
      skip("S2", "all", "Hilbert-only form on a sup run");
      skip("proof", "all", "Hilbert-only form on a sup run");
      return;
    }
    if (!rep_.appendix) {
      skip("S1", "all", "appendix matrix not computed");
      skip("S2", "all", "appendix matrix not computed");
      return;
    }
    for (auto& r : check_s1(rep_.appendix->A, rep_.tau, rep_.gamma)) out_.push_back(r);
    for (auto& r : check_s2(rep_.appendix->A, rep_.tau)) out_.push_back(r);
    if (!opt_.proof_structure) return;
    if (!rep_.grid || rep_.witness.size() != rep_.size + 1 || !have_d()) {
      skip("proof", "all", "witness subspaces not available");
      return;
    }
    const auto rows = static_cast<std::size_t>(rep_.appendix->A.rows());
    const std::size_t top = std::min({opt_.limit, rows - 1, rep_.gamma.size() - 1});
    for (std::size_t N = 0; N + 2 <= top; ++N) {
      if (!opt_.sweep_theorem && N > 0) break;
      for (std::size_t K = 2; N + K <= top; ++K)
        for (std::size_t m = 1; m < K; ++m)
          for (auto& r : proof_structure_checks(*rep_.appendix, rep_.witness[m], rep_.grid,
                                                rep_.tau, rep_.gamma, rep_.d[m], N, K, m))
            out_.push_back(std::move(r));
    }
  }

  std::vector<Regime> regimes(DecayKind kind) const {
    std::vector<Regime> r;
    if (kind == DecayKind::Polynomial) {
      r.push_back(Regime::PolyBanach);
      if (hilbert_) r.push_back(Regime::PolyHilbert);
    } else {
      r.push_back(Regime::ExpBanach);
      if (hilbert_) r.push_back(Regime::ExpHilbert);
    }
    return r;
  }

  /// Fit with the constants the lemmas need: C0 >= 1 and c2 for exponential.
  struct Hyp {
    double C0;
    double alpha;
    double c2;
    DecayKind kind;
    double shape(double n) const {
      return kind == DecayKind::Polynomial ? std::pow(n, -alpha)
                                           : std::exp(-c2 * std::pow(n, alpha));
    }
  };

  std::optional<Hyp> hypothesis(DecayKind kind) const {
    const auto& f = kind == DecayKind::Polynomial ? fits_.polynomial : fits_.exponential;
    if (!f) return std::nullopt;
    if (kind == DecayKind::Polynomial) return Hyp{f->C0, f->alpha, 0.0, kind};
    return Hyp{std::max(1.0, f->C0), f->alpha, f->c1 * std::exp2(-2.0 * f->alpha - 1.0), kind};
  }

  static std::string rate_id(const char* stem, Regime r) {
    return std::string(stem) + "." + to_string(r);
  }

  void missing_fit(DecayKind kind) {
    const std::string why = "no " + to_string(kind) + " fit" +
                            (fits_.note.empty() ? std::string() : ": " + fits_.note);
    for (Regime r : regimes(kind)) {
      skip(rate_id("rate", r), "all", why);
      skip(rate_id("interp_rate", r), "all", why);
    }
  }

  void rate_lemmas() {
    if (!hilbert_) {
      skip("rate.poly_hilbert", "all", "Hilbert-only form on a sup run");
      skip("rate.exp_hilbert", "all", "Hilbert-only form on a sup run");
    }
    if (rep_.eta.empty()) {
      skip("rate", "all", "eta missing");
      return;
    }
    for (DecayKind kind : {DecayKind::Polynomial, DecayKind::Exponential}) {
      const auto h = hypothesis(kind);
      if (!h) {
        missing_fit(kind);
        continue;
      }
      for (Regime r : regimes(kind)) {
        for (std::size_t n = 1; n <= rate_top_; ++n) {
          double beta = 0.0;
          try {
            beta = beta_coeff(n, r, h->alpha, rep_.eta[0], rep_.gamma);
          } catch (const InsufficientHistoryError& e) {
            skip(rate_id("rate", r), n_index(n), e.what());
            skip(rate_id("interp_rate", r), n_index(n), e.what());
            continue;
          }
          const double nn = static_cast<double>(n);
          const double bound = h->C0 * beta * h->shape(nn);
          add(make_check(rate_id("rate", r), n_index(n), rep_.tau[n], bound));
          if (have_eps())
            add(make_check(rate_id("interp_rate", r), n_index(n), eps_max(n),
                           (1.0 + rep_.lambda[n]) * bound));
          else
            skip(rate_id("interp_rate", r), n_index(n), "eps missing");
        }
      }
    }
  }

  void monotone() {
    if (gamma_c_.empty()) return;
    // Lambda_1 <= ... <= Lambda_n
    std::vector<bool> increasing(rep_.size + 1, true);
    for (std::size_t n = 2; n <= rep_.size; ++n)
      increasing[n] = increasing[n - 1] && rep_.lambda[n] >= rep_.lambda[n - 1];
    const std::string eta_note = "eta=" + std::to_string(eta_c_) + " (min measured)";
    for (DecayKind kind : {DecayKind::Polynomial, DecayKind::Exponential}) {
      const auto h = hypothesis(kind);
      if (!h) continue;
      for (Regime r : regimes(kind)) {
        for (std::size_t n = 1; n <= rate_top_; ++n) {
          const std::string idx = n_index(n);
          if (!increasing[n]) {
            for (const char* stem : {"rate_monotone", "coeff_dominance", "interp_monotone"})
              skip(rate_id(stem, r), idx, "Lambda not increasing up to n");
            continue;
          }
          if (n >= gamma_c_.size()) {
            for (const char* stem : {"rate_monotone", "coeff_dominance", "interp_monotone"})
              skip(rate_id(stem, r), idx, "needs gamma_n");
            continue;
          }
          const double tilde = monotone_coeffs(n, r, h->alpha, eta_c_, gamma_c_[n]);
          const double beta = beta_coeff(n, r, h->alpha, eta_c_, gamma_c_);
          const double bound = h->C0 * tilde * h->shape(static_cast<double>(n));
          add(make_check(rate_id("coeff_dominance", r), idx, beta, tilde, eta_note));
          add(make_check(rate_id("rate_monotone", r), idx, rep_.tau[n], bound, eta_note));
          if (have_eps())
            add(make_check(rate_id("interp_monotone", r), idx, eps_max(n),
                           (1.0 + rep_.lambda[n]) * bound, eta_note));
        }
      }
    }
  }

  void zeta_lemma() {
    const auto h = hypothesis(DecayKind::Polynomial);
    if (!h || gamma_c_.size() < 3) {
      skip("rate_zeta", "all", "needs a polynomial fit and gamma_1, gamma_2");
      return;
    }
    std::vector<double> x, y;
    for (std::size_t n = 1; n < gamma_c_.size(); ++n) {
      x.push_back(std::log(static_cast<double>(n)));
      y.push_back(-std::log(gamma_c_[n]));
    }
    const double zeta = std::max(least_squares(x, y).slope, 0.1);
    double log_cz = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) log_cz = std::max(log_cz, y[i] - zeta * x[i]);
    const double Cz = std::exp(log_cz);
    const double b = opt_.beta_exponent;
    const double C1 = c1_zeta_constant(h->alpha, zeta, b, h->C0, Cz);
    const std::string note = "zeta=" + std::to_string(zeta) + ", Czeta=" + std::to_string(Cz);
    for (std::size_t n = 1; n < gamma_c_.size() && n <= rate_top_; ++n) {
      const double nn = static_cast<double>(n);
      add(make_check("rate_zeta", n_index(n), rep_.tau[n],
                     C1 * std::pow(nn, -h->alpha + zeta + b), note));
      if (have_eps())
        add(make_check("interp_zeta", n_index(n), eps_max(n),
                       eta_c_ * Cz * C1 * std::pow(nn, -h->alpha + 2.0 * zeta + b), note));
    }
  }

  const AnalysisReport& rep_;
  const HypothesisFits& fits_;
  const AuditOptions& opt_;
  bool hilbert_;
  std::vector<double> d_;
  std::string d_note_;
  double eta_c_ = 1.0;
  std::vector<double> gamma_c_;
  std::size_t rate_top_ = 0;
  std::vector<CheckRecord> out_;
};

}  // namespace

RateAudit audit_run(const AnalysisReport& report, const HypothesisFits& fits,
                    const AuditOptions& options) {
  RateAudit audit;
  audit.fits = fits;
  audit.checks = Auditor(report, fits, options).run();
  audit.counts = count(audit.checks);
  return audit;
}

RateAudit audit_run(const AnalysisReport& report, const AuditOptions& options) {
  return audit_run(report, fit_hypotheses(report), options);
}

}  // namespace geim
