#pragma once

#include "geim/analysis.hpp"
#include "geim/check.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace geim {

enum class DecayKind { Polynomial, Exponential };

std::string to_string(DecayKind kind);

/// s_n <= C0 n^{-alpha} (Polynomial) or s_n <= C0 exp(-c1 n^alpha) (Exponential)
/// on the fitted range [first, last].
struct DecayFit {
  DecayKind kind = DecayKind::Polynomial;
  double C0 = 1.0;
  double c1 = 0.0;  ///< 0 for Polynomial
  double alpha = 1.0;
  double r_squared = 0.0;
  std::size_t first = 1;
  std::size_t last = 1;

  double shape(double n) const;
  double bound(double n) const { return C0 * shape(n); }
};

/// Least-squares fit in log space; seq[i] is s_{first + i}. C0 is raised to the
/// envelope max_n s_n / shape(n) so the bound holds on every fitted entry.
/// Throws DegenerateInputError on nonpositive entries, fewer than 4 entries
/// or a sequence that does not decay.
DecayFit fit_decay(std::span<const double> seq, DecayKind kind, std::size_t first = 1);

/// gamma_n = eta_n / (1 + Lambda_n) over the common length.
std::vector<double> gamma_sequence(std::span<const double> eta, std::span<const double> lambda);

/// n = 4l + k, l1 = 2l + floor(2k/3), l2 = 2(l + ceil(k/4)).
struct IndexSplit {
  std::size_t l;
  std::size_t k;
  std::size_t l1;
  std::size_t l2;
};
IndexSplit index_split(std::size_t n);

enum class Regime { PolyBanach, ExpBanach, PolyHilbert, ExpHilbert };

std::string to_string(Regime regime);

/// Rate coefficient beta_n; gamma[i] is gamma_i. beta_1 = 2(1 + 1/eta).
/// Throws InsufficientHistoryError when a needed gamma index is missing.
double beta_coeff(std::size_t n, Regime regime, double alpha, double eta,
                  std::span<const double> gamma);

/// Coefficient for an increasing Lebesgue sequence, from gamma_n alone.
double monotone_coeffs(std::size_t n, Regime regime, double alpha, double eta, double gamma_n);

/// Constant C1 of the bound tau_n <= C1 n^{-alpha + zeta + beta_exponent}
/// under gamma_n^{-1} <= Czeta n^zeta. Throws DegenerateInputError unless
/// beta_exponent > 1/2, zeta > 0 and alpha > 0.
double c1_zeta_constant(double alpha, double zeta, double beta_exponent, double C0, double Czeta);

enum class Space { Banach, Hilbert };

/// Product bound over the block N+1..N+K, compared as 2K-th roots.
/// Throws std::out_of_range when a sequence is too short and
/// std::invalid_argument unless K >= 2 and 1 <= m < K.
CheckRecord check_main_theorem(std::span<const double> tau, std::span<const double> gamma,
                               std::span<const double> d, std::size_t N, std::size_t K,
                               std::size_t m, Space space);

/// tau_{N+K} against tau_{N+1}^{m/K} d_m^{1-m/K}.
CheckRecord check_tail_bound(std::span<const double> tau, std::span<const double> gamma,
                             std::span<const double> d, std::size_t N, std::size_t K,
                             std::size_t m, Space space);

/// tau_n against the minimum over 1 <= m < n of the N = 0 bound.
CheckRecord check_min_bound(std::span<const double> tau, std::span<const double> gamma,
                            std::span<const double> d, std::size_t n, Space space);

/// tau_{2l} against the m = l, n = 2l bound.
CheckRecord check_pairs(std::span<const double> tau, std::span<const double> gamma,
                        std::span<const double> d, std::size_t l, Space space);

/// Product bound and tail bound for every (N,K,m) with N+K <= limit (and
/// N = 0 only unless full). Stops at the available history.
std::vector<CheckRecord> sweep_main_theorem(std::span<const double> tau,
                                            std::span<const double> gamma,
                                            std::span<const double> d, std::size_t limit,
                                            Space space, bool full = true);

struct HypothesisFits {
  std::optional<DecayFit> polynomial;
  std::optional<DecayFit> exponential;
  std::string note;  ///< why a fit is missing
};

/// Fits on d_1..d_n (tau in Sup mode) up to the first nonpositive entry.
HypothesisFits fit_hypotheses(const AnalysisReport& report);

struct AuditOptions {
  bool sweep_theorem = false;      ///< all N, not only N = 0
  std::size_t limit = 16;          ///< N + K <= limit
  std::size_t rate_limit = 0;      ///< rate lemmas for n <= rate_limit; 0 = all
  double beta_exponent = 1.0;
  bool proof_structure = true;
};

struct RateAudit {
  std::vector<CheckRecord> checks;
  CheckCounts counts;
  HypothesisFits fits;

  bool all_pass() const noexcept { return counts.fail == 0; }
};

RateAudit audit_run(const AnalysisReport& report, const AuditOptions& options = {});
RateAudit audit_run(const AnalysisReport& report, const HypothesisFits& fits,
                    const AuditOptions& options = {});

}  // namespace geim
