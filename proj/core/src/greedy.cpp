#include "geim/greedy.hpp"

#include "geim/error.hpp"
#include "geim/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace geim {

std::string to_string(SubsetKind kind) {
  switch (kind) {
    case SubsetKind::Full: return "full";
    case SubsetKind::FixedSize: return "fixed";
    case SubsetKind::Growing: return "growing";
  }
  return "?";
}

SubsetKind parse_subset_kind(std::string_view text) {
  if (text == "full" || text == "Full") return SubsetKind::Full;
  if (text == "fixed" || text == "FixedSize") return SubsetKind::FixedSize;
  if (text == "growing" || text == "Growing") return SubsetKind::Growing;
  throw Error("unknown subset schedule '" + std::string(text) + "'");
}

std::vector<double> residual_norms(const GreedyResult& state, const FunctionSet& F) {
  std::vector<double> out;
  out.reserve(F.size());
  for (const auto& f : F.members()) out.push_back(interp_error(f, state, state.size(), state.mode));
  return out;
}

namespace {

// Lowest index wins ties: candidates are scanned in increasing order.
std::size_t argmax_over(const std::vector<double>& values, std::span<const std::size_t> candidates) {
  std::vector<std::size_t> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end());
  std::size_t best = order.front();
  for (std::size_t idx : order)
    if (values[idx] > values[best]) best = idx;
  return best;
}

// Appends phi = F[phi_index] with its functional and basis function.
void append(GreedyResult& state, const FunctionSet& F, std::size_t phi_index,
            std::span<const Functional> sigmas, double eps, double eta) {
  const std::size_t n = state.size();
  const DiscreteFunction& phi = F[phi_index];
  DiscreteFunction r = phi;
  if (n > 0) {
    r = phi - interpolate(phi, state, n);
    // second pass removes the cancellation error left in sigma_i(r), i < n
    r = r - interpolate(r, state, n);
  }

  std::size_t best = 0;
  double best_abs = -1.0;
  double best_val = 0.0;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const double v = apply(sigmas[k], r);
    if (std::abs(v) > best_abs) {
      best = k;
      best_abs = std::abs(v);
      best_val = v;
    }
  }
  const double rnorm = norm(r, state.mode);
  if (!(best_abs > 1e-13 * rnorm))
    throw UnisolvenceError(n, "greedy step " + std::to_string(n) +
                                  ": every dictionary functional annihilates the residual");

  DiscreteFunction q = (1.0 / best_val) * r;
  state.selected_phi.push_back(phi);
  state.selected_sigma.push_back(sigmas[best]);
  state.basis_q.push_back(std::move(q));
  state.eps_history.push_back(eps);
  state.effective_eta.push_back(eta);
  state.phi_index.push_back(phi_index);
  state.sigma_index.push_back(best);

  const auto k = static_cast<Eigen::Index>(n + 1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(k, k);
  B.topLeftCorner(k - 1, k - 1) = state.B;
  for (Eigen::Index i = 0; i < k; ++i) {
    B(i, k - 1) = apply(state.selected_sigma[static_cast<std::size_t>(i)], state.basis_q.back());
    B(k - 1, i) = apply(state.selected_sigma.back(), state.basis_q[static_cast<std::size_t>(i)]);
  }
  state.B = std::move(B);
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

double ratio(double chosen, double best) { return best > 0.0 ? chosen / best : 1.0; }

}  // namespace

GreedyResult select_first(const FunctionSet& F, std::span<const Functional> sigmas,
                          NormMode mode) {
  if (sigmas.empty()) throw DegenerateInputError("select_first: empty dictionary");
  GreedyResult state;
  state.mode = mode;
  state.grid = F.grid();
  const auto norms = residual_norms(state, F);
  const auto idx = all_indices(F.size());
  const std::size_t best = argmax_over(norms, idx);
  if (!(norms[best] > 0.0)) throw DegenerateInputError("select_first: every member is zero");
  append(state, F, best, sigmas, norms[best], 1.0);
  return state;
}

GreedyResult greedy_step(const GreedyResult& state, const FunctionSet& F,
                         std::span<const std::size_t> candidates,
                         std::span<const Functional> sigmas, double stop_tol) {
  if (state.size() == 0) throw StructuralError("greedy_step: state must hold at least one step");
  if (candidates.empty()) throw StructuralError("greedy_step: no candidates");
  require_same_grid(state.grid, F.grid(), "greedy_step");
  GreedyResult next = state;
  const auto norms = residual_norms(state, F);
  const std::size_t best = argmax_over(norms, candidates);
  if (norms[best] <= stop_tol * state.eps_history.front()) {
    next.stopped_early = true;
    return next;
  }
  const double full_max = *std::max_element(norms.begin(), norms.end());
  append(next, F, best, sigmas, norms[best], ratio(norms[best], full_max));
  return next;
}

GreedyResult greedy_step(const GreedyResult& state, const FunctionSet& F_n,
                         std::span<const Functional> sigmas, double stop_tol) {
  const auto idx = all_indices(F_n.size());
  return greedy_step(state, F_n, idx, sigmas, stop_tol);
}

GreedyResult run_geim(const FunctionSet& F, std::span<const Functional> sigmas,
                      const GreedyConfig& cfg) {
  if (cfg.n_max == 0) throw StructuralError("run_geim: n_max must be positive");
  if (cfg.n_max > std::min(F.size(), sigmas.size()))
    throw StructuralError("run_geim: n_max " + std::to_string(cfg.n_max) +
                          " exceeds min(|F|, |Sigma|) = " +
                          std::to_string(std::min(F.size(), sigmas.size())));
  if (!(cfg.eta_target > 0.0 && cfg.eta_target <= 1.0))
    throw StructuralError("run_geim: eta_target must lie in (0, 1]");
  if (cfg.subset.kind != SubsetKind::Full && cfg.subset.size == 0)
    throw StructuralError("run_geim: subset schedule needs a positive size");
  if (sigmas.empty()) throw DegenerateInputError("run_geim: empty dictionary");

  std::mt19937_64 rng(cfg.seed);
  const auto everyone = all_indices(F.size());
  std::vector<std::size_t> permutation = everyone;
  if (cfg.subset.kind == SubsetKind::Growing) std::shuffle(permutation.begin(), permutation.end(), rng);

  auto draw = [&](std::size_t step) -> std::vector<std::size_t> {
    switch (cfg.subset.kind) {
      case SubsetKind::Full:
        return everyone;
      case SubsetKind::FixedSize: {
        std::vector<std::size_t> s;
        const std::size_t m = std::min(cfg.subset.size, F.size());
        std::sample(everyone.begin(), everyone.end(), std::back_inserter(s), m, rng);
        return s;
      }
      case SubsetKind::Growing: {
        const std::size_t m = std::min(F.size(), cfg.subset.size * (step + 1));
        return {permutation.begin(), permutation.begin() + static_cast<std::ptrdiff_t>(m)};
      }
    }
    return everyone;
  };

  GreedyResult state;
  state.mode = cfg.mode;
  state.grid = F.grid();

  for (std::size_t n = 0; n < cfg.n_max; ++n) {
    const auto norms = residual_norms(state, F);
    const double full_max = *std::max_element(norms.begin(), norms.end());
    if (n == 0 && !(full_max > 0.0)) throw DegenerateInputError("run_geim: every member is zero");
    if (n > 0 && full_max <= cfg.stop_tol * state.eps_history.front()) {
      state.stopped_early = true;
      break;
    }

    std::size_t pick = argmax_over(norms, draw(n));
    const double floor_eps = cfg.stop_tol * (n == 0 ? full_max : state.eps_history.front());
    auto acceptable = [&](std::size_t idx) {
      return norms[idx] > floor_eps && ratio(norms[idx], full_max) >= cfg.eta_target;
    };
    if (cfg.subset.kind == SubsetKind::FixedSize)
      for (std::size_t r = 0; r < cfg.max_redraws && !acceptable(pick); ++r)
        pick = argmax_over(norms, draw(n));
    if (!acceptable(pick)) pick = argmax_over(norms, everyone);

    append(state, F, pick, sigmas, norms[pick], ratio(norms[pick], full_max));
  }
  return state;
}

}  // namespace geim
