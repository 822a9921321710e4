#pragma once

#include "geim/function.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace geim {

enum class SubsetKind { Full, FixedSize, Growing };

std::string to_string(SubsetKind kind);
SubsetKind parse_subset_kind(std::string_view text);

struct SubsetSchedule {
  SubsetKind kind = SubsetKind::Full;
  std::size_t size = 0;  ///< m for FixedSize, initial size for Growing
};

struct GreedyConfig {
  std::size_t n_max = 10;
  NormMode mode = NormMode::Hilbert;
  /// Lower bound on the weak-greedy ratio a sampled step must reach before it
  /// is accepted; sampled steps below it are redrawn, then fall back to the
  /// full argmax. Only meaningful for non-Full schedules.
  double eta_target = 1.0;
  SubsetSchedule subset;
  double stop_tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::size_t max_redraws = 8;
};

/// Output of the greedy co-selection. Entry j of every list belongs to step j.
/// B(i,j) = sigma_i(q_j) is lower triangular with unit diagonal.
struct GreedyResult {
  NormMode mode = NormMode::Hilbert;
  GridPtr grid;
  std::vector<DiscreteFunction> selected_phi;
  std::vector<Functional> selected_sigma;
  std::vector<DiscreteFunction> basis_q;
  Eigen::MatrixXd B;
  std::vector<double> eps_history;    ///< eps_n(phi_n); eps_0 = ||phi_0||
  std::vector<double> effective_eta;  ///< chosen residual / max residual over all of F
  std::vector<std::size_t> phi_index;
  std::vector<std::size_t> sigma_index;
  bool stopped_early = false;

  std::size_t size() const noexcept { return basis_q.size(); }
};

/// One greedy selection: indices refer to the full set / dictionary.
struct GreedyPick {
  std::size_t phi_index;
  std::size_t sigma_index;
  double eps;
};

/// phi_0 = argmax ||phi||, sigma_0 = argmax |sigma(phi_0)|, q_0 = phi_0 / sigma_0(phi_0).
/// Returns a result holding that single step.
GreedyResult select_first(const FunctionSet& F, std::span<const Functional> sigmas,
                          NormMode mode);

/// One step of the greedy loop over the candidates F[candidates[k]] and the
/// whole dictionary. Appends (phi_n, sigma_n, q_n) or, when the largest
/// residual is below stop_tol * eps_0, only sets stopped_early.
GreedyResult greedy_step(const GreedyResult& state, const FunctionSet& F,
                         std::span<const std::size_t> candidates,
                         std::span<const Functional> sigmas, double stop_tol = kDefaultTol);

/// Convenience overload: every member of F_n is a candidate.
GreedyResult greedy_step(const GreedyResult& state, const FunctionSet& F_n,
                         std::span<const Functional> sigmas, double stop_tol = kDefaultTol);

GreedyResult run_geim(const FunctionSet& F, std::span<const Functional> sigmas,
                      const GreedyConfig& cfg);

/// ||phi - J_n[phi]|| for every member of F, n = state.size().
std::vector<double> residual_norms(const GreedyResult& state, const FunctionSet& F);

}  // namespace geim
