#pragma once

#include "geim/greedy.hpp"

namespace geim {

struct InterpolantCoeffs {
  Eigen::VectorXd alpha;
  std::size_t n() const noexcept { return static_cast<std::size_t>(alpha.size()); }
};

/// Raw readings sigma_i(f), i < n.
struct MeasurementVector {
  Eigen::VectorXd values;
  std::size_t n() const noexcept { return static_cast<std::size_t>(values.size()); }
};

/// Forward substitution on the lower-triangular n x n system B alpha = m.
InterpolantCoeffs solve_coeffs(const Eigen::MatrixXd& B, const MeasurementVector& m);

/// sigma_i(f) for the first n selected functionals.
MeasurementVector measure(const DiscreteFunction& f, const GreedyResult& result, std::size_t n);

/// J_n[f]; J_0 is the zero function.
DiscreteFunction interpolate(const DiscreteFunction& f, const GreedyResult& result, std::size_t n);

/// J_n built from readings alone, n = |m|.
DiscreteFunction reconstruct(const MeasurementVector& m, const GreedyResult& result);

double interp_error(const DiscreteFunction& f, const GreedyResult& result, std::size_t n,
                    NormMode mode);

/// Grid matrix of J_n: values(J_n[f]) = L * values(f).
Eigen::MatrixXd interpolation_operator(const GreedyResult& result, std::size_t n);

}  // namespace geim
