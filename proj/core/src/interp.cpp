#include "geim/interp.hpp"

#include "geim/error.hpp"

namespace geim {

InterpolantCoeffs solve_coeffs(const Eigen::MatrixXd& B, const MeasurementVector& m) {
  const Eigen::Index n = m.values.size();
  if (B.rows() != n || B.cols() != n)
    throw StructuralError("solve_coeffs: matrix is " + std::to_string(B.rows()) + "x" +
                          std::to_string(B.cols()) + ", measurements have length " +
                          std::to_string(n));
  Eigen::VectorXd alpha(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = m.values[i];
    for (Eigen::Index j = 0; j < i; ++j) s -= B(i, j) * alpha[j];
    alpha[i] = s / B(i, i);
  }
  return {std::move(alpha)};
}

MeasurementVector measure(const DiscreteFunction& f, const GreedyResult& result, std::size_t n) {
  if (n > result.size()) throw StructuralError("measure: n exceeds basis size");
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    v[static_cast<Eigen::Index>(i)] = apply(result.selected_sigma[i], f);
  return {std::move(v)};
}

namespace {

DiscreteFunction combine(const GreedyResult& result, const InterpolantCoeffs& c) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(result.grid->size()));
  for (std::size_t j = 0; j < c.n(); ++j)
    v += c.alpha[static_cast<Eigen::Index>(j)] * result.basis_q[j].values();
  return DiscreteFunction(result.grid, std::move(v));
}

}  // namespace

DiscreteFunction interpolate(const DiscreteFunction& f, const GreedyResult& result, std::size_t n) {
  require_same_grid(f.grid(), result.grid, "interpolate");
  if (n > result.size()) throw StructuralError("interpolate: n exceeds basis size");
  const auto k = static_cast<Eigen::Index>(n);
  return combine(result, solve_coeffs(result.B.topLeftCorner(k, k), measure(f, result, n)));
}

DiscreteFunction reconstruct(const MeasurementVector& m, const GreedyResult& result) {
  if (m.n() > result.size())
    throw StructuralError("reconstruct: " + std::to_string(m.n()) +
                          " measurements but basis has " + std::to_string(result.size()));
  const auto k = static_cast<Eigen::Index>(m.n());
  return combine(result, solve_coeffs(result.B.topLeftCorner(k, k), m));
}

double interp_error(const DiscreteFunction& f, const GreedyResult& result, std::size_t n,
                    NormMode mode) {
  return norm(f - interpolate(f, result, n), mode);
}

Eigen::MatrixXd interpolation_operator(const GreedyResult& result, std::size_t n) {
  if (n > result.size()) throw StructuralError("interpolation_operator: n exceeds basis size");
  const auto k = static_cast<Eigen::Index>(n);
  const auto M = static_cast<Eigen::Index>(result.grid->size());
  if (k == 0) return Eigen::MatrixXd::Zero(M, M);
  Eigen::MatrixXd Q(M, k), S(k, M);
  for (Eigen::Index j = 0; j < k; ++j) {
    Q.col(j) = result.basis_q[static_cast<std::size_t>(j)].values();
    S.row(j) = result.selected_sigma[static_cast<std::size_t>(j)]
                   .density()
                   .cwiseProduct(result.grid->weights())
                   .transpose();
  }
  const Eigen::MatrixXd coeffs =
      result.B.topLeftCorner(k, k).triangularView<Eigen::Lower>().solve(S);
  return Q * coeffs;
}

}  // namespace geim
