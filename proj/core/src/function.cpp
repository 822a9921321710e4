#include "geim/function.hpp"

#include "geim/error.hpp"

#include <cmath>

namespace geim {

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where) {
  if (!same_grid(a, b)) throw StructuralError(std::string(where) + ": grid mismatch");
}

DiscreteFunction::DiscreteFunction(GridPtr grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw StructuralError("function: null grid");
  if (static_cast<std::size_t>(values_.size()) != grid_->size())
    throw StructuralError("function: value count does not match grid");
  if (!values_.allFinite()) throw StructuralError("function: non-finite value");
}

DiscreteFunction DiscreteFunction::zero(GridPtr grid) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  return DiscreteFunction(std::move(grid), Eigen::VectorXd::Zero(n));
}

DiscreteFunction DiscreteFunction::with_values(Eigen::VectorXd values) const {
  return DiscreteFunction(grid_, std::move(values));
}

Functional::Functional(GridPtr grid, Eigen::VectorXd density,
                       std::optional<NormMode> normalized_for)
    : grid_(std::move(grid)), density_(std::move(density)), normalized_for_(normalized_for) {
  if (!grid_) throw StructuralError("functional: null grid");
  if (static_cast<std::size_t>(density_.size()) != grid_->size())
    throw StructuralError("functional: density length does not match grid");
  if (!density_.allFinite()) throw StructuralError("functional: non-finite density");
}

FunctionSet::FunctionSet(std::vector<DiscreteFunction> members, std::string label)
    : members_(std::move(members)), label_(std::move(label)) {
  if (members_.empty()) throw StructuralError("function set: empty");
  for (const auto& m : members_) require_same_grid(members_.front().grid(), m.grid(), "function set");
}

Eigen::MatrixXd FunctionSet::matrix() const { return as_columns(members_); }

Eigen::MatrixXd as_columns(std::span<const DiscreteFunction> functions) {
  if (functions.empty()) return {};
  Eigen::MatrixXd out(functions.front().values().size(), static_cast<Eigen::Index>(functions.size()));
  for (std::size_t j = 0; j < functions.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = functions[j].values();
  return out;
}

double norm(const DiscreteFunction& f, NormMode mode) {
  if (mode == NormMode::Sup) return f.values().cwiseAbs().maxCoeff();
  return std::sqrt(f.grid()->weights().dot(f.values().cwiseAbs2()));
}

double inner(const DiscreteFunction& f, const DiscreteFunction& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  return f.values().cwiseProduct(f.grid()->weights()).dot(g.values());
}

double apply(const Functional& sigma, const DiscreteFunction& f) {
  require_same_grid(sigma.grid(), f.grid(), "apply");
  return sigma.density().cwiseProduct(f.grid()->weights()).dot(f.values());
}

double dual_norm(const Functional& sigma, NormMode mode) {
  const auto& w = sigma.grid()->weights();
  if (mode == NormMode::Sup) return sigma.density().cwiseAbs().dot(w);
  return std::sqrt(w.dot(sigma.density().cwiseAbs2()));
}

Functional normalize_dual(const Functional& sigma, NormMode mode) {
  const double s = dual_norm(sigma, mode);
  if (!(s > 0.0)) throw DegenerateInputError("normalize_dual: zero functional");
  return Functional(sigma.grid(), sigma.density() / s, mode);
}

DiscreteFunction operator-(const DiscreteFunction& a, const DiscreteFunction& b) {
  require_same_grid(a.grid(), b.grid(), "subtract");
  return a.with_values(a.values() - b.values());
}

DiscreteFunction operator+(const DiscreteFunction& a, const DiscreteFunction& b) {
  require_same_grid(a.grid(), b.grid(), "add");
  return a.with_values(a.values() + b.values());
}

DiscreteFunction operator*(double s, const DiscreteFunction& f) {
  return f.with_values(s * f.values());
}

}  // namespace geim
