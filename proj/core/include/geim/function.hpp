#pragma once

#include "geim/grid.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace geim {

/// A field sampled on a quadrature grid.
class DiscreteFunction {
 public:
  DiscreteFunction(GridPtr grid, Eigen::VectorXd values);

  static DiscreteFunction zero(GridPtr grid);

  const GridPtr& grid() const noexcept { return grid_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

  /// New function on the same grid.
  DiscreteFunction with_values(Eigen::VectorXd values) const;

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

/// Bounded linear functional stored as a density against the quadrature:
/// sigma(f) = sum_i density_i * w_i * f_i. In the L2 setting the density is
/// the Riesz representer itself.
class Functional {
 public:
  Functional(GridPtr grid, Eigen::VectorXd density,
             std::optional<NormMode> normalized_for = std::nullopt);

  const GridPtr& grid() const noexcept { return grid_; }
  const Eigen::VectorXd& density() const noexcept { return density_; }
  std::optional<NormMode> normalized_for() const noexcept { return normalized_for_; }

 private:
  GridPtr grid_;
  Eigen::VectorXd density_;
  std::optional<NormMode> normalized_for_;
};

/// A finite snapshot set; all members share one grid.
class FunctionSet {
 public:
  FunctionSet(std::vector<DiscreteFunction> members, std::string label = {});

  const std::vector<DiscreteFunction>& members() const noexcept { return members_; }
  const DiscreteFunction& operator[](std::size_t i) const { return members_.at(i); }
  std::size_t size() const noexcept { return members_.size(); }
  const GridPtr& grid() const noexcept { return members_.front().grid(); }
  const std::string& label() const noexcept { return label_; }

  /// Grid values as columns (grid size x member count).
  Eigen::MatrixXd matrix() const;

 private:
  std::vector<DiscreteFunction> members_;
  std::string label_;
};

double norm(const DiscreteFunction& f, NormMode mode);
double inner(const DiscreteFunction& f, const DiscreteFunction& g);
double apply(const Functional& sigma, const DiscreteFunction& f);
double dual_norm(const Functional& sigma, NormMode mode);
Functional normalize_dual(const Functional& sigma, NormMode mode);

DiscreteFunction operator-(const DiscreteFunction& a, const DiscreteFunction& b);
DiscreteFunction operator+(const DiscreteFunction& a, const DiscreteFunction& b);
DiscreteFunction operator*(double s, const DiscreteFunction& f);

/// Throws StructuralError unless both live on the same grid.
void require_same_grid(const GridPtr& a, const GridPtr& b, const char* where);

/// Columns are the given functions' values.
Eigen::MatrixXd as_columns(std::span<const DiscreteFunction> functions);

}  // namespace geim
