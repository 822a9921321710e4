#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace geim {

inline constexpr double kDefaultTol = 1e-12;

enum class NormMode { Hilbert, Sup };

std::string to_string(NormMode mode);
NormMode parse_norm_mode(std::string_view text);

/// 1D quadrature grid: strictly increasing abscissae with positive weights.
class Grid {
 public:
  Grid(std::vector<double> points, std::vector<double> weights);

  /// Uniform grid on [a,b] with composite trapezoid weights.
  static std::shared_ptr<const Grid> uniform(double a, double b, std::size_t n);

  std::size_t size() const noexcept { return points_.size(); }
  const Eigen::VectorXd& points() const noexcept { return points_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& sqrt_weights() const noexcept { return sqrt_weights_; }
  double lower() const noexcept { return points_[0]; }
  double upper() const noexcept { return points_[points_.size() - 1]; }

  /// Index of the grid point closest to x (ties go to the lower index).
  std::size_t nearest(double x) const;

  bool operator==(const Grid& other) const;

 private:
  Eigen::VectorXd points_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd sqrt_weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Same object, or identical abscissae and weights.
bool same_grid(const GridPtr& a, const GridPtr& b);

}  // namespace geim
