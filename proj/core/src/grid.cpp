#include "geim/grid.hpp"

#include "geim/error.hpp"

#include <cmath>

namespace geim {

std::string to_string(NormMode mode) {
  return mode == NormMode::Hilbert ? "hilbert" : "sup";
}

NormMode parse_norm_mode(std::string_view text) {
  if (text == "hilbert" || text == "Hilbert" || text == "l2") return NormMode::Hilbert;
  if (text == "sup" || text == "Sup" || text == "linf") return NormMode::Sup;
  throw Error("unknown norm mode '" + std::string(text) + "' (expected hilbert or sup)");
}

Grid::Grid(std::vector<double> points, std::vector<double> weights) {
  if (points.size() != weights.size())
    throw StructuralError("grid: points and weights differ in length");
  if (points.size() < 2) throw StructuralError("grid: at least 2 points required");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i]) || !std::isfinite(weights[i]))
      throw StructuralError("grid: non-finite entry");
    if (!(weights[i] > 0.0)) throw StructuralError("grid: weights must be positive");
    if (i > 0 && !(points[i] > points[i - 1]))
      throw StructuralError("grid: points must be strictly increasing");
  }
  points_ = Eigen::Map<const Eigen::VectorXd>(points.data(), points.size());
  weights_ = Eigen::Map<const Eigen::VectorXd>(weights.data(), weights.size());
  sqrt_weights_ = weights_.cwiseSqrt();
}

std::shared_ptr<const Grid> Grid::uniform(double a, double b, std::size_t n) {
  if (n < 2 || !(b > a)) throw StructuralError("grid: need n >= 2 and b > a");
  std::vector<double> x(n), w(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = (i + 1 == n) ? b : a + h * static_cast<double>(i);
    w[i] = h;
  }
  w.front() = w.back() = 0.5 * h;
  return std::make_shared<const Grid>(std::move(x), std::move(w));
}

std::size_t Grid::nearest(double x) const {
  std::size_t best = 0;
  double best_dist = std::abs(points_[0] - x);
  for (Eigen::Index i = 1; i < points_.size(); ++i) {
    const double d = std::abs(points_[i] - x);
    if (d < best_dist) {
      best = static_cast<std::size_t>(i);
      best_dist = d;
    }
  }
  return best;
}

bool Grid::operator==(const Grid& other) const {
  return points_.size() == other.points_.size() && points_ == other.points_ &&
         weights_ == other.weights_;
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace geim
