#pragma once

#include "geim/families.hpp"
#include "geim/greedy.hpp"

#include <memory>
#include <vector>

namespace geim::test {

// 3 points, unit weights.
inline GridPtr unit_grid(std::size_t n) {
  std::vector<double> x(n), w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
  return std::make_shared<const Grid>(x, w);
}

inline DiscreteFunction fn(const GridPtr& g, std::initializer_list<double> v) {
  Eigen::VectorXd values(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) values[i++] = x;
  return DiscreteFunction(g, values);
}

inline Functional point(const GridPtr& g, std::size_t k) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g->size()));
  d[static_cast<Eigen::Index>(k)] = 1.0;
  return Functional(g, d);
}

struct HandExample {
  GridPtr grid = unit_grid(3);
  FunctionSet F{{fn(grid, {1, 0, 0}), fn(grid, {0.6, 0.8, 0}), fn(grid, {0, 0, 0.5})}, "hand"};
  std::vector<Functional> sigmas{point(grid, 0), point(grid, 1), point(grid, 2)};
};

struct GaussianSetup {
  GridPtr grid = Grid::uniform(-1.0, 1.0, 200);
  FunctionSet F;
  std::vector<Functional> sigmas;

  explicit GaussianSetup(NormMode mode = NormMode::Hilbert,
                         FamilyKind kind = FamilyKind::GaussianBump)
      : F(make_family(grid, mode, kind)), sigmas(make_dictionary(grid, mode)) {}

  static FunctionSet make_family(const GridPtr& g, NormMode mode, FamilyKind kind) {
    FamilySpec spec;
    spec.kind = kind;
    spec.grid = g;
    spec.norm = mode;
    spec.params = kind == FamilyKind::RationalPeak ? uniform_params(1.0, 10.0, 40)
                                                   : uniform_params(-1.0, 1.0, 40);
    return build_family(spec);
  }

  static std::vector<Functional> make_dictionary(const GridPtr& g, NormMode mode) {
    DictionarySpec d;
    if (mode == NormMode::Hilbert) {
      d.kind = DictionaryKind::LocalAverage;
      d.centers = uniform_params(-0.99, 0.99, 100);
      d.spread = 0.02;
    } else {
      d.kind = DictionaryKind::Dirac;
      for (Eigen::Index i = 0; i < g->points().size(); ++i) d.centers.push_back(g->points()[i]);
    }
    return build_dictionary(d, g, mode);
  }
};

}  // namespace geim::test
