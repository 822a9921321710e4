#include "geim/families.hpp"

#include "geim/error.hpp"

#include <cmath>
#include <numbers>

namespace geim {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::GaussianBump: return "gaussian_bump";
    case FamilyKind::RationalPeak: return "rational_peak";
    case FamilyKind::FourierMix: return "fourier_mix";
  }
  return "?";
}

FamilyKind parse_family_kind(std::string_view text) {
  if (text == "gaussian_bump" || text == "GaussianBump") return FamilyKind::GaussianBump;
  if (text == "rational_peak" || text == "RationalPeak") return FamilyKind::RationalPeak;
  if (text == "fourier_mix" || text == "FourierMix") return FamilyKind::FourierMix;
  throw Error("unknown family kind '" + std::string(text) + "'");
}

std::string to_string(DictionaryKind kind) {
  return kind == DictionaryKind::Dirac ? "dirac" : "local_average";
}

DictionaryKind parse_dictionary_kind(std::string_view text) {
  if (text == "dirac" || text == "Dirac") return DictionaryKind::Dirac;
  if (text == "local_average" || text == "LocalAverage") return DictionaryKind::LocalAverage;
  throw Error("unknown dictionary kind '" + std::string(text) + "'");
}

std::vector<double> uniform_params(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double h = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = (i + 1 == count) ? hi : lo + h * static_cast<double>(i);
  return out;
}

namespace {

Eigen::VectorXd sample(const FamilySpec& spec, double mu) {
  const auto& x = spec.grid->points();
  switch (spec.kind) {
    case FamilyKind::GaussianBump: {
      const double s2 = spec.width * spec.width;
      return (-(x.array() - mu).square() / s2).exp().matrix();
    }
    case FamilyKind::RationalPeak:
      return (1.0 / (1.0 + (mu * x.array()).square())).matrix();
    case FamilyKind::FourierMix: {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(x.size());
      for (int k = 1; k <= spec.terms; ++k) {
        const double a = std::cos(k * mu) / (k * k);
        v.array() += a * (k * std::numbers::pi * x.array()).sin();
      }
      return v;
    }
  }
  return {};
}

}  // namespace

FunctionSet build_family(const FamilySpec& spec) {
  if (spec.params.empty()) throw DegenerateInputError("build_family: empty parameter grid");
  if (!spec.grid) throw StructuralError("build_family: no grid");
  if (spec.kind == FamilyKind::GaussianBump && !(spec.width > 0.0))
    throw DegenerateInputError("build_family: gaussian width must be positive");
  if (spec.kind == FamilyKind::FourierMix && spec.terms < 1)
    throw DegenerateInputError("build_family: fourier_mix needs at least one term");

  std::vector<DiscreteFunction> members;
  members.reserve(spec.params.size());
  for (double mu : spec.params) members.emplace_back(spec.grid, sample(spec, mu));

  if (spec.normalize) {
    double max_norm = 0.0;
    for (const auto& m : members) max_norm = std::max(max_norm, norm(m, spec.norm));
    if (!(max_norm > 0.0)) throw DegenerateInputError("build_family: all members vanish");
    for (auto& m : members) m = (1.0 / max_norm) * m;
  }
  return FunctionSet(std::move(members), to_string(spec.kind));
}

std::vector<Functional> build_dictionary(const DictionarySpec& spec, const GridPtr& grid,
                                         NormMode mode) {
  if (!(spec.spread >= 0.0)) throw DegenerateInputError("build_dictionary: negative spread");
  if (spec.centers.empty()) throw DegenerateInputError("build_dictionary: no centers");
  const auto& x = grid->points();
  const double span = grid->upper() - grid->lower();
  const double slack = 1e-12 * span;

  std::vector<Functional> out;
  out.reserve(spec.centers.size());
  for (double c : spec.centers) {
    if (!(c >= grid->lower() - slack && c <= grid->upper() + slack))
      throw StructuralError("build_dictionary: center " + std::to_string(c) +
                            " outside the grid range");
    Eigen::VectorXd density = Eigen::VectorXd::Zero(x.size());
    if (spec.kind == DictionaryKind::LocalAverage) {
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - c) <= spec.spread + slack) density[i] = 1.0;
    }
    density[static_cast<Eigen::Index>(grid->nearest(c))] = 1.0;
    out.push_back(normalize_dual(Functional(grid, std::move(density)), mode));
  }
  return out;
}

}  // namespace geim
