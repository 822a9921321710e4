#pragma once

#include "geim/function.hpp"

#include <string_view>
#include <vector>

namespace geim {

enum class FamilyKind { GaussianBump, RationalPeak, FourierMix };

std::string to_string(FamilyKind kind);
FamilyKind parse_family_kind(std::string_view text);

/// Parametric family u(x; mu) sampled on a grid.
///  GaussianBump  exp(-(x - mu)^2 / width^2)
///  RationalPeak  1 / (1 + (mu x)^2)
///  FourierMix    sum_{k=1..terms} cos(k mu) / k^2 * sin(k pi x)   (rank <= terms)
struct FamilySpec {
  FamilyKind kind = FamilyKind::GaussianBump;
  std::vector<double> params;
  GridPtr grid;
  bool normalize = true;
  double width = 0.25;
  int terms = 8;
  /// Norm in which the set is scaled to max member norm 1.
  NormMode norm = NormMode::Hilbert;
};

/// count values uniformly spaced on [lo, hi].
std::vector<double> uniform_params(double lo, double hi, std::size_t count);

FunctionSet build_family(const FamilySpec& spec);

enum class DictionaryKind { Dirac, LocalAverage };

std::string to_string(DictionaryKind kind);
DictionaryKind parse_dictionary_kind(std::string_view text);

struct DictionarySpec {
  DictionaryKind kind = DictionaryKind::LocalAverage;
  std::vector<double> centers;
  double spread = 0.0;
};

/// Dual-normalized functionals, one per center. A Dirac is the indicator of
/// the nearest grid cell; a LocalAverage is the indicator of [c-s, c+s]
/// clipped to the domain (never empty: the nearest point is always included).
std::vector<Functional> build_dictionary(const DictionarySpec& spec, const GridPtr& grid,
                                         NormMode mode);

}  // namespace geim
