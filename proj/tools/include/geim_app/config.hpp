#pragma once

#include "geim/analysis.hpp"
#include "geim/error.hpp"
#include "geim/families.hpp"
#include "geim/greedy.hpp"
#include "geim/rates.hpp"

#include <filesystem>
#include <string>

namespace geim::app {

/// Config problem, with the 1-based line (0 when unknown) it points at.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& origin, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct GridConfig {
  double lower = -1.0;
  double upper = 1.0;
  std::size_t points = 200;
};

struct RunConfig {
  GridConfig grid;
  FamilySpec family;             ///< grid filled in by make_family
  DictionarySpec dictionary;
  bool dictionary_on_grid = false;  ///< centers at every grid point
  GreedyConfig greedy;
  AnalysisOptions analysis;
  AuditOptions audit;
  std::filesystem::path outputs = "geim_out";
  bool emit_plots = true;
};

/// Strict parse: unknown keys, wrong types and inconsistent modes are errors.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::filesystem::path& path);

GridPtr make_grid(const RunConfig& cfg);
FunctionSet make_family(const RunConfig& cfg, const GridPtr& grid);
std::vector<Functional> make_dictionary(const RunConfig& cfg, const GridPtr& grid);

}  // namespace geim::app
