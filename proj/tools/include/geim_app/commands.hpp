#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace geim::app {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  ///< audit failure or residual too large
inline constexpr int kExitBadInput = 2;

struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;           ///< overrides "outputs"
  std::optional<std::uint64_t> seed;                  ///< overrides greedy.seed
  std::optional<std::size_t> n;                       ///< n_max (build) or readings used (assimilate)
  bool sweep_theorem = false;
  std::optional<std::filesystem::path> artifact;      ///< default <out>/artifact.json
  std::optional<std::filesystem::path> analysis;      ///< default <out>/analysis.json
  std::optional<std::filesystem::path> measurements;  ///< assimilate input CSV
};

/// Each command writes its files under the output directory, prints a short
/// summary to `log` and diagnostics to `err`, and returns an exit code.
int cmd_build(const CommandOptions& opt, std::ostream& log, std::ostream& err);
int cmd_analyze(const CommandOptions& opt, std::ostream& log, std::ostream& err);
int cmd_audit(const CommandOptions& opt, std::ostream& log, std::ostream& err);
int cmd_assimilate(const CommandOptions& opt, std::ostream& log, std::ostream& err);

}  // namespace geim::app
