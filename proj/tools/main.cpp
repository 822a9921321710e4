#include "geim_app/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace geim::app;
  CLI::App app{"Generalized empirical interpolation: greedy build, analysis, bound audit"};
  app.require_subcommand(1);

  CommandOptions opt;
  std::string config, out, artifact, analysis, measurements;
  std::uint64_t seed = 0;
  std::size_t n = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides \"outputs\")");
    sub->add_option("--seed", seed, "random seed (overrides greedy.seed)");
  };

  CLI::App* build = app.add_subcommand("build", "run the greedy selection, write artifact.json and greedy.csv");
  common(build);
  build->add_option("--n", n, "number of greedy steps (overrides greedy.n_max)");

  CLI::App* analyze = app.add_subcommand("analyze", "compute tau, widths, Lebesgue constants; write analysis.csv");
  common(analyze);
  analyze->add_option("--artifact", artifact, "artifact to analyze (default <out>/artifact.json)");

  CLI::App* audit = app.add_subcommand("audit", "audit the convergence bounds; exit 0 iff every check passes");
  common(audit);
  audit->add_flag("--sweep-theorem", opt.sweep_theorem, "check every (N,K,m), not only N = 0");
  audit->add_option("--analysis", analysis, "analysis file (default <out>/analysis.json)");

  CLI::App* assimilate = app.add_subcommand("assimilate", "reconstruct a field from measurements");
  common(assimilate);
  assimilate->add_option("--measurements", measurements, "CSV of readings, one per line")->required();
  assimilate->add_option("--n", n, "number of readings to use");
  assimilate->add_option("--artifact", artifact, "artifact (default <out>/artifact.json)");

  CLI11_PARSE(app, argc, argv);

  opt.config = config;
  for (CLI::App* sub : {build, analyze, audit, assimilate}) {
    if (sub->count("--out")) opt.out = out;
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->get_option_no_throw("--n") && sub->count("--n")) opt.n = n;
    if (sub->get_option_no_throw("--artifact") && sub->count("--artifact")) opt.artifact = artifact;
  }
  if (!analysis.empty()) opt.analysis = analysis;
  if (!measurements.empty()) opt.measurements = measurements;

  if (build->parsed()) return cmd_build(opt, std::cout, std::cerr);
  if (analyze->parsed()) return cmd_analyze(opt, std::cout, std::cerr);
  if (audit->parsed()) return cmd_audit(opt, std::cout, std::cerr);
  return cmd_assimilate(opt, std::cout, std::cerr);
}
