#include "geim_app/commands.hpp"

#include "geim/interp.hpp"
#include "geim_app/artifact.hpp"
#include "geim_app/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace geim::app {

namespace {

namespace fs = std::filesystem;

constexpr double kResidualTol = 1e-10;

RunConfig configure(const CommandOptions& opt) {
  RunConfig cfg = load_config(opt.config);
  if (opt.out) cfg.outputs = *opt.out;
  if (opt.seed) {
    cfg.greedy.seed = *opt.seed;
    cfg.analysis.width.seed = *opt.seed;
  }
  if (opt.sweep_theorem) cfg.audit.sweep_theorem = true;
  return cfg;
}

fs::path artifact_path(const CommandOptions& opt, const RunConfig& cfg) {
  return opt.artifact ? *opt.artifact : cfg.outputs / "artifact.json";
}

fs::path analysis_path(const CommandOptions& opt, const RunConfig& cfg) {
  return opt.analysis ? *opt.analysis : cfg.outputs / "analysis.json";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string fixed(double v, const char* fmt = "%.6e") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string plot_series(const char* name, const std::vector<double>& v, std::size_t first) {
  std::string out = std::string("# n ") + name + "\n";
  for (std::size_t n = first; n < v.size(); ++n)
    out += std::to_string(n) + " " + format_double(v[n]) + "\n";
  return out;
}

/// Runs `body`, mapping library errors to messages and exit codes.
template <class Body>
int guarded(std::ostream& err, const char* cmd, Body body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "geim " << cmd << ": config error: " << e.what() << "\n";
  } catch (const UnisolvenceError& e) {
    err << "geim " << cmd << ": greedy failed at step " << e.step() << ": " << e.what() << "\n";
  } catch (const Error& e) {
    err << "geim " << cmd << ": " << e.what() << "\n";
  } catch (const fs::filesystem_error& e) {
    err << "geim " << cmd << ": " << e.what() << "\n";
  }
  return kExitBadInput;
}

}  // namespace

int cmd_build(const CommandOptions& opt, std::ostream& log, std::ostream& err) {
  return guarded(err, "build", [&] {
    RunConfig cfg = configure(opt);
    if (opt.n) cfg.greedy.n_max = *opt.n;
    const GridPtr grid = make_grid(cfg);
    const FunctionSet F = make_family(cfg, grid);
    const std::vector<Functional> sigmas = make_dictionary(cfg, grid);
    const GreedyResult r = run_geim(F, sigmas, cfg.greedy);

    save_artifact(r, cfg.outputs / "artifact.json");
    CsvTable csv({"n", "eps_n", "effective_eta", "selected_phi_index", "selected_sigma_index"});
    for (std::size_t n = 0; n < r.size(); ++n) {
      csv.cell(n).cell(r.eps_history[n]).cell(r.effective_eta[n]).cell(r.phi_index[n])
          .cell(r.sigma_index[n]);
      csv.end_row();
    }
    write_text(cfg.outputs / "greedy.csv", csv.str());

    log << "  n  eps_n         eta      phi  sigma\n";
    for (std::size_t n = 0; n < r.size(); ++n) {
      char line[128];
      std::snprintf(line, sizeof line, "%3zu  %.6e  %.4f  %4zu  %5zu\n", n, r.eps_history[n],
                    r.effective_eta[n], r.phi_index[n], r.sigma_index[n]);
      log << line;
    }
    log << "steps " << r.size() << " of " << cfg.greedy.n_max << ", mode " << to_string(r.mode)
        << ", stopped_early " << yes_no(r.stopped_early) << "\n";
    log << "wrote " << (cfg.outputs / "artifact.json").string() << "\n";
    return kExitOk;
  });
}

int cmd_analyze(const CommandOptions& opt, std::ostream& log, std::ostream& err) {
  return guarded(err, "analyze", [&] {
    const RunConfig cfg = configure(opt);
    const GreedyResult r = load_artifact(artifact_path(opt, cfg));
    const GridPtr grid = make_grid(cfg);
    if (!same_grid(grid, r.grid))
      throw StructuralError("grid mismatch: the artifact grid differs from the config grid");
    if (r.mode != cfg.greedy.mode)
      throw StructuralError("mode mismatch: artifact is " + to_string(r.mode) + ", config is " +
                            to_string(cfg.greedy.mode));
    const FunctionSet F = make_family(cfg, grid);

    const AnalysisReport rep = analyze_run(F, r, cfg.analysis);
    write_text(cfg.outputs / "analysis.json", report_to_string(rep));

    const bool hilbert = rep.mode == NormMode::Hilbert;
    const bool have_d = rep.d.size() == rep.size + 1;
    CsvTable csv({"n", "tau", "d", "lambda", "beta", "gamma", "lebesgue_upper"});
    for (std::size_t n = 0; n <= rep.size; ++n) {
      csv.cell(n).cell(rep.tau[n]);
      if (have_d) csv.cell(rep.d[n]);
      else csv.empty();
      csv.cell(rep.lambda[n]);
      if (hilbert) csv.cell(rep.beta_infsup[n]);
      else csv.empty();
      if (n < rep.gamma.size()) csv.cell(rep.gamma[n]);
      else csv.empty();
      csv.cell(rep.lebesgue_upper[n]);
      csv.end_row();
    }
    bool tau_mono = true, d_mono = true, d_le_tau = true, inv = true;
    for (std::size_t n = 1; n <= rep.size; ++n) tau_mono = tau_mono && rep.tau[n] <= rep.tau[n - 1];
    if (have_d) {
      for (std::size_t n = 1; n <= rep.size; ++n) d_mono = d_mono && rep.d[n] <= rep.d[n - 1];
      for (std::size_t n = 0; n <= rep.size; ++n) d_le_tau = d_le_tau && rep.d[n] <= rep.tau[n];
    }
    if (hilbert)
      for (std::size_t n = 1; n <= rep.size; ++n)
        inv = inv && std::abs(rep.lambda[n] * rep.beta_infsup[n] - 1.0) <= 1e-12;
    csv.footer("tau nonincreasing: " + yes_no(tau_mono));
    if (have_d) {
      csv.footer("d nonincreasing: " + yes_no(d_mono));
      if (hilbert) csv.footer("d <= tau: " + yes_no(d_le_tau));
    }
    if (hilbert) csv.footer("lambda * beta = 1 within 1e-12: " + yes_no(inv));
    else csv.footer("hilbert_surrogate=" + std::string(rep.hilbert_surrogate ? "true" : "false"));
    write_text(cfg.outputs / "analysis.csv", csv.str());

    if (cfg.emit_plots) {
      std::vector<double> eps;
      for (Eigen::Index n = 0; n < rep.eps.rows(); ++n) eps.push_back(rep.eps.row(n).maxCoeff());
      write_text(cfg.outputs / "tau.dat", plot_series("tau", rep.tau, 1));
      if (have_d) write_text(cfg.outputs / "d.dat", plot_series("d", rep.d, 1));
      write_text(cfg.outputs / "eps.dat", plot_series("eps", eps, 1));
    }

    log << "  n  tau           d             lambda\n";
    for (std::size_t n = 0; n <= rep.size; ++n)
      log << (n < 10 ? "  " : " ") << n << "  " << fixed(rep.tau[n]) << "  "
          << (have_d ? fixed(rep.d[n]) : std::string("       -    ")) << "  "
          << fixed(rep.lambda[n], "%.4f") << "\n";
    log << "wrote " << (cfg.outputs / "analysis.csv").string() << "\n";
    return kExitOk;
  });
}

int cmd_audit(const CommandOptions& opt, std::ostream& log, std::ostream& err) {
  return guarded(err, "audit", [&] {
    const RunConfig cfg = configure(opt);
    const fs::path in = analysis_path(opt, cfg);
    if (!fs::exists(in)) {
      err << "geim audit: missing input " << in.string() << " (run `geim analyze` first)\n";
      return kExitBadInput;
    }
    const AnalysisReport rep = report_from_string(read_text(in), in.string());
    const RateAudit audit = audit_run(rep, cfg.audit);
    write_text(cfg.outputs / "audit.json", dump_json(audit_to_json(audit)));
    write_text(cfg.outputs / "audit.txt", audit_table(audit));
    for (const auto& c : audit.checks)
      if (c.status == CheckStatus::Fail)
        log << "FAIL " << c.id << " " << c.index << ": " << format_double(c.lhs) << " > "
            << format_double(c.rhs) << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
    log << "audit: pass " << audit.counts.pass << ", fail " << audit.counts.fail << ", skipped "
        << audit.counts.skipped << "\n";
    return audit.all_pass() ? kExitOk : kExitCheckFailed;
  });
}

namespace {

std::vector<double> read_measurements(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::vector<double> out;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t comma = line.find_last_of(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    const char* b = field.data();
    const char* e = field.data() + field.size();
    while (b < e && *b == ' ') ++b;
    double v = 0.0;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) {
      if (out.empty() && lineno == 1) continue;  // header
      throw StructuralError(path.string() + ":" + std::to_string(lineno) +
                            ": not a number: '" + field + "'");
    }
    if (!std::isfinite(v))
      throw DegenerateInputError(path.string() + ":" + std::to_string(lineno) +
                                 ": measurement is not finite");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int cmd_assimilate(const CommandOptions& opt, std::ostream& log, std::ostream& err) {
  return guarded(err, "assimilate", [&] {
    const RunConfig cfg = configure(opt);
    if (!opt.measurements) {
      err << "geim assimilate: --measurements <csv> is required\n";
      return kExitBadInput;
    }
    const GreedyResult r = load_artifact(artifact_path(opt, cfg));
    const std::vector<double> m = read_measurements(*opt.measurements);
    const std::size_t n = opt.n ? *opt.n : std::min(m.size(), r.size());
    if (n > r.size())
      throw StructuralError("n = " + std::to_string(n) + " exceeds the artifact's " +
                            std::to_string(r.size()) + " basis functions");
    if (m.size() < n)
      throw StructuralError("size mismatch: " + std::to_string(m.size()) +
                            " measurements for n = " + std::to_string(n));
    MeasurementVector mv;
    mv.values = Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(n));
    const DiscreteFunction rec = reconstruct(mv, r);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      residual = std::max(residual, std::abs(apply(r.selected_sigma[i], rec) - m[i]));

    CsvTable csv({"x", "value"});
    for (std::size_t k = 0; k < r.grid->size(); ++k) {
      csv.cell(r.grid->points()[static_cast<Eigen::Index>(k)])
          .cell(rec.values()[static_cast<Eigen::Index>(k)]);
      csv.end_row();
    }
    write_text(cfg.outputs / "reconstruction.csv", csv.str());
    log << "n " << n << ", interpolation residual max|sigma_i(rec) - m_i| = "
        << format_double(residual) << "\n";
    if (residual > kResidualTol) {
      err << "geim assimilate: residual " << format_double(residual) << " exceeds "
          << format_double(kResidualTol) << "\n";
      return kExitCheckFailed;
    }
    return kExitOk;
  });
}

}  // namespace geim::app
