#include "geim_app/artifact.hpp"

#include "geim/error.hpp"

#include <cstdio>
#include <sstream>

namespace geim::app {

namespace {

using nlohmann::json;

Json functions_to_json(const std::vector<DiscreteFunction>& fs) {
  Json a = Json::array();
  for (const auto& f : fs) a.push_back(to_json(f.values()));
  return a;
}

Eigen::VectorXd vec(const json& j) {
  const std::vector<double> v = doubles_from_json(j);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<DiscreteFunction> functions_from_json(const json& j, const GridPtr& g) {
  std::vector<DiscreteFunction> out;
  for (const auto& e : j) {
    Eigen::VectorXd v = vec(e);
    if (static_cast<std::size_t>(v.size()) != g->size())
      throw StructuralError("function length does not match the grid");
    out.emplace_back(g, std::move(v));
  }
  return out;
}

Json indices_to_json(const std::vector<std::size_t>& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

std::vector<std::size_t> indices_from_json(const json& j) {
  std::vector<std::size_t> v;
  for (const auto& e : j) v.push_back(e.get<std::size_t>());
  return v;
}

Json strings_to_json(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

json parse_or_throw(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw StructuralError(origin + ": " + e.what());
  }
}

}  // namespace

Json grid_to_json(const Grid& grid) {
  Json g;
  g["points"] = to_json(grid.points());
  g["weights"] = to_json(grid.weights());
  return g;
}

GridPtr grid_from_json(const json& j) {
  return std::make_shared<const Grid>(doubles_from_json(j.at("points")),
                                      doubles_from_json(j.at("weights")));
}

std::string artifact_to_string(const GreedyResult& r) {
  Json a;
  a["format"] = "geim-artifact";
  a["version"] = kArtifactVersion;
  a["mode"] = to_string(r.mode);
  a["size"] = r.size();
  a["stopped_early"] = r.stopped_early;
  a["grid"] = grid_to_json(*r.grid);
  a["phi_index"] = indices_to_json(r.phi_index);
  a["sigma_index"] = indices_to_json(r.sigma_index);
  a["eps_history"] = to_json(r.eps_history);
  a["effective_eta"] = to_json(r.effective_eta);
  a["B"] = matrix_to_json(r.B);
  a["basis_q"] = functions_to_json(r.basis_q);
  a["selected_phi"] = functions_to_json(r.selected_phi);
  Json sig = Json::array();
  for (const auto& s : r.selected_sigma) {
    Json e;
    e["normalized_for"] = s.normalized_for() ? Json(to_string(*s.normalized_for())) : Json();
    e["density"] = to_json(s.density());
    sig.push_back(std::move(e));
  }
  a["selected_sigma"] = std::move(sig);
  return dump_json(a);
}

GreedyResult artifact_from_string(const std::string& text, const std::string& origin) {
  const json a = parse_or_throw(text, origin);
  try {
    if (a.at("format").get<std::string>() != "geim-artifact")
      throw StructuralError("not a geim artifact");
    const int version = a.at("version").get<int>();
    if (version != kArtifactVersion)
      throw StructuralError("unsupported artifact version " + std::to_string(version));
    GreedyResult r;
    r.mode = parse_norm_mode(a.at("mode").get<std::string>());
    r.grid = grid_from_json(a.at("grid"));
    r.stopped_early = a.at("stopped_early").get<bool>();
    r.phi_index = indices_from_json(a.at("phi_index"));
    r.sigma_index = indices_from_json(a.at("sigma_index"));
    r.eps_history = doubles_from_json(a.at("eps_history"));
    r.effective_eta = doubles_from_json(a.at("effective_eta"));
    r.B = matrix_from_json(a.at("B"));
    r.basis_q = functions_from_json(a.at("basis_q"), r.grid);
    r.selected_phi = functions_from_json(a.at("selected_phi"), r.grid);
    for (const auto& e : a.at("selected_sigma")) {
      std::optional<NormMode> nf;
      if (!e.at("normalized_for").is_null())
        nf = parse_norm_mode(e.at("normalized_for").get<std::string>());
      Eigen::VectorXd d = vec(e.at("density"));
      if (static_cast<std::size_t>(d.size()) != r.grid->size())
        throw StructuralError("functional length does not match the grid");
      r.selected_sigma.emplace_back(r.grid, std::move(d), nf);
    }
    const std::size_t n = r.basis_q.size();
    if (a.at("size").get<std::size_t>() != n || r.selected_phi.size() != n ||
        r.selected_sigma.size() != n || r.phi_index.size() != n || r.sigma_index.size() != n ||
        r.eps_history.size() != n || r.effective_eta.size() != n ||
        r.B.rows() != static_cast<Eigen::Index>(n) || r.B.cols() != static_cast<Eigen::Index>(n))
      throw StructuralError("artifact sections disagree on the number of steps");
    return r;
  } catch (const json::exception& e) {
    throw StructuralError(origin + ": malformed artifact: " + e.what());
  } catch (const StructuralError& e) {
    throw StructuralError(origin + ": " + e.what());
  }
}

void save_artifact(const GreedyResult& result, const std::filesystem::path& path) {
  write_text(path, artifact_to_string(result));
}

GreedyResult load_artifact(const std::filesystem::path& path) {
  return artifact_from_string(read_text(path), path.string());
}

std::string report_to_string(const AnalysisReport& rep) {
  Json j;
  j["format"] = "geim-analysis";
  j["version"] = kArtifactVersion;
  j["mode"] = to_string(rep.mode);
  j["size"] = rep.size;
  j["hilbert_surrogate"] = rep.hilbert_surrogate;
  if (rep.grid) j["grid"] = grid_to_json(*rep.grid);
  j["tau"] = to_json(rep.tau);
  j["d"] = to_json(rep.d);
  j["d_pod"] = to_json(rep.d_pod);
  j["d_source"] = strings_to_json(rep.d_source);
  j["lambda"] = to_json(rep.lambda);
  j["beta_infsup"] = to_json(rep.beta_infsup);
  j["gamma"] = to_json(rep.gamma);
  j["eta"] = to_json(rep.eta);
  j["lebesgue_upper"] = to_json(rep.lebesgue_upper);
  j["lambda_empirical"] = to_json(rep.lambda_empirical);
  j["selected_residual"] = to_json(rep.selected_residual);
  j["dist"] = matrix_to_json(rep.dist);
  j["eps"] = matrix_to_json(rep.eps);
  Json w = Json::array();
  for (const auto& m : rep.witness) w.push_back(matrix_to_json(m));
  j["witness"] = std::move(w);
  if (rep.appendix) {
    Json ap;
    ap["A"] = matrix_to_json(rep.appendix->A);
    ap["phi_star"] = matrix_to_json(rep.appendix->phi_star);
    j["appendix"] = std::move(ap);
  } else {
    j["appendix"] = nullptr;
  }
  return dump_json(j);
}

AnalysisReport report_from_string(const std::string& text, const std::string& origin) {
  const json j = parse_or_throw(text, origin);
  try {
    if (j.at("format").get<std::string>() != "geim-analysis")
      throw StructuralError("not a geim analysis file");
    AnalysisReport rep;
    rep.mode = parse_norm_mode(j.at("mode").get<std::string>());
    rep.size = j.at("size").get<std::size_t>();
    rep.hilbert_surrogate = j.at("hilbert_surrogate").get<bool>();
    if (j.contains("grid")) rep.grid = grid_from_json(j.at("grid"));
    rep.tau = doubles_from_json(j.at("tau"));
    rep.d = doubles_from_json(j.at("d"));
    rep.d_pod = doubles_from_json(j.at("d_pod"));
    for (const auto& s : j.at("d_source")) rep.d_source.push_back(s.get<std::string>());
    rep.lambda = doubles_from_json(j.at("lambda"));
    rep.beta_infsup = doubles_from_json(j.at("beta_infsup"));
    rep.gamma = doubles_from_json(j.at("gamma"));
    rep.eta = doubles_from_json(j.at("eta"));
    rep.lebesgue_upper = doubles_from_json(j.at("lebesgue_upper"));
    rep.lambda_empirical = doubles_from_json(j.at("lambda_empirical"));
    rep.selected_residual = doubles_from_json(j.at("selected_residual"));
    rep.dist = matrix_from_json(j.at("dist"));
    rep.eps = matrix_from_json(j.at("eps"));
    for (const auto& m : j.at("witness")) rep.witness.push_back(matrix_from_json(m));
    if (!j.at("appendix").is_null())
      rep.appendix = AppendixMatrices{matrix_from_json(j.at("appendix").at("A")),
                                      matrix_from_json(j.at("appendix").at("phi_star"))};
    if (rep.tau.size() != rep.size + 1 || rep.lambda.size() != rep.size + 1)
      throw StructuralError("tau/lambda length does not match size");
    return rep;
  } catch (const json::exception& e) {
    throw StructuralError(origin + ": malformed analysis file: " + e.what());
  }
}

Json audit_to_json(const RateAudit& audit) {
  Json j;
  j["summary"] = {{"pass", audit.counts.pass},
                  {"fail", audit.counts.fail},
                  {"skipped", audit.counts.skipped}};
  Json fits = Json::object();
  for (const auto* f : {&audit.fits.polynomial, &audit.fits.exponential}) {
    if (!*f) continue;
    const DecayFit& d = **f;
    fits[to_string(d.kind)] = {{"C0", d.C0},       {"c1", d.c1},       {"alpha", d.alpha},
                               {"r_squared", d.r_squared}, {"first", d.first}, {"last", d.last}};
  }
  if (!audit.fits.note.empty()) fits["note"] = audit.fits.note;
  j["fits"] = std::move(fits);
  Json checks = Json::array();
  for (const auto& c : audit.checks) {
    checks.push_back({{"id", c.id},
                      {"index", c.index},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"margin", c.margin},
                      {"status", to_string(c.status)},
                      {"note", c.note}});
  }
  j["checks"] = std::move(checks);
  return j;
}

std::string audit_table(const RateAudit& audit) {
  std::ostringstream out;
  char line[1024];
  std::snprintf(line, sizeof line, "%-34s %-18s %-24s %-24s %-8s %s\n", "check", "index", "lhs",
                "rhs", "status", "note");
  out << line;
  for (const auto& c : audit.checks) {
    std::snprintf(line, sizeof line, "%-34s %-18s %-24s %-24s %-8s %s\n", c.id.c_str(),
                  c.index.c_str(), format_double(c.lhs).c_str(), format_double(c.rhs).c_str(),
                  to_string(c.status).c_str(), c.note.c_str());
    out << line;
  }
  out << "pass " << audit.counts.pass << "  fail " << audit.counts.fail << "  skipped "
      << audit.counts.skipped << "\n";
  return out.str();
}

}  // namespace geim::app
