#include "geim_app/config.hpp"

#include "geim_app/format.hpp"

#include <algorithm>
#include <initializer_list>
#include <set>

namespace geim::app {

ConfigError::ConfigError(const std::string& origin, std::size_t line, const std::string& what)
    : Error(origin + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
      line_(line) {}

namespace {

using nlohmann::json;

std::size_t line_at(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::string line_text(const std::string& text, std::size_t line) {
  std::size_t start = 0;
  for (std::size_t l = 1; l < line && start != std::string::npos; ++l) {
    start = text.find('\n', start);
    if (start != std::string::npos) ++start;
  }
  if (start == std::string::npos || start >= text.size()) return {};
  const std::size_t end = text.find('\n', start);
  return text.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : text_(text), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    // best effort: the first line mentioning the last key of the path
    std::size_t line = 0;
    const std::size_t dot = path.find_last_of('.');
    const std::string key = "\"" + (dot == std::string::npos ? path : path.substr(dot + 1)) + "\"";
    const std::size_t pos = text_.find(key);
    if (pos != std::string::npos) line = line_at(text_, pos);
    std::string msg = path + ": " + what;
    if (line) msg += "\n  | " + line_text(text_, line);
    throw ConfigError(origin_, line, msg);
  }

  void only_keys(const json& obj, const std::string& path,
                 std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(path, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!allowed.count(it.key()))
        fail(join(path, it.key()), "unknown key");
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  double number(const json& obj, const std::string& path, const char* key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(join(path, key), "expected a number, got " + v.dump());
    return v.get<double>();
  }

  std::size_t count(const json& obj, const std::string& path, const char* key,
                    std::size_t fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      fail(join(path, key), "expected a nonnegative integer, got " + v.dump());
    return v.get<std::size_t>();
  }

  bool flag(const json& obj, const std::string& path, const char* key, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(join(path, key), "expected true or false, got " + v.dump());
    return v.get<bool>();
  }

  std::string string(const json& obj, const std::string& path, const char* key,
                     const std::string& fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string, got " + v.dump());
    return v.get<std::string>();
  }

  /// [v, ...] or {"lower": a, "upper": b, "count": n}
  std::vector<double> values(const json& v, const std::string& path) const {
    if (v.is_array()) {
      std::vector<double> out;
      for (const auto& e : v) {
        if (!e.is_number()) fail(path, "expected numbers, got " + e.dump());
        out.push_back(e.get<double>());
      }
      return out;
    }
    if (v.is_object()) {
      only_keys(v, path, {"lower", "upper", "count"});
      for (const char* k : {"lower", "upper", "count"})
        if (!v.contains(k)) fail(join(path, k), "missing");
      return uniform_params(number(v, path, "lower", 0.0), number(v, path, "upper", 0.0),
                            count(v, path, "count", 0));
    }
    fail(path, "expected an array or {lower, upper, count}");
  }

  template <class Parse>
  auto parse_enum(const json& obj, const std::string& path, const char* key, Parse parse,
                  decltype(parse(std::string_view{})) fallback) const {
    if (!obj.contains(key)) return fallback;
    const std::string s = string(obj, path, key, "");
    try {
      return parse(s);
    } catch (const Error& e) {
      fail(join(path, key), e.what());
    }
  }

 private:
  const std::string& text_;
  std::string origin_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t line = line_at(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(origin, line,
                      std::string("JSON syntax error: ") + e.what() + "\n  | " +
                          line_text(text, line));
  }
  Reader rd(text, origin);
  rd.only_keys(root, "", {"grid", "family", "dictionary", "greedy", "analysis", "audit",
                          "outputs", "emit_plots"});
  RunConfig cfg;

  const json empty = json::object();
  const json& greedy = root.contains("greedy") ? root.at("greedy") : empty;
  rd.only_keys(greedy, "greedy", {"n_max", "mode", "eta_target", "subset", "stop_tol", "seed",
                                  "max_redraws"});
  cfg.greedy.n_max = rd.count(greedy, "greedy", "n_max", 20);
  cfg.greedy.mode = rd.parse_enum(greedy, "greedy", "mode", parse_norm_mode, NormMode::Hilbert);
  cfg.greedy.eta_target = rd.number(greedy, "greedy", "eta_target", 1.0);
  if (!(cfg.greedy.eta_target > 0.0) || cfg.greedy.eta_target > 1.0)
    rd.fail("greedy.eta_target", "must lie in (0, 1]");
  cfg.greedy.stop_tol = rd.number(greedy, "greedy", "stop_tol", kDefaultTol);
  cfg.greedy.seed = rd.count(greedy, "greedy", "seed", 0);
  cfg.greedy.max_redraws = rd.count(greedy, "greedy", "max_redraws", 8);
  if (greedy.contains("subset")) {
    const json& s = greedy.at("subset");
    rd.only_keys(s, "greedy.subset", {"kind", "size"});
    cfg.greedy.subset.kind =
        rd.parse_enum(s, "greedy.subset", "kind", parse_subset_kind, SubsetKind::Full);
    cfg.greedy.subset.size = rd.count(s, "greedy.subset", "size", 0);
  }
  const NormMode mode = cfg.greedy.mode;

  const json& grid = root.contains("grid") ? root.at("grid") : empty;
  rd.only_keys(grid, "grid", {"lower", "upper", "points"});
  cfg.grid.lower = rd.number(grid, "grid", "lower", -1.0);
  cfg.grid.upper = rd.number(grid, "grid", "upper", 1.0);
  cfg.grid.points = rd.count(grid, "grid", "points", 200);
  if (!(cfg.grid.upper > cfg.grid.lower)) rd.fail("grid.upper", "must exceed grid.lower");
  if (cfg.grid.points < 2) rd.fail("grid.points", "needs at least 2 points");

  const json& fam = root.contains("family") ? root.at("family") : empty;
  rd.only_keys(fam, "family", {"kind", "params", "width", "terms", "normalize", "norm"});
  cfg.family.kind =
      rd.parse_enum(fam, "family", "kind", parse_family_kind, FamilyKind::GaussianBump);
  if (fam.contains("params")) {
    cfg.family.params = rd.values(fam.at("params"), "family.params");
  } else {
    cfg.family.params = cfg.family.kind == FamilyKind::RationalPeak
                            ? uniform_params(1.0, 10.0, 40)
                            : uniform_params(-1.0, 1.0, 40);
  }
  if (cfg.family.params.empty()) rd.fail("family.params", "no parameters");
  cfg.family.width = rd.number(fam, "family", "width", 0.25);
  cfg.family.terms = static_cast<int>(rd.count(fam, "family", "terms", 8));
  cfg.family.normalize = rd.flag(fam, "family", "normalize", true);
  cfg.family.norm = rd.parse_enum(fam, "family", "norm", parse_norm_mode, mode);
  if (cfg.family.norm != mode)
    rd.fail("family.norm", "'" + to_string(cfg.family.norm) + "' disagrees with greedy.mode '" +
                               to_string(mode) + "'");

  const json& dict = root.contains("dictionary") ? root.at("dictionary") : empty;
  rd.only_keys(dict, "dictionary", {"kind", "centers", "spread"});
  cfg.dictionary.kind = rd.parse_enum(
      dict, "dictionary", "kind", parse_dictionary_kind,
      mode == NormMode::Hilbert ? DictionaryKind::LocalAverage : DictionaryKind::Dirac);
  if (dict.contains("centers")) {
    const json& c = dict.at("centers");
    if (c.is_string()) {
      if (c.get<std::string>() != "grid")
        rd.fail("dictionary.centers", "the only string value is \"grid\"");
      cfg.dictionary_on_grid = true;
    } else {
      cfg.dictionary.centers = rd.values(c, "dictionary.centers");
    }
  } else if (cfg.dictionary.kind == DictionaryKind::Dirac) {
    cfg.dictionary_on_grid = true;
  } else {
    cfg.dictionary.centers = uniform_params(-0.99, 0.99, 100);
  }
  cfg.dictionary.spread = rd.number(
      dict, "dictionary", "spread", cfg.dictionary.kind == DictionaryKind::LocalAverage ? 0.02 : 0.0);

  const json& an = root.contains("analysis") ? root.at("analysis") : empty;
  rd.only_keys(an, "analysis", {"widths", "appendix", "polish", "max_iterations", "random_starts"});
  cfg.analysis.widths = rd.flag(an, "analysis", "widths", true);
  cfg.analysis.appendix = rd.flag(an, "analysis", "appendix", true);
  cfg.analysis.width.polish = rd.flag(an, "analysis", "polish", true);
  cfg.analysis.width.max_iterations =
      rd.count(an, "analysis", "max_iterations", cfg.analysis.width.max_iterations);
  cfg.analysis.width.random_starts =
      rd.count(an, "analysis", "random_starts", cfg.analysis.width.random_starts);
  cfg.analysis.width.seed = cfg.greedy.seed;

  const json& au = root.contains("audit") ? root.at("audit") : empty;
  rd.only_keys(au, "audit", {"limit", "rate_limit", "beta_exponent", "sweep_theorem",
                             "proof_structure"});
  cfg.audit.limit = rd.count(au, "audit", "limit", 16);
  cfg.audit.rate_limit = rd.count(au, "audit", "rate_limit", 0);
  cfg.audit.beta_exponent = rd.number(au, "audit", "beta_exponent", 1.0);
  if (!(cfg.audit.beta_exponent > 0.5)) rd.fail("audit.beta_exponent", "must exceed 1/2");
  cfg.audit.sweep_theorem = rd.flag(au, "audit", "sweep_theorem", false);
  cfg.audit.proof_structure = rd.flag(au, "audit", "proof_structure", true);

  cfg.outputs = rd.string(root, "", "outputs", "geim_out");
  cfg.emit_plots = rd.flag(root, "", "emit_plots", true);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error& e) {
    throw ConfigError(path.string(), 0, e.what());
  }
  return parse_config(text, path.string());
}

GridPtr make_grid(const RunConfig& cfg) {
  return Grid::uniform(cfg.grid.lower, cfg.grid.upper, cfg.grid.points);
}

FunctionSet make_family(const RunConfig& cfg, const GridPtr& grid) {
  FamilySpec spec = cfg.family;
  spec.grid = grid;
  return build_family(spec);
}

std::vector<Functional> make_dictionary(const RunConfig& cfg, const GridPtr& grid) {
  DictionarySpec spec = cfg.dictionary;
  if (cfg.dictionary_on_grid) {
    spec.centers.clear();
    for (Eigen::Index i = 0; i < grid->points().size(); ++i) spec.centers.push_back(grid->points()[i]);
  }
  return build_dictionary(spec, grid, cfg.greedy.mode);
}

}  // namespace geim::app
