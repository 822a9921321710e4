#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace geim::app {

using Json = nlohmann::ordered_json;

/// Shortest-independent, locale-free decimal with 17 significant digits.
/// Non-finite values become "nan", "inf" or "-inf".
std::string format_double(double v);

/// Deterministic JSON text: doubles via format_double (non-finite as null),
/// scalar arrays on one line, two-space indentation, trailing newline.
std::string dump_json(const Json& j);

Json to_json(std::span<const double> v);
Json to_json(const Eigen::VectorXd& v);
/// {"rows": r, "cols": c, "data": [row-major]}
Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
/// null reads back as NaN.
std::vector<double> doubles_from_json(const nlohmann::json& j);

/// Comma-separated table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& cell(double v);
  CsvTable& cell(std::size_t v);
  CsvTable& cell(const std::string& v);
  CsvTable& empty();
  void end_row();
  void footer(const std::string& line);  ///< written as "# line"

  std::string str() const;

 private:
  std::size_t columns_;
  std::string text_;
  std::size_t in_row_ = 0;
  std::vector<std::string> footer_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace geim::app
