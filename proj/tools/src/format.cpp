#include "geim_app/format.hpp"

#include "geim/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace geim::app {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) out += "null";
    else if (v == 0.0 && std::signbit(v)) out += "-0.0";
    else out += format_double(v);
  } else if (is_scalar(j)) {
    out += j.dump();
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return is_scalar(e); });
    out += "[";
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ",";
      if (flat) {
        if (!first) out += " ";
      } else {
        out += "\n" + inner;
      }
      emit(e, out, indent + 1);
      first = false;
    }
    if (!flat) out += "\n" + pad;
    out += "]";
  } else {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      out += first ? "\n" : ",\n";
      out += inner + Json(it.key()).dump() + ": ";
      emit(it.value(), out, indent + 1);
      first = false;
    }
    out += "\n" + pad + "}";
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

Json to_json(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json to_json(const Eigen::VectorXd& v) {
  return to_json(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  j["data"] = std::move(data);
  return j;
}

std::vector<double> doubles_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw StructuralError("expected an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) {
    if (e.is_null()) v.push_back(std::nan(""));
    else if (e.is_number()) v.push_back(e.get<double>());
    else throw StructuralError("expected a number, got " + e.dump());
  }
  return v;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const std::vector<double> data = doubles_from_json(j.at("data"));
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size())
    throw StructuralError("matrix data does not match rows x cols");
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++];
  return m;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ",";
    text_ += header[i];
  }
  text_ += "\n";
}

CsvTable& CsvTable::cell(const std::string& v) {
  if (in_row_++) text_ += ",";
  text_ += v;
  return *this;
}

CsvTable& CsvTable::cell(double v) { return cell(format_double(v)); }

CsvTable& CsvTable::cell(std::size_t v) { return cell(std::to_string(v)); }

CsvTable& CsvTable::empty() { return cell(std::string()); }

void CsvTable::end_row() {
  if (in_row_ != columns_)
    throw StructuralError("csv row has " + std::to_string(in_row_) + " cells, header has " +
                          std::to_string(columns_));
  text_ += "\n";
  in_row_ = 0;
}

void CsvTable::footer(const std::string& line) { footer_.push_back(line); }

std::string CsvTable::str() const {
  std::string out = text_;
  for (const auto& l : footer_) out += "# " + l + "\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace geim::app
