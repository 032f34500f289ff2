#include "spectemp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spectemp {
namespace io {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

}  // namespace

void write_matrix_csv(const std::string& path, const Mat& m) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Mat read_matrix_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        size_t pos = 0;
        row.push_back(std::stod(cell, &pos));
        if (pos != cell.size() && cell.find_first_not_of(" \t\r", pos) != std::string::npos)
          throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix file");
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::runtime_error("matrix json: expected array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.at(0).size());
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j.at(i);
    if (static_cast<int>(row.size()) != cols) throw std::runtime_error("matrix json: ragged row");
    for (int jj = 0; jj < cols; ++jj) m(i, jj) = row.at(jj).get<double>();
  }
  return m;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

void write_filter_json(const std::string& path, const GraphFilter& filter) {
  nlohmann::json j;
  j["n"] = filter.matrix.rows();
  switch (filter.kind) {
    case FilterKind::fir: j["kind"] = "fir"; break;
    case FilterKind::iir: j["kind"] = "iir"; break;
    case FilterKind::raw: j["kind"] = "raw"; break;
  }
  j["matrix"] = matrix_to_json(filter.matrix);
  if (filter.coeffs) {
    nlohmann::json c = nlohmann::json::array();
    for (int i = 0; i < filter.coeffs->size(); ++i) c.push_back((*filter.coeffs)(i));
    j["coeffs"] = std::move(c);
  }
  write_json(path, j);
}

GraphFilter read_filter_json(const std::string& path) {
  nlohmann::json j = read_json(path);
  GraphFilter f;
  if (!j.contains("matrix")) throw std::runtime_error(path + ": missing 'matrix'");
  f.matrix = matrix_from_json(j.at("matrix"));
  if (f.matrix.rows() != f.matrix.cols()) throw std::runtime_error(path + ": filter not square");
  const std::string kind = j.value("kind", "raw");
  if (kind == "fir")
    f.kind = FilterKind::fir;
  else if (kind == "iir")
    f.kind = FilterKind::iir;
  else if (kind == "raw")
    f.kind = FilterKind::raw;
  else
    throw std::runtime_error(path + ": unknown filter kind '" + kind + "'");
  if (j.contains("coeffs")) {
    const auto& c = j.at("coeffs");
    Vec coeffs(c.size());
    for (size_t i = 0; i < c.size(); ++i) coeffs(static_cast<int>(i)) = c.at(i).get<double>();
    f.coeffs = coeffs;
  }
  return f;
}

std::string kind_name(GsoKind kind) {
  switch (kind) {
    case GsoKind::adjacency: return "adjacency";
    case GsoKind::laplacian: return "laplacian";
    case GsoKind::normalized_laplacian: return "normalized-laplacian";
    case GsoKind::generic_symmetric: return "generic-symmetric";
  }
  throw std::logic_error("unreachable");
}

GsoKind kind_from_name(const std::string& name) {
  if (name == "adjacency") return GsoKind::adjacency;
  if (name == "laplacian") return GsoKind::laplacian;
  if (name == "normalized-laplacian") return GsoKind::normalized_laplacian;
  if (name == "generic-symmetric") return GsoKind::generic_symmetric;
  throw std::runtime_error("unknown shift-operator kind '" + name + "'");
}

void write_gso_json(const std::string& path, const Gso& gso) {
  nlohmann::json j;
  j["n"] = gso.n();
  j["kind"] = kind_name(gso.kind);
  j["matrix"] = matrix_to_json(gso.matrix);
  write_json(path, j);
}

Gso read_gso_json(const std::string& path) {
  nlohmann::json j = read_json(path);
  Gso g;
  g.matrix = matrix_from_json(j.at("matrix"));
  if (g.matrix.rows() != g.matrix.cols())
    throw std::runtime_error(path + ": shift operator not square");
  g.kind = kind_from_name(j.value("kind", "generic-symmetric"));
  return g;
}

}  // namespace io
}  // namespace spectemp
