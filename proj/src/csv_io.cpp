#include "rr/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw PreconditionError(path + ":" + std::to_string(lineno) + ": bad number '" + cell +
                                "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw PreconditionError(path + ":" + std::to_string(lineno) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows.empty()) throw PreconditionError(path + ": empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector read_vector_csv(const std::string& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw PreconditionError(path + ": expected a single row or column");
}

IndexSet parse_index_list(const std::string& text) {
  IndexSet out;
  std::string token;
  std::stringstream ss(text);
  while (ss >> std::ws && std::getline(ss, token, ',')) {
    std::stringstream lines(token);
    std::string part;
    while (lines >> part) {
      int v = 0;
      const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
      if (res.ec != std::errc() || res.ptr != part.data() + part.size() || v < 0) {
        throw PreconditionError("bad index '" + part + "'");
      }
      out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IndexSet read_index_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  std::string text, line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    text += line + ',';
  }
  return parse_index_list(text);
}

}  // namespace rr
