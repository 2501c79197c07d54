#include "agreekit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace agreekit::io {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_matrix_csv(const Matrix& M) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << format_double(M(i, j));
    }
    out << '\n';
  }
  return out.str();
}

Matrix parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      size_t pos = 0;
      const double v = std::stod(cell, &pos);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty matrix text");
  const size_t cols = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != cols) throw std::invalid_argument("ragged matrix rows");
  Matrix M(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols; ++j) M(i, j) = rows[i][j];
  return M;
}

namespace {

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("matrix JSON must be a nonempty array of arrays");
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  Matrix M(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw std::invalid_argument("ragged matrix rows");
    for (size_t c = 0; c < cols; ++c) M(i, c) = j[i][c].get<double>();
  }
  return M;
}

}  // namespace

void write_matrix_csv(const std::string& path, const Matrix& M) {
  write_text(path, format_matrix_csv(M));
}

Matrix read_matrix(const std::string& path) {
  const std::string text = read_text(path);
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    const auto j = nlohmann::json::parse(text);
    if (j.is_object() && j.contains("matrix")) return matrix_from_json(j["matrix"]);
    return matrix_from_json(j);
  }
  return parse_matrix_csv(text);
}

nlohmann::ordered_json graph_to_json(const Digraph& g) {
  nlohmann::ordered_json j;
  j["n"] = g.n;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges)
    if (e.row != e.col)
      edges.push_back(nlohmann::ordered_json::array({e.row + 1, e.col + 1}));
  j["edges"] = std::move(edges);
  std::vector<bool> loops(g.n, false);
  for (const Edge& e : g.edges)
    if (e.row == e.col) loops[e.row] = true;
  j["self_loops"] = loops;
  return j;
}

Digraph graph_from_json(const nlohmann::json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("graph JSON needs integer field 'n'");
  const int n = j["n"].get<int>();
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    for (const auto& pair : j["edges"]) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("edge entries must be [i, j] pairs");
      const int row = pair[0].get<int>();
      const int col = pair[1].get<int>();
      if (row < 1 || row > n || col < 1 || col > n)
        throw std::invalid_argument("edge index out of range (1-based)");
      edges.push_back({row - 1, col - 1});
    }
  }
  if (j.contains("self_loops")) {
    const auto& loops = j["self_loops"];
    if (!loops.is_array() || static_cast<int>(loops.size()) != n)
      throw std::invalid_argument("self_loops must list one flag per node");
    for (int v = 0; v < n; ++v)
      if (loops[v].get<bool>()) {
        const Edge e{v, v};
        bool present = false;
        for (const Edge& existing : edges)
          if (existing == e) {
            present = true;
            break;
          }
        if (!present) edges.push_back(e);
      }
  }
  return Digraph::from_edges(n, std::move(edges));
}

void write_graph(const std::string& path, const Digraph& g) {
  write_text(path, graph_to_json(g).dump(2) + "\n");
}

Digraph read_graph(const std::string& path) {
  return graph_from_json(nlohmann::json::parse(read_text(path)));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace agreekit::io
