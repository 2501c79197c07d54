#pragma once

#include <string>

#include "json.hpp"

#include "agreekit/graph.hpp"
#include "agreekit/linalg.hpp"

namespace agreekit::io {

// Matrices travel as CSV (row-major, 17 significant digits) or as JSON
// arrays of arrays; readers accept either format.
std::string format_matrix_csv(const Matrix& M);
Matrix parse_matrix_csv(const std::string& text);
void write_matrix_csv(const std::string& path, const Matrix& M);
Matrix read_matrix(const std::string& path);  // sniffs CSV vs JSON

std::string format_double(double v);  // 17 significant digits

// Graphs as {"n": int, "edges": [[i, j], ...], "self_loops": [bool, ...]}
// with 1-based (row, col) pairs; self-loops may also appear as [i, i] rows.
nlohmann::ordered_json graph_to_json(const Digraph& g);
Digraph graph_from_json(const nlohmann::json& j);
void write_graph(const std::string& path, const Digraph& g);
Digraph read_graph(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace agreekit::io
