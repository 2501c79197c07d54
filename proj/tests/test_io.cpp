#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "agreekit/io.hpp"
#include "agreekit/presets.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using agreekit::Matrix;

namespace {

fs::path temp_file(const std::string& stem) {
  static int counter = 0;
  return fs::temp_directory_path() /
         ("agreekit_io_" + stem + "_" + std::to_string(++counter));
}

}  // namespace

TEST_CASE("matrix CSV round-trip is exact") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  Matrix M(4, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = dist(rng);
  M(0, 0) = 0.1;  // not exactly representable; %.17g must still round-trip
  M(1, 1) = -0.0;
  const Matrix back = agreekit::io::parse_matrix_csv(agreekit::io::format_matrix_csv(M));
  REQUIRE(back.rows() == 4);
  REQUIRE(back.cols() == 3);
  CHECK((back - M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix CSV parsing rejects bad shapes") {
  CHECK_THROWS_AS(agreekit::io::parse_matrix_csv("1,2\n3\n"), std::invalid_argument);
  CHECK_THROWS_AS(agreekit::io::parse_matrix_csv("  \n\n"), std::invalid_argument);
  const Matrix m = agreekit::io::parse_matrix_csv("1, 2\n\n3, 4\n");
  CHECK(m(1, 0) == 3.0);
}

TEST_CASE("read_matrix accepts CSV and both JSON shapes") {
  const auto p1 = temp_file("csv");
  agreekit::io::write_text(p1.string(), "1,2\n3,4\n");
  const auto p2 = temp_file("jarr");
  agreekit::io::write_text(p2.string(), "[[1, 2], [3, 4]]");
  const auto p3 = temp_file("jobj");
  agreekit::io::write_text(p3.string(), "{\"matrix\": [[1, 2], [3, 4]]}");
  for (const auto& p : {p1, p2, p3}) {
    const Matrix m = agreekit::io::read_matrix(p.string());
    CHECK(m(0, 1) == 2.0);
    CHECK(m(1, 0) == 3.0);
    fs::remove(p);
  }
  CHECK_THROWS(agreekit::io::read_matrix((p1.string() + ".missing")));
}

TEST_CASE("graph JSON round-trip preserves the edge set") {
  const auto g = agreekit::preset_graph("example3a");
  const auto j = agreekit::io::graph_to_json(g);
  CHECK(j["n"] == 5);
  CHECK(j["self_loops"].size() == 5);
  // Non-self edges are 1-based pairs; self-loops live in the flag array.
  for (const auto& pair : j["edges"]) CHECK(pair[0] != pair[1]);
  const auto back = agreekit::io::graph_from_json(j);
  CHECK(back.n == g.n);
  CHECK(back.edges == g.edges);
}

TEST_CASE("graph JSON accepts explicit self-loop pairs") {
  const auto g = agreekit::io::graph_from_json(nlohmann::json::parse(
      R"({"n": 2, "edges": [[1, 1], [1, 2], [2, 1]]})"));
  CHECK(g.num_edges() == 3);
  CHECK(g.has_self_loop(0));
  CHECK_THROWS_AS(agreekit::io::graph_from_json(nlohmann::json::parse(
                      R"({"n": 2, "edges": [[0, 1]]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(agreekit::io::graph_from_json(nlohmann::json::parse(
                      R"({"n": 2, "self_loops": [true]})")),
                  std::invalid_argument);
}

TEST_CASE("graph file round-trip") {
  const auto g = agreekit::preset_graph("fig2");
  const auto p = temp_file("graph");
  agreekit::io::write_graph(p.string(), g);
  const auto back = agreekit::io::read_graph(p.string());
  CHECK(back.edges == g.edges);
  fs::remove(p);
}
