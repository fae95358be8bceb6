#include "doctest.h"

#include <random>

#include "hognn/corpus.hpp"
#include "hognn/error.hpp"
#include "hognn/io.hpp"
#include "hognn/transform.hpp"
#include "support.hpp"

using namespace hognn;
using namespace hognn::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::OutOfRange;
}

std::vector<HOStructure> every_kind() {
  std::mt19937_64 rng(61);
  Graph g = random_graph(5, 0.6, rng, 2);
  NodeDeletion how;
  how.mode = NodeDeletion::Mode::Sampled;
  how.count = 3;
  how.seed = 9;
  CellComplex cc = cell_lift(g, 3, 5, 0);
  cc.features = random_rows(cc.cells.size(), 1, rng);
  return {
      HOStructure(g),
      HOStructure(Hypergraph::build(4, {{0, 1}, {0, 1, 2}, {3}}, random_rows(4, 2, rng), random_rows(3, 2, rng))),
      HOStructure(clique_complex_lift(g, 3)),
      HOStructure(cc),
      HOStructure(iso_type_lift(g, 2)),
      HOStructure(ego_net_collection(g, 1, true)),
      HOStructure(node_deleted_collection(g, how)),
      HOStructure(motif_lift(g, {named::complete(3), named::path(3)})),
      HOStructure(subgraph_counts(g, {named::complete(3)})),
      HOStructure(NestedGraph{named::path(3), {named::complete(2), named::empty(0), named::cycle(4)}}),
  };
}

} // namespace

TEST_CASE("structure documents round trip") {
  for (const auto& s : every_kind()) {
    const std::string text = io::dump(io::to_json(s));
    HOStructure back = io::from_json(io::parse(text));
    CHECK(kind_of(back) == kind_of(s));
    CHECK(back == s);
    CHECK(io::dump(io::to_json(back)) == text);
  }
}

TEST_CASE("graph documents") {
  Graph g = named::cycle(4);
  auto doc = io::graph_to_json(g);
  CHECK(doc["n"] == 4);
  CHECK(doc["edges"].size() == 4);
  CHECK(io::graph_from_json(doc) == g);
  CHECK(io::graph_from_json(io::parse(R"({"n": 3, "edges": [[0, 1], [1, 2]]})")) == named::path(3));
}

TEST_CASE("malformed documents") {
  CHECK(code_of([] { io::parse("{\"n\": 3,"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { io::from_json(io::parse(R"({"kind": "torus"})")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { io::graph_from_json(io::parse(R"({"n": 2, "edges": [[0, 5]]})")); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { io::graph_from_json(io::parse(R"({"edges": []})")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { io::read_text("/nonexistent/hognn.json"); }) != ErrorCode::OutOfRange);
}

TEST_CASE("edge lists") {
  Graph g = io::parse_edge_list("3 2\n0 1\n1 2\n");
  CHECK(g == named::path(3));
  CHECK(io::parse_edge_list(io::format_edge_list(named::cycle(5))) == named::cycle(5));
  Graph f = io::parse_edge_list("2 1\n0 1\n", "0.5,1\n2,3\n");
  CHECK(f.vertex_feature(1)[0] == 2);
  CHECK(code_of([] { io::parse_edge_list("3 2\n0 1\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("number formatting") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(2) == "2");
  CHECK(std::stod(io::format_double(0.1 + 0.2)) == 0.1 + 0.2);
  RowVec v(2);
  v << 1, -0.25;
  CHECK(io::embedding_csv(v).find("1,-0.25") != std::string::npos);
}

TEST_CASE("channel and count tables") {
  auto w = compile_imp(Hypergraph::build(2, {{0, 1}}));
  std::string csv = io::channels_csv(w);
  CHECK(csv.rfind("scheme,imp\nsrc,dst,via,tag,weight\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  std::string counts = io::counts_csv(channel_count(w));
  CHECK(counts.find("total,4") != std::string::npos);
}

TEST_CASE("model documents") {
  ModelSpec m = io::model_from_json(io::parse(R"({"preset": "cwn", "width": 2})"), 7);
  ModelSpec direct = presets::cwn(2, 7);
  CHECK(io::dump(io::model_to_json(m)) == io::dump(io::model_to_json(direct)));
  for (const char* name : {"imp", "hgconv", "hat", "mpsn", "cwn", "kgnn", "graph-mp"}) {
    ModelSpec x = presets::by_name(name, 2, 3);
    ModelSpec y = io::model_from_json(io::model_to_json(x), 99);
    CHECK(io::dump(io::model_to_json(y)) == io::dump(io::model_to_json(x)));
    CHECK(classify_flavor(y) == classify_flavor(x));
  }
  auto layered = io::parse(R"({"layers": [{"kind": "mp", "psi": {"hop": {"kind": "project", "arg": 1}},
                                             "phi": {"kind": "sum-args"}, "hops": [1, 2]}], "readout": "mean"})");
  ModelSpec l = io::model_from_json(layered, 1);
  REQUIRE(l.layers.size() == 1);
  CHECK(l.layers[0].hops == std::vector<int>{1, 2});
  CHECK(l.readout == ReadoutKind::Mean);
  CHECK(code_of([] { io::model_from_json(io::parse(R"({"preset": "gat", "width": 2})"), 1); }) == ErrorCode::ParseError);
}

TEST_CASE("battery table") {
  std::vector<std::pair<NamedGraph, NamedGraph>> pairs{{{"a", named::path(3)}, {"b", named::complete(3)}}};
  auto r = battery(pairs, {parse_test("wl1")});
  std::string csv = io::battery_csv(r);
  CHECK(csv.rfind("test,graph_a,graph_b,verdict,rounds,messages\n", 0) == 0);
  CHECK(csv.find("wl1,a,b,Distinguished,") != std::string::npos);
}

TEST_CASE("corpus") {
  CHECK(graphs_with(enumerate_corpus(3, true), 3).size() == 4);
  CHECK(graphs_with(enumerate_corpus(4, true), 4).size() == 11);
  auto one = enumerate_corpus(1, false);
  REQUIRE(one.graphs.size() == 1);
  CHECK(one.graphs[0].graph.n() == 1);
  CHECK(one.graphs[0].id == "n1_0");
  CHECK(graphs_with(enumerate_corpus(3, false), 3).size() == 8);
  CHECK(code_of([] { enumerate_corpus(8, true); }) == ErrorCode::BudgetExceeded);
}
