#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "hognn/adjacency.hpp"
#include "hognn/error.hpp"
#include "hognn/transform.hpp"

using namespace hognn;

namespace {

EntityRef V(int i) { return {EntityClass::Vertex, i}; }
EntityRef E(int i) { return {EntityClass::Hyperedge, i}; }

std::set<EntityRef> as_set(const std::vector<EntityRef>& v) { return {v.begin(), v.end()}; }
std::set<Tuple> as_set(const std::vector<Tuple>& v) { return {v.begin(), v.end()}; }

// CqC(K3): e0={0,1}, e1={0,2}, e2={1,2}, e3={0,1,2}.
SimplicialComplex cqc_k3() { return clique_complex_lift(named::complete(3), 3); }

Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v});
  return build_graph(n, edges);
}

} // namespace

TEST_CASE("boundary on the clique complex of K3") {
  auto h = cqc_k3();
  CHECK(as_set(boundary(h, E(3))) == std::set<EntityRef>{E(0), E(1), E(2), V(0), V(1), V(2)});
  CHECK(as_set(boundary(h, E(0))) == std::set<EntityRef>{V(0), V(1)});
  for (int v = 0; v < 3; ++v) CHECK(boundary(h, V(v)).empty());
  CHECK_THROWS_AS(boundary(h, E(9)), Error);
}

TEST_CASE("coboundary, upper and lower on the clique complex of K3") {
  auto h = cqc_k3();
  CHECK(as_set(coboundary(h, E(0))) == std::set<EntityRef>{E(3)});
  CHECK(as_set(upper_adjacent(h, V(0))) == std::set<EntityRef>{V(1), V(2), E(0), E(1), E(2)});
  // τ ranges over every entity, so the triangle also shares vertex boundaries.
  CHECK(as_set(lower_adjacent(h, E(0))) == std::set<EntityRef>{E(1), E(2), E(3)});
  AdjacencyOptions same;
  same.same_rank_only = true;
  CHECK(as_set(lower_adjacent(h, E(0), same)) == std::set<EntityRef>{E(1), E(2)});
  CHECK(as_set(upper_adjacent(h, V(0), same)) == std::set<EntityRef>{V(1), V(2)});
  AdjacencyOptions self;
  self.include_self = true;
  CHECK(as_set(upper_adjacent(h, V(0), self)).count(V(0)) == 1);
}

TEST_CASE("boundary duality and symmetric adjacency") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto h = clique_complex_lift(random_graph(6, 0.5, rng), 4);
    auto r = relations(h);
    for (std::size_t c = 0; c < r.size(); ++c) {
      for (int b : r.boundary[c]) {
        const auto& cob = r.coboundary[static_cast<std::size_t>(b)];
        CHECK(std::find(cob.begin(), cob.end(), static_cast<int>(c)) != cob.end());
      }
      for (int d : r.upper_set(static_cast<int>(c))) {
        auto back = r.upper_set(d);
        CHECK(std::find(back.begin(), back.end(), static_cast<int>(c)) != back.end());
      }
      for (int d : r.lower_set(static_cast<int>(c))) {
        auto back = r.lower_set(d);
        CHECK(std::find(back.begin(), back.end(), static_cast<int>(c)) != back.end());
      }
    }
  }
}

TEST_CASE("upper adjacency of a plain graph is its neighbourhood") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = random_graph(7, 0.4, rng);
    auto h = as_hypergraph(g);
    for (int u = 0; u < g.n(); ++u) {
      std::set<EntityRef> vertices;
      for (const auto& d : upper_adjacent(h, V(u)))
        if (d.cls == EntityClass::Vertex) vertices.insert(d);
      std::set<EntityRef> expect;
      for (int w : g.neighbors(u)) expect.insert(V(w));
      CHECK(vertices == expect);
    }
  }
}

TEST_CASE("cell complex relations follow the Hasse boundary") {
  auto c = cell_lift(named::cycle(6), 2, 6, 0);
  REQUIRE(c.cells.size() == 13);
  EntityRef face{EntityClass::Cell, 12};
  CHECK(boundary(c, face).size() == 6);
  CHECK(coboundary(c, EntityRef{EntityClass::Cell, 0}).size() == 2);
  CHECK(upper_adjacent(c, EntityRef{EntityClass::Cell, 0}).size() == 2);
  CHECK(upper_adjacent(c, EntityRef{EntityClass::Cell, 6}).size() == 5);
  CHECK(lower_adjacent(c, EntityRef{EntityClass::Cell, 6}).size() == 2);
}

TEST_CASE("down adjacency") {
  CHECK(as_set(down_adjacency(3, {0, 1}, false)) == std::set<Tuple>{{1, 1}, {2, 1}, {0, 0}, {0, 2}});
  CHECK(as_set(down_adjacency(3, {0, 1}, true)) == std::set<Tuple>{{0, 1}, {1, 1}, {2, 1}, {0, 0}, {0, 2}});
  CHECK(down_replacements(3, {0, 1}, true).size() == 6);
  CHECK(down_replacements(3, {0, 1}, false).size() == 4);
  CHECK(as_set(down_adjacency(4, {2}, false)) == std::set<Tuple>{{0}, {1}, {3}});
  CHECK_THROWS_AS(down_adjacency(3, {0, 3}, false), Error);

  for (int k = 1; k <= 3; ++k)
    for (int n = 2; n <= 5; ++n) {
      // One replacement per (coordinate, w): k·n with multiplicity.
      Tuple v(static_cast<std::size_t>(k), 1);
      CHECK(down_replacements(n, v, true).size() == static_cast<std::size_t>(k * n));
    }
}

TEST_CASE("down adjacency inside a collection") {
  auto c = iso_type_lift(named::complete(3), 2, true);
  CHECK(is_full(c, 2));
  CHECK(down_adjacency(c, {0, 1}, false).size() == 4);
  NodeTupleCollection sparse = NodeTupleCollection::build(named::complete(3), {{0, 1}, {0, 2}}, 2);
  CHECK(as_set(down_adjacency(sparse, {0, 1}, false)) == std::set<Tuple>{{0, 2}});
  CHECK_THROWS_AS(down_adjacency(sparse, {2, 2}, false), Error);
}

TEST_CASE("local down adjacency") {
  auto p3 = iso_type_lift(named::path(3), 2, true);
  CHECK(as_set(local_down_adjacency(p3, {0, 2})) == std::set<Tuple>{{1, 2}, {0, 1}});
  auto isolated = iso_type_lift(named::empty(3), 2, true);
  CHECK(local_down_adjacency(isolated, {0, 1}).empty());
  auto k3 = iso_type_lift(named::complete(3), 2, true);
  CHECK(as_set(local_down_adjacency(k3, {0, 1})) == std::set<Tuple>{{1, 1}, {2, 1}, {0, 0}, {0, 2}});
}

TEST_CASE("incidence and boundary matrices") {
  auto k2 = as_hypergraph(named::complete(2));
  Eigen::MatrixXd b = incidence_matrix(k2);
  CHECK(b.rows() == 2);
  CHECK(b.cols() == 1);
  CHECK(b(0, 0) == 1);
  CHECK(b(1, 0) == 1);

  auto h = cqc_k3();
  Eigen::MatrixXd b2 = boundary_matrix(h, 2);
  CHECK(b2.rows() == 3);
  CHECK(b2.cols() == 1);
  CHECK(b2.sum() == 3);
  Eigen::MatrixXd b1 = boundary_matrix(h, 1);
  Eigen::MatrixXd g = b1.transpose() * b1;
  for (int i = 0; i < 3; ++i) CHECK(g(i, i) == 2);
  CHECK_THROWS_AS(boundary_matrix(h, 3), Error);
}

TEST_CASE("motif adjacency") {
  Graph tri = named::complete(3);
  auto w = motif_adjacency(named::complete(3), tri);
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) CHECK(w[static_cast<std::size_t>(u * 3 + v)] == (u == v ? 0 : 1));

  auto c6 = motif_adjacency(named::cycle(6), tri);
  CHECK(std::all_of(c6.begin(), c6.end(), [](std::int64_t x) { return x == 0; }));

  auto k4 = motif_adjacency(named::complete(4), tri);
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v) CHECK(k4[static_cast<std::size_t>(u * 4 + v)] == (u == v ? 0 : 2));

  CHECK_THROWS_AS(motif_adjacency(tri, named::complete(6)), Error);
  CHECK_THROWS_AS(motif_adjacency(tri, named::empty(2)), Error);
}

TEST_CASE("motif adjacency is symmetric and supported on edges") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = random_graph(7, 0.5, rng);
    for (const Graph& m : {named::complete(3), named::path(3), named::cycle(4)}) {
      auto w = motif_adjacency(g, m);
      for (int u = 0; u < 7; ++u)
        for (int v = 0; v < 7; ++v) {
          CHECK(w[static_cast<std::size_t>(u * 7 + v)] == w[static_cast<std::size_t>(v * 7 + u)]);
          if (!g.has_edge(u, v)) CHECK(w[static_cast<std::size_t>(u * 7 + v)] == 0);
        }
    }
  }
}

TEST_CASE("motif copies count distinct subgraphs") {
  CHECK(motif_copies(named::complete(4), named::complete(3)).size() == 4);
  CHECK(motif_copies(named::complete(4), named::cycle(4)).size() == 3);
  CHECK(motif_copies(named::complete(3), named::path(3)).size() == 3);
}

TEST_CASE("subgraph counts") {
  Graph tri = named::complete(3);
  auto two = subgraph_counts(build_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}), {tri});
  for (int v = 0; v < 6; ++v) CHECK(two.vertex_count(v, 0) == 1);
  auto c6 = subgraph_counts(named::cycle(6), {tri});
  for (int v = 0; v < 6; ++v) CHECK(c6.vertex_count(v, 0) == 0);
  auto k4 = subgraph_counts(named::complete(4), {tri});
  for (int v = 0; v < 4; ++v) CHECK(k4.vertex_count(v, 0) == 3);
}
