#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "hognn/error.hpp"
#include "hognn/transform.hpp"
#include "hognn/wiring.hpp"

using namespace hognn;

namespace {

std::size_t count_of(const WiringSet& w, const std::string& tag) {
  auto c = channel_count(w);
  auto it = c.find(tag);
  return it == c.end() ? 0 : it->second;
}

std::size_t into(const WiringSet& w, EntityRef dst) {
  return static_cast<std::size_t>(std::count_if(w.channels.begin(), w.channels.end(), [&](const Channel& c) { return c.dst == dst; }));
}

Hypergraph random_hypergraph(std::mt19937_64& rng) {
  const int n = 3 + static_cast<int>(rng() % 6);
  std::set<VertexSet> edges;
  const int m = 1 + static_cast<int>(rng() % 8);
  for (int i = 0; i < m; ++i) {
    VertexSet e;
    for (int v = 0; v < n; ++v)
      if (rng() % 2) e.push_back(v);
    if (!e.empty()) edges.insert(e);
  }
  return Hypergraph::build(n, {edges.begin(), edges.end()});
}

std::map<EntityClass, int> sizes_of(const Hypergraph& h) { return {{EntityClass::Vertex, h.n}, {EntityClass::Hyperedge, h.m()}}; }

bool sorted_unique(const WiringSet& w) {
  for (std::size_t i = 1; i < w.channels.size(); ++i)
    if (!(w.channels[i - 1] < w.channels[i])) return false;
  return true;
}

} // namespace

TEST_CASE("IMP channels") {
  CHECK(compile_imp(Hypergraph::build(2, {{0, 1}})).channels.size() == 4);
  CHECK(compile_imp(Hypergraph::build(3, {{0, 1, 2}})).channels.size() == 6);
  auto w = compile_imp(Hypergraph::build(3, {{0, 1}, {0, 1, 2}}));
  CHECK(w.channels.size() == 10);
  CHECK(count_of(w, "incidence-up") == 5);
  CHECK(count_of(w, "incidence-down") == 5);
  CHECK(sorted_unique(w));
}

TEST_CASE("IMP count is twice the incidence count") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto h = random_hypergraph(rng);
    std::size_t incidences = 0;
    for (const auto& e : h.hyperedges) incidences += e.size();
    auto w = compile_imp(h);
    CHECK(total_channels(channel_count(w)) == 2 * incidences);
    CHECK(references_valid(w, sizes_of(h)));
  }
}

TEST_CASE("BAMP channels on the clique complex of K3") {
  auto sc = clique_complex_lift(named::complete(3), 3);
  auto b = compile_bamp(sc, {Relation::Boundary});
  CHECK(b.channels.size() == 12);
  CHECK(into(b, {EntityClass::Hyperedge, 3}) == 6);

  BampOptions edges;
  edges.rank = 1;
  auto u = compile_bamp(sc, {Relation::Upper}, edges);
  CHECK(u.channels.size() == 6);
  for (const auto& c : u.channels) CHECK(c.via == EntityRef{EntityClass::Hyperedge, 3});

  auto p3 = SimplicialComplex::from(as_hypergraph(named::path(3)));
  CHECK(compile_bamp(p3, {Relation::Coboundary}).channels.size() == 4);
  CHECK_THROWS_AS(compile_bamp(sc, {}), Error);
}

TEST_CASE("upper channels are materialized per shared coboundary") {
  // Two triangles sharing {0,1}: vertices 0 and 1 are witnessed by the edge and both triangles.
  auto sc = clique_complex_lift(build_graph(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}}), 3);
  auto u = compile_bamp(sc, {Relation::Upper});
  std::size_t pair = 0;
  for (const auto& c : u.channels) pair += c.src == EntityRef{EntityClass::Vertex, 0} && c.dst == EntityRef{EntityClass::Vertex, 1};
  CHECK(pair == 3);
  std::size_t e01 = 0;
  const auto edge = *sc.find(std::vector<int>{0, 1});
  for (const auto& c : u.channels) e01 += c.src == EntityRef{EntityClass::Hyperedge, static_cast<int>(edge)} && c.dst.cls == EntityClass::Hyperedge;
  // {0,1} is upper adjacent to four edges, once each through its own triangle.
  CHECK(e01 == 4);
}

TEST_CASE("CWN channels on the lifted hexagon") {
  auto c = cell_lift(named::cycle(6), 2, 6, 0);
  auto w = compile_cwn(c);
  CHECK(count_of(w, "boundary") == 18);
  CHECK(count_of(w, "upper") == 42);
  CHECK(into(w, {EntityClass::Cell, 12}) == 6);
  for (int v = 0; v < 6; ++v)
    for (const auto& ch : w.channels)
      if (ch.dst == EntityRef{EntityClass::Cell, v}) CHECK(ch.tag == RelationTag::Upper);
  auto p3 = compile_cwn(cell_lift(named::path(3), 2, 6, 0));
  CHECK(count_of(p3, "boundary") == 4);
}

TEST_CASE("BAMP with every relation contains CWN") {
  for (const Graph& g : {named::cycle(6), named::complete(4), named::cycle(5)}) {
    auto c = cell_lift(g, 3, 6, 0);
    auto all = compile_bamp(c, {Relation::Boundary, Relation::Coboundary, Relation::Upper, Relation::Lower});
    auto cw = compile_cwn(c);
    CHECK(std::includes(all.channels.begin(), all.channels.end(), cw.channels.begin(), cw.channels.end()));
  }
}

TEST_CASE("DAMP closed-form counts") {
  CHECK(total_channels(channel_count(compile_damp(iso_type_lift(named::complete(3), 2, true), false, true))) == 54);
  CHECK(total_channels(channel_count(compile_damp(iso_type_lift(named::empty(5), 2, true), false, true))) == 250);
  for (int n = 3; n <= 5; ++n) {
    auto c = iso_type_lift(named::cycle(n), 2, true);
    auto incl = channel_count(compile_damp(c, false, true));
    CHECK(total_channels(incl) == static_cast<std::size_t>(2 * n * n * n));
    CHECK(incl.at("self") == static_cast<std::size_t>(2 * n * n));
    auto excl = compile_damp(c, false, false);
    CHECK(total_channels(channel_count(excl)) == static_cast<std::size_t>(2 * n * n * (n - 1)));
    CHECK(references_valid(excl, {{EntityClass::Tuple, n * n}}));
  }
}

TEST_CASE("local DAMP stays on base edges") {
  Graph p3 = named::path(3);
  auto c = iso_type_lift(p3, 2, true);
  auto w = compile_damp(c, true, false);
  CHECK_FALSE(w.channels.empty());
  for (const auto& ch : w.channels) {
    const auto& s = c.tuples[static_cast<std::size_t>(ch.src.id)];
    const auto& d = c.tuples[static_cast<std::size_t>(ch.dst.id)];
    const auto j = static_cast<std::size_t>(ch.slot);
    CHECK(ch.tag == RelationTag::LocalDown);
    CHECK(p3.has_edge(s[j], d[j]));
  }
  CHECK(total_channels(channel_count(compile_damp(iso_type_lift(named::empty(3), 2, true), true, false))) == 0);

  NodeTupleCollection mixed = iso_type_lift(p3, 3);
  CHECK_THROWS_AS(compile_damp(mixed, false, true), Error);
}

TEST_CASE("multi-hop channels") {
  auto p3 = compile_multihop(named::path(3), {1});
  CHECK(p3.channels.size() == 4);
  for (const auto& c : p3.channels) CHECK(named::path(3).has_edge(c.src.id, c.dst.id));

  Graph tt = build_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  auto two = compile_multihop(tt, {2});
  CHECK(two.channels.size() == 12);
  for (const auto& c : two.channels) CHECK((c.src.id < 3) == (c.dst.id < 3));
  for (const auto& c : two.channels) CHECK(c.weight == 1.0);

  auto p3_2 = compile_multihop(named::path(3), {2});
  CHECK(p3_2.channels.size() == 2);
  auto c4 = compile_multihop(named::cycle(4), {2});
  for (const auto& c : c4.channels) CHECK(c.weight == 2.0);
  CHECK(count_of(compile_multihop(named::path(4), {1, 2, 3}), "hop-3") == 8);
}

TEST_CASE("hop-1 channels equal the directed edge relation") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 2) edges.push_back({u, v});
    Graph g = build_graph(n, edges);
    auto w = compile_multihop(g, {1});
    CHECK(w.channels.size() == 2 * g.m());
    for (const auto& c : w.channels) CHECK(g.has_edge(c.src.id, c.dst.id));
  }
}

TEST_CASE("subgraph channels") {
  auto s = ego_net_collection(named::path(3), 1, true);
  auto w = compile_subgraph(s);
  CHECK(w.channels.size() == 8);
  for (const auto& c : w.channels) CHECK(c.via.has_value());
}

TEST_CASE("scheme and relation names") {
  for (auto s : {Scheme::IMP, Scheme::BAMP, Scheme::CWN, Scheme::DAMP, Scheme::MULTIHOP, Scheme::SUBGRAPH})
    CHECK(parse_scheme(scheme_name(s)) == s);
  CHECK_FALSE(parse_scheme("spiral").has_value());
  CHECK(parse_relation("upper") == Relation::Upper);
  CHECK(tag_name(RelationTag::Hop, 3) == "hop-3");
}
