#include "doctest.h"

#include <random>

#include "hognn/corpus.hpp"
#include "hognn/error.hpp"
#include "hognn/transform.hpp"
#include "hognn/wl.hpp"
#include "support.hpp"

using namespace hognn;
using namespace hognn::testing;

namespace {

Graph two_triangles() { return build_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ParseError;
}

/// Same-size pairs of the deduplicated corpus, i < j.
std::vector<std::pair<const Graph*, const Graph*>> corpus_pairs(const Corpus& c) {
  std::vector<std::pair<const Graph*, const Graph*>> out;
  for (int n = 1; n <= c.n_max; ++n) {
    auto g = graphs_with(c, n);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j) out.push_back({&g[i]->graph, &g[j]->graph});
  }
  return out;
}

} // namespace

TEST_CASE("1-WL") {
  auto v = wl1(named::cycle(6), two_triangles());
  CHECK(v.outcome == Outcome::Inconclusive);
  CHECK(v.messages == 2 * 6 * 2 * std::int64_t(v.rounds));
  CHECK(wl1(named::complete(3), named::path(3)).distinguished());
  CHECK(wl1(named::path(4), named::cycle(4)).distinguished());
  CHECK(wl1(named::empty(3), named::empty(4)).distinguished());

  Features f;
  f.width = 1;
  f.vertex = {0, 0, 0};
  CHECK(code_of([&] { wl1(build_graph(3, {}, f), named::empty(3)); }) == ErrorCode::FeatureWidthMismatch);
  Features g;
  g.width = 1;
  g.vertex = {0, 0, 1};
  CHECK(wl1(build_graph(3, {}, f), build_graph(3, {}, g)).distinguished());
}

TEST_CASE("k-WL and k-FWL on the motivating pair") {
  CHECK(kwl(named::cycle(6), two_triangles(), 3).distinguished());
  CHECK(kfwl(named::cycle(6), two_triangles(), 2).distinguished());
  CHECK(kwl(named::cycle(6), two_triangles(), 2).outcome == Outcome::Inconclusive);
  CHECK(code_of([] { kwl(named::path(3), named::path(3), 4); }) == ErrorCode::BudgetExceeded);
  CHECK(code_of([] { kfwl(named::empty(9), named::empty(9), 2); }) == ErrorCode::BudgetExceeded);
  CHECK(code_of([] { kwl(named::path(3), named::path(3), 1); }) == ErrorCode::BudgetExceeded);
}

TEST_CASE("delta k-WL and local k-WL+") {
  CHECK(delta_kwl(named::cycle(6), two_triangles(), 2).distinguished());
  CHECK(code_of([] { klwl_plus(named::cycle(6), two_triangles(), 2); }) == ErrorCode::PreconditionFailed);
  CHECK(klwl_plus(named::cycle(6), two_triangles(), 2, true).distinguished());
  CHECK(klwl_plus(named::cycle(6), named::path(6), 2).distinguished());
  CHECK(klwl_plus(named::cycle(5), apply_permutation(named::cycle(5), VertexPermutation({3, 1, 4, 0, 2})), 2).outcome ==
        Outcome::Inconclusive);

  Graph aux = with_auxiliary_vertex(named::path(3));
  CHECK(aux.n() == 4);
  CHECK(aux.m() == 5);
  CHECK(component_count(with_auxiliary_vertex(two_triangles())) == 1);
}

TEST_CASE("lifted refinement") {
  std::vector<Relation> rel{Relation::Boundary, Relation::Upper};
  CHECK(lifted_refine(clique_complex_lift(named::cycle(6), 3), clique_complex_lift(two_triangles(), 3), rel).distinguished());
  CHECK(lifted_refine(cell_lift(named::cycle(6), 2, 6, 0), cell_lift(two_triangles(), 2, 6, 0), rel).distinguished());
  auto c = cell_lift(named::cycle(6), 2, 6, 0);
  CHECK(lifted_refine(c, relabel(c, VertexPermutation({2, 4, 0, 1, 5, 3})), rel).outcome == Outcome::Inconclusive);
  CHECK(code_of([&] { lifted_refine(c, clique_complex_lift(named::cycle(6), 3), rel); }) == ErrorCode::KindMismatch);
  CHECK(code_of([&] { lifted_refine(c, c, {}); }) == ErrorCode::EmptyRelationSet);
  CHECK(code_of([] { lifted_refine(named::path(3), named::path(3), {Relation::Boundary}); }) == ErrorCode::KindMismatch);
}

TEST_CASE("test names") {
  for (const char* name : {"wl1", "kwl:2", "kfwl:3", "dkwl:2", "klwlp:2", "klwlpa:3", "lifted:cqc", "lifted:cell"})
    CHECK(test_name(parse_test(name)) == name);
  CHECK(code_of([] { parse_test("kwl"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_test("gin"); }) == ErrorCode::ParseError);
  CHECK(run_test(parse_test("lifted:cell"), named::cycle(6), two_triangles()).distinguished());
}

TEST_CASE("battery on the motivating pair") {
  std::vector<std::pair<NamedGraph, NamedGraph>> pairs{{{"C6", named::cycle(6)}, {"2K3", two_triangles()}}};
  std::vector<TestSpec> tests{parse_test("wl1"), parse_test("kfwl:2"), parse_test("lifted:cqc")};
  auto r = battery(pairs, tests);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].verdict.outcome == Outcome::Inconclusive);
  CHECK(r.rows[1].verdict.distinguished());
  CHECK(r.rows[2].verdict.distinguished());
  CHECK(r.contains[1][0]);
  CHECK_FALSE(r.contains[0][1]);
  CHECK(r.tests == std::vector<std::string>{"wl1", "kfwl:2", "lifted:cqc"});
  CHECK(battery({}, tests).rows.empty());
}

TEST_CASE("isomorphic inputs are never distinguished") {
  std::mt19937_64 rng(53);
  std::vector<TestSpec> tests;
  for (const char* name : {"wl1", "kwl:2", "kfwl:2", "dkwl:2", "klwlpa:2", "lifted:cqc", "lifted:cell"})
    tests.push_back(parse_test(name));
  for (int trial = 0; trial < 15; ++trial) {
    Graph g = random_graph(6, 0.45, rng);
    Graph h = apply_permutation(g, shuffled(6, rng));
    for (const auto& t : tests) {
      CHECK_FALSE(run_test(t, g, h).distinguished());
      CHECK(run_test(t, g, h).outcome == run_test(t, h, g).outcome);
    }
  }
}

TEST_CASE("verdicts do not depend on input order") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 15; ++trial) {
    Graph g = random_graph(5, 0.5, rng), h = random_graph(5, 0.5, rng);
    for (const char* name : {"wl1", "kwl:3", "kfwl:2", "dkwl:2", "lifted:cell"}) {
      auto t = parse_test(name);
      CHECK(run_test(t, g, h).outcome == run_test(t, h, g).outcome);
    }
  }
}

TEST_CASE("hierarchy on small graphs") {
  auto c = enumerate_corpus(5, true);
  CHECK(graphs_with(c, 3).size() == 4);
  CHECK(graphs_with(c, 4).size() == 11);
  CHECK(graphs_with(c, 5).size() == 34);
  for (auto [a, b] : corpus_pairs(c)) {
    const bool w1 = wl1(*a, *b).distinguished();
    const bool w2 = kwl(*a, *b, 2).distinguished();
    const bool w3 = kwl(*a, *b, 3).distinguished();
    const bool f2 = kfwl(*a, *b, 2).distinguished();
    CHECK(w1 == w2);
    CHECK(f2 == w3);
    if (w2) CHECK(w3);
    const bool d2 = delta_kwl(*a, *b, 2).distinguished();
    if (w2) CHECK(d2);
    if (component_count(*a) == 1 && component_count(*b) == 1) CHECK(klwl_plus(*a, *b, 2).distinguished() == d2);
    // Non-isomorphic pairs of the corpus all separate at this size under 3-WL.
    CHECK(w3);
  }
}

TEST_CASE("refinement engine") {
  RefinementInstance inst;
  inst.items.resize(1);
  for (int s = 0; s < 2; ++s)
    for (int i = 0; i < 3; ++i) inst.add_entity(s, {0});
  // side 0: path 0-1-2, side 1: path 3-4-5.
  auto link = [&](int u, int v) {
    inst.items[0][static_cast<std::size_t>(u)].push_back({0, {v}});
    inst.items[0][static_cast<std::size_t>(v)].push_back({0, {u}});
  };
  link(0, 1);
  link(1, 2);
  link(3, 4);
  link(4, 5);
  CHECK(refine(inst).outcome == Outcome::Inconclusive);
  auto colors = stable_colors(inst);
  CHECK(colors[0] == colors[2]);
  CHECK(colors[0] != colors[1]);
  CHECK(colors[1] == colors[4]);
}
