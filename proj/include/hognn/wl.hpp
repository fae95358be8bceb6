#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hognn/graph.hpp"
#include "hognn/structures.hpp"
#include "hognn/wiring.hpp"

namespace hognn {

enum class Outcome { Distinguished, Inconclusive };
std::string_view outcome_name(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::Inconclusive;
  int rounds = 0;
  std::int64_t messages = 0;

  bool distinguished() const { return outcome == Outcome::Distinguished; }
};

/// A refinement problem over the disjoint union of two structures. Every
/// entity carries an initial key and, per relation, a multiset of items
/// (label, entity list). The signature of an entity is its colour plus, per
/// relation, the sorted multiset of (label, colours of the item entities).
struct RefinementInstance {
  struct Item {
    std::int64_t label = 0;
    std::vector<int> entities;
  };
  std::vector<int> side; // 0 or 1 per entity
  std::vector<std::vector<double>> initial;
  /// items[r][e]: the items of entity e in relation r.
  std::vector<std::vector<std::vector<Item>>> items;
  /// For relation r with counted[r] = q >= 0, each item's label is replaced by
  /// the number of single-entity items of e in relation q whose colour equals
  /// the item's (first) entity colour.
  std::vector<int> counted;
  /// Relations flagged here only feed counts and stay out of signatures.
  std::vector<char> hidden;

  int add_entity(int side_of, std::vector<double> key);
};

/// Refines until the colour partition stops splitting, or until the two
/// sides' histograms differ. Colours are ranks of sorted signatures, so the
/// outcome does not depend on the order of entities.
Verdict refine(const RefinementInstance& inst);

/// Stable colours of every entity, for inspection.
std::vector<int> stable_colors(const RefinementInstance& inst);

/// Throws FeatureWidthMismatch.
Verdict wl1(const Graph& a, const Graph& b);

/// k in {2, 3} and n <= 8 per graph, else BudgetExceeded.
Verdict kwl(const Graph& a, const Graph& b, int k);
Verdict kfwl(const Graph& a, const Graph& b, int k);
Verdict delta_kwl(const Graph& a, const Graph& b, int k);
/// Throws PreconditionFailed on disconnected input unless `auxiliary`, which
/// adds a flagged vertex joined to every other vertex in both graphs.
Verdict klwl_plus(const Graph& a, const Graph& b, int k, bool auxiliary = false);
Graph with_auxiliary_vertex(const Graph& g);

/// Refinement over boundary relations of two simplicial/cell complexes (or
/// hypergraphs). Throws KindMismatch for other kinds or mixed kinds.
Verdict lifted_refine(const HOStructure& a, const HOStructure& b, const std::vector<Relation>& use);

enum class TestKind { Wl1, Kwl, Kfwl, DeltaKwl, KlwlPlus, KlwlPlusAux, LiftedCqc, LiftedCell };

struct TestSpec {
  TestKind kind = TestKind::Wl1;
  int k = 1;
};

/// "wl1", "kwl:K", "kfwl:K", "dkwl:K", "klwlp:K", "klwlpa:K", "lifted:cqc",
/// "lifted:cell". Throws ParseError.
TestSpec parse_test(std::string_view s);
std::string test_name(const TestSpec& t);

/// Graph pair verdict for any test. Lifted tests use the clique complex with
/// every clique, or the cell lift with every induced cycle.
Verdict run_test(const TestSpec& t, const Graph& a, const Graph& b);

struct NamedGraph {
  std::string name;
  Graph graph;
};

struct BatteryRow {
  std::string test;
  std::string a;
  std::string b;
  Verdict verdict;
};

struct BatteryReport {
  std::vector<BatteryRow> rows;
  /// contains[i][j]: test i distinguishes every pair test j distinguishes.
  std::vector<std::vector<bool>> contains;
  std::vector<std::string> tests;
};

BatteryReport battery(const std::vector<std::pair<NamedGraph, NamedGraph>>& pairs, const std::vector<TestSpec>& tests);

} // namespace hognn
