#pragma once

#include <string>
#include <vector>

#include "hognn/graph.hpp"

namespace hognn {

struct CorpusGraph {
  std::string id; // "n<n>_<index>"
  Graph graph;
};

struct Corpus {
  int n_max = 0;
  bool dedup = false;
  std::vector<CorpusGraph> graphs; // by vertex count, then generation order
};

/// Featureless undirected graphs on 1..n_max vertices, optionally one per
/// isomorphism class. n_max <= 7, else BudgetExceeded.
Corpus enumerate_corpus(int n_max, bool dedup);

/// Graphs of the corpus with exactly n vertices.
std::vector<const CorpusGraph*> graphs_with(const Corpus& c, int n);

} // namespace hognn
