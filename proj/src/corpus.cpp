#include "hognn/corpus.hpp"

#include <set>

#include "hognn/budget.hpp"
#include "hognn/error.hpp"

namespace hognn {

namespace {

std::vector<Graph> all_labelled(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) slots.push_back({u, v});
  std::vector<Graph> out;
  const std::uint64_t total = std::uint64_t{1} << slots.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (mask >> i & 1) edges.push_back(slots[i]);
    out.push_back(Graph::build(n, edges));
  }
  return out;
}

/// Representatives on n vertices obtained by attaching a new vertex to every
/// neighbour subset of each (n-1)-vertex representative.
std::vector<Graph> extend(const std::vector<Graph>& smaller, int n) {
  std::vector<Graph> out;
  std::set<std::uint64_t> seen;
  for (const auto& g : smaller)
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
      std::vector<Edge> edges = g.edges();
      for (int u = 0; u < n - 1; ++u)
        if (mask >> u & 1) edges.push_back({u, n - 1});
      Graph h = Graph::build(n, std::move(edges));
      if (seen.insert(canonical_code_bruteforce(h)).second) out.push_back(std::move(h));
    }
  return out;
}

} // namespace

Corpus enumerate_corpus(int n_max, bool dedup) {
  if (n_max > budget::vertex_cap(budget::kCorpusVertices) || n_max < 1)
    throw Error(ErrorCode::BudgetExceeded, "corpus limited to 1 <= n <= " + std::to_string(budget::vertex_cap(budget::kCorpusVertices)));
  if (!dedup && n_max > 7) throw Error(ErrorCode::BudgetExceeded, "labelled corpus limited to n <= 7");
  Corpus c;
  c.n_max = n_max;
  c.dedup = dedup;
  std::vector<Graph> level;
  for (int n = 1; n <= n_max; ++n) {
    level = dedup ? (n == 1 ? std::vector<Graph>{named::empty(1)} : extend(level, n)) : all_labelled(n);
    for (std::size_t i = 0; i < level.size(); ++i) c.graphs.push_back({"n" + std::to_string(n) + "_" + std::to_string(i), level[i]});
  }
  return c;
}

std::vector<const CorpusGraph*> graphs_with(const Corpus& c, int n) {
  std::vector<const CorpusGraph*> out;
  for (const auto& g : c.graphs)
    if (g.graph.n() == n) out.push_back(&g);
  return out;
}

} // namespace hognn
