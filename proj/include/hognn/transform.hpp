#pragma once

#include <cstdint>
#include <vector>

#include "hognn/adjacency.hpp"
#include "hognn/structures.hpp"

namespace hognn {

enum class FeaturePooling { Sum, Mean };

/// Cliques with min_size..max_size vertices, each sorted, listed by (size, lex).
std::vector<VertexSet> enumerate_cliques(const Graph& g, int min_size, int max_size);

/// Simple cycles with 3..max_len vertices, each rotated to start at its
/// smallest vertex and oriented so the second entry is below the last.
std::vector<std::vector<int>> simple_cycles(const Graph& g, int max_len);
bool is_induced_cycle(const Graph& g, const std::vector<int>& cycle);

/// Hyperedge per clique of size 2..k. Higher simplices carry pooled vertex
/// features; 1-simplices take the edge feature when the graph has one.
SimplicialComplex clique_complex_lift(const Graph& g, int k, FeaturePooling pooling = FeaturePooling::Sum);

/// 0-cells are the vertices (ids 0..n-1), 1-cells the edges (ids n..n+m-1
/// in edge order), then one 2-cell per distinct qualifying cycle and higher
/// cells for larger cliques. Throws BoundsInverted when k_cycle > k_ind_cycle.
CellComplex cell_lift(const Graph& g, int k_cl, int k_ind_cycle, int k_cycle,
                      FeaturePooling pooling = FeaturePooling::Sum);

/// The graph spanned by the 0- and 1-cells.
Graph one_skeleton(const CellComplex& c);

/// Equality bits, adjacency bits (pairs i<j in lexicographic order), then
/// the k vertex feature rows.
std::vector<double> iso_type(const Tuple& v, const Graph& g);

/// Every tuple of length 2..k_max (only k_max when `exact`) with its
/// iso-type as feature. Shorter tuples are zero-padded to the widest
/// iso-type.
NodeTupleCollection iso_type_lift(const Graph& g, int k_max, bool exact = false);

/// Ego net of every vertex (anchored at it). Non-induced nets keep only the
/// edges explored by the r-step breadth-first search.
SubgraphCollection ego_net_collection(const Graph& g, int r, bool induced);

struct NodeDeletion {
  enum class Mode { AllSingle, Sampled } mode = Mode::AllSingle;
  int count = 0;             // samples for Sampled
  std::uint64_t seed = 0;
  double drop_probability = 0.0; // <= 0 means 1/n
};
SubgraphCollection node_deleted_collection(const Graph& g, const NodeDeletion& how);

Graph clique_expansion(const Hypergraph& h);
/// Vertices, then one vertex per hyperedge joined to its members. The last
/// feature column flags hyperedge-vertices.
Graph star_expansion(const Hypergraph& h);
/// Same graph as star_expansion without the flag column.
Graph bipartite_lowering(const Hypergraph& h);

struct WeightedGraph {
  Graph graph;
  std::vector<std::int64_t> weights; // per edge of graph, in edge order
};
/// Clique expansion with w_uv = number of hyperedges containing both u and v.
WeightedGraph weighted_lowering(const Hypergraph& h);

MotifGraph motif_lift(const Graph& g, const std::vector<Graph>& motifs);

} // namespace hognn
