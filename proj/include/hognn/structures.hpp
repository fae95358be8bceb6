#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hognn/graph.hpp"

namespace hognn {

/// Row-major feature block; `data` is empty or holds rows() * width values.
struct FeatureRows {
  std::size_t width = 0;
  std::vector<double> data;

  std::size_t rows() const { return width == 0 ? 0 : data.size() / width; }
  bool empty() const { return data.empty(); }
  std::span<const double> row(std::size_t i) const {
    if (data.empty()) return {};
    return std::span<const double>(data).subspan(i * width, width);
  }
  void append(std::span<const double> r) { data.insert(data.end(), r.begin(), r.end()); }
  bool operator==(const FeatureRows&) const = default;
};

using VertexSet = std::vector<int>;

/// Hyperedges are sorted vertex sets, listed by (size, lexicographic) order.
struct Hypergraph {
  int n = 0;
  std::vector<VertexSet> hyperedges;
  FeatureRows vertex_features;
  FeatureRows hyperedge_features;

  /// Canonicalizes hyperedge order (features follow their hyperedge).
  /// Throws OutOfRange for bad vertices or empty sets, DuplicateEdge for repeats.
  static Hypergraph build(int n, std::vector<VertexSet> hyperedges, FeatureRows vertex_features = {},
                          FeatureRows hyperedge_features = {});

  std::size_t m() const { return hyperedges.size(); }
  std::optional<std::size_t> find(std::span<const int> vertex_set) const;
  std::size_t feature_width() const {
    return vertex_features.width != 0 ? vertex_features.width : hyperedge_features.width;
  }
  bool operator==(const Hypergraph&) const = default;
};

/// Same data as a hypergraph; closure under subsets is checked by validate().
struct SimplicialComplex : Hypergraph {
  static SimplicialComplex from(Hypergraph h) {
    SimplicialComplex s;
    static_cast<Hypergraph&>(s) = std::move(h);
    return s;
  }
  bool operator==(const SimplicialComplex&) const = default;
};

struct Cell {
  int id = 0;
  int dim = 0;
  std::vector<int> boundary; // ids of boundary cells, sorted
  bool operator==(const Cell&) const = default;
};

/// Combinatorial cell complex. Cells are kept in (dim, id) order and the i-th
/// 0-cell in that order stands for vertex i.
struct CellComplex {
  std::vector<Cell> cells;
  FeatureRows features;

  /// Throws UnknownEntity for boundary references to missing ids and
  /// DuplicateEdge for repeated ids.
  static CellComplex build(std::vector<Cell> cells, FeatureRows features = {});

  std::optional<std::size_t> index_of(int id) const;
  int vertex_count() const;
  int max_dim() const;
  /// Vertices (0-cell indices) below cell `index` in the face poset.
  VertexSet vertex_set(std::size_t index) const;
  bool operator==(const CellComplex&) const = default;
};

struct NodeTupleCollection {
  Graph base;
  std::vector<std::vector<int>> tuples; // sorted by (length, lexicographic)
  int k_max = 2;
  FeatureRows tuple_features;

  static NodeTupleCollection build(Graph base, std::vector<std::vector<int>> tuples, int k_max,
                                   FeatureRows tuple_features = {});
  std::optional<std::size_t> find(std::span<const int> tuple) const;
  bool operator==(const NodeTupleCollection&) const = default;
};

struct Subgraph {
  VertexSet vertices;          // sorted base vertex ids
  std::vector<Edge> edges;     // over base ids, min endpoint first; may be virtual
  std::optional<int> anchor;   // centre vertex for per-vertex schemes
  bool operator==(const Subgraph&) const = default;
};

/// Subgraph collection; `ordered` marks a subgraph-tuple collection where the
/// list order is significant.
struct SubgraphCollection {
  Graph base;
  std::vector<Subgraph> subgraphs;
  bool ordered = false;
  FeatureRows subgraph_features;
  bool operator==(const SubgraphCollection&) const = default;
};

/// Per motif an n x n row-major matrix whose {u,v} entry counts motif copies
/// containing edge {u,v}.
struct MotifGraph {
  Graph base;
  std::vector<Graph> motifs;
  std::vector<std::vector<std::int64_t>> weights;
  std::int64_t weight(std::size_t motif, int u, int v) const {
    return weights[motif][static_cast<std::size_t>(u) * static_cast<std::size_t>(base.n()) +
                          static_cast<std::size_t>(v)];
  }
  bool operator==(const MotifGraph&) const = default;
};

/// Row-major count blocks: vertex_counts is n x |motifs|, edge_counts is
/// m x |motifs| or empty.
struct SubgraphCountGraph {
  Graph base;
  std::vector<Graph> motifs;
  std::vector<std::int64_t> vertex_counts;
  std::vector<std::int64_t> edge_counts;
  std::int64_t vertex_count(int v, std::size_t motif) const {
    return vertex_counts[static_cast<std::size_t>(v) * motifs.size() + motif];
  }
  bool operator==(const SubgraphCountGraph&) const = default;
};

struct NestedGraph {
  Graph outer;
  std::vector<Graph> inner; // one per outer vertex
  bool operator==(const NestedGraph&) const = default;
};

using HOStructure = std::variant<Graph, Hypergraph, SimplicialComplex, CellComplex, NodeTupleCollection,
                                 SubgraphCollection, MotifGraph, SubgraphCountGraph, NestedGraph>;

enum class StructureKind { Graph, Hypergraph, SC, CC, NTCol, SCol, Motif, SCnt, Nested };

StructureKind kind_of(const HOStructure& s);
std::string_view kind_name(StructureKind k);
std::optional<StructureKind> parse_kind(std::string_view name);
int vertex_count(const HOStructure& s);

struct Violation {
  std::string entity;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const HOStructure& s);

/// p = 0 gives vertex singletons, otherwise hyperedges with p+1 vertices.
std::vector<VertexSet> p_node_sets(const Hypergraph& h, int p);

int dimension(const SimplicialComplex& s);
int dimension(const CellComplex& c);

/// Plain graph read as a hypergraph with its edges as 2-element hyperedges.
Hypergraph as_hypergraph(const Graph& g);

/// Relabels vertices componentwise, keeping canonical ordering.
HOStructure relabel(const HOStructure& s, const VertexPermutation& p);

/// Exhaustive structure isomorphism for vertex counts <= 8.
bool ho_isomorphic_bruteforce(const HOStructure& a, const HOStructure& b);

} // namespace hognn
