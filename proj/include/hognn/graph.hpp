#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace hognn {

struct Edge {
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Row-major real features. `vertex` holds n rows and `edge` holds m rows,
/// both of width `width`; either block may be empty.
struct Features {
  std::size_t width = 0;
  std::vector<double> vertex;
  std::vector<double> edge;

  bool has_vertex() const { return width > 0 && !vertex.empty(); }
  bool has_edge() const { return width > 0 && !edge.empty(); }
  bool operator==(const Features&) const = default;
};

/// Plain graph over dense vertex ids [0, n). Undirected edges are stored with
/// the smaller endpoint first; the edge list is kept sorted.
class Graph {
public:
  Graph() = default;

  static Graph build(int n, std::vector<Edge> edges, bool directed = false,
                     Features features = {});
  static Graph build(int n, const std::vector<std::pair<int, int>>& edges,
                     bool directed = false, Features features = {});

  int n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  bool directed() const { return directed_; }

  const std::vector<Edge>& edges() const { return edges_; }
  /// Out-neighbours for directed graphs; sorted ascending.
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  bool has_edge(int u, int v) const {
    return matrix_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) +
                   static_cast<std::size_t>(v)] != 0;
  }
  std::optional<std::size_t> edge_index(int u, int v) const;

  const Features& features() const { return features_; }
  std::size_t feature_width() const { return features_.width; }
  std::span<const double> vertex_feature(int v) const;
  std::span<const double> edge_feature(std::size_t e) const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && directed_ == other.directed_ && edges_ == other.edges_ &&
           features_ == other.features_;
  }

private:
  int n_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::uint8_t> matrix_;
  Features features_;
};

/// Bijection on [0, n); vertex v is sent to mapping[v].
class VertexPermutation {
public:
  VertexPermutation() = default;
  explicit VertexPermutation(std::vector<int> mapping);

  static VertexPermutation identity(int n);

  int size() const { return static_cast<int>(mapping_.size()); }
  int operator()(int v) const { return mapping_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& mapping() const { return mapping_; }
  VertexPermutation inverse() const;

private:
  std::vector<int> mapping_;
};

Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges, Features features = {});

Graph apply_permutation(const Graph& g, const VertexPermutation& p);

/// Exhaustive isomorphism search (n <= 10). Features must match exactly.
bool are_isomorphic_bruteforce(const Graph& a, const Graph& b);

/// The isomorphism found by are_isomorphic_bruteforce, if any.
std::optional<VertexPermutation> find_isomorphism_bruteforce(const Graph& a, const Graph& b);

struct UnionResult {
  Graph graph;
  int offset = 0;
};

UnionResult disjoint_union(const Graph& a, const Graph& b);

Graph induced_subgraph(const Graph& g, std::span<const int> vertices);

std::vector<int> connected_components(const Graph& g);
int component_count(const Graph& g);
bool is_connected(const Graph& g);

/// Exhaustive canonical code of a featureless undirected graph (n <= 10):
/// the lexicographically smallest upper-triangle adjacency word over all
/// degree-ordered labelings.
std::uint64_t canonical_code_bruteforce(const Graph& g);

namespace named {
Graph empty(int n);
Graph complete(int n);
Graph cycle(int n);
Graph path(int n);
} // namespace named

} // namespace hognn
