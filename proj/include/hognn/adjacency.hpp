#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hognn/structures.hpp"

namespace hognn {

enum class EntityClass { Vertex, Hyperedge, Cell, Tuple, Subgraph };

/// Reference to one entity of a structure. Hyperedge, cell, tuple and
/// subgraph ids are positions in the structure's canonical order; for cell
/// complexes the first vertex_count() cells are the vertices.
struct EntityRef {
  EntityClass cls = EntityClass::Vertex;
  int id = 0;
  auto operator<=>(const EntityRef&) const = default;
};

std::string to_string(EntityRef e);
char class_letter(EntityClass c);

struct AdjacencyOptions {
  bool include_self = false;   // c itself may appear in its own N↑ / N↓
  bool same_rank_only = false; // N↑ / N↓ keep only entities of c's rank
};

/// All four boundary-derived relations of a hypergraph (vertices first, then
/// hyperedges) or of a cell complex, indexed by entity position.
struct ComplexRelations {
  struct Via {
    int entity; // d
    int via;    // the shared τ / δ
    auto operator<=>(const Via&) const = default;
  };
  std::vector<EntityRef> entities;
  std::vector<int> rank; // |ĉ| - 1 for hypergraphs, dimension for cells
  std::vector<std::vector<int>> boundary;
  std::vector<std::vector<int>> coboundary;
  std::vector<std::vector<Via>> upper; // every (d, δ) with c ≺ δ, d ≺ δ
  std::vector<std::vector<Via>> lower; // every (d, τ) with τ ≺ c, τ ≺ d

  std::size_t size() const { return entities.size(); }
  int index_of(EntityRef e) const;
  /// Distinct d over upper(c) / lower(c).
  std::vector<int> upper_set(int c) const;
  std::vector<int> lower_set(int c) const;
};

ComplexRelations relations(const Hypergraph& h, const AdjacencyOptions& opt = {});
/// Cells relate through their listed (Hasse) boundaries.
ComplexRelations relations(const CellComplex& c, const AdjacencyOptions& opt = {});

std::vector<EntityRef> boundary(const Hypergraph& h, EntityRef c);
std::vector<EntityRef> coboundary(const Hypergraph& h, EntityRef c);
std::vector<EntityRef> lower_adjacent(const Hypergraph& h, EntityRef c, const AdjacencyOptions& opt = {});
std::vector<EntityRef> upper_adjacent(const Hypergraph& h, EntityRef c, const AdjacencyOptions& opt = {});

std::vector<EntityRef> boundary(const CellComplex& cc, EntityRef c);
std::vector<EntityRef> coboundary(const CellComplex& cc, EntityRef c);
std::vector<EntityRef> lower_adjacent(const CellComplex& cc, EntityRef c, const AdjacencyOptions& opt = {});
std::vector<EntityRef> upper_adjacent(const CellComplex& cc, EntityRef c, const AdjacencyOptions& opt = {});

using Tuple = std::vector<int>;

/// One single-coordinate replacement: coordinate j of v replaced to give u.
struct Replacement {
  int coordinate;
  Tuple tuple;
};

/// All replacements (v_1..w..v_k) over w in [0,n); with multiplicity, so the
/// inclusive list has k*n entries, k of them equal to v.
std::vector<Replacement> down_replacements(int n, const Tuple& v, bool inclusive);
std::vector<Replacement> local_down_replacements(const Graph& base, const Tuple& v);

/// Set forms over the full tuple universe V^k.
std::vector<Tuple> down_adjacency(int n, const Tuple& v, bool inclusive);
/// Restricted to tuples present in the collection. Throws UnknownTuple when v
/// is neither in the collection nor the collection full for v's length.
std::vector<Tuple> down_adjacency(const NodeTupleCollection& c, const Tuple& v, bool inclusive);
std::vector<Tuple> local_down_adjacency(const NodeTupleCollection& c, const Tuple& v);

/// True when the collection holds every tuple of V^k.
bool is_full(const NodeTupleCollection& c, std::size_t k);

/// n x m, B(i,j) = 1 iff vertex i lies in hyperedge j.
Eigen::MatrixXd incidence_matrix(const Hypergraph& h);
/// Rows index (p-1)-node-sets, columns p-node-sets; unsigned. Throws EmptyClass.
Eigen::MatrixXd boundary_matrix(const SimplicialComplex& s, int p);

/// Distinct (not necessarily induced) copies of `motif` in `g`, each given as
/// its sorted vertex set and sorted edge list.
struct MotifCopy {
  VertexSet vertices;
  std::vector<Edge> edges;
  auto operator<=>(const MotifCopy&) const = default;
};
std::vector<MotifCopy> motif_copies(const Graph& g, const Graph& motif);

/// n x n counts of copies containing each edge.
std::vector<std::int64_t> motif_adjacency(const Graph& g, const Graph& motif);
SubgraphCountGraph subgraph_counts(const Graph& g, const std::vector<Graph>& motifs);

} // namespace hognn
