#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include "hognn/adjacency.hpp"
#include "hognn/structures.hpp"

namespace hognn {

enum class Scheme { IMP, BAMP, CWN, DAMP, MULTIHOP, SUBGRAPH };

enum class RelationTag {
  IncidenceUp,   // vertex -> hyperedge
  IncidenceDown, // hyperedge -> vertex
  Boundary,
  Coboundary,
  Upper,
  Lower,
  Down,
  LocalDown,
  Hop,
  SubgraphAdj,
  Self,
};

enum class Relation { Boundary, Coboundary, Upper, Lower };

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);
std::string tag_name(RelationTag t, int slot = 0);
std::optional<Relation> parse_relation(std::string_view name);

/// A directed message channel src -> dst. `slot` is the replaced coordinate
/// for down channels and the hop length for hop channels. `weight` carries
/// walk counts for hop channels and is 1 elsewhere.
struct Channel {
  EntityRef src;
  EntityRef dst;
  std::optional<EntityRef> via;
  RelationTag tag = RelationTag::Self;
  int slot = 0;
  double weight = 1.0;

  auto key() const { return std::tie(src, dst, via, tag, slot); }
  bool operator<(const Channel& o) const { return key() < o.key(); }
  bool operator==(const Channel& o) const { return key() == o.key() && weight == o.weight; }
};

struct WiringSet {
  Scheme scheme = Scheme::IMP;
  std::vector<Channel> channels; // sorted by (src, dst, via, tag, slot)
};

WiringSet compile_imp(const Hypergraph& h);

struct BampOptions {
  AdjacencyOptions adjacency;
  std::optional<int> rank; // keep only channels between entities of this rank
};

/// Throws EmptyRelationSet when `use` is empty.
WiringSet compile_bamp(const Hypergraph& s, const std::vector<Relation>& use, const BampOptions& opt = {});
WiringSet compile_bamp(const CellComplex& c, const std::vector<Relation>& use, const BampOptions& opt = {});
WiringSet compile_bamp(const ComplexRelations& r, const std::vector<Relation>& use, const BampOptions& opt = {});

/// Boundary and upper channels only.
WiringSet compile_cwn(const CellComplex& c);

/// One channel per replacement (with multiplicity across coordinates) whose
/// source is in the collection. Throws MixedTupleLengths.
WiringSet compile_damp(const NodeTupleCollection& c, bool local, bool inclusive);

/// Hop-k channels u -> v for u != v with (A^k)_{uv} > 0, weighted by walk count.
WiringSet compile_multihop(const Graph& g, const std::vector<int>& hops);

/// Both directions of every subgraph edge, with via naming the subgraph.
WiringSet compile_subgraph(const SubgraphCollection& s);

std::map<std::string, std::size_t> channel_count(const WiringSet& w);
std::size_t total_channels(const std::map<std::string, std::size_t>& counts);

/// Entity ids referenced by w all lie below the given per-class counts.
bool references_valid(const WiringSet& w, const std::map<EntityClass, int>& sizes);

} // namespace hognn
