#include "hognn/adjacency.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "hognn/budget.hpp"
#include "hognn/error.hpp"

namespace hognn {

char class_letter(EntityClass c) {
  switch (c) {
  case EntityClass::Vertex: return 'v';
  case EntityClass::Hyperedge: return 'e';
  case EntityClass::Cell: return 'c';
  case EntityClass::Tuple: return 't';
  case EntityClass::Subgraph: return 's';
  }
  return '?';
}

std::string to_string(EntityRef e) { return class_letter(e.cls) + std::to_string(e.id); }

int ComplexRelations::index_of(EntityRef e) const {
  auto it = std::lower_bound(entities.begin(), entities.end(), e);
  if (it == entities.end() || *it != e) throw Error(ErrorCode::UnknownEntity, to_string(e));
  return static_cast<int>(it - entities.begin());
}

namespace {

std::vector<int> distinct_targets(const std::vector<ComplexRelations::Via>& v) {
  std::vector<int> out;
  for (const auto& x : v) out.push_back(x.entity);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ComplexRelations assemble(std::vector<EntityRef> entities, std::vector<int> rank, std::vector<std::vector<int>> bnd,
                          const AdjacencyOptions& opt) {
  const std::size_t n = entities.size();
  ComplexRelations r;
  r.entities = std::move(entities);
  r.rank = std::move(rank);
  r.boundary = std::move(bnd);
  r.coboundary.assign(n, {});
  for (std::size_t c = 0; c < n; ++c) {
    std::sort(r.boundary[c].begin(), r.boundary[c].end());
    for (int b : r.boundary[c]) r.coboundary[static_cast<std::size_t>(b)].push_back(static_cast<int>(c));
  }
  r.upper.assign(n, {});
  r.lower.assign(n, {});
  auto keep = [&](int c, int d) {
    if (c == d && !opt.include_self) return false;
    return !opt.same_rank_only || r.rank[static_cast<std::size_t>(c)] == r.rank[static_cast<std::size_t>(d)];
  };
  for (std::size_t t = 0; t < n; ++t) {
    // Entities below τ are pairwise upper-adjacent through τ; entities above
    // τ are pairwise lower-adjacent through it.
    const auto& below = r.boundary[t];
    for (int c : below)
      for (int d : below)
        if (keep(c, d)) r.upper[static_cast<std::size_t>(c)].push_back({d, static_cast<int>(t)});
    const auto& above = r.coboundary[t];
    for (int c : above)
      for (int d : above)
        if (keep(c, d)) r.lower[static_cast<std::size_t>(c)].push_back({d, static_cast<int>(t)});
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::sort(r.upper[c].begin(), r.upper[c].end());
    std::sort(r.lower[c].begin(), r.lower[c].end());
  }
  return r;
}

bool proper_subset(const VertexSet& a, const VertexSet& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<EntityRef> to_refs(const ComplexRelations& r, const std::vector<int>& idx) {
  std::vector<EntityRef> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(r.entities[static_cast<std::size_t>(i)]);
  return out;
}

} // namespace

std::vector<int> ComplexRelations::upper_set(int c) const { return distinct_targets(upper[static_cast<std::size_t>(c)]); }
std::vector<int> ComplexRelations::lower_set(int c) const { return distinct_targets(lower[static_cast<std::size_t>(c)]); }

ComplexRelations relations(const Hypergraph& h, const AdjacencyOptions& opt) {
  std::vector<VertexSet> hat;
  std::vector<EntityRef> refs;
  std::vector<int> rank;
  for (int v = 0; v < h.n; ++v) {
    hat.push_back({v});
    refs.push_back({EntityClass::Vertex, v});
    rank.push_back(0);
  }
  for (std::size_t j = 0; j < h.m(); ++j) {
    hat.push_back(h.hyperedges[j]);
    refs.push_back({EntityClass::Hyperedge, static_cast<int>(j)});
    rank.push_back(static_cast<int>(h.hyperedges[j].size()) - 1);
  }
  std::vector<std::vector<int>> bnd(hat.size());
  for (std::size_t c = static_cast<std::size_t>(h.n); c < hat.size(); ++c)
    for (std::size_t b = 0; b < hat.size(); ++b)
      if (proper_subset(hat[b], hat[c])) bnd[c].push_back(static_cast<int>(b));
  return assemble(std::move(refs), std::move(rank), std::move(bnd), opt);
}

ComplexRelations relations(const CellComplex& cc, const AdjacencyOptions& opt) {
  std::vector<EntityRef> refs;
  std::vector<int> rank;
  std::vector<std::vector<int>> bnd(cc.cells.size());
  for (std::size_t i = 0; i < cc.cells.size(); ++i) {
    refs.push_back({EntityClass::Cell, static_cast<int>(i)});
    rank.push_back(cc.cells[i].dim);
    for (int id : cc.cells[i].boundary) {
      auto j = cc.index_of(id);
      if (!j) throw Error(ErrorCode::UnknownEntity, "cell id " + std::to_string(id));
      bnd[i].push_back(static_cast<int>(*j));
    }
  }
  return assemble(std::move(refs), std::move(rank), std::move(bnd), opt);
}

namespace {

template <class S> std::vector<EntityRef> query_boundary(const S& s, EntityRef c, bool co) {
  auto r = relations(s);
  int i = r.index_of(c);
  return to_refs(r, co ? r.coboundary[static_cast<std::size_t>(i)] : r.boundary[static_cast<std::size_t>(i)]);
}

template <class S> std::vector<EntityRef> query_adjacent(const S& s, EntityRef c, const AdjacencyOptions& opt, bool up) {
  auto r = relations(s, opt);
  int i = r.index_of(c);
  return to_refs(r, up ? r.upper_set(i) : r.lower_set(i));
}

} // namespace

std::vector<EntityRef> boundary(const Hypergraph& h, EntityRef c) { return query_boundary(h, c, false); }
std::vector<EntityRef> coboundary(const Hypergraph& h, EntityRef c) { return query_boundary(h, c, true); }
std::vector<EntityRef> lower_adjacent(const Hypergraph& h, EntityRef c, const AdjacencyOptions& opt) {
  return query_adjacent(h, c, opt, false);
}
std::vector<EntityRef> upper_adjacent(const Hypergraph& h, EntityRef c, const AdjacencyOptions& opt) {
  return query_adjacent(h, c, opt, true);
}
std::vector<EntityRef> boundary(const CellComplex& cc, EntityRef c) { return query_boundary(cc, c, false); }
std::vector<EntityRef> coboundary(const CellComplex& cc, EntityRef c) { return query_boundary(cc, c, true); }
std::vector<EntityRef> lower_adjacent(const CellComplex& cc, EntityRef c, const AdjacencyOptions& opt) {
  return query_adjacent(cc, c, opt, false);
}
std::vector<EntityRef> upper_adjacent(const CellComplex& cc, EntityRef c, const AdjacencyOptions& opt) {
  return query_adjacent(cc, c, opt, true);
}

// ---------------------------------------------------------------------------
// Node tuples

std::vector<Replacement> down_replacements(int n, const Tuple& v, bool inclusive) {
  for (int x : v)
    if (x < 0 || x >= n) throw Error(ErrorCode::UnknownTuple, "tuple entry " + std::to_string(x) + " out of range");
  std::vector<Replacement> out;
  for (std::size_t j = 0; j < v.size(); ++j)
    for (int w = 0; w < n; ++w) {
      if (!inclusive && w == v[j]) continue;
      Tuple u = v;
      u[j] = w;
      out.push_back({static_cast<int>(j), std::move(u)});
    }
  return out;
}

std::vector<Replacement> local_down_replacements(const Graph& base, const Tuple& v) {
  for (int x : v)
    if (x < 0 || x >= base.n()) throw Error(ErrorCode::UnknownTuple, "tuple entry " + std::to_string(x) + " out of range");
  std::vector<Replacement> out;
  for (std::size_t j = 0; j < v.size(); ++j)
    for (int w : base.neighbors(v[j])) {
      Tuple u = v;
      u[j] = w;
      out.push_back({static_cast<int>(j), std::move(u)});
    }
  return out;
}

namespace {

std::vector<Tuple> as_set(std::vector<Replacement> reps) {
  std::vector<Tuple> out;
  for (auto& r : reps) out.push_back(std::move(r.tuple));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_member(const NodeTupleCollection& c, const Tuple& v) {
  if (!c.find(v) && !is_full(c, v.size())) throw Error(ErrorCode::UnknownTuple, "tuple not in collection");
}

std::vector<Tuple> members_only(const NodeTupleCollection& c, std::vector<Tuple> ts) {
  ts.erase(std::remove_if(ts.begin(), ts.end(), [&](const Tuple& t) { return !c.find(t); }), ts.end());
  return ts;
}

} // namespace

std::vector<Tuple> down_adjacency(int n, const Tuple& v, bool inclusive) {
  return as_set(down_replacements(n, v, inclusive));
}

bool is_full(const NodeTupleCollection& c, std::size_t k) {
  if (k == 0) return false;
  std::size_t count = 0;
  for (const auto& t : c.tuples) count += t.size() == k;
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= static_cast<std::size_t>(c.base.n());
  return count == total;
}

std::vector<Tuple> down_adjacency(const NodeTupleCollection& c, const Tuple& v, bool inclusive) {
  require_member(c, v);
  return members_only(c, down_adjacency(c.base.n(), v, inclusive));
}

std::vector<Tuple> local_down_adjacency(const NodeTupleCollection& c, const Tuple& v) {
  require_member(c, v);
  return members_only(c, as_set(local_down_replacements(c.base, v)));
}

// ---------------------------------------------------------------------------
// Matrices

Eigen::MatrixXd incidence_matrix(const Hypergraph& h) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(h.n, static_cast<Eigen::Index>(h.m()));
  for (std::size_t j = 0; j < h.m(); ++j)
    for (int v : h.hyperedges[j]) b(v, static_cast<Eigen::Index>(j)) = 1.0;
  return b;
}

Eigen::MatrixXd boundary_matrix(const SimplicialComplex& s, int p) {
  if (p < 1) throw Error(ErrorCode::EmptyClass, "boundary matrix needs p >= 1");
  auto cols = p_node_sets(s, p);
  auto rows = p_node_sets(s, p - 1);
  if (cols.empty() || rows.empty())
    throw Error(ErrorCode::EmptyClass, "no " + std::to_string(cols.empty() ? p : p - 1) + "-node-sets");
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (proper_subset(rows[i], cols[j])) b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return b;
}

// ---------------------------------------------------------------------------
// Motifs

std::vector<MotifCopy> motif_copies(const Graph& g, const Graph& motif) {
  if (motif.n() > budget::kMotifVertices)
    throw Error(ErrorCode::MotifTooLarge, "motif has " + std::to_string(motif.n()) + " vertices, limit " +
                                              std::to_string(budget::kMotifVertices));
  if (motif.n() == 0) return {};
  if (!is_connected(motif)) throw Error(ErrorCode::PreconditionFailed, "motif must be connected");
  if (g.directed() || motif.directed()) throw Error(ErrorCode::PreconditionFailed, "motif counting needs undirected graphs");

  // BFS order keeps every placed vertex (after the first) attached to an
  // earlier one.
  std::vector<int> order{0};
  std::vector<char> seen(static_cast<std::size_t>(motif.n()), 0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int w : motif.neighbors(order[i]))
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        order.push_back(w);
      }

  std::set<MotifCopy> copies;
  std::vector<int> image(static_cast<std::size_t>(motif.n()), -1);
  std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == order.size()) {
      MotifCopy c;
      c.vertices.assign(image.begin(), image.end());
      std::sort(c.vertices.begin(), c.vertices.end());
      for (const auto& e : motif.edges()) {
        int a = image[static_cast<std::size_t>(e.u)], b = image[static_cast<std::size_t>(e.v)];
        c.edges.push_back({std::min(a, b), std::max(a, b)});
      }
      std::sort(c.edges.begin(), c.edges.end());
      copies.insert(std::move(c));
      return;
    }
    const int m = order[depth];
    for (int x = 0; x < g.n(); ++x) {
      if (used[static_cast<std::size_t>(x)]) continue;
      bool ok = true;
      for (int w : motif.neighbors(m)) {
        int y = image[static_cast<std::size_t>(w)];
        if (y >= 0 && !g.has_edge(x, y)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      image[static_cast<std::size_t>(m)] = x;
      used[static_cast<std::size_t>(x)] = 1;
      rec(depth + 1);
      used[static_cast<std::size_t>(x)] = 0;
      image[static_cast<std::size_t>(m)] = -1;
    }
  };
  rec(0);
  return {copies.begin(), copies.end()};
}

std::vector<std::int64_t> motif_adjacency(const Graph& g, const Graph& motif) {
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<std::int64_t> w(n * n, 0);
  for (const auto& c : motif_copies(g, motif))
    for (const auto& e : c.edges) {
      ++w[static_cast<std::size_t>(e.u) * n + static_cast<std::size_t>(e.v)];
      ++w[static_cast<std::size_t>(e.v) * n + static_cast<std::size_t>(e.u)];
    }
  return w;
}

SubgraphCountGraph subgraph_counts(const Graph& g, const std::vector<Graph>& motifs) {
  SubgraphCountGraph out;
  out.base = g;
  out.motifs = motifs;
  const std::size_t k = motifs.size();
  out.vertex_counts.assign(static_cast<std::size_t>(g.n()) * k, 0);
  out.edge_counts.assign(g.m() * k, 0);
  for (std::size_t j = 0; j < k; ++j)
    for (const auto& c : motif_copies(g, motifs[j])) {
      for (int v : c.vertices) ++out.vertex_counts[static_cast<std::size_t>(v) * k + j];
      for (const auto& e : c.edges) ++out.edge_counts[*g.edge_index(e.u, e.v) * k + j];
    }
  return out;
}

} // namespace hognn
