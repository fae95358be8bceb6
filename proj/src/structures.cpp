#include "hognn/structures.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "hognn/budget.hpp"
#include "hognn/error.hpp"

namespace hognn {

namespace {

bool set_less(const VertexSet& a, const VertexSet& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

std::string set_str(std::span<const int> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

/// Stable permutation that sorts `items` by `less`.
template <class T, class Less>
std::vector<std::size_t> sorting_order(const std::vector<T>& items, Less less) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return less(items[a], items[b]); });
  return order;
}

FeatureRows reorder_rows(const FeatureRows& rows, const std::vector<std::size_t>& order) {
  if (rows.empty()) return rows;
  FeatureRows out;
  out.width = rows.width;
  out.data.reserve(rows.data.size());
  for (auto i : order) out.append(rows.row(i));
  return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Construction

Hypergraph Hypergraph::build(int n, std::vector<VertexSet> hyperedges, FeatureRows vertex_features,
                             FeatureRows hyperedge_features) {
  if (n < 0) throw Error(ErrorCode::OutOfRange, "negative vertex count");
  for (auto& e : hyperedges) {
    if (e.empty()) throw Error(ErrorCode::OutOfRange, "empty hyperedge");
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      throw Error(ErrorCode::DuplicateEdge, "repeated vertex in hyperedge " + set_str(e));
    if (e.front() < 0 || e.back() >= n)
      throw Error(ErrorCode::OutOfRange, "hyperedge " + set_str(e) + " outside [0," + std::to_string(n) + ")");
  }
  if (!vertex_features.empty() && vertex_features.rows() != static_cast<std::size_t>(n))
    throw Error(ErrorCode::FeatureWidthMismatch, "vertex feature rows != n");
  if (!hyperedge_features.empty() && hyperedge_features.rows() != hyperedges.size())
    throw Error(ErrorCode::FeatureWidthMismatch, "hyperedge feature rows != m");
  if (!vertex_features.empty() && !hyperedge_features.empty() && vertex_features.width != hyperedge_features.width)
    throw Error(ErrorCode::FeatureWidthMismatch, "vertex and hyperedge feature widths differ");

  auto order = sorting_order(hyperedges, set_less);
  Hypergraph h;
  h.n = n;
  h.hyperedges.reserve(hyperedges.size());
  for (auto i : order) h.hyperedges.push_back(std::move(hyperedges[i]));
  for (std::size_t i = 1; i < h.hyperedges.size(); ++i)
    if (h.hyperedges[i] == h.hyperedges[i - 1])
      throw Error(ErrorCode::DuplicateEdge, "hyperedge " + set_str(h.hyperedges[i]) + " given twice");
  h.vertex_features = std::move(vertex_features);
  h.hyperedge_features = reorder_rows(hyperedge_features, order);
  return h;
}

std::optional<std::size_t> Hypergraph::find(std::span<const int> vertex_set) const {
  VertexSet key(vertex_set.begin(), vertex_set.end());
  std::sort(key.begin(), key.end());
  auto it = std::lower_bound(hyperedges.begin(), hyperedges.end(), key, set_less);
  if (it == hyperedges.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - hyperedges.begin());
}

CellComplex CellComplex::build(std::vector<Cell> cells, FeatureRows features) {
  if (!features.empty() && features.rows() != cells.size())
    throw Error(ErrorCode::FeatureWidthMismatch, "cell feature rows != cell count");
  std::set<int> ids;
  for (auto& c : cells) {
    if (!ids.insert(c.id).second) throw Error(ErrorCode::DuplicateEdge, "cell id " + std::to_string(c.id) + " repeated");
    if (c.dim < 0) throw Error(ErrorCode::OutOfRange, "negative cell dimension");
    std::sort(c.boundary.begin(), c.boundary.end());
  }
  for (const auto& c : cells)
    for (int b : c.boundary)
      if (!ids.count(b))
        throw Error(ErrorCode::UnknownEntity, "cell " + std::to_string(c.id) + " bounded by missing cell " +
                                                  std::to_string(b));
  auto order = sorting_order(cells, [](const Cell& a, const Cell& b) {
    return a.dim != b.dim ? a.dim < b.dim : a.id < b.id;
  });
  CellComplex cc;
  cc.cells.reserve(cells.size());
  for (auto i : order) cc.cells.push_back(std::move(cells[i]));
  cc.features = reorder_rows(features, order);
  return cc;
}

std::optional<std::size_t> CellComplex::index_of(int id) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].id == id) return i;
  return std::nullopt;
}

int CellComplex::vertex_count() const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const Cell& c) { return c.dim == 0; }));
}

int CellComplex::max_dim() const {
  int d = -1;
  for (const auto& c : cells) d = std::max(d, c.dim);
  return d;
}

VertexSet CellComplex::vertex_set(std::size_t index) const {
  std::map<int, std::size_t> by_id;
  for (std::size_t i = 0; i < cells.size(); ++i) by_id[cells[i].id] = i;
  std::set<int> out;
  std::vector<std::size_t> stack{index};
  std::set<std::size_t> seen;
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    if (!seen.insert(i).second) continue;
    if (cells[i].dim == 0) {
      out.insert(static_cast<int>(i));
      continue;
    }
    for (int b : cells[i].boundary) stack.push_back(by_id.at(b));
  }
  return {out.begin(), out.end()};
}

NodeTupleCollection NodeTupleCollection::build(Graph base, std::vector<std::vector<int>> tuples, int k_max,
                                               FeatureRows tuple_features) {
  for (const auto& t : tuples)
    for (int v : t)
      if (v < 0 || v >= base.n()) throw Error(ErrorCode::OutOfRange, "tuple entry " + std::to_string(v));
  if (!tuple_features.empty() && tuple_features.rows() != tuples.size())
    throw Error(ErrorCode::FeatureWidthMismatch, "tuple feature rows != tuple count");
  auto order = sorting_order(tuples, set_less);
  NodeTupleCollection c;
  c.base = std::move(base);
  c.k_max = k_max;
  c.tuples.reserve(tuples.size());
  for (auto i : order) c.tuples.push_back(std::move(tuples[i]));
  for (std::size_t i = 1; i < c.tuples.size(); ++i)
    if (c.tuples[i] == c.tuples[i - 1]) throw Error(ErrorCode::DuplicateEdge, "tuple repeated");
  c.tuple_features = reorder_rows(tuple_features, order);
  return c;
}

std::optional<std::size_t> NodeTupleCollection::find(std::span<const int> tuple) const {
  std::vector<int> key(tuple.begin(), tuple.end());
  auto it = std::lower_bound(tuples.begin(), tuples.end(), key, set_less);
  if (it == tuples.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - tuples.begin());
}

// ---------------------------------------------------------------------------
// Kinds

StructureKind kind_of(const HOStructure& s) { return static_cast<StructureKind>(s.index()); }

std::string_view kind_name(StructureKind k) {
  switch (k) {
  case StructureKind::Graph: return "graph";
  case StructureKind::Hypergraph: return "hypergraph";
  case StructureKind::SC: return "sc";
  case StructureKind::CC: return "cc";
  case StructureKind::NTCol: return "ntcol";
  case StructureKind::SCol: return "scol";
  case StructureKind::Motif: return "motif";
  case StructureKind::SCnt: return "scnt";
  case StructureKind::Nested: return "nested";
  }
  return "?";
}

std::optional<StructureKind> parse_kind(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(StructureKind::Nested); ++i)
    if (kind_name(static_cast<StructureKind>(i)) == name) return static_cast<StructureKind>(i);
  return std::nullopt;
}

int vertex_count(const HOStructure& s) {
  struct V {
    int operator()(const Graph& g) const { return g.n(); }
    int operator()(const Hypergraph& h) const { return h.n; }
    int operator()(const SimplicialComplex& h) const { return h.n; }
    int operator()(const CellComplex& c) const { return c.vertex_count(); }
    int operator()(const NodeTupleCollection& c) const { return c.base.n(); }
    int operator()(const SubgraphCollection& c) const { return c.base.n(); }
    int operator()(const MotifGraph& c) const { return c.base.n(); }
    int operator()(const SubgraphCountGraph& c) const { return c.base.n(); }
    int operator()(const NestedGraph& c) const { return c.outer.n(); }
  };
  return std::visit(V{}, s);
}

Hypergraph as_hypergraph(const Graph& g) {
  std::vector<VertexSet> e;
  e.reserve(g.m());
  for (const auto& x : g.edges()) e.push_back({x.u, x.v});
  FeatureRows vf, ef;
  if (g.features().has_vertex()) vf = {g.feature_width(), g.features().vertex};
  if (g.features().has_edge()) ef = {g.feature_width(), g.features().edge};
  return Hypergraph::build(g.n(), std::move(e), std::move(vf), std::move(ef));
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void check_hypergraph(const Hypergraph& h, ValidationReport& r) {
  std::set<VertexSet> seen;
  for (std::size_t i = 0; i < h.hyperedges.size(); ++i) {
    const auto& e = h.hyperedges[i];
    const std::string name = "hyperedge " + set_str(e);
    if (e.empty()) r.violations.push_back({"hyperedge #" + std::to_string(i), "empty hyperedge"});
    for (int v : e)
      if (v < 0 || v >= h.n) r.violations.push_back({name, "vertex " + std::to_string(v) + " out of range"});
    VertexSet s = e;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) r.violations.push_back({name, "repeated vertex"});
    if (!seen.insert(s).second) r.violations.push_back({name, "duplicate hyperedge"});
  }
  if (!h.vertex_features.empty() && h.vertex_features.rows() != static_cast<std::size_t>(h.n))
    r.violations.push_back({"features", "vertex feature rows != n"});
  if (!h.hyperedge_features.empty() && h.hyperedge_features.rows() != h.m())
    r.violations.push_back({"features", "hyperedge feature rows != m"});
  if (!h.vertex_features.empty() && !h.hyperedge_features.empty() &&
      h.vertex_features.width != h.hyperedge_features.width)
    r.violations.push_back({"features", "feature widths differ"});
}

void check_simplicial(const SimplicialComplex& s, ValidationReport& r) {
  check_hypergraph(s, r);
  std::set<VertexSet> present;
  for (const auto& e : s.hyperedges) {
    VertexSet x = e;
    std::sort(x.begin(), x.end());
    present.insert(x);
  }
  for (const auto& e : present) {
    if (e.size() == 1) {
      r.violations.push_back({"hyperedge " + set_str(e), "singleton hyperedge; vertices play that role"});
      continue;
    }
    if (e.size() > 20) {
      r.violations.push_back({"hyperedge " + set_str(e), "too large to check closure"});
      continue;
    }
    const std::uint32_t full = (1u << e.size()) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      if (std::popcount(mask) < 2) continue;
      VertexSet sub;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (mask & (1u << i)) sub.push_back(e[i]);
      if (!present.count(sub))
        r.violations.push_back({"hyperedge " + set_str(e), "missing subset " + set_str(sub)});
    }
  }
}

void check_cells(const CellComplex& c, ValidationReport& r) {
  std::map<int, const Cell*> by_id;
  for (const auto& cell : c.cells)
    if (!by_id.emplace(cell.id, &cell).second)
      r.violations.push_back({"cell " + std::to_string(cell.id), "duplicate id"});
  for (const auto& cell : c.cells) {
    const std::string name = "cell " + std::to_string(cell.id);
    if (cell.dim < 0) r.violations.push_back({name, "negative dimension"});
    if (cell.dim == 0 && !cell.boundary.empty()) r.violations.push_back({name, "0-cell with non-empty boundary"});
    bool refs_ok = true;
    for (int b : cell.boundary) {
      auto it = by_id.find(b);
      if (it == by_id.end()) {
        r.violations.push_back({name, "boundary references missing cell " + std::to_string(b)});
        refs_ok = false;
      } else if (it->second->dim != cell.dim - 1) {
        r.violations.push_back({name, "boundary cell " + std::to_string(b) + " has dimension " +
                                          std::to_string(it->second->dim)});
        refs_ok = false;
      }
    }
    if (!refs_ok) continue;
    if (cell.dim == 1) {
      std::set<int> ends(cell.boundary.begin(), cell.boundary.end());
      if (cell.boundary.size() != 2 || ends.size() != 2)
        r.violations.push_back({name, "1-cell boundary must be two distinct 0-cells"});
    } else if (cell.dim == 2) {
      // Boundary edges must form one closed cycle: every touched vertex has
      // degree two and the edges are connected.
      std::map<int, std::vector<int>> incident;
      bool edges_ok = true;
      for (int b : cell.boundary) {
        const Cell* e = by_id[b];
        if (e->boundary.size() != 2) {
          edges_ok = false;
          break;
        }
        incident[e->boundary[0]].push_back(b);
        incident[e->boundary[1]].push_back(b);
      }
      bool cycle = edges_ok && !cell.boundary.empty();
      for (const auto& [v, es] : incident) cycle = cycle && es.size() == 2;
      if (cycle) {
        std::set<int> reached;
        std::vector<int> stack{cell.boundary.front()};
        while (!stack.empty()) {
          int e = stack.back();
          stack.pop_back();
          if (!reached.insert(e).second) continue;
          for (int v : by_id[e]->boundary)
            for (int f : incident[v]) stack.push_back(f);
        }
        cycle = reached.size() == cell.boundary.size();
      }
      if (!cycle) r.violations.push_back({name, "boundary edges do not form a single closed cycle"});
    }
  }
  if (!c.features.empty() && c.features.rows() != c.cells.size())
    r.violations.push_back({"features", "cell feature rows != cell count"});
}

void check_tuples(const NodeTupleCollection& c, ValidationReport& r) {
  std::set<std::vector<int>> seen;
  for (const auto& t : c.tuples) {
    const std::string name = "tuple " + set_str(t);
    if (static_cast<int>(t.size()) < 2 || static_cast<int>(t.size()) > c.k_max)
      r.violations.push_back({name, "length outside [2," + std::to_string(c.k_max) + "]"});
    for (int v : t)
      if (v < 0 || v >= c.base.n()) r.violations.push_back({name, "entry " + std::to_string(v) + " out of range"});
    if (!seen.insert(t).second) r.violations.push_back({name, "duplicate tuple"});
  }
  if (!c.tuple_features.empty() && c.tuple_features.rows() != c.tuples.size())
    r.violations.push_back({"features", "tuple feature rows != tuple count"});
}

void check_subgraphs(const SubgraphCollection& c, ValidationReport& r) {
  for (std::size_t i = 0; i < c.subgraphs.size(); ++i) {
    const auto& s = c.subgraphs[i];
    const std::string name = "subgraph #" + std::to_string(i);
    std::set<int> vs(s.vertices.begin(), s.vertices.end());
    for (int v : s.vertices)
      if (v < 0 || v >= c.base.n()) r.violations.push_back({name, "vertex " + std::to_string(v) + " not in base"});
    for (const auto& e : s.edges)
      if (!vs.count(e.u) || !vs.count(e.v))
        r.violations.push_back({name, "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                          ") leaves the subgraph"});
    if (s.anchor && !vs.count(*s.anchor)) r.violations.push_back({name, "anchor outside subgraph"});
  }
  if (!c.subgraph_features.empty() && c.subgraph_features.rows() != c.subgraphs.size())
    r.violations.push_back({"features", "subgraph feature rows != subgraph count"});
}

void check_motif(const MotifGraph& g, ValidationReport& r) {
  const auto n = static_cast<std::size_t>(g.base.n());
  if (g.weights.size() != g.motifs.size()) r.violations.push_back({"weights", "one matrix per motif required"});
  for (std::size_t k = 0; k < g.weights.size(); ++k) {
    const std::string name = "motif #" + std::to_string(k);
    if (g.weights[k].size() != n * n) {
      r.violations.push_back({name, "weight matrix is not n x n"});
      continue;
    }
    for (int u = 0; u < g.base.n(); ++u)
      for (int v = 0; v < g.base.n(); ++v) {
        auto w = g.weight(k, u, v);
        if (w < 0) r.violations.push_back({name, "negative weight"});
        if (w != g.weight(k, v, u)) r.violations.push_back({name, "asymmetric weight"});
        if (w != 0 && !g.base.has_edge(u, v))
          r.violations.push_back({name, "weight on non-edge (" + std::to_string(u) + "," + std::to_string(v) + ")"});
      }
  }
}

void check_counts(const SubgraphCountGraph& g, ValidationReport& r) {
  if (g.vertex_counts.size() != static_cast<std::size_t>(g.base.n()) * g.motifs.size())
    r.violations.push_back({"counts", "vertex count block is not n x motifs"});
  if (!g.edge_counts.empty() && g.edge_counts.size() != g.base.m() * g.motifs.size())
    r.violations.push_back({"counts", "edge count block is not m x motifs"});
  for (auto c : g.vertex_counts)
    if (c < 0) r.violations.push_back({"counts", "negative vertex count"});
  for (auto c : g.edge_counts)
    if (c < 0) r.violations.push_back({"counts", "negative edge count"});
}

} // namespace

ValidationReport validate(const HOStructure& s) {
  ValidationReport r;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Hypergraph>) check_hypergraph(x, r);
        else if constexpr (std::is_same_v<T, SimplicialComplex>) check_simplicial(x, r);
        else if constexpr (std::is_same_v<T, CellComplex>) check_cells(x, r);
        else if constexpr (std::is_same_v<T, NodeTupleCollection>) check_tuples(x, r);
        else if constexpr (std::is_same_v<T, SubgraphCollection>) check_subgraphs(x, r);
        else if constexpr (std::is_same_v<T, MotifGraph>) check_motif(x, r);
        else if constexpr (std::is_same_v<T, SubgraphCountGraph>) check_counts(x, r);
        else if constexpr (std::is_same_v<T, NestedGraph>) {
          if (x.inner.size() != static_cast<std::size_t>(x.outer.n()))
            r.violations.push_back({"inner", "one inner graph per outer vertex required"});
        }
      },
      s);
  return r;
}

std::vector<VertexSet> p_node_sets(const Hypergraph& h, int p) {
  std::vector<VertexSet> out;
  if (p < 0) return out;
  if (p == 0) {
    for (int v = 0; v < h.n; ++v) out.push_back({v});
    return out;
  }
  for (const auto& e : h.hyperedges)
    if (static_cast<int>(e.size()) == p + 1) out.push_back(e);
  return out;
}

int dimension(const SimplicialComplex& s) {
  if (s.n == 0 && s.hyperedges.empty()) throw Error(ErrorCode::EmptyStructure, "empty simplicial complex");
  int d = 0;
  for (const auto& e : s.hyperedges) d = std::max(d, static_cast<int>(e.size()) - 1);
  return d;
}

int dimension(const CellComplex& c) {
  if (c.cells.empty()) throw Error(ErrorCode::EmptyStructure, "empty cell complex");
  return c.max_dim();
}

// ---------------------------------------------------------------------------
// Relabeling

namespace {

Hypergraph relabel_hypergraph(const Hypergraph& h, const VertexPermutation& p) {
  std::vector<VertexSet> e;
  e.reserve(h.m());
  for (const auto& x : h.hyperedges) {
    VertexSet y;
    for (int v : x) y.push_back(p(v));
    e.push_back(std::move(y));
  }
  FeatureRows vf = h.vertex_features;
  if (!vf.empty())
    for (int v = 0; v < h.n; ++v) {
      auto src = h.vertex_features.row(static_cast<std::size_t>(v));
      std::copy(src.begin(), src.end(), vf.data.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(p(v)) * vf.width));
    }
  return Hypergraph::build(h.n, std::move(e), std::move(vf), h.hyperedge_features);
}

Edge map_edge(const Edge& e, const VertexPermutation& p) {
  int a = p(e.u), b = p(e.v);
  if (a > b) std::swap(a, b);
  return {a, b};
}

std::vector<std::int64_t> permute_square(const std::vector<std::int64_t>& w, int n, const VertexPermutation& p) {
  std::vector<std::int64_t> out(w.size(), 0);
  const auto N = static_cast<std::size_t>(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      out[static_cast<std::size_t>(p(u)) * N + static_cast<std::size_t>(p(v))] =
          w[static_cast<std::size_t>(u) * N + static_cast<std::size_t>(v)];
  return out;
}

} // namespace

HOStructure relabel(const HOStructure& s, const VertexPermutation& p) {
  if (p.size() != vertex_count(s)) throw Error(ErrorCode::SizeMismatch, "permutation size != vertex count");
  return std::visit(
      [&](const auto& x) -> HOStructure {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Graph>) {
          return apply_permutation(x, p);
        } else if constexpr (std::is_same_v<T, Hypergraph>) {
          return relabel_hypergraph(x, p);
        } else if constexpr (std::is_same_v<T, SimplicialComplex>) {
          return SimplicialComplex::from(relabel_hypergraph(x, p));
        } else if constexpr (std::is_same_v<T, CellComplex>) {
          std::vector<int> ids0;
          for (const auto& c : x.cells)
            if (c.dim == 0) ids0.push_back(c.id);
          std::map<int, int> rename;
          for (std::size_t i = 0; i < ids0.size(); ++i)
            rename[ids0[i]] = ids0[static_cast<std::size_t>(p(static_cast<int>(i)))];
          std::vector<Cell> cells = x.cells;
          for (auto& c : cells) {
            if (c.dim == 0) c.id = rename.at(c.id);
            if (c.dim == 1)
              for (auto& b : c.boundary) b = rename.at(b);
          }
          return CellComplex::build(std::move(cells), x.features);
        } else if constexpr (std::is_same_v<T, NodeTupleCollection>) {
          auto tuples = x.tuples;
          for (auto& t : tuples)
            for (auto& v : t) v = p(v);
          return NodeTupleCollection::build(apply_permutation(x.base, p), std::move(tuples), x.k_max, x.tuple_features);
        } else if constexpr (std::is_same_v<T, SubgraphCollection>) {
          SubgraphCollection out = x;
          out.base = apply_permutation(x.base, p);
          for (auto& sg : out.subgraphs) {
            for (auto& v : sg.vertices) v = p(v);
            std::sort(sg.vertices.begin(), sg.vertices.end());
            for (auto& e : sg.edges) e = map_edge(e, p);
            std::sort(sg.edges.begin(), sg.edges.end());
            if (sg.anchor) sg.anchor = p(*sg.anchor);
          }
          return out;
        } else if constexpr (std::is_same_v<T, MotifGraph>) {
          MotifGraph out = x;
          out.base = apply_permutation(x.base, p);
          for (auto& w : out.weights) w = permute_square(w, x.base.n(), p);
          return out;
        } else if constexpr (std::is_same_v<T, SubgraphCountGraph>) {
          SubgraphCountGraph out = x;
          out.base = apply_permutation(x.base, p);
          const std::size_t k = x.motifs.size();
          for (int v = 0; v < x.base.n(); ++v)
            for (std::size_t j = 0; j < k; ++j)
              out.vertex_counts[static_cast<std::size_t>(p(v)) * k + j] = x.vertex_counts[static_cast<std::size_t>(v) * k + j];
          if (!x.edge_counts.empty())
            for (std::size_t e = 0; e < x.base.m(); ++e) {
              auto me = map_edge(x.base.edges()[e], p);
              auto idx = *out.base.edge_index(me.u, me.v);
              for (std::size_t j = 0; j < k; ++j) out.edge_counts[idx * k + j] = x.edge_counts[e * k + j];
            }
          return out;
        } else {
          NestedGraph out = x;
          out.outer = apply_permutation(x.outer, p);
          for (int v = 0; v < x.outer.n(); ++v)
            out.inner[static_cast<std::size_t>(p(v))] = x.inner[static_cast<std::size_t>(v)];
          return out;
        }
      },
      s);
}

// ---------------------------------------------------------------------------
// Structure isomorphism

namespace {

using Invariant = std::vector<double>;

/// Backtracking over vertex bijections a -> b. `pair_ok(u, mu, v, w)` checks
/// a pairwise relation between the already placed u and the candidate v.
bool search_bijection(int n, const std::vector<Invariant>& inv_a, const std::vector<Invariant>& inv_b,
                      const std::function<bool(int, int, int, int)>& pair_ok,
                      const std::function<bool(const std::vector<int>&)>& accept) {
  {
    auto sa = inv_a, sb = inv_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<bool(int)> rec = [&](int v) -> bool {
    if (v == n) return accept(map);
    for (int w = 0; w < n; ++w) {
      if (used[static_cast<std::size_t>(w)] || inv_a[static_cast<std::size_t>(v)] != inv_b[static_cast<std::size_t>(w)])
        continue;
      bool ok = true;
      if (pair_ok)
        for (int u = 0; u < v && ok; ++u) ok = pair_ok(u, map[static_cast<std::size_t>(u)], v, w);
      if (!ok) continue;
      map[static_cast<std::size_t>(v)] = w;
      used[static_cast<std::size_t>(w)] = 1;
      if (rec(v + 1)) return true;
      used[static_cast<std::size_t>(w)] = 0;
      map[static_cast<std::size_t>(v)] = -1;
    }
    return false;
  };
  return rec(0);
}

Invariant row_of(const FeatureRows& f, std::size_t i) {
  auto r = f.row(i);
  return {r.begin(), r.end()};
}

Invariant graph_vertex_invariant(const Graph& g, int v) {
  Invariant x{static_cast<double>(g.degree(v))};
  auto r = g.vertex_feature(v);
  x.insert(x.end(), r.begin(), r.end());
  return x;
}

std::vector<Invariant> graph_invariants(const Graph& g) {
  std::vector<Invariant> out;
  for (int v = 0; v < g.n(); ++v) out.push_back(graph_vertex_invariant(g, v));
  return out;
}

bool graphs_compatible(const Graph& a, const Graph& b) {
  return a.n() == b.n() && a.m() == b.m() && a.directed() == b.directed() &&
         a.feature_width() == b.feature_width() && a.features().has_edge() == b.features().has_edge();
}

auto base_pair_ok(const Graph& a, const Graph& b) {
  return [&a, &b](int u, int mu, int v, int w) {
    return a.has_edge(u, v) == b.has_edge(mu, w) && a.has_edge(v, u) == b.has_edge(w, mu);
  };
}

bool base_edge_features_ok(const Graph& a, const Graph& b, const std::vector<int>& map) {
  if (!a.features().has_edge()) return true;
  for (std::size_t i = 0; i < a.m(); ++i) {
    const auto& e = a.edges()[i];
    auto j = b.edge_index(map[static_cast<std::size_t>(e.u)], map[static_cast<std::size_t>(e.v)]);
    if (!j) return false;
    auto x = a.edge_feature(i), y = b.edge_feature(*j);
    if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) return false;
  }
  return true;
}

bool iso_hypergraph(const Hypergraph& a, const Hypergraph& b) {
  if (a.n != b.n || a.m() != b.m() || a.vertex_features.width != b.vertex_features.width ||
      a.hyperedge_features.empty() != b.hyperedge_features.empty() ||
      a.vertex_features.empty() != b.vertex_features.empty())
    return false;
  const int n = a.n;
  auto invariants = [n](const Hypergraph& h) {
    std::vector<Invariant> inv(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> sizes(static_cast<std::size_t>(n));
    for (const auto& e : h.hyperedges)
      for (int v : e) sizes[static_cast<std::size_t>(v)].push_back(static_cast<double>(e.size()));
    for (int v = 0; v < n; ++v) {
      auto& s = sizes[static_cast<std::size_t>(v)];
      std::sort(s.begin(), s.end());
      inv[static_cast<std::size_t>(v)] = row_of(h.vertex_features, static_cast<std::size_t>(v));
      inv[static_cast<std::size_t>(v)].push_back(-1.0);
      inv[static_cast<std::size_t>(v)].insert(inv[static_cast<std::size_t>(v)].end(), s.begin(), s.end());
    }
    return inv;
  };
  auto co = [n](const Hypergraph& h) {
    std::vector<int> c(static_cast<std::size_t>(n * n), 0);
    for (const auto& e : h.hyperedges)
      for (int u : e)
        for (int v : e) ++c[static_cast<std::size_t>(u * n + v)];
    return c;
  };
  const auto ca = co(a), cb = co(b);
  auto pair_ok = [&](int u, int mu, int v, int w) {
    return ca[static_cast<std::size_t>(u * n + v)] == cb[static_cast<std::size_t>(mu * n + w)];
  };
  auto accept = [&](const std::vector<int>& map) {
    for (std::size_t i = 0; i < a.m(); ++i) {
      VertexSet y;
      for (int v : a.hyperedges[i]) y.push_back(map[static_cast<std::size_t>(v)]);
      std::sort(y.begin(), y.end());
      auto j = b.find(y);
      if (!j) return false;
      if (!a.hyperedge_features.empty() && a.hyperedge_features.row(i).size() == b.hyperedge_features.row(*j).size() &&
          !std::equal(a.hyperedge_features.row(i).begin(), a.hyperedge_features.row(i).end(),
                      b.hyperedge_features.row(*j).begin()))
        return false;
    }
    return true;
  };
  return search_bijection(n, invariants(a), invariants(b), pair_ok, accept);
}

bool iso_cells(const CellComplex& a, const CellComplex& b) {
  if (a.cells.size() != b.cells.size() || a.vertex_count() != b.vertex_count() ||
      a.features.empty() != b.features.empty() || a.features.width != b.features.width)
    return false;
  {
    std::vector<int> da, db;
    for (const auto& c : a.cells) da.push_back(c.dim);
    for (const auto& c : b.cells) db.push_back(c.dim);
    if (da != db) return false;
  }
  const int n = a.vertex_count();
  auto invariants = [n](const CellComplex& c) {
    std::vector<Invariant> inv(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) inv[static_cast<std::size_t>(v)] = row_of(c.features, static_cast<std::size_t>(v));
    const int top = c.max_dim();
    std::vector<std::vector<double>> per(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(top + 1), 0.0));
    for (std::size_t i = 0; i < c.cells.size(); ++i)
      for (int v : c.vertex_set(i)) per[static_cast<std::size_t>(v)][static_cast<std::size_t>(c.cells[i].dim)] += 1.0;
    for (int v = 0; v < n; ++v) {
      inv[static_cast<std::size_t>(v)].push_back(-1.0);
      inv[static_cast<std::size_t>(v)].insert(inv[static_cast<std::size_t>(v)].end(), per[static_cast<std::size_t>(v)].begin(),
                                              per[static_cast<std::size_t>(v)].end());
    }
    return inv;
  };
  std::map<int, std::size_t> index_a, index_b;
  for (std::size_t i = 0; i < a.cells.size(); ++i) index_a[a.cells[i].id] = i;
  for (std::size_t i = 0; i < b.cells.size(); ++i) index_b[b.cells[i].id] = i;
  auto skeleton = [n](const CellComplex& c, const std::map<int, std::size_t>& idx) {
    std::vector<int> s(static_cast<std::size_t>(n * n), 0);
    for (const auto& cell : c.cells)
      if (cell.dim == 1 && cell.boundary.size() == 2) {
        int u = static_cast<int>(idx.at(cell.boundary[0])), v = static_cast<int>(idx.at(cell.boundary[1]));
        ++s[static_cast<std::size_t>(u * n + v)];
        ++s[static_cast<std::size_t>(v * n + u)];
      }
    return s;
  };
  const auto sa = skeleton(a, index_a), sb = skeleton(b, index_b);
  auto pair_ok = [&](int u, int mu, int v, int w) {
    return sa[static_cast<std::size_t>(u * n + v)] == sb[static_cast<std::size_t>(mu * n + w)];
  };

  // B cells keyed by (dim, sorted boundary indices).
  std::map<std::pair<int, std::vector<std::size_t>>, std::vector<std::size_t>> dict_b;
  for (std::size_t i = 0; i < b.cells.size(); ++i) {
    if (b.cells[i].dim == 0) continue;
    std::vector<std::size_t> key;
    for (int id : b.cells[i].boundary) key.push_back(index_b.at(id));
    std::sort(key.begin(), key.end());
    dict_b[{b.cells[i].dim, key}].push_back(i);
  }
  auto accept = [&](const std::vector<int>& map) {
    // Cells with identical boundary and feature are treated as
    // interchangeable; this is exact for complexes without parallel cells.
    std::vector<std::size_t> to_b(a.cells.size());
    std::vector<char> used(b.cells.size(), 0);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
      const auto& cell = a.cells[i];
      if (cell.dim == 0) {
        to_b[i] = static_cast<std::size_t>(map[i]);
        continue;
      }
      std::vector<std::size_t> key;
      for (int id : cell.boundary) key.push_back(to_b[index_a.at(id)]);
      std::sort(key.begin(), key.end());
      auto it = dict_b.find({cell.dim, key});
      if (it == dict_b.end()) return false;
      bool found = false;
      for (auto j : it->second) {
        if (used[j]) continue;
        if (!a.features.empty()) {
          auto x = a.features.row(i), y = b.features.row(j);
          if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) continue;
        }
        used[j] = 1;
        to_b[i] = j;
        found = true;
        break;
      }
      if (!found) return false;
    }
    return true;
  };
  return search_bijection(n, invariants(a), invariants(b), pair_ok, accept);
}

bool iso_tuples(const NodeTupleCollection& a, const NodeTupleCollection& b) {
  if (!graphs_compatible(a.base, b.base) || a.tuples.size() != b.tuples.size() ||
      a.tuple_features.width != b.tuple_features.width || a.tuple_features.empty() != b.tuple_features.empty())
    return false;
  auto accept = [&](const std::vector<int>& map) {
    if (!base_edge_features_ok(a.base, b.base, map)) return false;
    for (std::size_t i = 0; i < a.tuples.size(); ++i) {
      std::vector<int> t;
      for (int v : a.tuples[i]) t.push_back(map[static_cast<std::size_t>(v)]);
      auto j = b.find(t);
      if (!j) return false;
      if (!a.tuple_features.empty()) {
        auto x = a.tuple_features.row(i), y = b.tuple_features.row(*j);
        if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) return false;
      }
    }
    return true;
  };
  return search_bijection(a.base.n(), graph_invariants(a.base), graph_invariants(b.base), base_pair_ok(a.base, b.base),
                          accept);
}

struct SubgraphKey {
  VertexSet vertices;
  std::vector<Edge> edges;
  int anchor;
  Invariant feature;
  auto operator<=>(const SubgraphKey&) const = default;
};

bool iso_subgraphs(const SubgraphCollection& a, const SubgraphCollection& b) {
  if (!graphs_compatible(a.base, b.base) || a.subgraphs.size() != b.subgraphs.size() || a.ordered != b.ordered ||
      a.subgraph_features.width != b.subgraph_features.width)
    return false;
  auto key = [](const Subgraph& s, const Invariant& f, const std::vector<int>* map) {
    SubgraphKey k;
    for (int v : s.vertices) k.vertices.push_back(map ? (*map)[static_cast<std::size_t>(v)] : v);
    std::sort(k.vertices.begin(), k.vertices.end());
    for (auto e : s.edges) {
      if (map) e = {(*map)[static_cast<std::size_t>(e.u)], (*map)[static_cast<std::size_t>(e.v)]};
      if (e.u > e.v) std::swap(e.u, e.v);
      k.edges.push_back(e);
    }
    std::sort(k.edges.begin(), k.edges.end());
    k.anchor = s.anchor ? (map ? (*map)[static_cast<std::size_t>(*s.anchor)] : *s.anchor) : -1;
    k.feature = f;
    return k;
  };
  std::vector<SubgraphKey> keys_b;
  for (std::size_t i = 0; i < b.subgraphs.size(); ++i) keys_b.push_back(key(b.subgraphs[i], row_of(b.subgraph_features, i), nullptr));
  auto sorted_b = keys_b;
  std::sort(sorted_b.begin(), sorted_b.end());
  auto accept = [&](const std::vector<int>& map) {
    if (!base_edge_features_ok(a.base, b.base, map)) return false;
    std::vector<SubgraphKey> keys_a;
    for (std::size_t i = 0; i < a.subgraphs.size(); ++i) keys_a.push_back(key(a.subgraphs[i], row_of(a.subgraph_features, i), &map));
    if (a.ordered) return keys_a == keys_b;
    std::sort(keys_a.begin(), keys_a.end());
    return keys_a == sorted_b;
  };
  return search_bijection(a.base.n(), graph_invariants(a.base), graph_invariants(b.base), base_pair_ok(a.base, b.base),
                          accept);
}

bool iso_motif(const MotifGraph& a, const MotifGraph& b) {
  if (!graphs_compatible(a.base, b.base) || a.motifs.size() != b.motifs.size() || a.weights.size() != b.weights.size())
    return false;
  for (std::size_t k = 0; k < a.motifs.size(); ++k)
    if (!are_isomorphic_bruteforce(a.motifs[k], b.motifs[k])) return false;
  const int n = a.base.n();
  auto base_ok = base_pair_ok(a.base, b.base);
  auto pair_ok = [&](int u, int mu, int v, int w) {
    if (!base_ok(u, mu, v, w)) return false;
    for (std::size_t k = 0; k < a.weights.size(); ++k)
      if (a.weight(k, u, v) != b.weight(k, mu, w)) return false;
    return true;
  };
  auto accept = [&](const std::vector<int>& map) { return base_edge_features_ok(a.base, b.base, map); };
  (void)n;
  return search_bijection(n, graph_invariants(a.base), graph_invariants(b.base), pair_ok, accept);
}

bool iso_counts(const SubgraphCountGraph& a, const SubgraphCountGraph& b) {
  if (!graphs_compatible(a.base, b.base) || a.motifs.size() != b.motifs.size() ||
      a.edge_counts.empty() != b.edge_counts.empty())
    return false;
  const std::size_t k = a.motifs.size();
  auto invariants = [k](const SubgraphCountGraph& g) {
    auto inv = graph_invariants(g.base);
    for (int v = 0; v < g.base.n(); ++v)
      for (std::size_t j = 0; j < k; ++j) inv[static_cast<std::size_t>(v)].push_back(static_cast<double>(g.vertex_count(v, j)));
    return inv;
  };
  auto accept = [&](const std::vector<int>& map) {
    if (!base_edge_features_ok(a.base, b.base, map)) return false;
    for (std::size_t e = 0; e < a.edge_counts.size() / std::max<std::size_t>(k, 1); ++e) {
      const auto& x = a.base.edges()[e];
      auto j = b.base.edge_index(map[static_cast<std::size_t>(x.u)], map[static_cast<std::size_t>(x.v)]);
      if (!j) return false;
      for (std::size_t t = 0; t < k; ++t)
        if (a.edge_counts[e * k + t] != b.edge_counts[*j * k + t]) return false;
    }
    return true;
  };
  return search_bijection(a.base.n(), invariants(a), invariants(b), base_pair_ok(a.base, b.base), accept);
}

bool iso_nested(const NestedGraph& a, const NestedGraph& b) {
  if (!graphs_compatible(a.outer, b.outer) || a.inner.size() != b.inner.size()) return false;
  // Shared class ids for inner graphs across both structures.
  std::vector<const Graph*> reps;
  auto class_of = [&](const Graph& g) {
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (are_isomorphic_bruteforce(*reps[i], g)) return static_cast<double>(i);
    reps.push_back(&g);
    return static_cast<double>(reps.size() - 1);
  };
  auto invariants = [&](const NestedGraph& g) {
    auto inv = graph_invariants(g.outer);
    for (int v = 0; v < g.outer.n(); ++v) inv[static_cast<std::size_t>(v)].push_back(class_of(g.inner[static_cast<std::size_t>(v)]));
    return inv;
  };
  auto ia = invariants(a);
  auto ib = invariants(b);
  auto accept = [&](const std::vector<int>& map) { return base_edge_features_ok(a.outer, b.outer, map); };
  return search_bijection(a.outer.n(), ia, ib, base_pair_ok(a.outer, b.outer), accept);
}

} // namespace

bool ho_isomorphic_bruteforce(const HOStructure& a, const HOStructure& b) {
  if (a.index() != b.index())
    throw Error(ErrorCode::KindMismatch, std::string(kind_name(kind_of(a))) + " vs " + std::string(kind_name(kind_of(b))));
  const int cap = budget::vertex_cap(budget::kBruteForceStructure);
  if (vertex_count(a) > cap || vertex_count(b) > cap)
    throw Error(ErrorCode::TooLarge, "structure isomorphism limited to " + std::to_string(cap) + " vertices");
  if (vertex_count(a) != vertex_count(b)) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, Graph>) return are_isomorphic_bruteforce(x, y);
        else if constexpr (std::is_same_v<T, Hypergraph> || std::is_same_v<T, SimplicialComplex>)
          return iso_hypergraph(x, y);
        else if constexpr (std::is_same_v<T, CellComplex>) return iso_cells(x, y);
        else if constexpr (std::is_same_v<T, NodeTupleCollection>) return iso_tuples(x, y);
        else if constexpr (std::is_same_v<T, SubgraphCollection>) return iso_subgraphs(x, y);
        else if constexpr (std::is_same_v<T, MotifGraph>) return iso_motif(x, y);
        else if constexpr (std::is_same_v<T, SubgraphCountGraph>) return iso_counts(x, y);
        else return iso_nested(x, y);
      },
      a);
}

} // namespace hognn
