#include "hognn/transform.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "hognn/budget.hpp"
#include "hognn/error.hpp"

namespace hognn {

namespace {

void require_undirected(const Graph& g, const char* what) {
  if (g.directed()) throw Error(ErrorCode::PreconditionFailed, std::string(what) + " needs an undirected graph");
}

std::vector<double> pooled(const Graph& g, std::span<const int> vertices, FeaturePooling pooling) {
  std::vector<double> out(g.feature_width(), 0.0);
  if (!g.features().has_vertex()) return out;
  for (int v : vertices) {
    auto r = g.vertex_feature(v);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += r[i];
  }
  if (pooling == FeaturePooling::Mean && !vertices.empty())
    for (auto& x : out) x /= static_cast<double>(vertices.size());
  return out;
}

bool has_any_features(const Graph& g) { return g.features().has_vertex() || g.features().has_edge(); }

FeatureRows vertex_rows(const Graph& g) {
  FeatureRows f;
  if (!has_any_features(g)) return f;
  f.width = g.feature_width();
  if (g.features().has_vertex()) f.data = g.features().vertex;
  else f.data.assign(static_cast<std::size_t>(g.n()) * f.width, 0.0);
  return f;
}

std::vector<double> entity_feature(const Graph& g, std::span<const int> vertices, FeaturePooling pooling) {
  if (vertices.size() == 2 && g.features().has_edge()) {
    auto r = g.edge_feature(*g.edge_index(vertices[0], vertices[1]));
    return {r.begin(), r.end()};
  }
  return pooled(g, vertices, pooling);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

std::vector<VertexSet> enumerate_cliques(const Graph& g, int min_size, int max_size) {
  require_undirected(g, "clique enumeration");
  std::vector<VertexSet> out;
  VertexSet current;
  std::function<void(const std::vector<int>&)> grow = [&](const std::vector<int>& candidates) {
    if (static_cast<int>(current.size()) >= min_size) out.push_back(current);
    if (static_cast<int>(current.size()) == max_size) return;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      int v = candidates[i];
      std::vector<int> next;
      for (std::size_t j = i + 1; j < candidates.size(); ++j)
        if (g.has_edge(v, candidates[j])) next.push_back(candidates[j]);
      current.push_back(v);
      grow(next);
      current.pop_back();
    }
  };
  if (max_size >= 1) {
    std::vector<int> all(static_cast<std::size_t>(g.n()));
    for (int v = 0; v < g.n(); ++v) all[static_cast<std::size_t>(v)] = v;
    grow(all);
  }
  std::sort(out.begin(), out.end(), [](const VertexSet& a, const VertexSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  if (min_size <= 0) out.erase(out.begin()); // the empty clique
  return out;
}

std::vector<std::vector<int>> simple_cycles(const Graph& g, int max_len) {
  require_undirected(g, "cycle enumeration");
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::vector<char> on_path(static_cast<std::size_t>(g.n()), 0);
  for (int s = 0; s < g.n(); ++s) {
    // Paths from s through vertices above s; each cycle is met twice, once
    // per orientation, and kept when path[1] < path.back().
    std::function<void(int)> extend = [&](int v) {
      for (int w : g.neighbors(v)) {
        if (w == s && path.size() >= 3 && path[1] < path.back()) out.push_back(path);
        if (w <= s || on_path[static_cast<std::size_t>(w)] || static_cast<int>(path.size()) >= max_len) continue;
        on_path[static_cast<std::size_t>(w)] = 1;
        path.push_back(w);
        extend(w);
        path.pop_back();
        on_path[static_cast<std::size_t>(w)] = 0;
      }
    };
    path = {s};
    on_path[static_cast<std::size_t>(s)] = 1;
    extend(s);
    on_path[static_cast<std::size_t>(s)] = 0;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

bool is_induced_cycle(const Graph& g, const std::vector<int>& cycle) {
  std::size_t inside = 0;
  for (std::size_t i = 0; i < cycle.size(); ++i)
    for (std::size_t j = i + 1; j < cycle.size(); ++j) inside += g.has_edge(cycle[i], cycle[j]);
  return inside == cycle.size();
}

SimplicialComplex clique_complex_lift(const Graph& g, int k, FeaturePooling pooling) {
  if (k < 2) throw Error(ErrorCode::PreconditionFailed, "clique complex lift needs k >= 2");
  auto cliques = enumerate_cliques(g, 2, k);
  FeatureRows hf;
  const bool feat = has_any_features(g);
  if (feat) {
    hf.width = g.feature_width();
    for (const auto& c : cliques) {
      auto f = entity_feature(g, c, pooling);
      hf.append(f);
    }
  }
  return SimplicialComplex::from(Hypergraph::build(g.n(), std::move(cliques), vertex_rows(g), std::move(hf)));
}

CellComplex cell_lift(const Graph& g, int k_cl, int k_ind_cycle, int k_cycle, FeaturePooling pooling) {
  require_undirected(g, "cell lift");
  if (k_cycle > k_ind_cycle)
    throw Error(ErrorCode::BoundsInverted, "k_cycle " + std::to_string(k_cycle) + " exceeds k_ind_cycle " +
                                               std::to_string(k_ind_cycle));
  const int n = g.n();
  std::vector<Cell> cells;
  std::vector<VertexSet> members; // vertex set per cell, for features
  for (int v = 0; v < n; ++v) {
    cells.push_back({v, 0, {}});
    members.push_back({v});
  }
  for (std::size_t e = 0; e < g.m(); ++e) {
    cells.push_back({n + static_cast<int>(e), 1, {g.edges()[e].u, g.edges()[e].v}});
    members.push_back({g.edges()[e].u, g.edges()[e].v});
  }
  int next_id = n + static_cast<int>(g.m());

  // 2-cells keyed by their edge-cell ids, so a cycle that qualifies several
  // ways is attached once.
  std::map<std::vector<int>, VertexSet> two_cells;
  auto edge_cell = [&](int a, int b) { return n + static_cast<int>(*g.edge_index(std::min(a, b), std::max(a, b))); };
  auto add_cycle = [&](const std::vector<int>& cyc) {
    std::vector<int> key;
    for (std::size_t i = 0; i < cyc.size(); ++i) key.push_back(edge_cell(cyc[i], cyc[(i + 1) % cyc.size()]));
    std::sort(key.begin(), key.end());
    VertexSet vs = cyc;
    std::sort(vs.begin(), vs.end());
    two_cells.emplace(std::move(key), std::move(vs));
  };
  auto cliques = enumerate_cliques(g, 3, std::max(k_cl, 2));
  for (const auto& c : cliques)
    if (c.size() == 3) add_cycle(c);
  const int cycle_cap = std::max(k_ind_cycle, k_cycle);
  if (cycle_cap >= 3)
    for (const auto& cyc : simple_cycles(g, cycle_cap)) {
      const int len = static_cast<int>(cyc.size());
      const bool induced = is_induced_cycle(g, cyc);
      if ((induced && len <= k_ind_cycle) || (!induced && len <= k_cycle)) add_cycle(cyc);
    }
  // Deterministic id order: by cycle length, then edge key.
  std::vector<std::pair<std::vector<int>, VertexSet>> ordered(two_cells.begin(), two_cells.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });
  std::map<VertexSet, int> triangle_id; // vertex set -> 2-cell id, for 3-cells
  for (auto& [key, vs] : ordered) {
    if (vs.size() == 3) triangle_id[vs] = next_id;
    cells.push_back({next_id++, 2, key});
    members.push_back(vs);
  }

  // p-cells for larger cliques, bounded by their (p-1)-faces.
  std::map<VertexSet, int> face_id = triangle_id;
  for (std::size_t size = 4; size <= static_cast<std::size_t>(std::max(k_cl, 0)); ++size) {
    std::map<VertexSet, int> next_faces;
    for (const auto& c : cliques) {
      if (c.size() != size) continue;
      std::vector<int> bnd;
      for (std::size_t drop = 0; drop < c.size(); ++drop) {
        VertexSet f;
        for (std::size_t i = 0; i < c.size(); ++i)
          if (i != drop) f.push_back(c[i]);
        bnd.push_back(face_id.at(f));
      }
      std::sort(bnd.begin(), bnd.end());
      next_faces[c] = next_id;
      cells.push_back({next_id++, static_cast<int>(size) - 1, bnd});
      members.push_back(c);
    }
    face_id = std::move(next_faces);
  }

  FeatureRows f;
  if (has_any_features(g)) {
    f.width = g.feature_width();
    for (const auto& vs : members) {
      std::vector<double> row;
      if (vs.size() == 1 && g.features().has_vertex()) {
        auto r = g.vertex_feature(vs[0]);
        row.assign(r.begin(), r.end());
      } else if (vs.size() == 1) {
        row.assign(f.width, 0.0);
      } else {
        row = entity_feature(g, vs, pooling);
      }
      f.append(row);
    }
  }
  return CellComplex::build(std::move(cells), std::move(f));
}

Graph one_skeleton(const CellComplex& c) {
  std::vector<Edge> edges;
  for (const auto& cell : c.cells) {
    if (cell.dim != 1) continue;
    if (cell.boundary.size() != 2) throw Error(ErrorCode::PreconditionFailed, "1-cell without two boundary vertices");
    int a = static_cast<int>(*c.index_of(cell.boundary[0])), b = static_cast<int>(*c.index_of(cell.boundary[1]));
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  return Graph::build(c.vertex_count(), std::move(edges));
}

std::vector<double> iso_type(const Tuple& v, const Graph& g) {
  for (int x : v)
    if (x < 0 || x >= g.n()) throw Error(ErrorCode::OutOfRange, "tuple entry " + std::to_string(x));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) out.push_back(v[i] == v[j] ? 1.0 : 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) out.push_back(g.has_edge(v[i], v[j]) ? 1.0 : 0.0);
  if (g.features().has_vertex())
    for (int x : v) {
      auto r = g.vertex_feature(x);
      out.insert(out.end(), r.begin(), r.end());
    }
  return out;
}

NodeTupleCollection iso_type_lift(const Graph& g, int k_max, bool exact) {
  const int cap = budget::vertex_cap(budget::kTupleVertices);
  if (g.n() > cap || k_max > budget::kTupleOrder || k_max < 2)
    throw Error(ErrorCode::BudgetExceeded, "tuple lift limited to n <= " + std::to_string(cap) + ", 2 <= k <= " +
                                               std::to_string(budget::kTupleOrder));
  std::vector<Tuple> tuples;
  for (int k = exact ? k_max : 2; k <= k_max; ++k) {
    Tuple t(static_cast<std::size_t>(k), 0);
    if (g.n() == 0) break;
    while (true) {
      tuples.push_back(t);
      int i = k - 1;
      while (i >= 0 && ++t[static_cast<std::size_t>(i)] == g.n()) t[static_cast<std::size_t>(i--)] = 0;
      if (i < 0) break;
    }
  }
  const std::size_t d = g.features().has_vertex() ? g.feature_width() : 0;
  const std::size_t pairs = static_cast<std::size_t>(k_max * (k_max - 1) / 2);
  FeatureRows f;
  f.width = 2 * pairs + static_cast<std::size_t>(k_max) * d;
  for (const auto& t : tuples) {
    auto row = iso_type(t, g);
    row.resize(f.width, 0.0);
    f.append(row);
  }
  return NodeTupleCollection::build(g, std::move(tuples), k_max, std::move(f));
}

SubgraphCollection ego_net_collection(const Graph& g, int r, bool induced) {
  if (r < 1) throw Error(ErrorCode::PreconditionFailed, "ego radius must be >= 1");
  SubgraphCollection out;
  out.base = g;
  for (int v = 0; v < g.n(); ++v) {
    std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
    dist[static_cast<std::size_t>(v)] = 0;
    std::vector<int> queue{v};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      int u = queue[i];
      if (dist[static_cast<std::size_t>(u)] == r) continue;
      for (int w : g.neighbors(u))
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        }
    }
    Subgraph s;
    for (int u = 0; u < g.n(); ++u)
      if (dist[static_cast<std::size_t>(u)] >= 0) s.vertices.push_back(u);
    for (const auto& e : g.edges()) {
      int du = dist[static_cast<std::size_t>(e.u)], dv = dist[static_cast<std::size_t>(e.v)];
      if (du < 0 || dv < 0) continue;
      if (induced || std::min(du, dv) < r) s.edges.push_back(e);
    }
    s.anchor = v;
    out.subgraphs.push_back(std::move(s));
  }
  return out;
}

SubgraphCollection node_deleted_collection(const Graph& g, const NodeDeletion& how) {
  if (g.n() < 2) throw Error(ErrorCode::PreconditionFailed, "node deletion needs n >= 2");
  SubgraphCollection out;
  out.base = g;
  auto keep_induced = [&](const std::vector<char>& keep) {
    Subgraph s;
    for (int v = 0; v < g.n(); ++v)
      if (keep[static_cast<std::size_t>(v)]) s.vertices.push_back(v);
    for (const auto& e : g.edges())
      if (keep[static_cast<std::size_t>(e.u)] && keep[static_cast<std::size_t>(e.v)]) s.edges.push_back(e);
    out.subgraphs.push_back(std::move(s));
  };
  if (how.mode == NodeDeletion::Mode::AllSingle) {
    for (int v = 0; v < g.n(); ++v) {
      std::vector<char> keep(static_cast<std::size_t>(g.n()), 1);
      keep[static_cast<std::size_t>(v)] = 0;
      keep_induced(keep);
    }
    return out;
  }
  if (how.count < 1) throw Error(ErrorCode::PreconditionFailed, "sampled deletion needs count >= 1");
  const double p = how.drop_probability > 0 ? how.drop_probability : 1.0 / g.n();
  std::mt19937_64 rng(how.seed);
  // All draws happen up front, in sample-major order.
  std::vector<std::vector<char>> masks(static_cast<std::size_t>(how.count));
  for (auto& keep : masks) {
    keep.resize(static_cast<std::size_t>(g.n()));
    for (auto& k : keep) k = uniform01(rng) >= p;
  }
  for (const auto& keep : masks) keep_induced(keep);
  return out;
}

Graph clique_expansion(const Hypergraph& h) {
  std::set<Edge> edges;
  for (const auto& e : h.hyperedges)
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t j = i + 1; j < e.size(); ++j) edges.insert({e[i], e[j]});
  Features f;
  if (!h.vertex_features.empty()) {
    f.width = h.vertex_features.width;
    f.vertex = h.vertex_features.data;
  }
  return Graph::build(h.n, std::vector<Edge>(edges.begin(), edges.end()), false, std::move(f));
}

namespace {

Graph incidence_graph(const Hypergraph& h, bool flag) {
  std::vector<Edge> edges;
  for (std::size_t j = 0; j < h.m(); ++j)
    for (int v : h.hyperedges[j]) edges.push_back({v, h.n + static_cast<int>(j)});
  const std::size_t w = h.feature_width();
  Features f;
  if (w > 0 || flag) {
    f.width = w + (flag ? 1 : 0);
    for (int v = 0; v < h.n; ++v) {
      for (std::size_t i = 0; i < w; ++i)
        f.vertex.push_back(h.vertex_features.empty() ? 0.0 : h.vertex_features.row(static_cast<std::size_t>(v))[i]);
      if (flag) f.vertex.push_back(0.0);
    }
    for (std::size_t j = 0; j < h.m(); ++j) {
      for (std::size_t i = 0; i < w; ++i) f.vertex.push_back(h.hyperedge_features.empty() ? 0.0 : h.hyperedge_features.row(j)[i]);
      if (flag) f.vertex.push_back(1.0);
    }
  }
  return Graph::build(h.n + static_cast<int>(h.m()), std::move(edges), false, std::move(f));
}

} // namespace

Graph star_expansion(const Hypergraph& h) { return incidence_graph(h, true); }
Graph bipartite_lowering(const Hypergraph& h) { return incidence_graph(h, false); }

WeightedGraph weighted_lowering(const Hypergraph& h) {
  WeightedGraph out;
  out.graph = clique_expansion(h);
  out.weights.assign(out.graph.m(), 0);
  for (const auto& e : h.hyperedges)
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t j = i + 1; j < e.size(); ++j) ++out.weights[*out.graph.edge_index(e[i], e[j])];
  return out;
}

MotifGraph motif_lift(const Graph& g, const std::vector<Graph>& motifs) {
  MotifGraph out;
  out.base = g;
  out.motifs = motifs;
  for (const auto& m : motifs) out.weights.push_back(motif_adjacency(g, m));
  return out;
}

} // namespace hognn
