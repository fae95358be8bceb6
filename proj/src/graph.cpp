#include "hognn/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <string>

#include "hognn/budget.hpp"
#include "hognn/error.hpp"

namespace hognn {

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

} // namespace

Graph Graph::build(int n, std::vector<Edge> edges, bool directed, Features features) {
  if (n < 0) throw Error(ErrorCode::OutOfRange, "negative vertex count");
  Graph g;
  g.n_ = n;
  g.directed_ = directed;

  // Edge features are given in input order; carry them through the sort.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw Error(ErrorCode::OutOfRange, "edge " + edge_str(e) + " outside [0," + std::to_string(n) + ")");
    if (e.u == e.v && !directed)
      throw Error(ErrorCode::OutOfRange, "self-loop " + edge_str(e) + " in undirected graph");
    if (!directed && e.u > e.v) std::swap(e.u, e.v);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (edges[order[i]] == edges[order[i - 1]])
      throw Error(ErrorCode::DuplicateEdge, "edge " + edge_str(edges[order[i]]) + " given twice");

  g.edges_.reserve(edges.size());
  for (auto i : order) g.edges_.push_back(edges[i]);

  const std::size_t w = features.width;
  if (!features.vertex.empty() && features.vertex.size() != w * static_cast<std::size_t>(n))
    throw Error(ErrorCode::FeatureWidthMismatch, "vertex feature block is not n x width");
  if (!features.edge.empty()) {
    if (features.edge.size() != w * edges.size())
      throw Error(ErrorCode::FeatureWidthMismatch, "edge feature block is not m x width");
    std::vector<double> sorted(features.edge.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      std::copy_n(features.edge.begin() + static_cast<std::ptrdiff_t>(order[i] * w), w,
                  sorted.begin() + static_cast<std::ptrdiff_t>(i * w));
    features.edge = std::move(sorted);
  }
  if (features.vertex.empty() && features.edge.empty()) features.width = 0;
  g.features_ = std::move(features);

  g.adj_.assign(static_cast<std::size_t>(n), {});
  g.matrix_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (const auto& e : g.edges_) {
    g.adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
    g.matrix_[static_cast<std::size_t>(e.u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(e.v)] = 1;
    if (!directed) {
      g.adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
      g.matrix_[static_cast<std::size_t>(e.v) * static_cast<std::size_t>(n) + static_cast<std::size_t>(e.u)] = 1;
    }
  }
  for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
  return g;
}

Graph Graph::build(int n, const std::vector<std::pair<int, int>>& edges, bool directed,
                   Features features) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto [u, v] : edges) es.push_back({u, v});
  return build(n, std::move(es), directed, std::move(features));
}

std::optional<std::size_t> Graph::edge_index(int u, int v) const {
  if (!directed_ && u > v) std::swap(u, v);
  Edge key{u, v};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin());
}

std::span<const double> Graph::vertex_feature(int v) const {
  if (!features_.has_vertex()) return {};
  return std::span<const double>(features_.vertex).subspan(static_cast<std::size_t>(v) * features_.width,
                                                           features_.width);
}

std::span<const double> Graph::edge_feature(std::size_t e) const {
  if (!features_.has_edge()) return {};
  return std::span<const double>(features_.edge).subspan(e * features_.width, features_.width);
}

VertexPermutation::VertexPermutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
  std::vector<char> seen(mapping_.size(), 0);
  for (int x : mapping_) {
    if (x < 0 || x >= static_cast<int>(mapping_.size()) || seen[static_cast<std::size_t>(x)])
      throw Error(ErrorCode::OutOfRange, "mapping is not a bijection");
    seen[static_cast<std::size_t>(x)] = 1;
  }
}

VertexPermutation VertexPermutation::identity(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  return VertexPermutation(std::move(m));
}

VertexPermutation VertexPermutation::inverse() const {
  std::vector<int> inv(mapping_.size());
  for (std::size_t i = 0; i < mapping_.size(); ++i) inv[static_cast<std::size_t>(mapping_[i])] = static_cast<int>(i);
  return VertexPermutation(std::move(inv));
}

Graph build_graph(int n, const std::vector<std::pair<int, int>>& edges, Features features) {
  return Graph::build(n, edges, false, std::move(features));
}

Graph apply_permutation(const Graph& g, const VertexPermutation& p) {
  if (p.size() != g.n())
    throw Error(ErrorCode::SizeMismatch, "permutation of size " + std::to_string(p.size()) +
                                             " applied to graph with n=" + std::to_string(g.n()));
  const auto& f = g.features();
  Features out;
  out.width = f.width;
  if (f.has_vertex()) {
    out.vertex.resize(f.vertex.size());
    for (int v = 0; v < g.n(); ++v)
      std::copy_n(f.vertex.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(v) * f.width), f.width,
                  out.vertex.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(p(v)) * f.width));
  }
  std::vector<Edge> edges;
  edges.reserve(g.m());
  for (const auto& e : g.edges()) edges.push_back({p(e.u), p(e.v)});
  if (f.has_edge()) out.edge = f.edge;
  return Graph::build(g.n(), std::move(edges), g.directed(), std::move(out));
}

namespace {

bool same_row(std::span<const double> a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

std::optional<VertexPermutation> find_isomorphism_bruteforce(const Graph& a, const Graph& b) {
  const int cap = budget::vertex_cap(budget::kBruteForceGraph);
  if (a.n() > cap || b.n() > cap)
    throw Error(ErrorCode::TooLarge, "brute-force isomorphism limited to n <= " + std::to_string(cap));
  if (a.n() != b.n() || a.m() != b.m() || a.directed() != b.directed()) return std::nullopt;
  const auto& fa = a.features();
  const auto& fb = b.features();
  if (fa.width != fb.width || fa.has_vertex() != fb.has_vertex() || fa.has_edge() != fb.has_edge())
    return std::nullopt;

  const int n = a.n();
  std::vector<int> in_a(static_cast<std::size_t>(n), 0), in_b(static_cast<std::size_t>(n), 0);
  if (a.directed()) {
    for (const auto& e : a.edges()) ++in_a[static_cast<std::size_t>(e.v)];
    for (const auto& e : b.edges()) ++in_b[static_cast<std::size_t>(e.v)];
  }
  auto compatible = [&](int v, int w) {
    return a.degree(v) == b.degree(w) && in_a[static_cast<std::size_t>(v)] == in_b[static_cast<std::size_t>(w)] &&
           a.has_edge(v, v) == b.has_edge(w, w) && same_row(a.vertex_feature(v), b.vertex_feature(w));
  };

  // Highest degree first keeps the consistency check tight early.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a.degree(x) > a.degree(y); });

  std::vector<int> map(static_cast<std::size_t>(n), -1);
  std::vector<char> used(static_cast<std::size_t>(n), 0);

  auto edge_features_match = [&]() {
    if (!fa.has_edge()) return true;
    for (std::size_t i = 0; i < a.m(); ++i) {
      const auto& e = a.edges()[i];
      auto j = b.edge_index(map[static_cast<std::size_t>(e.u)], map[static_cast<std::size_t>(e.v)]);
      if (!j || !same_row(a.edge_feature(i), b.edge_feature(*j))) return false;
    }
    return true;
  };

  std::function<bool(int)> search = [&](int depth) -> bool {
    if (depth == n) return edge_features_match();
    const int v = order[static_cast<std::size_t>(depth)];
    for (int w = 0; w < n; ++w) {
      if (used[static_cast<std::size_t>(w)] || !compatible(v, w)) continue;
      bool ok = true;
      for (int d = 0; d < depth && ok; ++d) {
        const int u = order[static_cast<std::size_t>(d)];
        const int mu = map[static_cast<std::size_t>(u)];
        ok = a.has_edge(u, v) == b.has_edge(mu, w) && a.has_edge(v, u) == b.has_edge(w, mu);
      }
      if (!ok) continue;
      map[static_cast<std::size_t>(v)] = w;
      used[static_cast<std::size_t>(w)] = 1;
      if (search(depth + 1)) return true;
      used[static_cast<std::size_t>(w)] = 0;
    }
    map[static_cast<std::size_t>(v)] = -1;
    return false;
  };
  if (!search(0)) return std::nullopt;
  return VertexPermutation(map);
}

bool are_isomorphic_bruteforce(const Graph& a, const Graph& b) {
  return find_isomorphism_bruteforce(a, b).has_value();
}

UnionResult disjoint_union(const Graph& a, const Graph& b) {
  const auto& fa = a.features();
  const auto& fb = b.features();
  const bool a_plain = fa.width == 0;
  const bool b_plain = fb.width == 0;
  // An empty graph carries no rows, so it is compatible with anything.
  if (!(a_plain && b_plain) && a.n() > 0 && b.n() > 0) {
    if (fa.width != fb.width || fa.has_vertex() != fb.has_vertex() ||
        (fa.has_edge() != fb.has_edge() && a.m() > 0 && b.m() > 0))
      throw Error(ErrorCode::FeatureWidthMismatch, "feature widths differ: " + std::to_string(fa.width) +
                                                       " vs " + std::to_string(fb.width));
  }
  if (a.directed() != b.directed() && a.m() > 0 && b.m() > 0)
    throw Error(ErrorCode::KindMismatch, "cannot union directed and undirected graphs");

  const int offset = a.n();
  std::vector<Edge> edges = a.edges();
  for (const auto& e : b.edges()) edges.push_back({e.u + offset, e.v + offset});
  Features f;
  f.width = std::max(fa.width, fb.width);
  if (fa.has_vertex() || fb.has_vertex()) {
    f.vertex = fa.vertex;
    f.vertex.insert(f.vertex.end(), fb.vertex.begin(), fb.vertex.end());
  }
  if (fa.has_edge() || fb.has_edge()) {
    f.edge = fa.edge;
    f.edge.insert(f.edge.end(), fb.edge.begin(), fb.edge.end());
  }
  return {Graph::build(a.n() + b.n(), std::move(edges), a.directed() || b.directed(), std::move(f)), offset};
}

Graph induced_subgraph(const Graph& g, std::span<const int> vertices) {
  std::vector<int> local(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const int v = vertices[i];
    if (v < 0 || v >= g.n()) throw Error(ErrorCode::OutOfRange, "vertex " + std::to_string(v));
    local[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  const auto& f = g.features();
  Features out;
  out.width = f.width;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < g.m(); ++i) {
    const auto& e = g.edges()[i];
    const int a = local[static_cast<std::size_t>(e.u)];
    const int b = local[static_cast<std::size_t>(e.v)];
    if (a < 0 || b < 0) continue;
    edges.push_back({a, b});
    if (f.has_edge()) {
      auto row = g.edge_feature(i);
      out.edge.insert(out.edge.end(), row.begin(), row.end());
    }
  }
  if (f.has_vertex())
    for (int v : vertices) {
      auto row = g.vertex_feature(v);
      out.vertex.insert(out.vertex.end(), row.begin(), row.end());
    }
  return Graph::build(static_cast<int>(vertices.size()), std::move(edges), g.directed(), std::move(out));
}

std::vector<int> connected_components(const Graph& g) {
  std::vector<int> comp(static_cast<std::size_t>(g.n()), -1);
  // Weak components for directed graphs.
  std::vector<std::vector<int>> und(static_cast<std::size_t>(g.n()));
  for (const auto& e : g.edges()) {
    und[static_cast<std::size_t>(e.u)].push_back(e.v);
    und[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  int next = 0;
  for (int s = 0; s < g.n(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[static_cast<std::size_t>(s)] = next;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int u : und[static_cast<std::size_t>(v)])
        if (comp[static_cast<std::size_t>(u)] < 0) {
          comp[static_cast<std::size_t>(u)] = next;
          q.push(u);
        }
    }
    ++next;
  }
  return comp;
}

int component_count(const Graph& g) {
  auto comp = connected_components(g);
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

bool is_connected(const Graph& g) { return component_count(g) <= 1; }

std::uint64_t canonical_code_bruteforce(const Graph& g) {
  const int cap = budget::vertex_cap(budget::kBruteForceGraph);
  if (g.n() > std::min(cap, 10))
    throw Error(ErrorCode::TooLarge, "canonical code limited to n <= 10");
  if (g.directed() || g.feature_width() != 0)
    throw Error(ErrorCode::PreconditionFailed, "canonical code needs a featureless undirected graph");
  const int n = g.n();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return g.degree(x) != g.degree(y) ? g.degree(x) > g.degree(y) : x < y;
  });
  // Blocks of equal degree; a labeling may permute only within a block.
  std::vector<std::pair<int, int>> blocks;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && g.degree(order[static_cast<std::size_t>(j)]) == g.degree(order[static_cast<std::size_t>(i)])) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }

  auto code_of = [&](const std::vector<int>& label) {
    std::uint64_t code = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        code = (code << 1) | (g.has_edge(label[static_cast<std::size_t>(i)], label[static_cast<std::size_t>(j)]) ? 1u : 0u);
    return code;
  };

  std::uint64_t best = ~std::uint64_t{0};
  std::vector<int> label = order;
  std::function<void(std::size_t)> rec = [&](std::size_t b) {
    if (b == blocks.size()) {
      best = std::min(best, code_of(label));
      return;
    }
    auto first = label.begin() + blocks[b].first;
    auto last = label.begin() + blocks[b].second;
    std::sort(first, last);
    do {
      rec(b + 1);
    } while (std::next_permutation(first, last));
  };
  rec(0);
  return best | (static_cast<std::uint64_t>(n) << 56);
}

namespace named {

Graph empty(int n) { return Graph::build(n, std::vector<Edge>{}); }

Graph complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph::build(n, std::move(e));
}

Graph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Graph::build(n, std::move(e));
}

Graph path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph::build(n, std::move(e));
}

} // namespace named

} // namespace hognn
