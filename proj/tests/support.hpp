#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "hognn/engine.hpp"
#include "hognn/structures.hpp"

namespace hognn::testing {

inline Graph random_graph(int n, double p, std::mt19937_64& rng, std::size_t width = 0) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v});
  Features f;
  if (width > 0) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    f.width = width;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n) * width; ++i) f.vertex.push_back(val(rng));
  }
  return build_graph(n, edges, f);
}

inline VertexPermutation shuffled(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return VertexPermutation(p);
}

inline FeatureRows random_rows(std::size_t rows, std::size_t width, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  FeatureRows f;
  f.width = width;
  for (std::size_t i = 0; i < rows * width; ++i) f.data.push_back(val(rng));
  return f;
}

/// Row index in relabel(s, p) of every entity row of s, per class.
inline std::map<EntityClass, std::vector<int>> entity_map(const HOStructure& s, const HOStructure& r,
                                                         const VertexPermutation& p) {
  std::map<EntityClass, std::vector<int>> out;
  auto vertices = [&](int n) {
    auto& v = out[EntityClass::Vertex];
    for (int i = 0; i < n; ++i) v.push_back(p(i));
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Hypergraph> || std::is_same_v<T, SimplicialComplex>) {
          const auto& y = std::get<T>(r);
          vertices(x.n);
          auto& e = out[EntityClass::Hyperedge];
          for (const auto& h : x.hyperedges) {
            VertexSet m;
            for (int v : h) m.push_back(p(v));
            std::sort(m.begin(), m.end());
            e.push_back(static_cast<int>(*y.find(m)));
          }
        } else if constexpr (std::is_same_v<T, CellComplex>) {
          const auto& y = std::get<CellComplex>(r);
          std::vector<int> ids0;
          for (const auto& c : x.cells)
            if (c.dim == 0) ids0.push_back(c.id);
          auto& cells = out[EntityClass::Cell];
          int k = 0;
          for (const auto& c : x.cells) {
            const int id = c.dim == 0 ? ids0[static_cast<std::size_t>(p(k++))] : c.id;
            cells.push_back(static_cast<int>(*y.index_of(id)));
          }
        } else if constexpr (std::is_same_v<T, NodeTupleCollection>) {
          const auto& y = std::get<NodeTupleCollection>(r);
          auto& t = out[EntityClass::Tuple];
          for (const auto& tuple : x.tuples) {
            std::vector<int> m;
            for (int v : tuple) m.push_back(p(v));
            t.push_back(static_cast<int>(*y.find(m)));
          }
        } else if constexpr (std::is_same_v<T, NestedGraph>) {
          vertices(x.outer.n());
        } else if constexpr (std::is_same_v<T, Graph>) {
          vertices(x.n());
        } else {
          vertices(x.base.n());
        }
      },
      s);
  return out;
}

/// max |f(s)[c][i] - f(relabel(s))[c][map(i)]| over every entity class.
inline double equivariance_deviation(const HOStructure& s, const VertexPermutation& p,
                                     const std::function<ModelState(const HOStructure&)>& f) {
  HOStructure r = relabel(s, p);
  ModelState a = f(s), b = f(r);
  auto map = entity_map(s, r, p);
  double worst = 0.0;
  for (const auto& [cls, x] : a.features) {
    if (!b.has(cls)) return INFINITY;
    const Mat& y = b.at(cls);
    if (y.rows() != x.rows() || y.cols() != x.cols()) return INFINITY;
    auto it = map.find(cls);
    if (it == map.end()) continue;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      worst = std::max(worst, (x.row(i) - y.row(it->second[static_cast<std::size_t>(i)])).cwiseAbs().maxCoeff());
  }
  return worst;
}

inline double max_abs_diff(const RowVec& a, const RowVec& b) {
  if (a.size() != b.size()) return INFINITY;
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

} // namespace hognn::testing
