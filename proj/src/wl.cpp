#include "hognn/wl.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "hognn/adjacency.hpp"
#include "hognn/budget.hpp"
#include "hognn/error.hpp"
#include "hognn/transform.hpp"

namespace hognn {

std::string_view outcome_name(Outcome o) { return o == Outcome::Distinguished ? "Distinguished" : "Inconclusive"; }

int RefinementInstance::add_entity(int side_of, std::vector<double> key) {
  side.push_back(side_of);
  initial.push_back(std::move(key));
  for (auto& r : items) r.resize(side.size());
  return static_cast<int>(side.size()) - 1;
}

namespace {

template <class Key>
std::vector<int> rank_keys(const std::vector<Key>& keys, int* classes) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)]; });
  std::vector<int> color(keys.size());
  int next = -1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || keys[static_cast<std::size_t>(order[i - 1])] != keys[static_cast<std::size_t>(order[i])]) ++next;
    color[static_cast<std::size_t>(order[i])] = next;
  }
  *classes = next + 1;
  return color;
}

bool histograms_differ(const std::vector<int>& color, const std::vector<int>& side, int classes) {
  std::vector<std::int64_t> count(static_cast<std::size_t>(classes), 0);
  for (std::size_t e = 0; e < color.size(); ++e) count[static_cast<std::size_t>(color[e])] += side[e] == 0 ? 1 : -1;
  return std::any_of(count.begin(), count.end(), [](std::int64_t c) { return c != 0; });
}

using Signature = std::vector<std::int64_t>;

const std::vector<RefinementInstance::Item>& items_of(const RefinementInstance& inst, std::size_t r, std::size_t e) {
  static const std::vector<RefinementInstance::Item> none;
  const auto& rel = inst.items[r];
  return e < rel.size() ? rel[e] : none;
}

/// One round: returns new colours and adds the channel evaluations to `messages`.
std::vector<int> refine_round(const RefinementInstance& inst, const std::vector<int>& color, int* classes,
                              std::int64_t* messages) {
  const std::size_t n = color.size();
  std::vector<Signature> sig(n);
  for (std::size_t e = 0; e < n; ++e) {
    Signature& s = sig[e];
    s.push_back(color[e]);
    for (std::size_t r = 0; r < inst.items.size(); ++r) {
      if (r < inst.hidden.size() && inst.hidden[r]) continue;
      const auto& items = items_of(inst, r, e);
      std::map<int, std::int64_t> tally;
      const int q = r < inst.counted.size() ? inst.counted[r] : -1;
      if (q >= 0)
        for (const auto& it : items_of(inst, static_cast<std::size_t>(q), e)) ++tally[color[static_cast<std::size_t>(it.entities.front())]];
      std::vector<Signature> encoded;
      encoded.reserve(items.size());
      for (const auto& it : items) {
        Signature x;
        x.push_back(q >= 0 ? tally[color[static_cast<std::size_t>(it.entities.front())]] : it.label);
        for (int d : it.entities) x.push_back(color[static_cast<std::size_t>(d)]);
        encoded.push_back(std::move(x));
      }
      std::sort(encoded.begin(), encoded.end());
      *messages += static_cast<std::int64_t>(items.size());
      s.push_back(-1 - static_cast<std::int64_t>(encoded.size()));
      for (const auto& x : encoded) {
        s.push_back(static_cast<std::int64_t>(x.size()));
        s.insert(s.end(), x.begin(), x.end());
      }
    }
  }
  return rank_keys(sig, classes);
}

} // namespace

Verdict refine(const RefinementInstance& inst) {
  Verdict v;
  int classes = 0;
  auto color = rank_keys(inst.initial, &classes);
  if (histograms_differ(color, inst.side, classes)) {
    v.outcome = Outcome::Distinguished;
    return v;
  }
  const int limit = std::max<int>(1, static_cast<int>(color.size()));
  while (v.rounds < limit) {
    int next_classes = 0;
    auto next = refine_round(inst, color, &next_classes, &v.messages);
    ++v.rounds;
    const bool stable = next_classes == classes;
    color = std::move(next);
    classes = next_classes;
    if (histograms_differ(color, inst.side, classes)) {
      v.outcome = Outcome::Distinguished;
      return v;
    }
    if (stable) break;
  }
  return v;
}

std::vector<int> stable_colors(const RefinementInstance& inst) {
  int classes = 0;
  auto color = rank_keys(inst.initial, &classes);
  std::int64_t messages = 0;
  for (std::size_t round = 0; round < std::max<std::size_t>(1, color.size()); ++round) {
    int next_classes = 0;
    auto next = refine_round(inst, color, &next_classes, &messages);
    const bool stable = next_classes == classes;
    color = std::move(next);
    classes = next_classes;
    if (stable) break;
  }
  return color;
}

namespace {

void check_widths(const Graph& a, const Graph& b) {
  const std::size_t wa = a.features().has_vertex() ? a.feature_width() : 0;
  const std::size_t wb = b.features().has_vertex() ? b.feature_width() : 0;
  if (wa != wb) throw Error(ErrorCode::FeatureWidthMismatch, "feature widths " + std::to_string(wa) + " and " + std::to_string(wb));
}

std::vector<double> vertex_key(const Graph& g, int v) {
  if (!g.features().has_vertex()) return {};
  auto f = g.vertex_feature(v);
  return {f.begin(), f.end()};
}

void check_tuple_budget(const Graph& a, const Graph& b, int k) {
  const int cap = budget::vertex_cap(budget::kTupleVertices);
  if (k < 2 || k > budget::kTupleOrder || a.n() > cap || b.n() > cap)
    throw Error(ErrorCode::BudgetExceeded, "tuple refinement limited to 2 <= k <= " + std::to_string(budget::kTupleOrder) +
                                               " and n <= " + std::to_string(cap));
}

/// All k-tuples of one graph, indexed base-n from `offset`.
struct TupleSpace {
  const Graph* g;
  int k;
  int offset;
  int count;
  std::vector<int> pow;

  TupleSpace(const Graph& graph, int k_, int offset_) : g(&graph), k(k_), offset(offset_) {
    pow.assign(static_cast<std::size_t>(k), 1);
    for (int i = k - 2; i >= 0; --i) pow[static_cast<std::size_t>(i)] = pow[static_cast<std::size_t>(i + 1)] * graph.n();
    count = k == 0 ? 0 : pow[0] * graph.n();
  }
  Tuple decode(int local) const {
    Tuple t(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) t[static_cast<std::size_t>(i)] = (local / pow[static_cast<std::size_t>(i)]) % g->n();
    return t;
  }
  int replaced(int local, const Tuple& t, int j, int w) const {
    return offset + local + (w - t[static_cast<std::size_t>(j)]) * pow[static_cast<std::size_t>(j)];
  }
};

enum class TupleMode { Kwl, Kfwl, Delta, LwlPlus };

Verdict tuple_refinement(const Graph& a, const Graph& b, int k, TupleMode mode) {
  check_widths(a, b);
  check_tuple_budget(a, b, k);
  RefinementInstance inst;
  const int relations = mode == TupleMode::Kfwl ? 1 : mode == TupleMode::LwlPlus ? 2 * k : k;
  inst.items.resize(static_cast<std::size_t>(relations));
  if (mode == TupleMode::LwlPlus) {
    inst.counted.assign(static_cast<std::size_t>(relations), -1);
    inst.hidden.assign(static_cast<std::size_t>(relations), 0);
    for (int j = 0; j < k; ++j) {
      inst.counted[static_cast<std::size_t>(j)] = k + j; // local j counts within global j
      inst.hidden[static_cast<std::size_t>(k + j)] = 1;
    }
  }
  int offset = 0;
  for (int side = 0; side < 2; ++side) {
    const Graph& g = side == 0 ? a : b;
    TupleSpace space(g, k, offset);
    for (int local = 0; local < space.count; ++local) {
      Tuple t = space.decode(local);
      inst.add_entity(side, iso_type(t, g));
    }
    for (auto& rel : inst.items) rel.resize(static_cast<std::size_t>(offset + space.count));
    for (int local = 0; local < space.count; ++local) {
      Tuple t = space.decode(local);
      const auto e = static_cast<std::size_t>(offset + local);
      if (mode == TupleMode::Kfwl) {
        for (int w = 0; w < g.n(); ++w) {
          RefinementInstance::Item it;
          for (int j = 0; j < k; ++j) it.entities.push_back(space.replaced(local, t, j, w));
          inst.items[0][e].push_back(std::move(it));
        }
        continue;
      }
      for (int j = 0; j < k; ++j)
        for (int w = 0; w < g.n(); ++w) {
          const int u = space.replaced(local, t, j, w);
          const bool adjacent = g.has_edge(t[static_cast<std::size_t>(j)], w);
          switch (mode) {
          case TupleMode::Kwl: inst.items[static_cast<std::size_t>(j)][e].push_back({0, {u}}); break;
          case TupleMode::Delta: inst.items[static_cast<std::size_t>(j)][e].push_back({adjacent ? 1 : 0, {u}}); break;
          case TupleMode::LwlPlus:
            if (adjacent) inst.items[static_cast<std::size_t>(j)][e].push_back({0, {u}});
            inst.items[static_cast<std::size_t>(k + j)][e].push_back({0, {u}});
            break;
          case TupleMode::Kfwl: break;
          }
        }
    }
    offset += space.count;
  }
  return refine(inst);
}

} // namespace

Verdict wl1(const Graph& a, const Graph& b) {
  check_widths(a, b);
  RefinementInstance inst;
  inst.items.resize(1);
  for (int side = 0; side < 2; ++side) {
    const Graph& g = side == 0 ? a : b;
    const int offset = static_cast<int>(inst.side.size());
    for (int v = 0; v < g.n(); ++v) inst.add_entity(side, vertex_key(g, v));
    inst.items[0].resize(inst.side.size());
    for (int v = 0; v < g.n(); ++v)
      for (int u : g.neighbors(v)) inst.items[0][static_cast<std::size_t>(offset + v)].push_back({0, {offset + u}});
  }
  return refine(inst);
}

Verdict kwl(const Graph& a, const Graph& b, int k) { return tuple_refinement(a, b, k, TupleMode::Kwl); }
Verdict kfwl(const Graph& a, const Graph& b, int k) { return tuple_refinement(a, b, k, TupleMode::Kfwl); }
Verdict delta_kwl(const Graph& a, const Graph& b, int k) { return tuple_refinement(a, b, k, TupleMode::Delta); }

Graph with_auxiliary_vertex(const Graph& g) {
  const int n = g.n();
  std::vector<Edge> edges = g.edges();
  for (int v = 0; v < n; ++v) edges.push_back({v, n});
  Features f;
  const std::size_t w = g.features().has_vertex() ? g.feature_width() : 0;
  f.width = w + 1;
  for (int v = 0; v <= n; ++v) {
    for (std::size_t j = 0; j < w; ++j) f.vertex.push_back(v < n ? g.vertex_feature(v)[j] : 0.0);
    f.vertex.push_back(v == n ? 1.0 : 0.0);
  }
  return Graph::build(n + 1, std::move(edges), false, std::move(f));
}

Verdict klwl_plus(const Graph& a, const Graph& b, int k, bool auxiliary) {
  if (auxiliary) return tuple_refinement(with_auxiliary_vertex(a), with_auxiliary_vertex(b), k, TupleMode::LwlPlus);
  if (!is_connected(a) || !is_connected(b))
    throw Error(ErrorCode::PreconditionFailed, "k-LWL+ needs connected graphs (or the auxiliary vertex)");
  return tuple_refinement(a, b, k, TupleMode::LwlPlus);
}

namespace {

struct LiftedView {
  ComplexRelations rel;
  std::vector<std::vector<double>> keys;
};

LiftedView lifted_view(const HOStructure& s) {
  LiftedView out;
  auto key_rows = [&](const FeatureRows& f, std::size_t i, int rank) {
    std::vector<double> key{static_cast<double>(rank)};
    if (!f.empty()) {
      auto r = f.row(i);
      key.insert(key.end(), r.begin(), r.end());
    }
    return key;
  };
  if (auto cc = std::get_if<CellComplex>(&s)) {
    out.rel = relations(*cc);
    for (std::size_t i = 0; i < cc->cells.size(); ++i) out.keys.push_back(key_rows(cc->features, i, out.rel.rank[i]));
    return out;
  }
  const Hypergraph* h = std::get_if<Hypergraph>(&s);
  if (!h) h = std::get_if<SimplicialComplex>(&s);
  if (!h) throw Error(ErrorCode::KindMismatch, "lifted refinement needs a hypergraph, SC or CC");
  out.rel = relations(*h);
  for (int v = 0; v < h->n; ++v) out.keys.push_back(key_rows(h->vertex_features, static_cast<std::size_t>(v), 0));
  for (std::size_t j = 0; j < h->m(); ++j) out.keys.push_back(key_rows(h->hyperedge_features, j, out.rel.rank[static_cast<std::size_t>(h->n) + j]));
  return out;
}

} // namespace

Verdict lifted_refine(const HOStructure& a, const HOStructure& b, const std::vector<Relation>& use) {
  if (kind_of(a) != kind_of(b)) throw Error(ErrorCode::KindMismatch, "structures of different kinds");
  if (use.empty()) throw Error(ErrorCode::EmptyRelationSet, "no relation selected");
  RefinementInstance inst;
  std::vector<Relation> order;
  for (Relation q : {Relation::Boundary, Relation::Coboundary, Relation::Upper, Relation::Lower})
    if (std::find(use.begin(), use.end(), q) != use.end()) order.push_back(q);
  inst.items.resize(order.size());
  for (int side = 0; side < 2; ++side) {
    LiftedView view = lifted_view(side == 0 ? a : b);
    const int offset = static_cast<int>(inst.side.size());
    for (auto& key : view.keys) inst.add_entity(side, std::move(key));
    for (std::size_t r = 0; r < order.size(); ++r) {
      auto& rel = inst.items[r];
      rel.resize(inst.side.size());
      for (std::size_t c = 0; c < view.rel.size(); ++c) {
        const int ci = static_cast<int>(c);
        std::vector<int> nb;
        switch (order[r]) {
        case Relation::Boundary: nb = view.rel.boundary[c]; break;
        case Relation::Coboundary: nb = view.rel.coboundary[c]; break;
        case Relation::Upper: nb = view.rel.upper_set(ci); break;
        case Relation::Lower: nb = view.rel.lower_set(ci); break;
        }
        for (int d : nb) rel[static_cast<std::size_t>(offset) + c].push_back({0, {offset + d}});
      }
    }
  }
  return refine(inst);
}

TestSpec parse_test(std::string_view s) {
  auto colon = s.find(':');
  std::string_view head = s.substr(0, colon);
  std::string_view tail = colon == std::string_view::npos ? std::string_view{} : s.substr(colon + 1);
  if (head == "wl1" && tail.empty()) return {TestKind::Wl1, 1};
  if (head == "lifted") {
    if (tail == "cqc") return {TestKind::LiftedCqc, 0};
    if (tail == "cell") return {TestKind::LiftedCell, 0};
  }
  const std::pair<std::string_view, TestKind> ks[] = {{"kwl", TestKind::Kwl},
                                                       {"kfwl", TestKind::Kfwl},
                                                       {"dkwl", TestKind::DeltaKwl},
                                                       {"klwlp", TestKind::KlwlPlus},
                                                       {"klwlpa", TestKind::KlwlPlusAux}};
  for (const auto& [name, kind] : ks)
    if (head == name && !tail.empty() && std::all_of(tail.begin(), tail.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return {kind, std::stoi(std::string(tail))};
  throw Error(ErrorCode::ParseError, "unknown test '" + std::string(s) + "'");
}

std::string test_name(const TestSpec& t) {
  const std::string k = std::to_string(t.k);
  switch (t.kind) {
  case TestKind::Wl1: return "wl1";
  case TestKind::Kwl: return "kwl:" + k;
  case TestKind::Kfwl: return "kfwl:" + k;
  case TestKind::DeltaKwl: return "dkwl:" + k;
  case TestKind::KlwlPlus: return "klwlp:" + k;
  case TestKind::KlwlPlusAux: return "klwlpa:" + k;
  case TestKind::LiftedCqc: return "lifted:cqc";
  case TestKind::LiftedCell: return "lifted:cell";
  }
  return "?";
}

Verdict run_test(const TestSpec& t, const Graph& a, const Graph& b) {
  switch (t.kind) {
  case TestKind::Wl1: return wl1(a, b);
  case TestKind::Kwl: return kwl(a, b, t.k);
  case TestKind::Kfwl: return kfwl(a, b, t.k);
  case TestKind::DeltaKwl: return delta_kwl(a, b, t.k);
  case TestKind::KlwlPlus: return klwl_plus(a, b, t.k, false);
  case TestKind::KlwlPlusAux: return klwl_plus(a, b, t.k, true);
  case TestKind::LiftedCqc: {
    auto lift = [](const Graph& g) { return HOStructure(clique_complex_lift(g, std::max(2, g.n()))); };
    return lifted_refine(lift(a), lift(b), {Relation::Boundary, Relation::Upper});
  }
  case TestKind::LiftedCell: {
    auto lift = [](const Graph& g) {
      const int len = std::max(3, g.n());
      return HOStructure(cell_lift(g, 2, len, 0));
    };
    return lifted_refine(lift(a), lift(b), {Relation::Boundary, Relation::Upper});
  }
  }
  throw Error(ErrorCode::ParseError, "unknown test kind");
}

BatteryReport battery(const std::vector<std::pair<NamedGraph, NamedGraph>>& pairs, const std::vector<TestSpec>& tests) {
  BatteryReport report;
  std::vector<std::vector<bool>> hit(tests.size());
  for (const auto& t : tests) report.tests.push_back(test_name(t));
  for (std::size_t i = 0; i < tests.size(); ++i)
    for (const auto& [a, b] : pairs) {
      Verdict v = run_test(tests[i], a.graph, b.graph);
      report.rows.push_back({report.tests[i], a.name, b.name, v});
      hit[i].push_back(v.distinguished());
    }
  report.contains.assign(tests.size(), std::vector<bool>(tests.size(), true));
  for (std::size_t i = 0; i < tests.size(); ++i)
    for (std::size_t j = 0; j < tests.size(); ++j)
      for (std::size_t p = 0; p < pairs.size(); ++p)
        if (hit[j][p] && !hit[i][p]) report.contains[i][j] = false;
  return report;
}

} // namespace hognn
