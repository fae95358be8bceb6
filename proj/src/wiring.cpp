#include "hognn/wiring.hpp"

#include <algorithm>

#include "hognn/error.hpp"

namespace hognn {

std::string_view scheme_name(Scheme s) {
  switch (s) {
  case Scheme::IMP: return "imp";
  case Scheme::BAMP: return "bamp";
  case Scheme::CWN: return "cwn";
  case Scheme::DAMP: return "damp";
  case Scheme::MULTIHOP: return "multihop";
  case Scheme::SUBGRAPH: return "subgraph";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (auto s : {Scheme::IMP, Scheme::BAMP, Scheme::CWN, Scheme::DAMP, Scheme::MULTIHOP, Scheme::SUBGRAPH})
    if (scheme_name(s) == name) return s;
  return std::nullopt;
}

std::string tag_name(RelationTag t, int slot) {
  switch (t) {
  case RelationTag::IncidenceUp: return "incidence-up";
  case RelationTag::IncidenceDown: return "incidence-down";
  case RelationTag::Boundary: return "boundary";
  case RelationTag::Coboundary: return "coboundary";
  case RelationTag::Upper: return "upper";
  case RelationTag::Lower: return "lower";
  case RelationTag::Down: return "down";
  case RelationTag::LocalDown: return "local-down";
  case RelationTag::Hop: return "hop-" + std::to_string(slot);
  case RelationTag::SubgraphAdj: return "subgraph-adj";
  case RelationTag::Self: return "self";
  }
  return "?";
}

std::optional<Relation> parse_relation(std::string_view name) {
  if (name == "boundary") return Relation::Boundary;
  if (name == "coboundary") return Relation::Coboundary;
  if (name == "upper") return Relation::Upper;
  if (name == "lower") return Relation::Lower;
  return std::nullopt;
}

namespace {

WiringSet finish(Scheme s, std::vector<Channel> channels) {
  std::sort(channels.begin(), channels.end());
  return {s, std::move(channels)};
}

} // namespace

WiringSet compile_imp(const Hypergraph& h) {
  std::vector<Channel> ch;
  for (std::size_t j = 0; j < h.m(); ++j) {
    EntityRef e{EntityClass::Hyperedge, static_cast<int>(j)};
    for (int v : h.hyperedges[j]) {
      EntityRef x{EntityClass::Vertex, v};
      ch.push_back({x, e, std::nullopt, RelationTag::IncidenceUp});
      ch.push_back({e, x, std::nullopt, RelationTag::IncidenceDown});
    }
  }
  return finish(Scheme::IMP, std::move(ch));
}

WiringSet compile_bamp(const ComplexRelations& r, const std::vector<Relation>& use, const BampOptions& opt) {
  if (use.empty()) throw Error(ErrorCode::EmptyRelationSet, "no relation selected");
  auto want = [&](Relation x) { return std::find(use.begin(), use.end(), x) != use.end(); };
  auto ranked = [&](int a, int b) {
    return !opt.rank || (r.rank[static_cast<std::size_t>(a)] == *opt.rank && r.rank[static_cast<std::size_t>(b)] == *opt.rank);
  };
  std::vector<Channel> ch;
  for (std::size_t c = 0; c < r.size(); ++c) {
    const int ci = static_cast<int>(c);
    const EntityRef dst = r.entities[c];
    if (want(Relation::Boundary))
      for (int b : r.boundary[c])
        if (ranked(b, ci)) ch.push_back({r.entities[static_cast<std::size_t>(b)], dst, std::nullopt, RelationTag::Boundary});
    if (want(Relation::Coboundary))
      for (int d : r.coboundary[c])
        if (ranked(d, ci)) ch.push_back({r.entities[static_cast<std::size_t>(d)], dst, std::nullopt, RelationTag::Coboundary});
    if (want(Relation::Upper))
      for (const auto& x : r.upper[c])
        if (ranked(x.entity, ci))
          ch.push_back({r.entities[static_cast<std::size_t>(x.entity)], dst, r.entities[static_cast<std::size_t>(x.via)],
                        x.entity == ci ? RelationTag::Self : RelationTag::Upper});
    if (want(Relation::Lower))
      for (const auto& x : r.lower[c])
        if (ranked(x.entity, ci))
          ch.push_back({r.entities[static_cast<std::size_t>(x.entity)], dst, r.entities[static_cast<std::size_t>(x.via)],
                        x.entity == ci ? RelationTag::Self : RelationTag::Lower});
  }
  return finish(Scheme::BAMP, std::move(ch));
}

WiringSet compile_bamp(const Hypergraph& s, const std::vector<Relation>& use, const BampOptions& opt) {
  if (use.empty()) throw Error(ErrorCode::EmptyRelationSet, "no relation selected");
  return compile_bamp(relations(s, opt.adjacency), use, opt);
}

WiringSet compile_bamp(const CellComplex& c, const std::vector<Relation>& use, const BampOptions& opt) {
  if (use.empty()) throw Error(ErrorCode::EmptyRelationSet, "no relation selected");
  return compile_bamp(relations(c, opt.adjacency), use, opt);
}

WiringSet compile_cwn(const CellComplex& c) {
  auto w = compile_bamp(c, {Relation::Boundary, Relation::Upper});
  w.scheme = Scheme::CWN;
  return w;
}

WiringSet compile_damp(const NodeTupleCollection& c, bool local, bool inclusive) {
  for (const auto& t : c.tuples)
    if (t.size() != c.tuples.front().size()) throw Error(ErrorCode::MixedTupleLengths, "tuples of several lengths");
  std::vector<Channel> ch;
  for (std::size_t i = 0; i < c.tuples.size(); ++i) {
    const auto& v = c.tuples[i];
    EntityRef dst{EntityClass::Tuple, static_cast<int>(i)};
    auto reps = local ? local_down_replacements(c.base, v) : down_replacements(c.base.n(), v, inclusive);
    for (const auto& r : reps) {
      auto j = c.find(r.tuple);
      if (!j) continue;
      RelationTag tag = r.tuple == v ? RelationTag::Self : (local ? RelationTag::LocalDown : RelationTag::Down);
      ch.push_back({{EntityClass::Tuple, static_cast<int>(*j)}, dst, std::nullopt, tag, r.coordinate});
    }
  }
  return finish(Scheme::DAMP, std::move(ch));
}

WiringSet compile_multihop(const Graph& g, const std::vector<int>& hops) {
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<Channel> ch;
  for (int k : hops) {
    if (k < 1) throw Error(ErrorCode::PreconditionFailed, "hop lengths must be >= 1");
    // walks[u][v] = number of length-k walks u -> v, by repeated extension.
    std::vector<double> walks(n * n, 0.0);
    for (std::size_t u = 0; u < n; ++u) walks[u * n + u] = 1.0;
    for (int step = 0; step < k; ++step) {
      std::vector<double> next(n * n, 0.0);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t x = 0; x < n; ++x) {
          const double w = walks[u * n + x];
          if (w == 0.0) continue;
          for (int y : g.neighbors(static_cast<int>(x))) next[u * n + static_cast<std::size_t>(y)] += w;
        }
      walks = std::move(next);
    }
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v && walks[u * n + v] > 0)
          ch.push_back({{EntityClass::Vertex, static_cast<int>(u)}, {EntityClass::Vertex, static_cast<int>(v)}, std::nullopt,
                        RelationTag::Hop, k, walks[u * n + v]});
  }
  return finish(Scheme::MULTIHOP, std::move(ch));
}

WiringSet compile_subgraph(const SubgraphCollection& s) {
  std::vector<Channel> ch;
  for (std::size_t i = 0; i < s.subgraphs.size(); ++i) {
    EntityRef via{EntityClass::Subgraph, static_cast<int>(i)};
    for (const auto& e : s.subgraphs[i].edges) {
      ch.push_back({{EntityClass::Vertex, e.u}, {EntityClass::Vertex, e.v}, via, RelationTag::SubgraphAdj});
      ch.push_back({{EntityClass::Vertex, e.v}, {EntityClass::Vertex, e.u}, via, RelationTag::SubgraphAdj});
    }
  }
  return finish(Scheme::SUBGRAPH, std::move(ch));
}

std::map<std::string, std::size_t> channel_count(const WiringSet& w) {
  std::map<std::string, std::size_t> out;
  for (const auto& c : w.channels) ++out[tag_name(c.tag, c.slot)];
  return out;
}

std::size_t total_channels(const std::map<std::string, std::size_t>& counts) {
  std::size_t t = 0;
  for (const auto& [k, v] : counts) t += v;
  return t;
}

bool references_valid(const WiringSet& w, const std::map<EntityClass, int>& sizes) {
  auto ok = [&](const EntityRef& e) {
    auto it = sizes.find(e.cls);
    return it != sizes.end() && e.id >= 0 && e.id < it->second;
  };
  for (const auto& c : w.channels) {
    if (!ok(c.src) || !ok(c.dst) || (c.via && !ok(*c.via))) return false;
    if (c.src == c.dst && c.tag != RelationTag::Self) return false;
  }
  return true;
}

} // namespace hognn
