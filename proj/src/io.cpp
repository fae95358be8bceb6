#include "hognn/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hognn/error.hpp"
#include "hognn/model.hpp"

namespace hognn::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) bad(std::string("missing field '") + key + "'");
  return doc.at(key);
}

template <class T> T get(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

Json rows_json(std::span<const double> flat, std::size_t width) {
  Json out = Json::array();
  if (width == 0) return out;
  for (std::size_t i = 0; i + width <= flat.size(); i += width) out.push_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(i), flat.begin() + static_cast<std::ptrdiff_t>(i + width)));
  return out;
}

/// Flattens a list of equal-length rows; *width is set from the first row or
/// checked against it.
std::vector<double> rows_from(const Json& j, std::size_t* width, const char* what) {
  std::vector<double> flat;
  if (!j.is_array()) bad(std::string(what) + " must be a list of rows");
  for (const auto& row : j) {
    auto r = get<std::vector<double>>(row, what);
    if (*width == 0) *width = r.size();
    if (r.size() != *width) throw Error(ErrorCode::FeatureWidthMismatch, std::string(what) + " rows differ in width");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return flat;
}

Json feature_rows_json(const FeatureRows& f) { return rows_json(f.data, f.width); }

FeatureRows feature_rows_from(const Json& features, const char* key) {
  FeatureRows f;
  if (!features.is_object() || !features.contains(key)) return f;
  f.data = rows_from(features.at(key), &f.width, key);
  if (f.data.empty()) f.width = 0;
  return f;
}

std::vector<std::vector<int>> int_lists(const Json& j, const char* what) { return get<std::vector<std::vector<int>>>(j, what); }

} // namespace

Json graph_to_json(const Graph& g) {
  Json out;
  out["kind"] = "graph";
  out["n"] = g.n();
  if (g.directed()) out["directed"] = true;
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  out["edges"] = edges;
  const auto& f = g.features();
  if (f.width > 0 && (f.has_vertex() || f.has_edge())) {
    Json fj;
    fj["width"] = f.width;
    if (f.has_vertex()) fj["vertex"] = rows_json(f.vertex, f.width);
    if (f.has_edge()) fj["edge"] = rows_json(f.edge, f.width);
    out["features"] = fj;
  }
  return out;
}

Graph graph_from_json(const Json& doc) {
  if (doc.contains("kind") && doc.at("kind") != "graph") bad("expected a graph document");
  const int n = get<int>(field(doc, "n"), "n");
  std::vector<std::pair<int, int>> edges;
  if (doc.contains("edges"))
    for (const auto& e : int_lists(doc.at("edges"), "edges")) {
      if (e.size() != 2) bad("edge must have two endpoints");
      edges.push_back({e[0], e[1]});
    }
  const bool directed = doc.value("directed", false);
  Features f;
  if (doc.contains("features")) {
    const Json& fj = doc.at("features");
    f.width = fj.value("width", std::size_t{0});
    if (fj.contains("vertex")) f.vertex = rows_from(fj.at("vertex"), &f.width, "vertex features");
    if (fj.contains("edge")) f.edge = rows_from(fj.at("edge"), &f.width, "edge features");
  }
  return Graph::build(n, edges, directed, std::move(f));
}

namespace {

Json hypergraph_json(const Hypergraph& h, const char* kind) {
  Json out;
  out["kind"] = kind;
  out["n"] = h.n;
  out["hyperedges"] = h.hyperedges;
  if (!h.vertex_features.empty() || !h.hyperedge_features.empty()) {
    Json fj;
    if (!h.vertex_features.empty()) fj["vertex"] = feature_rows_json(h.vertex_features);
    if (!h.hyperedge_features.empty()) fj["hyperedge"] = feature_rows_json(h.hyperedge_features);
    out["features"] = fj;
  }
  return out;
}

Hypergraph hypergraph_from(const Json& doc) {
  Json features = doc.value("features", Json::object());
  return Hypergraph::build(get<int>(field(doc, "n"), "n"), int_lists(field(doc, "hyperedges"), "hyperedges"),
                           feature_rows_from(features, "vertex"), feature_rows_from(features, "hyperedge"));
}

Json graph_list(const std::vector<Graph>& gs) {
  Json out = Json::array();
  for (const auto& g : gs) out.push_back(graph_to_json(g));
  return out;
}

std::vector<Graph> graphs_from(const Json& j) {
  if (!j.is_array()) bad("expected a list of graphs");
  std::vector<Graph> out;
  for (const auto& g : j) out.push_back(graph_from_json(g));
  return out;
}

template <class T> Json int_rows(const std::vector<T>& flat, std::size_t width) {
  Json out = Json::array();
  if (width == 0) return out;
  for (std::size_t i = 0; i + width <= flat.size(); i += width)
    out.push_back(std::vector<T>(flat.begin() + static_cast<std::ptrdiff_t>(i), flat.begin() + static_cast<std::ptrdiff_t>(i + width)));
  return out;
}

std::vector<std::int64_t> int_rows_from(const Json& j, std::size_t width, const char* what) {
  std::vector<std::int64_t> flat;
  for (const auto& row : j) {
    auto r = get<std::vector<std::int64_t>>(row, what);
    if (r.size() != width) bad(std::string(what) + " row width must equal the motif count");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return flat;
}

} // namespace

Json to_json(const HOStructure& s) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Graph>) {
          return graph_to_json(x);
        } else if constexpr (std::is_same_v<T, SimplicialComplex>) {
          return hypergraph_json(x, "sc");
        } else if constexpr (std::is_same_v<T, Hypergraph>) {
          return hypergraph_json(x, "hypergraph");
        } else if constexpr (std::is_same_v<T, CellComplex>) {
          Json out;
          out["kind"] = "cc";
          Json cells = Json::array();
          for (const auto& c : x.cells) {
            Json cj;
            cj["id"] = c.id;
            cj["dim"] = c.dim;
            cj["boundary"] = c.boundary;
            cells.push_back(cj);
          }
          out["cells"] = cells;
          if (!x.features.empty()) out["features"] = Json{{"cell", feature_rows_json(x.features)}};
          return out;
        } else if constexpr (std::is_same_v<T, NodeTupleCollection>) {
          Json out;
          out["kind"] = "ntcol";
          out["base"] = graph_to_json(x.base);
          out["k_max"] = x.k_max;
          out["tuples"] = x.tuples;
          if (!x.tuple_features.empty()) out["features"] = Json{{"tuple", feature_rows_json(x.tuple_features)}};
          return out;
        } else if constexpr (std::is_same_v<T, SubgraphCollection>) {
          Json out;
          out["kind"] = "scol";
          out["base"] = graph_to_json(x.base);
          if (x.ordered) out["ordered"] = true;
          Json subs = Json::array();
          for (const auto& sg : x.subgraphs) {
            Json sj;
            sj["vertices"] = sg.vertices;
            Json edges = Json::array();
            for (const auto& e : sg.edges) edges.push_back({e.u, e.v});
            sj["edges"] = edges;
            if (sg.anchor) sj["anchor"] = *sg.anchor;
            subs.push_back(sj);
          }
          out["subgraphs"] = subs;
          if (!x.subgraph_features.empty()) out["features"] = Json{{"subgraph", feature_rows_json(x.subgraph_features)}};
          return out;
        } else if constexpr (std::is_same_v<T, MotifGraph>) {
          Json out;
          out["kind"] = "motif";
          out["base"] = graph_to_json(x.base);
          out["motifs"] = graph_list(x.motifs);
          out["weights"] = x.weights;
          return out;
        } else if constexpr (std::is_same_v<T, SubgraphCountGraph>) {
          Json out;
          out["kind"] = "scnt";
          out["base"] = graph_to_json(x.base);
          out["motifs"] = graph_list(x.motifs);
          out["vertex_counts"] = int_rows(x.vertex_counts, x.motifs.size());
          if (!x.edge_counts.empty()) out["edge_counts"] = int_rows(x.edge_counts, x.motifs.size());
          return out;
        } else {
          Json out;
          out["kind"] = "nested";
          out["outer"] = graph_to_json(x.outer);
          out["inner"] = graph_list(x.inner);
          return out;
        }
      },
      s);
}

HOStructure from_json(const Json& doc) {
  const auto kind_text = get<std::string>(field(doc, "kind"), "kind");
  auto kind = parse_kind(kind_text);
  if (!kind) bad("unknown kind '" + kind_text + "'");
  switch (*kind) {
  case StructureKind::Graph: return graph_from_json(doc);
  case StructureKind::Hypergraph: return hypergraph_from(doc);
  case StructureKind::SC: return SimplicialComplex::from(hypergraph_from(doc));
  case StructureKind::CC: {
    std::vector<Cell> cells;
    for (const auto& cj : field(doc, "cells"))
      cells.push_back({get<int>(field(cj, "id"), "id"), get<int>(field(cj, "dim"), "dim"),
                       get<std::vector<int>>(cj.value("boundary", Json::array()), "boundary")});
    return CellComplex::build(std::move(cells), feature_rows_from(doc.value("features", Json::object()), "cell"));
  }
  case StructureKind::NTCol:
    return NodeTupleCollection::build(graph_from_json(field(doc, "base")), int_lists(field(doc, "tuples"), "tuples"),
                                      doc.value("k_max", 2),
                                      feature_rows_from(doc.value("features", Json::object()), "tuple"));
  case StructureKind::SCol: {
    SubgraphCollection c;
    c.base = graph_from_json(field(doc, "base"));
    c.ordered = doc.value("ordered", false);
    for (const auto& sj : field(doc, "subgraphs")) {
      Subgraph sg;
      sg.vertices = get<std::vector<int>>(field(sj, "vertices"), "vertices");
      if (sj.contains("edges"))
        for (const auto& e : int_lists(sj.at("edges"), "edges")) {
          if (e.size() != 2) bad("edge must have two endpoints");
          sg.edges.push_back({std::min(e[0], e[1]), std::max(e[0], e[1])});
        }
      if (sj.contains("anchor") && !sj.at("anchor").is_null()) sg.anchor = get<int>(sj.at("anchor"), "anchor");
      c.subgraphs.push_back(std::move(sg));
    }
    c.subgraph_features = feature_rows_from(doc.value("features", Json::object()), "subgraph");
    return c;
  }
  case StructureKind::Motif: {
    MotifGraph m;
    m.base = graph_from_json(field(doc, "base"));
    m.motifs = graphs_from(field(doc, "motifs"));
    m.weights = get<std::vector<std::vector<std::int64_t>>>(field(doc, "weights"), "weights");
    return m;
  }
  case StructureKind::SCnt: {
    SubgraphCountGraph c;
    c.base = graph_from_json(field(doc, "base"));
    c.motifs = graphs_from(field(doc, "motifs"));
    c.vertex_counts = int_rows_from(field(doc, "vertex_counts"), c.motifs.size(), "vertex_counts");
    if (doc.contains("edge_counts")) c.edge_counts = int_rows_from(doc.at("edge_counts"), c.motifs.size(), "edge_counts");
    return c;
  }
  case StructureKind::Nested: {
    NestedGraph n;
    n.outer = graph_from_json(field(doc, "outer"));
    n.inner = graphs_from(field(doc, "inner"));
    return n;
  }
  }
  bad("unknown kind");
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write '" + path + "'");
  out << text;
}

HOStructure read_structure(const std::string& path) { return from_json(parse(read_text(path))); }

Graph read_graph(const std::string& path) {
  auto s = read_structure(path);
  if (auto g = std::get_if<Graph>(&s)) return *g;
  throw Error(ErrorCode::KindMismatch, "'" + path + "' is not a graph document");
}

Graph parse_edge_list(const std::string& text, const std::string& feature_csv) {
  std::istringstream in(text);
  int n = 0;
  long m = 0;
  if (!(in >> n >> m) || n < 0 || m < 0) bad("edge list must start with 'n m'");
  std::vector<std::pair<int, int>> edges;
  for (long i = 0; i < m; ++i) {
    int u, v;
    if (!(in >> u >> v)) bad("edge list ended after " + std::to_string(i) + " of " + std::to_string(m) + " edges");
    edges.push_back({u, v});
  }
  Features f;
  if (!feature_csv.empty()) {
    std::istringstream rows(feature_csv);
    std::string line;
    while (std::getline(rows, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      std::istringstream cells(line);
      std::string cell;
      while (std::getline(cells, cell, ',')) {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          bad("bad feature value '" + cell + "'");
        }
      }
      if (f.width == 0) f.width = row.size();
      if (row.size() != f.width) throw Error(ErrorCode::FeatureWidthMismatch, "feature rows differ in width");
      f.vertex.insert(f.vertex.end(), row.begin(), row.end());
    }
  }
  return Graph::build(n, edges, false, std::move(f));
}

std::string format_edge_list(const Graph& g) {
  std::string out = std::to_string(g.n()) + " " + std::to_string(g.m()) + "\n";
  for (const auto& e : g.edges()) out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string matrix_csv(const Mat& m, const std::vector<std::string>& rows, const std::vector<std::string>& cols) {
  std::string out = "row";
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    out += "," + (static_cast<std::size_t>(j) < cols.size() ? cols[static_cast<std::size_t>(j)] : "c" + std::to_string(j));
  out += "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += static_cast<std::size_t>(i) < rows.size() ? rows[static_cast<std::size_t>(i)] : "r" + std::to_string(i);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + format_double(m(i, j));
    out += "\n";
  }
  return out;
}

std::string embedding_csv(const RowVec& v) {
  std::string out;
  for (Eigen::Index j = 0; j < v.size(); ++j) out += (j ? "," : "") + format_double(v(j));
  return out + "\n";
}

std::vector<std::string> entity_names(const HOStructure& s, EntityClass c) {
  std::vector<std::string> names;
  std::size_t count = 0;
  if (c == EntityClass::Vertex) count = static_cast<std::size_t>(vertex_count(s));
  if (auto h = std::get_if<Hypergraph>(&s); h && c == EntityClass::Hyperedge) count = h->m();
  if (auto h = std::get_if<SimplicialComplex>(&s); h && c == EntityClass::Hyperedge) count = h->m();
  if (auto cc = std::get_if<CellComplex>(&s); cc && c == EntityClass::Cell) count = cc->cells.size();
  if (auto t = std::get_if<NodeTupleCollection>(&s); t && c == EntityClass::Tuple) count = t->tuples.size();
  if (auto sc = std::get_if<SubgraphCollection>(&s); sc && c == EntityClass::Subgraph) count = sc->subgraphs.size();
  for (std::size_t i = 0; i < count; ++i) names.push_back(to_string(EntityRef{c, static_cast<int>(i)}));
  return names;
}

std::string channels_csv(const WiringSet& w) {
  std::string out = "scheme," + std::string(scheme_name(w.scheme)) + "\nsrc,dst,via,tag,weight\n";
  for (const auto& ch : w.channels)
    out += to_string(ch.src) + "," + to_string(ch.dst) + "," + (ch.via ? to_string(*ch.via) : "") + "," + tag_name(ch.tag, ch.slot) +
           "," + format_double(ch.weight) + "\n";
  return out;
}

std::string counts_csv(const std::map<std::string, std::size_t>& counts) {
  std::string out = "tag,count\n";
  for (const auto& [tag, c] : counts) out += tag + "," + std::to_string(c) + "\n";
  return out + "total," + std::to_string(total_channels(counts)) + "\n";
}

namespace {

Json matrix_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    out.push_back(row);
  }
  return out;
}

Mat matrix_from(const Json& j, const char* what) {
  std::size_t width = 0;
  auto flat = rows_from(j, &width, what);
  const auto rows = width == 0 ? 0 : static_cast<Eigen::Index>(flat.size() / width);
  Mat m(rows, static_cast<Eigen::Index>(width));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(i, c) = flat[static_cast<std::size_t>(i) * width + static_cast<std::size_t>(c)];
  return m;
}

Json vector_json(const RowVec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

RowVec vector_from(const Json& j, const char* what) {
  auto v = get<std::vector<double>>(j, what);
  return Eigen::Map<RowVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json function_json(const FunctionSpec& f) {
  Json out;
  out["kind"] = function_kind_name(f.kind);
  if (f.kind == FunctionKind::Project || f.kind == FunctionKind::FixedScalar || f.kind == FunctionKind::Attention) out["arg"] = f.arg;
  if (f.kind == FunctionKind::FixedScalar) out["rule"] = f.rule;
  if (f.kind == FunctionKind::Attention) out["score"] = nonlinearity_name(f.score);
  if (f.in || f.hidden || f.out) out["shape"] = {f.in, f.hidden, f.out};
  if (f.weight.size()) out["weight"] = matrix_json(f.weight);
  if (f.bias.size()) out["bias"] = vector_json(f.bias);
  if (f.weight2.size()) out["weight2"] = matrix_json(f.weight2);
  if (f.bias2.size()) out["bias2"] = vector_json(f.bias2);
  return out;
}

FunctionSpec function_from(const Json& j) {
  FunctionSpec f;
  f.kind = parse_function_kind(get<std::string>(field(j, "kind"), "function kind"));
  f.arg = j.value("arg", 1);
  f.rule = j.value("rule", std::string("one"));
  if (j.contains("score")) f.score = parse_nonlinearity(get<std::string>(j.at("score"), "score"));
  if (j.contains("shape")) {
    auto s = get<std::vector<int>>(j.at("shape"), "shape");
    if (s.size() != 3) bad("function shape must be [in, hidden, out]");
    f.in = s[0], f.hidden = s[1], f.out = s[2];
  }
  if (j.contains("weight")) f.weight = matrix_from(j.at("weight"), "weight");
  if (j.contains("bias")) f.bias = vector_from(j.at("bias"), "bias");
  if (j.contains("weight2")) f.weight2 = matrix_from(j.at("weight2"), "weight2");
  if (j.contains("bias2")) f.bias2 = vector_from(j.at("bias2"), "bias2");
  return f;
}

const char* relation_name(Relation r) {
  switch (r) {
  case Relation::Boundary: return "boundary";
  case Relation::Coboundary: return "coboundary";
  case Relation::Upper: return "upper";
  case Relation::Lower: return "lower";
  }
  return "?";
}

} // namespace

Json model_to_json(const ModelSpec& m) {
  Json out;
  out["name"] = m.name;
  Json layers = Json::array();
  for (const auto& l : m.layers) {
    Json lj;
    lj["kind"] = layer_kind_name(l.kind);
    Json psi = Json::object();
    for (const auto& [site, f] : l.psi) psi[site] = function_json(f);
    lj["psi"] = psi;
    lj["phi"] = function_json(l.phi);
    lj["phi_edge"] = function_json(l.phi_edge);
    Json agg = Json::object();
    for (const auto& [site, a] : l.aggregators) agg[site] = aggregator_name(a);
    lj["aggregators"] = agg;
    lj["sigma"] = nonlinearity_name(l.sigma);
    if (l.theta.size()) lj["theta"] = matrix_json(l.theta);
    if (l.theta2.size()) lj["theta2"] = matrix_json(l.theta2);
    if (l.theta_in || l.theta_out) lj["theta_shape"] = {l.theta_in, l.theta_out};
    if (!l.hyperedge_weights.empty()) lj["hyperedge_weights"] = l.hyperedge_weights;
    if (!l.relations.empty()) {
      Json rel = Json::array();
      for (auto r : l.relations) rel.push_back(relation_name(r));
      lj["relations"] = rel;
    }
    lj["adjacency"] = {{"include_self", l.adjacency.include_self}, {"same_rank_only", l.adjacency.same_rank_only}};
    if (l.kind == LayerKind::Kgnn) lj["local"] = l.local;
    if (l.kind == LayerKind::Mp) lj["hops"] = l.hops;
    if (l.kind == LayerKind::Hat) {
      lj["attention"] = function_json(l.attention);
      lj["hat_normalization"] = l.hat_normalization == HatNormalization::OverMembers ? "members" : "incident";
    }
    layers.push_back(lj);
  }
  out["layers"] = layers;
  out["readout"] = readout_name(m.readout);
  if (m.per_dimension) out["per_dimension"] = true;
  return out;
}

ModelSpec model_from_json(const Json& doc, std::uint64_t seed) {
  if (doc.contains("preset")) {
    ModelSpec m = presets::by_name(get<std::string>(doc.at("preset"), "preset"), doc.value("width", 1), seed);
    if (doc.contains("readout")) m.readout = parse_readout(get<std::string>(doc.at("readout"), "readout"));
    return m;
  }
  ModelSpec m;
  m.name = doc.value("name", std::string("custom"));
  for (const auto& lj : field(doc, "layers")) {
    LayerSpec l;
    l.kind = parse_layer_kind(get<std::string>(field(lj, "kind"), "layer kind"));
    if (lj.contains("psi"))
      for (const auto& [site, f] : lj.at("psi").items()) l.psi[site] = function_from(f);
    if (lj.contains("phi")) l.phi = function_from(lj.at("phi"));
    if (lj.contains("phi_edge")) l.phi_edge = function_from(lj.at("phi_edge"));
    if (lj.contains("aggregators"))
      for (const auto& [site, a] : lj.at("aggregators").items()) l.aggregators[site] = parse_aggregator(get<std::string>(a, "aggregator"));
    if (lj.contains("sigma")) l.sigma = parse_nonlinearity(get<std::string>(lj.at("sigma"), "sigma"));
    if (lj.contains("theta")) l.theta = matrix_from(lj.at("theta"), "theta");
    if (lj.contains("theta2")) l.theta2 = matrix_from(lj.at("theta2"), "theta2");
    if (lj.contains("theta_shape")) {
      auto s = get<std::vector<int>>(lj.at("theta_shape"), "theta_shape");
      if (s.size() != 2) bad("theta_shape must be [in, out]");
      l.theta_in = s[0], l.theta_out = s[1];
    }
    if (lj.contains("hyperedge_weights")) l.hyperedge_weights = get<std::vector<double>>(lj.at("hyperedge_weights"), "hyperedge_weights");
    if (lj.contains("relations"))
      for (const auto& r : lj.at("relations")) {
        auto rel = parse_relation(get<std::string>(r, "relation"));
        if (!rel) bad("unknown relation " + r.dump());
        l.relations.push_back(*rel);
      }
    if (lj.contains("adjacency")) {
      l.adjacency.include_self = lj.at("adjacency").value("include_self", false);
      l.adjacency.same_rank_only = lj.at("adjacency").value("same_rank_only", false);
    }
    l.local = lj.value("local", false);
    if (lj.contains("hops")) l.hops = get<std::vector<int>>(lj.at("hops"), "hops");
    if (lj.contains("attention")) l.attention = function_from(lj.at("attention"));
    if (lj.contains("hat_normalization")) {
      auto h = get<std::string>(lj.at("hat_normalization"), "hat_normalization");
      if (h == "members") l.hat_normalization = HatNormalization::OverMembers;
      else if (h == "incident") l.hat_normalization = HatNormalization::OverIncident;
      else bad("unknown hat normalization '" + h + "'");
    }
    m.layers.push_back(std::move(l));
  }
  if (doc.contains("readout")) m.readout = parse_readout(get<std::string>(doc.at("readout"), "readout"));
  m.per_dimension = doc.value("per_dimension", false);
  initialize_parameters(m, seed);
  return m;
}

std::string battery_csv(const BatteryReport& r) {
  std::string out = "test,graph_a,graph_b,verdict,rounds,messages\n";
  for (const auto& row : r.rows)
    out += row.test + "," + row.a + "," + row.b + "," + std::string(outcome_name(row.verdict.outcome)) + "," +
           std::to_string(row.verdict.rounds) + "," + std::to_string(row.verdict.messages) + "\n";
  return out;
}

} // namespace hognn::io
