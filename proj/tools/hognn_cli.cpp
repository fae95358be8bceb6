// hognn: command-line front end over the library. Every subcommand parses,
// dispatches and serializes; nothing else.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hognn/corpus.hpp"
#include "hognn/engine.hpp"
#include "hognn/error.hpp"
#include "hognn/io.hpp"
#include "hognn/transform.hpp"
#include "hognn/wiring.hpp"
#include "hognn/wl.hpp"

namespace fs = std::filesystem;
using namespace hognn;

namespace {

struct Options {
  std::string in, out, graph, a, b, model, kind, scheme, test, corpus_dir, channels;
  std::vector<std::string> tests, relations, motifs;
  std::uint64_t seed = 0;
  int k = 2, k_cl = 3, k_ind = 6, k_cycle = 0, radius = 1, samples = 0, n_max = 4;
  std::vector<int> hops{1};
  bool inclusive = false, local = false, induced = false, dedup = false, mean = false, same_rank = false,
       include_self = false;
};

std::string header(const std::string& command, std::uint64_t seed) {
  return "# hognn " + command + " seed=" + std::to_string(seed) + "\n";
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) std::cout << text;
  else io::write_text(o.out, text);
}

void emit_json(const Options& o, io::Json doc, bool with_seed) {
  if (with_seed) doc["seed"] = o.seed;
  emit(o, io::dump(doc));
}

Graph need_graph(const HOStructure& s, const std::string& what) {
  if (auto g = std::get_if<Graph>(&s)) return *g;
  throw Error(ErrorCode::KindMismatch, what + " needs a graph document");
}

Hypergraph need_hypergraph(const HOStructure& s, const std::string& what) {
  if (auto h = std::get_if<Hypergraph>(&s)) return *h;
  if (auto h = std::get_if<SimplicialComplex>(&s)) return *h;
  throw Error(ErrorCode::KindMismatch, what + " needs a hypergraph document");
}

std::vector<Graph> read_motifs(const Options& o) {
  std::vector<Graph> out;
  for (const auto& p : o.motifs) out.push_back(io::read_graph(p));
  return out;
}

FeaturePooling pooling(const Options& o) { return o.mean ? FeaturePooling::Mean : FeaturePooling::Sum; }

void run_lift(const Options& o) {
  Graph g = io::read_graph(o.in);
  HOStructure s;
  if (o.kind == "cqc") s = clique_complex_lift(g, o.k, pooling(o));
  else if (o.kind == "cell") s = cell_lift(g, o.k_cl, o.k_ind, o.k_cycle, pooling(o));
  else if (o.kind == "isotype") s = iso_type_lift(g, o.k);
  else if (o.kind == "ego") s = ego_net_collection(g, o.radius, o.induced);
  else if (o.kind == "drop") {
    NodeDeletion how;
    if (o.samples > 0) {
      how.mode = NodeDeletion::Mode::Sampled;
      how.count = o.samples;
    }
    how.seed = o.seed;
    s = node_deleted_collection(g, how);
  } else if (o.kind == "motif") s = motif_lift(g, read_motifs(o));
  else if (o.kind == "count") s = subgraph_counts(g, read_motifs(o));
  else throw Error(ErrorCode::ParseError, "unknown lift kind '" + o.kind + "'");
  emit_json(o, io::to_json(s), o.kind == "drop");
}

void run_lower(const Options& o) {
  Hypergraph h = need_hypergraph(io::read_structure(o.in), "lower");
  if (o.kind == "clique") return emit_json(o, io::graph_to_json(clique_expansion(h)), false);
  if (o.kind == "star") return emit_json(o, io::graph_to_json(star_expansion(h)), false);
  if (o.kind == "bipartite") return emit_json(o, io::graph_to_json(bipartite_lowering(h)), false);
  if (o.kind == "weighted") {
    auto w = weighted_lowering(h);
    io::Json doc = io::graph_to_json(w.graph);
    doc["weights"] = w.weights;
    return emit_json(o, doc, false);
  }
  throw Error(ErrorCode::ParseError, "unknown lowering '" + o.kind + "'");
}

std::vector<Relation> relations_of(const Options& o) {
  std::vector<Relation> out;
  for (const auto& r : o.relations) {
    auto rel = parse_relation(r);
    if (!rel) throw Error(ErrorCode::ParseError, "unknown relation '" + r + "'");
    out.push_back(*rel);
  }
  return out;
}

void run_wire(const Options& o) {
  HOStructure s = io::read_structure(o.graph);
  auto scheme = parse_scheme(o.scheme);
  if (!scheme) throw Error(ErrorCode::ParseError, "unknown scheme '" + o.scheme + "'");
  BampOptions bopt;
  bopt.adjacency = {o.include_self, o.same_rank};
  WiringSet w;
  switch (*scheme) {
  case Scheme::IMP: w = compile_imp(need_hypergraph(s, "imp wiring")); break;
  case Scheme::BAMP:
    if (auto cc = std::get_if<CellComplex>(&s)) w = compile_bamp(*cc, relations_of(o), bopt);
    else w = compile_bamp(need_hypergraph(s, "bamp wiring"), relations_of(o), bopt);
    break;
  case Scheme::CWN: {
    auto cc = std::get_if<CellComplex>(&s);
    if (!cc) throw Error(ErrorCode::KindMismatch, "cwn wiring needs a cell complex");
    w = compile_cwn(*cc);
    break;
  }
  case Scheme::DAMP: {
    NodeTupleCollection c;
    if (auto t = std::get_if<NodeTupleCollection>(&s)) c = *t;
    else c = iso_type_lift(need_graph(s, "damp wiring"), o.k, true);
    w = compile_damp(c, o.local, o.inclusive);
    break;
  }
  case Scheme::MULTIHOP: w = compile_multihop(need_graph(s, "multihop wiring"), o.hops); break;
  case Scheme::SUBGRAPH: {
    auto c = std::get_if<SubgraphCollection>(&s);
    if (!c) throw Error(ErrorCode::KindMismatch, "subgraph wiring needs a subgraph collection");
    w = compile_subgraph(*c);
    break;
  }
  }
  emit(o, header("wire", o.seed) + io::channels_csv(w));
}

void run_count(const Options& o) {
  std::istringstream in(io::read_text(o.channels));
  std::map<std::string, std::size_t> counts;
  std::string line;
  bool body = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("scheme,", 0) == 0) continue;
    if (!body) {
      if (line.rfind("src,", 0) != 0) throw Error(ErrorCode::ParseError, "not a channel file");
      body = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 4) throw Error(ErrorCode::ParseError, "short channel row '" + line + "'");
    std::string tag = cells[3];
    if (tag.rfind("hop-", 0) == 0) tag = "hop";
    ++counts[tag];
  }
  emit(o, io::counts_csv(counts));
}

void run_mp(const Options& o) {
  HOStructure s = io::read_structure(o.graph);
  ModelSpec m = io::model_from_json(io::parse(io::read_text(o.model)), o.seed);
  emit(o, header("mp-run", o.seed) + io::embedding_csv(run_model(s, m)));
}

std::string verdict_row(const std::string& test, const std::string& a, const std::string& b, const Verdict& v) {
  return test + "," + a + "," + b + "," + std::string(outcome_name(v.outcome)) + "," + std::to_string(v.rounds) + "," +
         std::to_string(v.messages) + "\n";
}

void run_wl(const Options& o) {
  TestSpec t = parse_test(o.test);
  Verdict v = run_test(t, io::read_graph(o.a), io::read_graph(o.b));
  emit(o, "test,graph_a,graph_b,verdict,rounds,messages\n" +
              verdict_row(test_name(t), fs::path(o.a).stem().string(), fs::path(o.b).stem().string(), v));
}

std::vector<NamedGraph> read_corpus_dir(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<NamedGraph> out;
  for (const auto& p : files) out.push_back({p.stem().string(), io::read_graph(p.string())});
  return out;
}

void run_battery(const Options& o) {
  auto graphs = read_corpus_dir(o.corpus_dir);
  std::vector<std::pair<NamedGraph, NamedGraph>> pairs;
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (std::size_t j = i + 1; j < graphs.size(); ++j) pairs.push_back({graphs[i], graphs[j]});
  std::vector<TestSpec> tests;
  for (const auto& t : o.tests) tests.push_back(parse_test(t));
  auto report = battery(pairs, tests);
  std::string out = io::battery_csv(report);
  out += "# containment: row test distinguishes every pair the column test does\n# ,";
  for (std::size_t j = 0; j < report.tests.size(); ++j) out += (j ? "," : "") + report.tests[j];
  out += "\n";
  for (std::size_t i = 0; i < report.tests.size(); ++i) {
    out += "# " + report.tests[i];
    for (std::size_t j = 0; j < report.tests.size(); ++j) out += report.contains[i][j] ? ",yes" : ",no";
    out += "\n";
  }
  emit(o, out);
}

void run_corpus(const Options& o) {
  Corpus c = enumerate_corpus(o.n_max, o.dedup);
  if (o.out.empty()) {
    for (const auto& g : c.graphs) std::cout << g.id << "," << g.graph.n() << "," << g.graph.m() << "\n";
    return;
  }
  fs::create_directories(o.out);
  std::string index = "id,n,m\n";
  for (const auto& g : c.graphs) {
    io::write_text((fs::path(o.out) / (g.id + ".json")).string(), io::dump(io::graph_to_json(g.graph)));
    index += g.id + "," + std::to_string(g.graph.n()) + "," + std::to_string(g.graph.m()) + "\n";
  }
  io::write_text((fs::path(o.out) / "index.csv").string(), index);
}

int run_validate(const Options& o) {
  auto report = validate(io::read_structure(o.in));
  std::string out = "entity,message\n";
  for (const auto& v : report.violations) out += v.entity + "," + v.message + "\n";
  emit(o, out);
  return report.ok() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order graph data models: lifting, wiring, message passing and WL tests"};
  app.require_subcommand(1);
  Options o;

  auto* lift = app.add_subcommand("lift", "Lift a graph to a higher-order structure");
  lift->add_option("--kind", o.kind, "cqc|cell|isotype|ego|drop|motif|count")->required();
  lift->add_option("--in", o.in, "Graph document")->required();
  lift->add_option("--out", o.out, "Output document (stdout if omitted)");
  lift->add_option("--k", o.k, "Clique size bound (cqc) or tuple length (isotype)");
  lift->add_option("--k-cl", o.k_cl, "Largest clique giving a cell");
  lift->add_option("--k-ind", o.k_ind, "Longest induced cycle giving a 2-cell");
  lift->add_option("--k-cycle", o.k_cycle, "Longest cycle giving a 2-cell");
  lift->add_option("--radius", o.radius, "Ego-net radius");
  lift->add_flag("--induced", o.induced, "Induced ego-nets");
  lift->add_option("--samples", o.samples, "Sampled node deletions (0 = every single vertex)");
  lift->add_option("--motif", o.motifs, "Motif graph document (repeatable)");
  lift->add_flag("--mean", o.mean, "Mean-pool lifted features");
  lift->add_option("--seed", o.seed, "Random seed");

  auto* lower = app.add_subcommand("lower", "Lower a hypergraph to a graph");
  lower->add_option("--kind", o.kind, "clique|star|bipartite|weighted")->required();
  lower->add_option("--in", o.in, "Hypergraph document")->required();
  lower->add_option("--out", o.out, "Output document");

  auto* wire = app.add_subcommand("wire", "Compile a wiring set to a channel list");
  wire->add_option("--scheme", o.scheme, "imp|bamp|cwn|damp|multihop|subgraph")->required();
  wire->add_option("--graph", o.graph, "Structure document")->required();
  wire->add_option("--out", o.out, "Channel CSV");
  wire->add_option("--k", o.k, "Tuple length when lifting a plain graph for damp");
  wire->add_flag("--inclusive", o.inclusive, "Inclusive down adjacency");
  wire->add_flag("--local", o.local, "Local down adjacency");
  wire->add_option("--relations", o.relations, "boundary,coboundary,upper,lower")->delimiter(',');
  wire->add_flag("--same-rank", o.same_rank, "Upper/lower adjacency within one rank");
  wire->add_flag("--include-self", o.include_self, "Entities are their own upper/lower neighbours");
  wire->add_option("--hops", o.hops, "Hop lengths")->delimiter(',');
  wire->add_option("--seed", o.seed, "Recorded in the header");

  auto* count = app.add_subcommand("count", "Count channels per relation tag");
  count->add_option("--channels", o.channels, "Channel CSV from wire")->required();
  count->add_option("--out", o.out, "Count CSV");

  auto* mp = app.add_subcommand("mp-run", "Run a model and print the graph embedding");
  mp->add_option("--model", o.model, "Model document")->required();
  mp->add_option("--graph", o.graph, "Structure document")->required();
  mp->add_option("--seed", o.seed, "Parameter seed");
  mp->add_option("--out", o.out, "Embedding CSV");

  auto* wl = app.add_subcommand("wl-test", "Compare two graphs with a refinement test");
  wl->add_option("--test", o.test, "wl1|kwl:K|kfwl:K|dkwl:K|klwlp:K|klwlpa:K|lifted:cqc|lifted:cell")->required();
  wl->add_option("--a", o.a, "First graph")->required();
  wl->add_option("--b", o.b, "Second graph")->required();
  wl->add_option("--out", o.out, "Verdict CSV");

  auto* bat = app.add_subcommand("battery", "Run tests on every pair of a corpus directory");
  bat->add_option("--corpus", o.corpus_dir, "Directory of graph documents")->required();
  bat->add_option("--tests", o.tests, "Comma-separated tests")->delimiter(',')->required();
  bat->add_option("--out", o.out, "Report CSV");

  auto* corpus = app.add_subcommand("corpus", "Enumerate small graphs");
  corpus->add_option("--n-max", o.n_max, "Largest vertex count (<= 7)");
  corpus->add_flag("--dedup", o.dedup, "One graph per isomorphism class");
  corpus->add_option("--out", o.out, "Output directory");

  auto* val = app.add_subcommand("validate", "Check a structure document");
  val->add_option("--in", o.in, "Structure document")->required();
  val->add_option("--out", o.out, "Violation CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*lift) run_lift(o);
    else if (*lower) run_lower(o);
    else if (*wire) run_wire(o);
    else if (*count) run_count(o);
    else if (*mp) run_mp(o);
    else if (*wl) run_wl(o);
    else if (*bat) run_battery(o);
    else if (*corpus) run_corpus(o);
    else if (*val) return run_validate(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
