#include "doctest.h"

#include <random>

#include "hognn/adjacency.hpp"
#include "hognn/engine.hpp"
#include "hognn/error.hpp"
#include "hognn/transform.hpp"
#include "support.hpp"

using namespace hognn;
using namespace hognn::testing;

namespace {

Mat ones(Eigen::Index r, Eigen::Index c = 1) { return Mat::Ones(r, c); }

Mat scalar(double v) { return Mat::Constant(1, 1, v); }

ModelState cell_ones(const CellComplex& c) {
  ModelState s;
  s.features[EntityClass::Cell] = ones(static_cast<Eigen::Index>(c.cells.size()));
  return s;
}

LayerSpec sum_layer(LayerKind kind) {
  LayerSpec l;
  l.kind = kind;
  for (const char* site : {"boundary", "coboundary", "upper", "lower"}) l.psi[site] = FunctionSpec::project(1);
  l.phi = FunctionSpec::sum_args();
  return l;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ParseError;
}

} // namespace

TEST_CASE("built-in functions") {
  RowVec a(2), b(2);
  a << 1, 2;
  b << 3, 4;
  CHECK(apply_function(FunctionSpec::identity(), {a, b}).size() == 4);
  CHECK(apply_function(FunctionSpec::project(1), {a, b}) == b);
  CHECK(apply_function(FunctionSpec::sum_args(), {a, b})[1] == 6);
  CHECK(apply_function(FunctionSpec::fixed("one", 0), {a, b}, 0.5)[1] == 1);
  Mat w(4, 1);
  w << 1, 1, 1, 1;
  RowVec bias(1);
  bias << -20;
  CHECK(apply_function(FunctionSpec::linear(w, bias), {a, b})[0] == -10);
  CHECK(apply_function(FunctionSpec::mlp(w, bias, scalar(3), RowVec::Constant(1, 1)), {a, b})[0] == 1);
  RowVec c(3);
  CHECK(code_of([&] { apply_function(FunctionSpec::sum_args(), {a, c}); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] { apply_function(FunctionSpec::project(2), {a, b}); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([] { parse_function_kind("cubic"); }) == ErrorCode::UnknownFunctionKind);
}

TEST_CASE("IMP hand evaluation") {
  Hypergraph h = Hypergraph::build(2, {{0, 1}});
  ModelState s;
  s.features[EntityClass::Vertex] = ones(2);
  s.features[EntityClass::Hyperedge] = ones(1);
  LayerSpec l;
  l.kind = LayerKind::Imp;
  l.psi["vertex"] = FunctionSpec::project(1);
  l.phi_edge = FunctionSpec::project(1);
  l.phi = FunctionSpec::project(1);
  auto out = imp_layer(h, s, l);
  CHECK(out.at(EntityClass::Hyperedge)(0, 0) == 2);
  CHECK(out.at(EntityClass::Vertex)(0, 0) == 2);
  CHECK(out.at(EntityClass::Vertex)(1, 0) == 2);

  // Max for ⊗ and sum for ⊙ give different edge states and messages.
  Hypergraph h3 = Hypergraph::build(3, {{0, 1, 2}});
  ModelState s3;
  Mat xv(3, 1);
  xv << 1, 2, 4;
  s3.features[EntityClass::Vertex] = xv;
  s3.features[EntityClass::Hyperedge] = ones(1);
  l.aggregators["message"] = Aggregator::Max;
  auto o3 = imp_layer(h3, s3, l);
  CHECK(o3.at(EntityClass::Hyperedge)(0, 0) == 7);
  CHECK(o3.at(EntityClass::Vertex)(2, 0) == 4);
}

TEST_CASE("IMP without hyperedges leaves vertices unchanged") {
  Hypergraph h = Hypergraph::build(3, {});
  ModelState s = initial_state(HOStructure(h));
  LayerSpec l;
  l.kind = LayerKind::Imp;
  auto out = imp_layer(h, s, l);
  CHECK(out.at(EntityClass::Vertex) == s.at(EntityClass::Vertex));

  ModelState bad = s;
  bad.features[EntityClass::Vertex] = ones(2);
  CHECK(code_of([&] { imp_layer(h, bad, l); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("hypergraph convolution") {
  Mat b = incidence_matrix(as_hypergraph(named::complete(2)));
  Mat x(2, 1);
  x << 1, 0;
  Mat y = hgconv_pre_activation(b, {}, x, scalar(1));
  CHECK(y(0, 0) == doctest::Approx(0.5));
  CHECK(y(1, 0) == doctest::Approx(0.5));

  Mat bi = incidence_matrix(Hypergraph::build(3, {{0, 1}}));
  Mat xi = ones(3);
  CHECK(hgconv_pre_activation(bi, {}, xi, scalar(1))(2, 0) == 0);
  CHECK(code_of([&] { hgconv_pre_activation(bi, {1, 2}, xi, scalar(1)); }) == ErrorCode::ShapeMismatch);

  // W enters as a diagonal over hyperedges.
  Hypergraph hw = Hypergraph::build(2, {{0, 1}, {1}});
  REQUIRE(hw.hyperedges[0] == VertexSet{1});
  Mat bw = incidence_matrix(hw);
  Mat xw(2, 1);
  xw << 1, 0;
  Mat yw = hgconv_pre_activation(bw, {3.0, 1.0}, xw, scalar(1));
  CHECK(yw(0, 0) == doctest::Approx(0.5));
  CHECK(yw(1, 0) == doctest::Approx(0.5 / 2.0));
}

TEST_CASE("hypergraph convolution recovers GCN on plain graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = random_graph(6, 0.5, rng);
    bool isolated = false;
    for (int v = 0; v < g.n(); ++v) isolated |= g.degree(v) == 0;
    if (isolated) continue;
    Mat x = random_matrix(6, 3, 100 + static_cast<std::uint64_t>(trial));
    Mat theta = random_matrix(3, 2, 200 + static_cast<std::uint64_t>(trial));
    Mat a = hgconv_pre_activation(incidence_matrix(as_hypergraph(g)), {}, x, theta);
    Mat r = gcn_reference(g, x, theta);
    CHECK((a - r).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("HAT attention") {
  Hypergraph single = Hypergraph::build(1, {{0}});
  ModelState s1 = initial_state(HOStructure(single));
  FunctionSpec att = FunctionSpec::attention(scalar(0.7));
  CHECK(hat_attention(single, s1, att)(0, 0) == doctest::Approx(1.0));

  Hypergraph pair = Hypergraph::build(2, {{0, 1}});
  Mat ba = hat_attention(pair, initial_state(HOStructure(pair)), att);
  CHECK(ba(0, 0) == doctest::Approx(0.5));
  CHECK(ba(1, 0) == doctest::Approx(0.5));

  Hypergraph none = Hypergraph::build(2, {});
  CHECK(code_of([&] { hat_attention(none, initial_state(HOStructure(none)), att); }) == ErrorCode::EmptyIncidence);
}

TEST_CASE("HAT seeded golden matrix") {
  Hypergraph h = Hypergraph::build(3, {{0, 1}, {0, 1, 2}});
  auto spec = presets::hat(2, 42);
  ModelState s;
  Mat xv(3, 2), xe(2, 2);
  xv << 1, 0, 1, 1, 1, 2;
  xe << 2, 1, 3, 3;
  s.features[EntityClass::Vertex] = xv;
  s.features[EntityClass::Hyperedge] = xe;
  const FunctionSpec& att = spec.layers[0].attention;
  Mat b = hat_attention(h, s, att);

  // Independent evaluation of the softmax over each hyperedge's members.
  Mat pv = xv * att.weight, pe = xe * att.weight;
  for (Eigen::Index j = 0; j < 2; ++j) {
    double z = 0;
    for (int v : h.hyperedges[static_cast<std::size_t>(j)]) z += std::exp(pv.row(v).dot(pe.row(j)));
    for (int v = 0; v < 3; ++v) {
      const auto& e = h.hyperedges[static_cast<std::size_t>(j)];
      const bool member = std::find(e.begin(), e.end(), v) != e.end();
      CHECK(b(v, j) == doctest::Approx(member ? std::exp(pv.row(v).dot(pe.row(j))) / z : 0.0).epsilon(1e-12));
    }
    CHECK(b.col(j).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }

  Mat golden(3, 2);
  golden << 0.39011795319993209, 0.059195806671182488, 0.60988204680006786, 0.20824174648250252, 0.0,
      0.73256244684631489;
  CHECK((b - golden).cwiseAbs().maxCoeff() < 1e-12);

  Mat rows = hat_attention(h, s, att, HatNormalization::OverIncident);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(rows.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("BAMP on the clique complex of K3") {
  auto sc = clique_complex_lift(named::complete(3), 3);
  ModelState s = initial_state(HOStructure(sc));
  s.features[EntityClass::Hyperedge] << 2, 2, 2, 3;
  LayerSpec l = sum_layer(LayerKind::Bamp);
  l.relations = {Relation::Boundary};
  auto out = bamp_layer(sc, s, l);
  // Triangle: own 3 plus three edges of 2 plus three vertices of 1.
  CHECK(out.at(EntityClass::Hyperedge)(3, 0) == 12);
  CHECK(out.at(EntityClass::Hyperedge)(0, 0) == 4);
  CHECK(out.at(EntityClass::Vertex)(0, 0) == 1);

  l.relations = {};
  CHECK(code_of([&] { bamp_layer(sc, s, l); }) == ErrorCode::EmptyRelationSet);
}

TEST_CASE("BAMP upper messages see the shared coboundary") {
  auto sc = clique_complex_lift(named::complete(3), 3);
  ModelState s = initial_state(HOStructure(sc));
  LayerSpec l = sum_layer(LayerKind::Bamp);
  l.relations = {Relation::Upper};
  l.adjacency.same_rank_only = true;
  l.psi["upper"] = FunctionSpec::project(2);
  s.features[EntityClass::Hyperedge](3, 0) = 10;
  auto out = bamp_layer(sc, s, l);
  // Each edge hears twice through the triangle.
  CHECK(out.at(EntityClass::Hyperedge)(0, 0) == 1 + 20);
}

TEST_CASE("CWN on the lifted hexagon") {
  auto c = cell_lift(named::cycle(6), 2, 6, 0);
  LayerSpec l = sum_layer(LayerKind::Cwn);
  auto out = cwn_layer(c, cell_ones(c), l).at(EntityClass::Cell);
  CHECK(out(12, 0) == 7);
  for (int v = 0; v < 6; ++v) CHECK(out(v, 0) == 3);
  for (int e = 6; e < 12; ++e) CHECK(out(e, 0) == 8);

  auto points = CellComplex::build({{0, 0, {}}, {1, 0, {}}});
  ModelState p = cell_ones(points);
  p.features[EntityClass::Cell](1, 0) = 5;
  CHECK(cwn_layer(points, p, l).at(EntityClass::Cell) == p.at(EntityClass::Cell));
}

TEST_CASE("k-GNN") {
  auto c = iso_type_lift(named::complete(3), 2, true);
  ModelState s;
  s.features[EntityClass::Tuple] = ones(9);
  LayerSpec l;
  l.kind = LayerKind::Kgnn;
  l.theta = scalar(1);
  l.theta2 = scalar(1);
  auto out = kgnn_layer(c, s, l).at(EntityClass::Tuple);
  for (Eigen::Index i = 0; i < 9; ++i) CHECK(out(i, 0) == 5);

  l.theta2 = scalar(0);
  Mat x(9, 1);
  for (int i = 0; i < 9; ++i) x(i, 0) = i;
  s.features[EntityClass::Tuple] = x;
  l.theta = scalar(2);
  auto iso = kgnn_layer(c, s, l).at(EntityClass::Tuple);
  CHECK(iso == 2 * x);

  auto p3 = iso_type_lift(named::path(3), 2, true);
  ModelState sp;
  sp.features[EntityClass::Tuple] = ones(9);
  l.theta2 = scalar(1);
  l.theta = scalar(1);
  l.local = true;
  auto loc = kgnn_layer(p3, sp, l).at(EntityClass::Tuple);
  CHECK(loc(static_cast<Eigen::Index>(*p3.find(std::vector<int>{0, 0})), 0) == 3);
  CHECK(loc(static_cast<Eigen::Index>(*p3.find(std::vector<int>{1, 1})), 0) == 5);
  CHECK(loc(static_cast<Eigen::Index>(*p3.find(std::vector<int>{0, 2})), 0) == 3);
}

TEST_CASE("plain message passing") {
  ModelState s;
  s.features[EntityClass::Vertex] = ones(3);
  LayerSpec l;
  l.psi["hop"] = FunctionSpec::project(1);
  auto out = mp_layer(named::path(3), s, l).at(EntityClass::Vertex);
  CHECK(out(0, 0) == 2);
  CHECK(out(1, 0) == 3);
  l.aggregators["hop"] = Aggregator::Mean;
  CHECK(mp_layer(named::path(3), s, l).at(EntityClass::Vertex)(1, 0) == 2);
  l.hops = {1, 2};
  CHECK(mp_layer(named::path(3), s, l).at(EntityClass::Vertex)(0, 0) == 3);
}

TEST_CASE("layer dispatch") {
  LayerSpec l;
  l.kind = LayerKind::Kgnn;
  HOStructure g = named::path(3);
  CHECK(code_of([&] { apply_layer(g, initial_state(g), l); }) == ErrorCode::KindMismatch);
  ModelState empty;
  CHECK(code_of([&] { empty.at(EntityClass::Vertex); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("readout") {
  ModelState s;
  Mat x(3, 2);
  x << 1, 2, 1, 2, 1, 2;
  s.features[EntityClass::Vertex] = x;
  RowVec sum = readout(s, ReadoutKind::Sum);
  CHECK(sum[0] == 3);
  CHECK(sum[1] == 6);
  ModelState d;
  Mat xx(6, 2);
  xx << x, x;
  d.features[EntityClass::Vertex] = xx;
  CHECK(readout(d, ReadoutKind::Mean) == readout(s, ReadoutKind::Mean));
  CHECK(readout(s, ReadoutKind::Max)[1] == 2);
  CHECK(code_of([] { readout(ModelState{}, ReadoutKind::Sum); }) == ErrorCode::EmptyState);
  CHECK(pool_rows(Mat(0, 3), ReadoutKind::Sum, 3) == Mat::Zero(1, 3));

  auto c = cell_lift(named::cycle(6), 2, 6, 0);
  RowVec per = readout(HOStructure(c), cell_ones(c), ReadoutKind::Sum, true);
  REQUIRE(per.size() == 3);
  CHECK(per[0] == 6);
  CHECK(per[1] == 6);
  CHECK(per[2] == 1);
}

TEST_CASE("subgraph pipelines") {
  PipelineSpec bag;
  bag.pool = ReadoutKind::Sum;
  RowVec ego = run_subgraph_pipeline(ego_net_collection(named::complete(3), 1, true), bag);
  RowVec one = run_subgraph_pipeline(
      SubgraphCollection{named::complete(3), {ego_net_collection(named::complete(3), 1, true).subgraphs[0]}, false, {}}, bag);
  CHECK(max_abs_diff(ego, 3 * one) < 1e-12);

  bag.base = presets::graph_mp(1, 2, 5);
  auto drop = node_deleted_collection(named::complete(3), {});
  RowVec d = run_subgraph_pipeline(drop, bag);
  RowVec d0 = run_subgraph_pipeline(SubgraphCollection{drop.base, {drop.subgraphs[0]}, false, {}}, bag);
  CHECK(max_abs_diff(d, 3 * d0) < 1e-12);

  PipelineSpec tri;
  tri.annotate_motifs = {named::complete(3)};
  tri.outer = OuterMode::EgoAverage;
  Graph two = build_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  RowVec c6 = run_subgraph_pipeline(ego_net_collection(named::cycle(6), 1, true), tri);
  RowVec tt = run_subgraph_pipeline(ego_net_collection(two, 1, true), tri);
  CHECK(max_abs_diff(c6, tt) > 0.5);
  CHECK(c6[c6.size() - 1] == 0);
  CHECK(tt[tt.size() - 1] == 6);

  SubgraphCollection unanchored{named::path(3), {{{0, 1}, {{0, 1}}, std::nullopt}}, false, {}};
  CHECK(code_of([&] { run_subgraph_pipeline(unanchored, tri); }) == ErrorCode::OuterRequiresVertexAnchoring);
  CHECK(code_of([&] { run_subgraph_pipeline(SubgraphCollection{named::path(3), {}, false, {}}, bag); }) ==
        ErrorCode::EmptyCollection);

  for (OuterMode m : {OuterMode::EgoAverage, OuterMode::NestedOuterMP, OuterMode::BagPool, OuterMode::Fuse}) {
    CHECK(parse_outer_mode(outer_mode_name(m)) == m);
    PipelineSpec p;
    p.outer = m;
    p.base = presets::graph_mp(1, 2, 3);
    p.outer_model = presets::graph_mp(2, 2, 4);
    RowVec a = run_subgraph_pipeline(ego_net_collection(named::cycle(6), 1, true), p);
    RowVec b = run_subgraph_pipeline(ego_net_collection(two, 1, true), p);
    CHECK(a.size() == b.size());
  }
}

TEST_CASE("nested graphs") {
  ModelSpec inner;
  inner.layers = presets::graph_mp(1, 2, 11).layers;
  ModelSpec outer = presets::graph_mp(2, 2, 12);
  NestedGraph same{named::path(3), {named::complete(3), named::complete(3), named::complete(3)}};
  NestedGraph changed = same;
  changed.inner[1] = named::path(3);
  RowVec a = nested_run(same, inner, outer);
  CHECK(a.size() == 2);
  CHECK(max_abs_diff(nested_run(same, inner, ModelSpec{}), nested_run(changed, inner, ModelSpec{})) > 1e-6);

  // Identical inner graphs give symmetric outer inputs: swapping the ends is free.
  NestedGraph flipped = same;
  CHECK(max_abs_diff(a, nested_run(flipped, inner, outer)) == 0);

  NestedGraph hollow{named::path(2), {named::empty(0), named::empty(0)}};
  ModelSpec id;
  RowVec z = nested_run(hollow, id, ModelSpec{});
  CHECK(z.isZero());
}

TEST_CASE("preset flavours") {
  CHECK(classify_flavor(presets::imp_general(2, 1)) == Flavor::GeneralMP);
  CHECK(classify_flavor(presets::hgconv(2, 1)) == Flavor::Convolutional);
  CHECK(classify_flavor(presets::hat(2, 1)) == Flavor::Attentional);
  CHECK(classify_flavor(presets::mpsn(2, 1)) == Flavor::GeneralMP);
  CHECK(classify_flavor(presets::cwn(2, 1)) == Flavor::GeneralMP);
  CHECK(classify_flavor(presets::kgnn(2, 1)) == Flavor::Convolutional);
}

TEST_CASE("presets are permutation equivariant") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    Graph g = random_graph(6, 0.5, rng, 2);
    auto p = shuffled(6, rng);
    auto run = [](const ModelSpec& m) {
      return [m](const HOStructure& s) { return run_layers(s, m, initial_state(s)); };
    };
    Hypergraph h = Hypergraph::build(6, {{0, 1, 2}, {2, 3}, {3, 4, 5}, {1, 5}}, random_rows(6, 2, rng));
    SimplicialComplex sc = clique_complex_lift(g, 3);
    CellComplex cc = cell_lift(g, 2, 6, 0);
    cc.features = random_rows(cc.cells.size(), 2, rng);
    NodeTupleCollection nt = iso_type_lift(g, 2, true);

    CHECK(equivariance_deviation(h, p, run(presets::imp_general(2, 1))) < 1e-9);
    CHECK(equivariance_deviation(h, p, run(presets::hgconv(2, 2))) < 1e-9);
    CHECK(equivariance_deviation(h, p, run(presets::hat(2, 3))) < 1e-9);
    CHECK(equivariance_deviation(sc, p, run(presets::mpsn(2, 4))) < 1e-9);
    CHECK(equivariance_deviation(cc, p, run(presets::cwn(2, 5))) < 1e-9);
    CHECK(equivariance_deviation(nt, p, run(presets::kgnn(static_cast<int>(nt.tuple_features.width), 6))) < 1e-9);
    CHECK(equivariance_deviation(g, p, run(presets::graph_mp(2, 3, 7))) < 1e-9);

    CHECK(max_abs_diff(run_model(cc, presets::cwn(2, 5)), run_model(relabel(cc, p), presets::cwn(2, 5))) < 1e-9);
  }
}
