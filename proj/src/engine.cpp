#include "hognn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hognn/adjacency.hpp"
#include "hognn/error.hpp"
#include "hognn/wiring.hpp"

namespace hognn {

const Mat& ModelState::at(EntityClass c) const {
  auto it = features.find(c);
  if (it == features.end()) throw Error(ErrorCode::ShapeMismatch, std::string("state has no ") + class_letter(c) + " features");
  return it->second;
}

namespace {

Mat ones(Eigen::Index rows) { return Mat::Ones(rows, 1); }

Mat rows_of(const FeatureRows& f, Eigen::Index rows) {
  if (f.empty()) return {};
  Mat m(rows, static_cast<Eigen::Index>(f.width));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = f.row(static_cast<std::size_t>(i))[static_cast<std::size_t>(j)];
  return m;
}

Mat graph_vertex_rows(const Graph& g) {
  if (!g.features().has_vertex()) return ones(g.n());
  Mat m(g.n(), static_cast<Eigen::Index>(g.feature_width()));
  for (int v = 0; v < g.n(); ++v)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(v, j) = g.vertex_feature(v)[static_cast<std::size_t>(j)];
  return m;
}

ModelState hypergraph_state(const Hypergraph& h) {
  ModelState s;
  Mat v = rows_of(h.vertex_features, h.n);
  Mat e = rows_of(h.hyperedge_features, static_cast<Eigen::Index>(h.m()));
  if (v.size() == 0 && h.vertex_features.empty()) v = ones(h.n);
  if (h.hyperedge_features.empty()) {
    if (h.vertex_features.empty()) {
      e = ones(static_cast<Eigen::Index>(h.m()));
    } else {
      e = Mat::Zero(static_cast<Eigen::Index>(h.m()), v.cols());
      for (std::size_t j = 0; j < h.m(); ++j)
        for (int u : h.hyperedges[j]) e.row(static_cast<Eigen::Index>(j)) += v.row(u);
    }
  }
  if (v.rows() != h.n) v = Mat::Zero(h.n, e.cols());
  s.features[EntityClass::Vertex] = v;
  s.features[EntityClass::Hyperedge] = e;
  return s;
}

RowVec concat(const std::vector<RowVec>& args) {
  Eigen::Index w = 0;
  for (const auto& a : args) w += a.size();
  RowVec out(w);
  Eigen::Index at = 0;
  for (const auto& a : args) {
    out.segment(at, a.size()) = a;
    at += a.size();
  }
  return out;
}

const RowVec& pick(const std::vector<RowVec>& args, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= args.size())
    throw Error(ErrorCode::ShapeMismatch, "argument " + std::to_string(i) + " of " + std::to_string(args.size()));
  return args[static_cast<std::size_t>(i)];
}

RowVec relu(RowVec x) { return x.cwiseMax(0.0); }

} // namespace

ModelState initial_state(const HOStructure& s) {
  return std::visit(
      [](const auto& x) -> ModelState {
        using T = std::decay_t<decltype(x)>;
        ModelState st;
        if constexpr (std::is_same_v<T, Graph>) {
          st.features[EntityClass::Vertex] = graph_vertex_rows(x);
        } else if constexpr (std::is_same_v<T, Hypergraph> || std::is_same_v<T, SimplicialComplex>) {
          st = hypergraph_state(x);
        } else if constexpr (std::is_same_v<T, CellComplex>) {
          Mat m = rows_of(x.features, static_cast<Eigen::Index>(x.cells.size()));
          st.features[EntityClass::Cell] = x.features.empty() ? ones(static_cast<Eigen::Index>(x.cells.size())) : m;
        } else if constexpr (std::is_same_v<T, NodeTupleCollection>) {
          Mat m = rows_of(x.tuple_features, static_cast<Eigen::Index>(x.tuples.size()));
          st.features[EntityClass::Tuple] = x.tuple_features.empty() ? ones(static_cast<Eigen::Index>(x.tuples.size())) : m;
        } else if constexpr (std::is_same_v<T, SubgraphCountGraph>) {
          Mat base = graph_vertex_rows(x.base);
          const auto k = static_cast<Eigen::Index>(x.motifs.size());
          Mat m(base.rows(), base.cols() + k);
          m.leftCols(base.cols()) = base;
          for (int v = 0; v < x.base.n(); ++v)
            for (Eigen::Index j = 0; j < k; ++j) m(v, base.cols() + j) = static_cast<double>(x.vertex_count(v, static_cast<std::size_t>(j)));
          st.features[EntityClass::Vertex] = m;
        } else if constexpr (std::is_same_v<T, NestedGraph>) {
          st.features[EntityClass::Vertex] = graph_vertex_rows(x.outer);
        } else {
          st.features[EntityClass::Vertex] = graph_vertex_rows(x.base);
        }
        return st;
      },
      s);
}

Mat apply_nonlinearity(Nonlinearity n, Mat x) {
  switch (n) {
  case Nonlinearity::Identity: return x;
  case Nonlinearity::Relu: return x.cwiseMax(0.0);
  case Nonlinearity::Sigmoid: return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  }
  return x;
}

namespace {

double scalar_nonlinearity(Nonlinearity n, double v) {
  switch (n) {
  case Nonlinearity::Identity: return v;
  case Nonlinearity::Relu: return std::max(0.0, v);
  case Nonlinearity::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
  }
  return v;
}

void check_rows(const Mat& w, Eigen::Index width, const char* what) {
  if (w.rows() != width)
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + " expects width " + std::to_string(w.rows()) + ", got " +
                                              std::to_string(width));
}

} // namespace

RowVec apply_function(const FunctionSpec& f, const std::vector<RowVec>& args, double coefficient) {
  switch (f.kind) {
  case FunctionKind::Identity: return concat(args);
  case FunctionKind::Project: return pick(args, f.arg);
  case FunctionKind::SumArgs: {
    if (args.empty()) throw Error(ErrorCode::ShapeMismatch, "sum of no arguments");
    RowVec out = args.front();
    for (std::size_t i = 1; i < args.size(); ++i) {
      if (args[i].size() != out.size()) throw Error(ErrorCode::ShapeMismatch, "sum-args over unequal widths");
      out += args[i];
    }
    return out;
  }
  case FunctionKind::Linear: {
    RowVec x = concat(args);
    check_rows(f.weight, x.size(), "linear map");
    RowVec y = x * f.weight;
    if (f.bias.size() == y.size()) y += f.bias;
    return y;
  }
  case FunctionKind::Mlp: {
    RowVec x = concat(args);
    check_rows(f.weight, x.size(), "mlp");
    RowVec h = x * f.weight;
    if (f.bias.size() == h.size()) h += f.bias;
    h = relu(h);
    check_rows(f.weight2, h.size(), "mlp output layer");
    RowVec y = h * f.weight2;
    if (f.bias2.size() == y.size()) y += f.bias2;
    return y;
  }
  case FunctionKind::FixedScalar:
  case FunctionKind::Attention: return coefficient * pick(args, f.arg);
  }
  throw Error(ErrorCode::UnknownFunctionKind, "function kind " + std::to_string(static_cast<int>(f.kind)));
}

Eigen::Index function_output_width(const FunctionSpec& f, const std::vector<Eigen::Index>& w) {
  auto at = [&](int i) {
    if (i < 0 || static_cast<std::size_t>(i) >= w.size()) throw Error(ErrorCode::ShapeMismatch, "argument index out of range");
    return w[static_cast<std::size_t>(i)];
  };
  switch (f.kind) {
  case FunctionKind::Identity: return std::accumulate(w.begin(), w.end(), Eigen::Index{0});
  case FunctionKind::Project:
  case FunctionKind::FixedScalar:
  case FunctionKind::Attention: return at(f.arg);
  case FunctionKind::SumArgs: return w.empty() ? 0 : w.front();
  case FunctionKind::Linear: return f.weight.cols();
  case FunctionKind::Mlp: return f.weight2.cols();
  }
  throw Error(ErrorCode::UnknownFunctionKind, "function kind " + std::to_string(static_cast<int>(f.kind)));
}

namespace {

struct Link {
  int src;
  int dst;
  int via = -1;
};

enum class ArgMode { Src, DstSrc, DstSrcVia };

std::vector<RowVec> link_args(ArgMode mode, const Mat& xdst, const Mat& xsrc, const Mat* xvia, const Link& l) {
  switch (mode) {
  case ArgMode::Src: return {xsrc.row(l.src)};
  case ArgMode::DstSrc: return {xdst.row(l.dst), xsrc.row(l.src)};
  case ArgMode::DstSrcVia: return {xdst.row(l.dst), xsrc.row(l.src), xvia->row(l.via)};
  }
  return {};
}

/// ⊕ over incoming links of ψ(args) for every destination. Links are
/// reduced in the order given, which callers keep canonical.
Mat relation_messages(const Mat& xdst, const Mat& xsrc, const Mat* xvia, const std::vector<Link>& links,
                      const FunctionSpec& psi, Aggregator agg, ArgMode mode) {
  const Eigen::Index ndst = xdst.rows();
  std::vector<Eigen::Index> widths;
  switch (mode) {
  case ArgMode::Src: widths = {xsrc.cols()}; break;
  case ArgMode::DstSrc: widths = {xdst.cols(), xsrc.cols()}; break;
  case ArgMode::DstSrcVia: widths = {xdst.cols(), xsrc.cols(), xvia->cols()}; break;
  }
  const Eigen::Index width = function_output_width(psi, widths);

  std::vector<double> in_deg(static_cast<std::size_t>(ndst), 0.0);
  std::vector<double> out_deg(static_cast<std::size_t>(xsrc.rows()), 0.0);
  for (const auto& l : links) {
    in_deg[static_cast<std::size_t>(l.dst)] += 1.0;
    out_deg[static_cast<std::size_t>(l.src)] += 1.0;
  }

  std::vector<double> coef(links.size(), 1.0);
  if (psi.kind == FunctionKind::FixedScalar) {
    for (std::size_t i = 0; i < links.size(); ++i) {
      const double dd = in_deg[static_cast<std::size_t>(links[i].dst)];
      const double ds = out_deg[static_cast<std::size_t>(links[i].src)];
      if (psi.rule == "one") coef[i] = 1.0;
      else if (psi.rule == "inv-dst-degree") coef[i] = 1.0 / dd;
      else if (psi.rule == "sym-degree") coef[i] = 1.0 / std::sqrt(dd * ds);
      else throw Error(ErrorCode::PreconditionFailed, "unknown coefficient rule '" + psi.rule + "'");
    }
  } else if (psi.kind == FunctionKind::Attention) {
    // Softmax of σ(<x_dst Θ, x_src Θ>) over each destination's incoming links.
    std::vector<double> score(links.size());
    std::vector<double> top(static_cast<std::size_t>(ndst), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < links.size(); ++i) {
      RowVec a = xdst.row(links[i].dst) * psi.weight, b = xsrc.row(links[i].src) * psi.weight;
      score[i] = scalar_nonlinearity(psi.score, a.dot(b));
      auto& t = top[static_cast<std::size_t>(links[i].dst)];
      t = std::max(t, score[i]);
    }
    std::vector<double> denom(static_cast<std::size_t>(ndst), 0.0);
    for (std::size_t i = 0; i < links.size(); ++i) {
      score[i] = std::exp(score[i] - top[static_cast<std::size_t>(links[i].dst)]);
      denom[static_cast<std::size_t>(links[i].dst)] += score[i];
    }
    for (std::size_t i = 0; i < links.size(); ++i) coef[i] = score[i] / denom[static_cast<std::size_t>(links[i].dst)];
  }

  Mat out = Mat::Zero(ndst, width);
  std::vector<char> seen(static_cast<std::size_t>(ndst), 0);
  for (std::size_t i = 0; i < links.size(); ++i) {
    RowVec m = apply_function(psi, link_args(mode, xdst, xsrc, xvia, links[i]), coef[i]);
    if (m.size() != width) throw Error(ErrorCode::ShapeMismatch, "message width changed");
    const auto d = static_cast<std::size_t>(links[i].dst);
    if (agg == Aggregator::Max) out.row(links[i].dst) = seen[d] ? RowVec(out.row(links[i].dst).cwiseMax(m)) : m;
    else out.row(links[i].dst) += m;
    seen[d] = 1;
  }
  if (agg == Aggregator::Mean)
    for (Eigen::Index d = 0; d < ndst; ++d)
      if (in_deg[static_cast<std::size_t>(d)] > 0) out.row(d) /= in_deg[static_cast<std::size_t>(d)];
  return out;
}

FunctionSpec psi_at(const LayerSpec& spec, const std::string& site) {
  auto it = spec.psi.find(site);
  return it == spec.psi.end() ? FunctionSpec::project(1) : it->second;
}

Mat update_rows(const FunctionSpec& phi, const Mat& x, const std::vector<const Mat*>& messages, Nonlinearity sigma) {
  std::vector<RowVec> rows;
  std::vector<Eigen::Index> widths{x.cols()};
  for (const auto* m : messages) widths.push_back(m->cols());
  Mat out(x.rows(), function_output_width(phi, widths));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::vector<RowVec> args{x.row(i)};
    for (const auto* m : messages) args.push_back(m->row(i));
    out.row(i) = apply_function(phi, args);
  }
  return apply_nonlinearity(sigma, std::move(out));
}

std::vector<Link> incidence_links(const Hypergraph& h, bool up) {
  std::vector<Link> links;
  for (std::size_t j = 0; j < h.m(); ++j)
    for (int v : h.hyperedges[j])
      links.push_back(up ? Link{v, static_cast<int>(j)} : Link{static_cast<int>(j), v});
  std::stable_sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    return a.dst != b.dst ? a.dst < b.dst : a.src < b.src;
  });
  return links;
}

} // namespace

ModelState imp_layer(const Hypergraph& h, const ModelState& state, const LayerSpec& spec) {
  const Mat& xv = state.at(EntityClass::Vertex);
  const Mat& xe = state.at(EntityClass::Hyperedge);
  if (xv.rows() != h.n || xe.rows() != static_cast<Eigen::Index>(h.m()))
    throw Error(ErrorCode::ShapeMismatch, "state rows do not match the hypergraph");
  const FunctionSpec psi = psi_at(spec, "vertex");
  FunctionSpec psi_v = psi;
  if (psi_v.kind == FunctionKind::Project || psi_v.kind == FunctionKind::FixedScalar || psi_v.kind == FunctionKind::Attention)
    psi_v.arg = 0; // ψ_V takes the single argument x_u
  auto up = incidence_links(h, true), down = incidence_links(h, false);

  // Eq. (2) with ⊙ and Eq. (3) with ⊗; the two sites share ψ_V and φ_E.
  Mat edge_agg = relation_messages(xe, xv, nullptr, up, psi_v, spec.aggregator("edge"), ArgMode::Src);
  Mat msg_agg = relation_messages(xe, xv, nullptr, up, psi_v, spec.aggregator("message"), ArgMode::Src);
  Mat xe_new = update_rows(spec.phi_edge, xe, {&edge_agg}, spec.sigma);
  Mat m_e = update_rows(spec.phi_edge, xe, {&msg_agg}, Nonlinearity::Identity);
  // Eq. (4): ⊕ over incident hyperedges of m_f.
  Mat node_agg = relation_messages(xv, m_e, nullptr, down, FunctionSpec::project(1), spec.aggregator("node"), ArgMode::DstSrc);
  Mat xv_new = update_rows(spec.phi, xv, {&node_agg}, spec.sigma);
  ModelState out = state;
  out.features[EntityClass::Vertex] = std::move(xv_new);
  out.features[EntityClass::Hyperedge] = std::move(xe_new);
  return out;
}

Mat hgconv_pre_activation(const Mat& b, const std::vector<double>& w, const Mat& x, const Mat& theta) {
  const Eigen::Index n = b.rows(), m = b.cols();
  if (x.rows() != n) throw Error(ErrorCode::ShapeMismatch, "feature rows != vertex count");
  if (!w.empty() && static_cast<Eigen::Index>(w.size()) != m)
    throw Error(ErrorCode::ShapeMismatch, "hyperedge weight count != hyperedge count");
  Eigen::VectorXd we = w.empty() ? Eigen::VectorXd::Ones(m) : Eigen::Map<const Eigen::VectorXd>(w.data(), m).eval();
  Eigen::VectorXd dv = b * we;
  Eigen::VectorXd de = b.colwise().sum().transpose();
  Eigen::VectorXd dv_is(n), de_inv(m);
  for (Eigen::Index i = 0; i < n; ++i) dv_is(i) = dv(i) > 0 ? 1.0 / std::sqrt(dv(i)) : 0.0;
  for (Eigen::Index j = 0; j < m; ++j) de_inv(j) = de(j) > 0 ? 1.0 / de(j) : 0.0;
  Mat left = dv_is.asDiagonal() * b;                               // D_V^{-1/2} B
  Mat middle = (we.cwiseProduct(de_inv)).asDiagonal() * left.transpose(); // W D_E^{-1} B^T D_V^{-1/2}
  Mat h = left * (middle * x);
  if (theta.size() == 0) return h;
  check_rows(theta, h.cols(), "theta");
  return h * theta;
}

Mat gcn_reference(const Graph& g, const Mat& x, const Mat& theta) {
  const int n = g.n();
  Mat a = Mat::Zero(n, n);
  for (const auto& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = 1.0;
  Eigen::VectorXd dis(n);
  for (int v = 0; v < n; ++v) dis(v) = g.degree(v) > 0 ? 1.0 / std::sqrt(static_cast<double>(g.degree(v))) : 0.0;
  Mat p = 0.5 * (Mat::Identity(n, n) + dis.asDiagonal() * a * dis.asDiagonal());
  return theta.size() == 0 ? Mat(p * x) : Mat(p * x * theta);
}

ModelState hgconv_layer(const Hypergraph& h, const ModelState& state, const LayerSpec& spec) {
  ModelState out = state;
  out.features[EntityClass::Vertex] = apply_nonlinearity(
      spec.sigma, hgconv_pre_activation(incidence_matrix(h), spec.hyperedge_weights, state.at(EntityClass::Vertex), spec.theta));
  return out;
}

Mat hat_attention(const Hypergraph& h, const ModelState& state, const FunctionSpec& attention, HatNormalization norm) {
  std::size_t incidences = 0;
  for (const auto& e : h.hyperedges) incidences += e.size();
  if (incidences == 0) throw Error(ErrorCode::EmptyIncidence, "hypergraph has no incidences");
  const Mat& xv = state.at(EntityClass::Vertex);
  const Mat& xe = state.at(EntityClass::Hyperedge);
  Mat pv = xv, pe = xe;
  if (attention.weight.size() != 0) {
    check_rows(attention.weight, xv.cols(), "attention projection");
    check_rows(attention.weight, xe.cols(), "attention projection");
    pv = xv * attention.weight;
    pe = xe * attention.weight;
  } else if (xv.cols() != xe.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "vertex and hyperedge widths differ");
  }
  const Eigen::Index n = h.n, m = static_cast<Eigen::Index>(h.m());
  Mat score = Mat::Constant(n, m, -std::numeric_limits<double>::infinity());
  for (Eigen::Index j = 0; j < m; ++j)
    for (int v : h.hyperedges[static_cast<std::size_t>(j)])
      score(v, j) = scalar_nonlinearity(attention.score, pv.row(v).dot(pe.row(j)));
  Mat att = Mat::Zero(n, m);
  if (norm == HatNormalization::OverMembers) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& members = h.hyperedges[static_cast<std::size_t>(j)];
      if (members.empty()) continue;
      double top = -std::numeric_limits<double>::infinity(), z = 0.0;
      for (int v : members) top = std::max(top, score(v, j));
      for (int v : members) z += std::exp(score(v, j) - top);
      for (int v : members) att(v, j) = std::exp(score(v, j) - top) / z;
    }
  } else {
    for (Eigen::Index v = 0; v < n; ++v) {
      double top = -std::numeric_limits<double>::infinity(), z = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) top = std::max(top, score(v, j));
      if (!std::isfinite(top)) continue;
      for (Eigen::Index j = 0; j < m; ++j)
        if (std::isfinite(score(v, j))) z += std::exp(score(v, j) - top);
      for (Eigen::Index j = 0; j < m; ++j)
        if (std::isfinite(score(v, j))) att(v, j) = std::exp(score(v, j) - top) / z;
    }
  }
  return att;
}

ModelState hat_layer(const Hypergraph& h, const ModelState& state, const LayerSpec& spec) {
  Mat att = hat_attention(h, state, spec.attention, spec.hat_normalization);
  ModelState out = state;
  out.features[EntityClass::Vertex] = apply_nonlinearity(
      spec.sigma, hgconv_pre_activation(att, spec.hyperedge_weights, state.at(EntityClass::Vertex), spec.theta));
  return out;
}

namespace {

Mat complex_update(const ComplexRelations& r, const Mat& x, const LayerSpec& spec, const std::vector<Relation>& use) {
  if (use.empty()) throw Error(ErrorCode::EmptyRelationSet, "no relation selected");
  if (x.rows() != static_cast<Eigen::Index>(r.size())) throw Error(ErrorCode::ShapeMismatch, "state rows != entity count");
  auto selected = [&](Relation q) { return std::find(use.begin(), use.end(), q) != use.end(); };
  std::vector<Mat> messages;
  for (Relation q : {Relation::Boundary, Relation::Coboundary, Relation::Upper, Relation::Lower}) {
    if (!selected(q)) continue;
    std::vector<Link> links;
    for (std::size_t c = 0; c < r.size(); ++c) {
      const int ci = static_cast<int>(c);
      switch (q) {
      case Relation::Boundary:
        for (int b : r.boundary[c]) links.push_back({b, ci});
        break;
      case Relation::Coboundary:
        for (int d : r.coboundary[c]) links.push_back({d, ci});
        break;
      case Relation::Upper:
        for (const auto& v : r.upper[c]) links.push_back({v.entity, ci, v.via});
        break;
      case Relation::Lower:
        for (const auto& v : r.lower[c]) links.push_back({v.entity, ci, v.via});
        break;
      }
    }
    const bool with_via = q == Relation::Upper || q == Relation::Lower;
    const char* site = q == Relation::Boundary ? "boundary" : q == Relation::Coboundary ? "coboundary" : q == Relation::Upper ? "upper" : "lower";
    messages.push_back(relation_messages(x, x, &x, links, psi_at(spec, site), spec.aggregator(site),
                                         with_via ? ArgMode::DstSrcVia : ArgMode::DstSrc));
  }
  std::vector<const Mat*> ptrs;
  for (const auto& m : messages) ptrs.push_back(&m);
  return update_rows(spec.phi, x, ptrs, spec.sigma);
}

} // namespace

ModelState bamp_layer(const Hypergraph& s, const ModelState& state, const LayerSpec& spec) {
  if (spec.relations.empty()) throw Error(ErrorCode::EmptyRelationSet, "no relation selected");
  const Mat& xv = state.at(EntityClass::Vertex);
  const Mat& xe = state.at(EntityClass::Hyperedge);
  if (xv.cols() != xe.cols()) throw Error(ErrorCode::ShapeMismatch, "vertex and hyperedge widths differ");
  Mat x(xv.rows() + xe.rows(), xv.cols());
  x << xv, xe;
  Mat y = complex_update(relations(s, spec.adjacency), x, spec, spec.relations);
  ModelState out = state;
  out.features[EntityClass::Vertex] = y.topRows(xv.rows());
  out.features[EntityClass::Hyperedge] = y.bottomRows(xe.rows());
  return out;
}

ModelState bamp_layer(const CellComplex& c, const ModelState& state, const LayerSpec& spec) {
  if (spec.relations.empty()) throw Error(ErrorCode::EmptyRelationSet, "no relation selected");
  ModelState out = state;
  out.features[EntityClass::Cell] = complex_update(relations(c, spec.adjacency), state.at(EntityClass::Cell), spec, spec.relations);
  return out;
}

ModelState cwn_layer(const CellComplex& c, const ModelState& state, const LayerSpec& spec) {
  ModelState out = state;
  out.features[EntityClass::Cell] =
      complex_update(relations(c, spec.adjacency), state.at(EntityClass::Cell), spec, {Relation::Boundary, Relation::Upper});
  return out;
}

ModelState kgnn_layer(const NodeTupleCollection& c, const ModelState& state, const LayerSpec& spec) {
  const Mat& x = state.at(EntityClass::Tuple);
  if (x.rows() != static_cast<Eigen::Index>(c.tuples.size())) throw Error(ErrorCode::ShapeMismatch, "state rows != tuple count");
  auto w = compile_damp(c, spec.local, false);
  std::vector<Link> links;
  for (const auto& ch : w.channels)
    if (ch.tag != RelationTag::Self) links.push_back({ch.src.id, ch.dst.id});
  std::stable_sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.dst < b.dst; });
  FunctionSpec psi = psi_at(spec, "down");
  if (psi.kind == FunctionKind::Project) psi = FunctionSpec::fixed("one");
  Mat agg = relation_messages(x, x, nullptr, links, psi, spec.aggregator("down"), ArgMode::DstSrc);
  Mat self = x, nb = agg;
  if (spec.theta.size() != 0) {
    check_rows(spec.theta, x.cols(), "theta1");
    self = x * spec.theta;
  }
  if (spec.theta2.size() != 0) {
    check_rows(spec.theta2, agg.cols(), "theta2");
    nb = agg * spec.theta2;
  }
  if (self.cols() != nb.cols()) throw Error(ErrorCode::ShapeMismatch, "theta1 and theta2 output widths differ");
  ModelState out = state;
  out.features[EntityClass::Tuple] = apply_nonlinearity(spec.sigma, self + nb);
  return out;
}

ModelState mp_layer(const Graph& g, const ModelState& state, const LayerSpec& spec) {
  const Mat& x = state.at(EntityClass::Vertex);
  if (x.rows() != g.n()) throw Error(ErrorCode::ShapeMismatch, "state rows != vertex count");
  std::vector<Mat> messages;
  for (int k : spec.hops) {
    auto w = compile_multihop(g, {k});
    std::vector<Link> links;
    for (const auto& ch : w.channels) links.push_back({ch.src.id, ch.dst.id});
    std::stable_sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.dst < b.dst; });
    messages.push_back(relation_messages(x, x, nullptr, links, psi_at(spec, "hop"), spec.aggregator("hop"), ArgMode::DstSrc));
  }
  std::vector<const Mat*> ptrs;
  for (const auto& m : messages) ptrs.push_back(&m);
  ModelState out = state;
  out.features[EntityClass::Vertex] = update_rows(spec.phi, x, ptrs, spec.sigma);
  return out;
}

namespace {

const Graph* base_graph(const HOStructure& s) {
  if (auto g = std::get_if<Graph>(&s)) return g;
  if (auto c = std::get_if<SubgraphCollection>(&s)) return &c->base;
  if (auto c = std::get_if<MotifGraph>(&s)) return &c->base;
  if (auto c = std::get_if<SubgraphCountGraph>(&s)) return &c->base;
  if (auto c = std::get_if<NestedGraph>(&s)) return &c->outer;
  return nullptr;
}

[[noreturn]] void mismatch(LayerKind k, const HOStructure& s) {
  throw Error(ErrorCode::KindMismatch, std::string(layer_kind_name(k)) + " layer on " + std::string(kind_name(kind_of(s))));
}

} // namespace

ModelState apply_layer(const HOStructure& s, const ModelState& state, const LayerSpec& spec) {
  const Hypergraph* h = std::get_if<Hypergraph>(&s);
  if (!h) h = std::get_if<SimplicialComplex>(&s);
  switch (spec.kind) {
  case LayerKind::Imp:
  case LayerKind::HgConv:
  case LayerKind::Hat: {
    Hypergraph lifted;
    if (!h) {
      auto g = std::get_if<Graph>(&s);
      if (!g) mismatch(spec.kind, s);
      lifted = as_hypergraph(*g);
      h = &lifted;
    }
    ModelState st = state;
    if (!st.has(EntityClass::Hyperedge)) st.features[EntityClass::Hyperedge] = hypergraph_state(*h).at(EntityClass::Hyperedge);
    ModelState out = spec.kind == LayerKind::Imp ? imp_layer(*h, st, spec)
                     : spec.kind == LayerKind::HgConv ? hgconv_layer(*h, st, spec)
                                                      : hat_layer(*h, st, spec);
    if (!state.has(EntityClass::Hyperedge)) out.features.erase(EntityClass::Hyperedge);
    return out;
  }
  case LayerKind::Bamp:
    if (h) return bamp_layer(*h, state, spec);
    if (auto c = std::get_if<CellComplex>(&s)) return bamp_layer(*c, state, spec);
    mismatch(spec.kind, s);
  case LayerKind::Cwn:
    if (auto c = std::get_if<CellComplex>(&s)) return cwn_layer(*c, state, spec);
    mismatch(spec.kind, s);
  case LayerKind::Kgnn:
    if (auto c = std::get_if<NodeTupleCollection>(&s)) return kgnn_layer(*c, state, spec);
    mismatch(spec.kind, s);
  case LayerKind::Mp:
    if (auto g = base_graph(s)) return mp_layer(*g, state, spec);
    mismatch(spec.kind, s);
  }
  mismatch(spec.kind, s);
}

ModelState run_layers(const HOStructure& s, const ModelSpec& spec, ModelState state) {
  for (const auto& layer : spec.layers) state = apply_layer(s, state, layer);
  return state;
}

Mat pool_rows(const Mat& rows, ReadoutKind kind, Eigen::Index width) {
  if (rows.rows() == 0) return Mat::Zero(1, width);
  switch (kind) {
  case ReadoutKind::Sum: return rows.colwise().sum();
  case ReadoutKind::Mean: return rows.colwise().mean();
  case ReadoutKind::Max: return rows.colwise().maxCoeff();
  case ReadoutKind::Histogram: {
    std::vector<std::vector<double>> r(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
      for (Eigen::Index j = 0; j < rows.cols(); ++j) r[static_cast<std::size_t>(i)].push_back(rows(i, j));
    std::sort(r.begin(), r.end());
    Mat out(1, rows.rows() * rows.cols());
    Eigen::Index at = 0;
    for (const auto& row : r)
      for (double v : row) out(0, at++) = v;
    return out;
  }
  }
  return {};
}

namespace {

RowVec join(const std::vector<Mat>& parts) {
  Eigen::Index w = 0;
  for (const auto& p : parts) w += p.cols();
  RowVec out(w);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    out.segment(at, p.cols()) = p.row(0);
    at += p.cols();
  }
  return out;
}

} // namespace

RowVec readout(const ModelState& state, ReadoutKind kind) {
  Eigen::Index total = 0;
  for (const auto& [c, m] : state.features) total += m.rows();
  if (state.features.empty() || total == 0) throw Error(ErrorCode::EmptyState, "nothing to read out");
  std::vector<Mat> parts;
  for (const auto& [c, m] : state.features) parts.push_back(pool_rows(m, kind, m.cols()));
  return join(parts);
}

RowVec readout(const HOStructure& s, const ModelState& state, ReadoutKind kind, bool per_dimension) {
  auto cc = std::get_if<CellComplex>(&s);
  if (!per_dimension || !cc) return readout(state, kind);
  const Mat& x = state.at(EntityClass::Cell);
  if (x.rows() == 0) throw Error(ErrorCode::EmptyState, "nothing to read out");
  std::vector<Mat> parts;
  for (int d = 0; d <= cc->max_dim(); ++d) {
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < cc->cells.size(); ++i)
      if (cc->cells[i].dim == d) idx.push_back(static_cast<Eigen::Index>(i));
    Mat rows(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = x.row(idx[i]);
    parts.push_back(pool_rows(rows, kind, x.cols()));
  }
  return join(parts);
}

RowVec run_model(const HOStructure& s, const ModelSpec& spec) {
  auto st = run_layers(s, spec, initial_state(s));
  return readout(s, st, spec.readout, spec.per_dimension);
}

// ---------------------------------------------------------------------------
// Subgraph pipelines and nesting

std::string_view outer_mode_name(OuterMode m) {
  switch (m) {
  case OuterMode::EgoAverage: return "ego-average";
  case OuterMode::NestedOuterMP: return "nested-outer-mp";
  case OuterMode::BagPool: return "bag-pool";
  case OuterMode::Fuse: return "fuse";
  }
  return "?";
}

OuterMode parse_outer_mode(std::string_view name) {
  for (auto m : {OuterMode::EgoAverage, OuterMode::NestedOuterMP, OuterMode::BagPool, OuterMode::Fuse})
    if (outer_mode_name(m) == name) return m;
  throw Error(ErrorCode::ParseError, "unknown outer mode '" + std::string(name) + "'");
}

namespace {

struct SubgraphRun {
  std::vector<int> vertices; // base ids, row order of reps
  Mat reps;
};

SubgraphRun run_on_subgraph(const Graph& base, const Subgraph& s, const PipelineSpec& spec) {
  SubgraphRun run;
  run.vertices = s.vertices;
  std::vector<int> local(static_cast<std::size_t>(base.n()), -1);
  for (std::size_t i = 0; i < s.vertices.size(); ++i) local[static_cast<std::size_t>(s.vertices[i])] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (const auto& e : s.edges) {
    int a = local[static_cast<std::size_t>(e.u)], b = local[static_cast<std::size_t>(e.v)];
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Graph g = Graph::build(static_cast<int>(s.vertices.size()), std::move(edges));
  Mat base_rows = graph_vertex_rows(base);
  const auto k = static_cast<Eigen::Index>(spec.annotate_motifs.size());
  Mat x(g.n(), base_rows.cols() + k);
  for (int i = 0; i < g.n(); ++i) x.row(i).head(base_rows.cols()) = base_rows.row(s.vertices[static_cast<std::size_t>(i)]);
  if (k > 0) {
    auto counts = subgraph_counts(g, spec.annotate_motifs);
    for (int i = 0; i < g.n(); ++i)
      for (Eigen::Index j = 0; j < k; ++j) x(i, base_rows.cols() + j) = static_cast<double>(counts.vertex_count(i, static_cast<std::size_t>(j)));
  }
  ModelState st;
  st.features[EntityClass::Vertex] = x;
  run.reps = run_layers(HOStructure(g), spec.base, st).at(EntityClass::Vertex);
  return run;
}

/// Subgraph index anchored at each vertex; throws when the collection is not
/// one anchored subgraph per vertex.
std::vector<std::size_t> anchored_index(const SubgraphCollection& s) {
  std::vector<std::size_t> at(static_cast<std::size_t>(s.base.n()), s.subgraphs.size());
  for (std::size_t i = 0; i < s.subgraphs.size(); ++i) {
    const auto& a = s.subgraphs[i].anchor;
    if (!a || *a < 0 || *a >= s.base.n() || at[static_cast<std::size_t>(*a)] != s.subgraphs.size())
      throw Error(ErrorCode::OuterRequiresVertexAnchoring, "need exactly one anchored subgraph per vertex");
    at[static_cast<std::size_t>(*a)] = i;
  }
  for (auto i : at)
    if (i == s.subgraphs.size()) throw Error(ErrorCode::OuterRequiresVertexAnchoring, "vertex without anchored subgraph");
  return at;
}

Mat stack_rows(const std::vector<Mat>& rows) {
  if (rows.empty()) return {};
  Mat out(static_cast<Eigen::Index>(rows.size()), rows.front().cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].cols() != out.cols()) throw Error(ErrorCode::ShapeMismatch, "pooled widths differ");
    out.row(static_cast<Eigen::Index>(i)) = rows[i].row(0);
  }
  return out;
}

} // namespace

RowVec run_subgraph_pipeline(const SubgraphCollection& s, const PipelineSpec& spec) {
  if (s.subgraphs.empty()) throw Error(ErrorCode::EmptyCollection, "no subgraphs");
  std::vector<std::size_t> anchor;
  if (spec.outer != OuterMode::BagPool) anchor = anchored_index(s);
  std::vector<SubgraphRun> runs;
  Eigen::Index width = -1;
  for (const auto& sg : s.subgraphs) {
    runs.push_back(run_on_subgraph(s.base, sg, spec));
    if (runs.back().reps.rows() > 0) width = runs.back().reps.cols();
  }
  if (width < 0) throw Error(ErrorCode::EmptyCollection, "every subgraph is empty");
  std::vector<Mat> pooled;
  for (const auto& r : runs) pooled.push_back(pool_rows(r.reps, spec.pool, width));

  const int n = s.base.n();
  switch (spec.outer) {
  case OuterMode::BagPool: return pool_rows(stack_rows(pooled), spec.pool, pooled.front().cols()).row(0);
  case OuterMode::EgoAverage: {
    Mat acc = Mat::Zero(n, width);
    std::vector<double> hits(static_cast<std::size_t>(n), 0.0);
    for (const auto& r : runs)
      for (std::size_t i = 0; i < r.vertices.size(); ++i) {
        acc.row(r.vertices[i]) += r.reps.row(static_cast<Eigen::Index>(i));
        hits[static_cast<std::size_t>(r.vertices[i])] += 1.0;
      }
    for (int v = 0; v < n; ++v)
      if (hits[static_cast<std::size_t>(v)] > 0) acc.row(v) /= hits[static_cast<std::size_t>(v)];
    return pool_rows(acc, spec.pool, width).row(0);
  }
  case OuterMode::NestedOuterMP: {
    ModelState st;
    std::vector<Mat> per_vertex;
    for (int v = 0; v < n; ++v) per_vertex.push_back(pooled[anchor[static_cast<std::size_t>(v)]]);
    st.features[EntityClass::Vertex] = stack_rows(per_vertex);
    HOStructure g(s.base);
    return readout(run_layers(g, spec.outer_model, st), spec.outer_model.readout);
  }
  case OuterMode::Fuse: {
    std::vector<Mat> rows;
    for (int v = 0; v < n; ++v) {
      const auto& r = runs[anchor[static_cast<std::size_t>(v)]];
      auto pos = std::find(r.vertices.begin(), r.vertices.end(), v) - r.vertices.begin();
      Mat row(1, width + pooled[anchor[static_cast<std::size_t>(v)]].cols());
      row << r.reps.row(static_cast<Eigen::Index>(pos)), pooled[anchor[static_cast<std::size_t>(v)]];
      rows.push_back(row);
    }
    Mat x = stack_rows(rows);
    return pool_rows(x, spec.pool, x.cols()).row(0);
  }
  }
  return {};
}

RowVec nested_run(const NestedGraph& n, const ModelSpec& inner, const ModelSpec& outer) {
  if (n.inner.size() != static_cast<std::size_t>(n.outer.n()))
    throw Error(ErrorCode::ShapeMismatch, "one inner graph per outer vertex required");
  std::vector<Mat> pooled(n.inner.size());
  Eigen::Index width = -1;
  for (std::size_t i = 0; i < n.inner.size(); ++i) {
    if (n.inner[i].n() == 0) continue;
    HOStructure g(n.inner[i]);
    pooled[i] = readout(run_layers(g, inner, initial_state(g)), inner.readout);
    width = pooled[i].cols();
  }
  if (width < 0) {
    // Every inner graph is empty: the width comes from a one-vertex probe.
    HOStructure probe(named::empty(1));
    width = readout(run_layers(probe, inner, initial_state(probe)), inner.readout).cols();
  }
  for (auto& p : pooled)
    if (p.size() == 0) p = Mat::Zero(1, width);
  ModelState st;
  st.features[EntityClass::Vertex] = stack_rows(pooled);
  if (n.outer.n() == 0) st.features[EntityClass::Vertex] = Mat::Zero(0, width);
  HOStructure g(n.outer);
  return readout(run_layers(g, outer, st), outer.readout);
}

} // namespace hognn
