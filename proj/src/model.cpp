#include "hognn/model.hpp"

#include <cmath>
#include <random>

#include "hognn/error.hpp"

namespace hognn {

FunctionSpec FunctionSpec::identity() { return {}; }

FunctionSpec FunctionSpec::project(int arg) {
  FunctionSpec f;
  f.kind = FunctionKind::Project;
  f.arg = arg;
  return f;
}

FunctionSpec FunctionSpec::sum_args() {
  FunctionSpec f;
  f.kind = FunctionKind::SumArgs;
  return f;
}

FunctionSpec FunctionSpec::linear(Mat w, RowVec b) {
  FunctionSpec f;
  f.kind = FunctionKind::Linear;
  f.in = static_cast<int>(w.rows());
  f.out = static_cast<int>(w.cols());
  f.weight = std::move(w);
  f.bias = b.size() ? std::move(b) : RowVec::Zero(f.out);
  return f;
}

FunctionSpec FunctionSpec::mlp(Mat w1, RowVec b1, Mat w2, RowVec b2) {
  FunctionSpec f;
  f.kind = FunctionKind::Mlp;
  f.in = static_cast<int>(w1.rows());
  f.hidden = static_cast<int>(w1.cols());
  f.out = static_cast<int>(w2.cols());
  f.weight = std::move(w1);
  f.bias = b1.size() ? std::move(b1) : RowVec::Zero(f.hidden);
  f.weight2 = std::move(w2);
  f.bias2 = b2.size() ? std::move(b2) : RowVec::Zero(f.out);
  return f;
}

FunctionSpec FunctionSpec::fixed(std::string rule, int arg) {
  FunctionSpec f;
  f.kind = FunctionKind::FixedScalar;
  f.rule = std::move(rule);
  f.arg = arg;
  return f;
}

FunctionSpec FunctionSpec::attention(Mat theta, int arg, Nonlinearity score) {
  FunctionSpec f;
  f.kind = FunctionKind::Attention;
  f.in = static_cast<int>(theta.rows());
  f.out = static_cast<int>(theta.cols());
  f.weight = std::move(theta);
  f.arg = arg;
  f.score = score;
  return f;
}

namespace {

template <class E, std::size_t N>
E parse_named(std::string_view name, const std::pair<E, std::string_view> (&table)[N], ErrorCode code, const char* what) {
  for (const auto& [e, s] : table)
    if (s == name) return e;
  throw Error(code, std::string("unknown ") + what + " '" + std::string(name) + "'");
}

template <class E, std::size_t N> std::string_view name_of(E e, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [x, s] : table)
    if (x == e) return s;
  return "?";
}

constexpr std::pair<FunctionKind, std::string_view> kFunctions[] = {
    {FunctionKind::Identity, "identity"},   {FunctionKind::Project, "project"}, {FunctionKind::SumArgs, "sum-args"},
    {FunctionKind::Linear, "linear"},       {FunctionKind::Mlp, "mlp"},         {FunctionKind::FixedScalar, "fixed-scalar"},
    {FunctionKind::Attention, "attention"},
};
constexpr std::pair<Aggregator, std::string_view> kAggregators[] = {
    {Aggregator::Sum, "sum"}, {Aggregator::Mean, "mean"}, {Aggregator::Max, "max"}};
constexpr std::pair<Nonlinearity, std::string_view> kNonlinearities[] = {
    {Nonlinearity::Identity, "identity"}, {Nonlinearity::Relu, "relu"}, {Nonlinearity::Sigmoid, "sigmoid"}};
constexpr std::pair<LayerKind, std::string_view> kLayers[] = {
    {LayerKind::Imp, "imp"},   {LayerKind::HgConv, "hgconv"}, {LayerKind::Hat, "hat"}, {LayerKind::Bamp, "bamp"},
    {LayerKind::Cwn, "cwn"},   {LayerKind::Kgnn, "kgnn"},     {LayerKind::Mp, "mp"}};
constexpr std::pair<ReadoutKind, std::string_view> kReadouts[] = {
    {ReadoutKind::Sum, "sum"}, {ReadoutKind::Mean, "mean"}, {ReadoutKind::Max, "max"}, {ReadoutKind::Histogram, "histogram"}};

} // namespace

std::string_view function_kind_name(FunctionKind k) { return name_of(k, kFunctions); }
FunctionKind parse_function_kind(std::string_view name) {
  return parse_named(name, kFunctions, ErrorCode::UnknownFunctionKind, "function kind");
}
std::string_view aggregator_name(Aggregator a) { return name_of(a, kAggregators); }
Aggregator parse_aggregator(std::string_view name) { return parse_named(name, kAggregators, ErrorCode::ParseError, "aggregator"); }
std::string_view nonlinearity_name(Nonlinearity n) { return name_of(n, kNonlinearities); }
Nonlinearity parse_nonlinearity(std::string_view name) {
  return parse_named(name, kNonlinearities, ErrorCode::ParseError, "nonlinearity");
}
std::string_view layer_kind_name(LayerKind k) { return name_of(k, kLayers); }
LayerKind parse_layer_kind(std::string_view name) { return parse_named(name, kLayers, ErrorCode::ParseError, "layer kind"); }
std::string_view readout_name(ReadoutKind k) { return name_of(k, kReadouts); }
ReadoutKind parse_readout(std::string_view name) { return parse_named(name, kReadouts, ErrorCode::ParseError, "readout"); }

std::string_view flavor_name(Flavor f) {
  switch (f) {
  case Flavor::Convolutional: return "conv";
  case Flavor::Attentional: return "att";
  case Flavor::GeneralMP: return "gen";
  }
  return "?";
}

Flavor classify_flavor(const ModelSpec& spec) {
  bool learnable_scalar = false, learnable_vector = false;
  auto visit = [&](const FunctionSpec& f) {
    switch (f.kind) {
    case FunctionKind::Identity:
    case FunctionKind::Project:
    case FunctionKind::SumArgs:
    case FunctionKind::FixedScalar: break;
    case FunctionKind::Attention: learnable_scalar = true; break;
    case FunctionKind::Linear:
    case FunctionKind::Mlp: learnable_vector = true; break;
    default: throw Error(ErrorCode::UnknownFunctionKind, "function kind " + std::to_string(static_cast<int>(f.kind)));
    }
  };
  for (const auto& layer : spec.layers) {
    for (const auto& [site, f] : layer.psi) visit(f);
    visit(layer.phi);
    if (layer.kind == LayerKind::Imp) visit(layer.phi_edge);
    if (layer.kind == LayerKind::Hat) visit(layer.attention);
  }
  if (learnable_vector) return Flavor::GeneralMP;
  return learnable_scalar ? Flavor::Attentional : Flavor::Convolutional;
}

std::vector<double> uniform_values(std::size_t count, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  return out;
}

Mat random_matrix(int rows, int cols, std::uint64_t seed, double scale) {
  auto v = uniform_values(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), seed);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * v[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
  return m;
}

namespace {

class Filler {
public:
  explicit Filler(std::uint64_t seed) : rng_(seed) {}

  void matrix(Mat& m, int rows, int cols) {
    if (m.size() != 0 || rows <= 0 || cols <= 0) return;
    const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
    m.resize(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = scale * (2.0 * (static_cast<double>(rng_() >> 11) * 0x1.0p-53) - 1.0);
  }

  void function(FunctionSpec& f) {
    switch (f.kind) {
    case FunctionKind::Linear:
      matrix(f.weight, f.in, f.out);
      if (f.bias.size() == 0) f.bias = RowVec::Zero(f.out);
      break;
    case FunctionKind::Mlp:
      matrix(f.weight, f.in, f.hidden);
      matrix(f.weight2, f.hidden, f.out);
      if (f.bias.size() == 0) f.bias = RowVec::Zero(f.hidden);
      if (f.bias2.size() == 0) f.bias2 = RowVec::Zero(f.out);
      break;
    case FunctionKind::Attention: matrix(f.weight, f.in, f.out); break;
    default: break;
    }
  }

private:
  std::mt19937_64 rng_;
};

FunctionSpec declared(FunctionKind kind, int in, int hidden, int out) {
  FunctionSpec f;
  f.kind = kind;
  f.in = in;
  f.hidden = hidden;
  f.out = out;
  return f;
}

FunctionSpec declared_mlp(int in, int out) { return declared(FunctionKind::Mlp, in, out, out); }

} // namespace

void initialize_parameters(ModelSpec& spec, std::uint64_t seed) {
  Filler fill(seed);
  for (auto& layer : spec.layers) {
    for (auto& [site, f] : layer.psi) fill.function(f);
    fill.function(layer.phi);
    fill.function(layer.phi_edge);
    fill.function(layer.attention);
    fill.matrix(layer.theta, layer.theta_in, layer.theta_out);
    if (layer.kind == LayerKind::Kgnn) fill.matrix(layer.theta2, layer.theta_in, layer.theta_out);
  }
}

namespace presets {

ModelSpec imp_general(int width, std::uint64_t seed) {
  ModelSpec m;
  m.name = "imp";
  LayerSpec l;
  l.kind = LayerKind::Imp;
  l.psi["vertex"] = declared_mlp(width, width);
  l.phi_edge = declared_mlp(2 * width, width);
  l.phi = declared_mlp(2 * width, width);
  l.aggregators = {{"node", Aggregator::Sum}, {"message", Aggregator::Sum}, {"edge", Aggregator::Sum}};
  m.layers.push_back(std::move(l));
  initialize_parameters(m, seed);
  return m;
}

ModelSpec hgconv(int width, std::uint64_t seed) {
  ModelSpec m;
  m.name = "hgconv";
  LayerSpec l;
  l.kind = LayerKind::HgConv;
  l.psi["vertex"] = FunctionSpec::fixed("sym-degree");
  l.phi = FunctionSpec::identity();
  l.theta_in = l.theta_out = width;
  l.sigma = Nonlinearity::Relu;
  m.layers.push_back(std::move(l));
  initialize_parameters(m, seed);
  return m;
}

ModelSpec hat(int width, std::uint64_t seed) {
  ModelSpec m;
  m.name = "hat";
  LayerSpec l;
  l.kind = LayerKind::Hat;
  l.attention = declared(FunctionKind::Attention, width, 0, width);
  l.phi = FunctionSpec::identity();
  l.theta_in = l.theta_out = width;
  l.sigma = Nonlinearity::Relu;
  m.layers.push_back(std::move(l));
  initialize_parameters(m, seed);
  return m;
}

ModelSpec mpsn(int width, std::uint64_t seed) {
  ModelSpec m;
  m.name = "mpsn";
  LayerSpec l;
  l.kind = LayerKind::Bamp;
  l.relations = {Relation::Boundary, Relation::Coboundary, Relation::Upper, Relation::Lower};
  l.psi["boundary"] = declared_mlp(2 * width, width);
  l.psi["coboundary"] = declared_mlp(2 * width, width);
  l.psi["upper"] = declared_mlp(3 * width, width);
  l.psi["lower"] = declared_mlp(3 * width, width);
  l.phi = declared_mlp(5 * width, width);
  m.layers.push_back(std::move(l));
  initialize_parameters(m, seed);
  return m;
}

ModelSpec cwn(int width, std::uint64_t seed) {
  ModelSpec m;
  m.name = "cwn";
  LayerSpec l;
  l.kind = LayerKind::Cwn;
  l.relations = {Relation::Boundary, Relation::Upper};
  l.psi["boundary"] = declared_mlp(2 * width, width);
  l.psi["upper"] = declared_mlp(3 * width, width);
  l.phi = declared_mlp(3 * width, width);
  m.layers.push_back(std::move(l));
  m.per_dimension = true;
  initialize_parameters(m, seed);
  return m;
}

ModelSpec kgnn(int width, std::uint64_t seed, bool local) {
  ModelSpec m;
  m.name = "kgnn";
  LayerSpec l;
  l.kind = LayerKind::Kgnn;
  l.psi["down"] = FunctionSpec::fixed("one");
  l.phi = FunctionSpec::sum_args();
  l.theta_in = l.theta_out = width;
  l.local = local;
  l.sigma = Nonlinearity::Relu;
  m.layers.push_back(std::move(l));
  initialize_parameters(m, seed);
  return m;
}

ModelSpec graph_mp(int in_width, int out_width, std::uint64_t seed, int layers) {
  ModelSpec m;
  m.name = "graph-mp";
  for (int i = 0; i < layers; ++i) {
    LayerSpec l;
    l.kind = LayerKind::Mp;
    const int in = i == 0 ? in_width : out_width;
    l.psi["hop"] = FunctionSpec::project(1);
    l.phi = declared(FunctionKind::Linear, 2 * in, 0, out_width);
    l.sigma = Nonlinearity::Relu;
    m.layers.push_back(std::move(l));
  }
  initialize_parameters(m, seed);
  return m;
}

ModelSpec by_name(const std::string& name, int width, std::uint64_t seed) {
  if (name == "imp") return imp_general(width, seed);
  if (name == "hgconv") return hgconv(width, seed);
  if (name == "hat") return hat(width, seed);
  if (name == "mpsn") return mpsn(width, seed);
  if (name == "cwn") return cwn(width, seed);
  if (name == "kgnn") return kgnn(width, seed);
  if (name == "graph-mp") return graph_mp(width, width, seed);
  throw Error(ErrorCode::ParseError, "unknown preset '" + name + "'");
}

} // namespace presets

} // namespace hognn
