#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hognn/wiring.hpp"

namespace hognn {

using RowVec = Eigen::RowVectorXd;
using Mat = Eigen::MatrixXd;

enum class Aggregator { Sum, Mean, Max };
enum class Nonlinearity { Identity, Relu, Sigmoid };

/// Built-in ψ / φ functions. Arguments are row vectors; unless stated the
/// function acts on their concatenation.
enum class FunctionKind {
  Identity,    // concatenation of the arguments
  Project,     // argument `arg`
  SumArgs,     // elementwise sum of equal-width arguments
  Linear,      // x W + b
  Mlp,         // relu(x W + b) W2 + b2
  FixedScalar, // c * argument `arg`, c from a structural rule
  Attention,   // softmax-normalised learnable score times argument `arg`
};

enum class Flavor { Convolutional, Attentional, GeneralMP };

struct FunctionSpec {
  FunctionKind kind = FunctionKind::Identity;
  int arg = 1;
  Mat weight;
  RowVec bias;
  Mat weight2;
  RowVec bias2;
  /// Declared shapes, used when weights are left for seeded initialisation.
  int in = 0, hidden = 0, out = 0;
  /// FixedScalar: "one", "inv-dst-degree", "sym-degree". Attention: scoring
  /// uses `weight` as the shared projection Θ and `score` as σ.
  std::string rule = "one";
  Nonlinearity score = Nonlinearity::Identity;

  static FunctionSpec identity();
  static FunctionSpec project(int arg);
  static FunctionSpec sum_args();
  static FunctionSpec linear(Mat w, RowVec b = {});
  static FunctionSpec mlp(Mat w1, RowVec b1, Mat w2, RowVec b2);
  static FunctionSpec fixed(std::string rule, int arg = 1);
  static FunctionSpec attention(Mat theta, int arg = 1, Nonlinearity score = Nonlinearity::Identity);

  bool learnable() const { return kind == FunctionKind::Linear || kind == FunctionKind::Mlp || kind == FunctionKind::Attention; }
  bool scalar_valued() const { return kind != FunctionKind::Linear && kind != FunctionKind::Mlp; }
};

std::string_view function_kind_name(FunctionKind k);
/// Throws UnknownFunctionKind.
FunctionKind parse_function_kind(std::string_view name);
std::string_view aggregator_name(Aggregator a);
Aggregator parse_aggregator(std::string_view name);
std::string_view nonlinearity_name(Nonlinearity n);
Nonlinearity parse_nonlinearity(std::string_view name);
std::string_view flavor_name(Flavor f);

enum class LayerKind {
  Imp,    // Eqs. (2)-(4) on a hypergraph
  HgConv, // D_V^{-1/2} B W D_E^{-1} B^T D_V^{-1/2} H Θ
  Hat,    // HGConv over the attention-weighted incidence matrix
  Bamp,   // MPSN-style update over a chosen relation subset
  Cwn,    // boundary + upper over a cell complex
  Kgnn,   // x Θ1 + Σ_{u ∈ N↓(v)} x_u Θ2 on node tuples
  Mp,     // plain-graph message passing over hop channels
};

std::string_view layer_kind_name(LayerKind k);
LayerKind parse_layer_kind(std::string_view name);

enum class HatNormalization { OverMembers, OverIncident };

struct LayerSpec {
  LayerKind kind = LayerKind::Mp;
  /// Message functions keyed by site: "vertex" (IMP ψ_V), "boundary",
  /// "coboundary", "upper", "lower", "hop".
  std::map<std::string, FunctionSpec> psi;
  FunctionSpec phi = FunctionSpec::sum_args();      // φ_V / φ
  FunctionSpec phi_edge = FunctionSpec::project(1); // φ_E (IMP)
  /// Aggregators keyed by site; IMP uses "node" (⊕), "message" (⊗) and
  /// "edge" (⊙). Missing sites use sum.
  std::map<std::string, Aggregator> aggregators;
  Nonlinearity sigma = Nonlinearity::Identity;
  Mat theta;  // HGConv / HAT Θ, k-GNN Θ1
  Mat theta2; // k-GNN Θ2
  int theta_in = 0, theta_out = 0; // declared shape of Θ (and Θ2)
  std::vector<double> hyperedge_weights; // HGConv W diagonal, empty = I
  std::vector<Relation> relations;       // Bamp
  AdjacencyOptions adjacency;            // Bamp
  bool local = false;                    // Kgnn
  std::vector<int> hops{1};              // Mp
  FunctionSpec attention;                // Hat scoring (kind Attention)
  HatNormalization hat_normalization = HatNormalization::OverMembers;

  Aggregator aggregator(const std::string& site) const {
    auto it = aggregators.find(site);
    return it == aggregators.end() ? Aggregator::Sum : it->second;
  }
};

enum class ReadoutKind { Sum, Mean, Max, Histogram };
std::string_view readout_name(ReadoutKind k);
ReadoutKind parse_readout(std::string_view name);

struct ModelSpec {
  std::string name;
  std::vector<LayerSpec> layers;
  ReadoutKind readout = ReadoutKind::Sum;
  bool per_dimension = false; // cell complexes: pool each dimension separately
};

/// Convolutional when every coefficient function is fixed, attentional when
/// some function is a learnable scalar and none returns a learnable vector,
/// general otherwise.
Flavor classify_flavor(const ModelSpec& spec);

/// Fills empty weight matrices from their declared shapes with values drawn
/// from one seeded generator, in layer order.
void initialize_parameters(ModelSpec& spec, std::uint64_t seed);

std::vector<double> uniform_values(std::size_t count, std::uint64_t seed, double lo = -1.0, double hi = 1.0);
Mat random_matrix(int rows, int cols, std::uint64_t seed, double scale = 1.0);

namespace presets {
ModelSpec imp_general(int width, std::uint64_t seed);
ModelSpec hgconv(int width, std::uint64_t seed);
ModelSpec hat(int width, std::uint64_t seed);
ModelSpec mpsn(int width, std::uint64_t seed);
ModelSpec cwn(int width, std::uint64_t seed);
ModelSpec kgnn(int width, std::uint64_t seed, bool local = false);
/// Plain-graph sum aggregation x Θ1 + Σ x_u Θ2 style stack used for subgraph
/// and nested bases.
ModelSpec graph_mp(int in_width, int out_width, std::uint64_t seed, int layers = 1);
ModelSpec by_name(const std::string& name, int width, std::uint64_t seed);
} // namespace presets

} // namespace hognn
