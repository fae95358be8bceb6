#pragma once

#include <map>
#include <vector>

#include "hognn/model.hpp"
#include "hognn/structures.hpp"

namespace hognn {

/// Feature matrix per entity class; rows follow the canonical entity order.
struct ModelState {
  std::map<EntityClass, Mat> features;

  const Mat& at(EntityClass c) const;
  bool has(EntityClass c) const { return features.count(c) != 0; }
};

/// Features of the structure, or a ones column when it has none. Hyperedges
/// without own features take the sum of their member vertex features.
ModelState initial_state(const HOStructure& s);

/// Row vector evaluation of a built-in function. `coefficient` scales
/// FixedScalar and Attention outputs.
RowVec apply_function(const FunctionSpec& f, const std::vector<RowVec>& args, double coefficient = 1.0);
Eigen::Index function_output_width(const FunctionSpec& f, const std::vector<Eigen::Index>& arg_widths);
Mat apply_nonlinearity(Nonlinearity n, Mat x);

ModelState imp_layer(const Hypergraph& h, const ModelState& state, const LayerSpec& spec);

/// D_V^{-1/2} B W D_E^{-1} B^T D_V^{-1/2} X Θ before σ, with zero degrees
/// masked to zero.
Mat hgconv_pre_activation(const Mat& b, const std::vector<double>& w, const Mat& x, const Mat& theta);
/// ½(I + D^{-1/2} A D^{-1/2}) X Θ.
Mat gcn_reference(const Graph& g, const Mat& x, const Mat& theta);
ModelState hgconv_layer(const Hypergraph& h, const ModelState& state, const LayerSpec& spec);

/// Attention-weighted incidence matrix (n x m). Throws EmptyIncidence.
Mat hat_attention(const Hypergraph& h, const ModelState& state, const FunctionSpec& attention,
                  HatNormalization norm = HatNormalization::OverMembers);
ModelState hat_layer(const Hypergraph& h, const ModelState& state, const LayerSpec& spec);

ModelState bamp_layer(const Hypergraph& s, const ModelState& state, const LayerSpec& spec);
ModelState bamp_layer(const CellComplex& c, const ModelState& state, const LayerSpec& spec);
ModelState cwn_layer(const CellComplex& c, const ModelState& state, const LayerSpec& spec);
ModelState kgnn_layer(const NodeTupleCollection& c, const ModelState& state, const LayerSpec& spec);
ModelState mp_layer(const Graph& g, const ModelState& state, const LayerSpec& spec);

/// Dispatches on layer kind and structure kind; throws KindMismatch.
ModelState apply_layer(const HOStructure& s, const ModelState& state, const LayerSpec& spec);
ModelState run_layers(const HOStructure& s, const ModelSpec& spec, ModelState state);

/// Per-class pooling concatenated in class order. Throws EmptyState.
RowVec readout(const ModelState& state, ReadoutKind kind);
/// Same, with cells pooled per dimension when `per_dimension` is set.
RowVec readout(const HOStructure& s, const ModelState& state, ReadoutKind kind, bool per_dimension);
Mat pool_rows(const Mat& rows, ReadoutKind kind, Eigen::Index width);

RowVec run_model(const HOStructure& s, const ModelSpec& spec);

enum class OuterMode { EgoAverage, NestedOuterMP, BagPool, Fuse };
std::string_view outer_mode_name(OuterMode m);
OuterMode parse_outer_mode(std::string_view name);

struct PipelineSpec {
  ModelSpec base;  // Mp layers run on every subgraph
  OuterMode outer = OuterMode::BagPool;
  ModelSpec outer_model; // NestedOuterMP only
  ReadoutKind pool = ReadoutKind::Sum;
  /// Per-vertex counts of these motifs inside each subgraph are appended to
  /// the subgraph's vertex features.
  std::vector<Graph> annotate_motifs;
};

RowVec run_subgraph_pipeline(const SubgraphCollection& s, const PipelineSpec& spec);

/// Inner graphs pooled with inner.readout become outer vertex features.
RowVec nested_run(const NestedGraph& n, const ModelSpec& inner, const ModelSpec& outer);

} // namespace hognn
