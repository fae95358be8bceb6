#pragma once

namespace hognn::budget {

inline constexpr int kBruteForceGraph = 10;
inline constexpr int kBruteForceStructure = 8;
inline constexpr int kTupleVertices = 8;
inline constexpr int kTupleOrder = 3;
inline constexpr int kCorpusVertices = 7;
inline constexpr int kMotifVertices = 5;

/// Vertex cap for an exhaustive routine. HOGNN_BUDGET_OVERRIDE, when set to a
/// larger integer, raises the cap.
int vertex_cap(int default_cap);

} // namespace hognn::budget
