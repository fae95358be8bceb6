#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hognn/engine.hpp"
#include "hognn/structures.hpp"
#include "hognn/wiring.hpp"
#include "hognn/wl.hpp"

namespace hognn::io {

using Json = nlohmann::ordered_json;

/// HOGDM document <-> structure. Parsing throws ParseError for malformed
/// documents and the builders' errors for invalid content.
Json to_json(const HOStructure& s);
HOStructure from_json(const Json& doc);
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& doc);

std::string dump(const Json& doc);
Json parse(const std::string& text);

HOStructure read_structure(const std::string& path);
Graph read_graph(const std::string& path);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// "n m" followed by m lines "u v".
Graph parse_edge_list(const std::string& text, const std::string& feature_csv = {});
std::string format_edge_list(const Graph& g);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

/// Header "row,<col names>", then one line per row.
std::string matrix_csv(const Mat& m, const std::vector<std::string>& rows, const std::vector<std::string>& cols);
std::string embedding_csv(const RowVec& v);

/// Names of the rows of each entity class in canonical order.
std::vector<std::string> entity_names(const HOStructure& s, EntityClass c);

std::string channels_csv(const WiringSet& w);
std::string counts_csv(const std::map<std::string, std::size_t>& counts);

Json model_to_json(const ModelSpec& m);
/// Either {"preset": name, "width": w} or a full layer list. Declared-shape
/// weights are filled from `seed`.
ModelSpec model_from_json(const Json& doc, std::uint64_t seed);

std::string battery_csv(const BatteryReport& r);

} // namespace hognn::io
