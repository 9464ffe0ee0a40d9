#pragma once

#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "json.hpp"

#include "h22/graph.hpp"

namespace h22 {

// Declarative graph descriptions: everything a run needs to rebuild its
// graph lives in one JSON object with a "family" discriminator.

struct BoxSpec {
  int dim = 1;
  int levels = 1;
  double wbar = 1.0;
  double alpha = 4.0;
  double tail_rel = 1e-10;
};

struct HierarchicalSpec {
  int levels = 1;
  std::vector<double> level_weights;  // one entry per level, innermost first
  double pinning = 1.0;
};

struct ChainSpec {
  int length = 2;
  double wbar = 1.0;
  double alpha = 4.0;
  ChainPinning mode = ChainPinning::kLastVertexPinned;
  std::vector<double> pinning;  // explicit mode only
  std::vector<std::tuple<int, int, double>> extra_edges;
};

struct EffectiveChainSpec {
  int length = 2;
  std::vector<double> level_weights;
  double pinning_base = 1.0;
};

struct CustomSpec {
  std::vector<std::vector<double>> weights;  // symmetric matrix, zero diagonal
  std::vector<double> pinning;
  std::vector<std::string> labels;  // optional
};

using GraphSpec = std::variant<BoxSpec, HierarchicalSpec, ChainSpec, EffectiveChainSpec, CustomSpec>;

std::string family_name(const GraphSpec& spec);

// Doubles go through nlohmann's shortest-round-trip printer, so
// spec -> json -> spec -> json is byte-stable and value-exact.
nlohmann::json graph_spec_to_json(const GraphSpec& spec);
GraphSpec graph_spec_from_json(const nlohmann::json& node);

PinnedGraph build_graph(const GraphSpec& spec);

// SHA-256 digest as lowercase hex; used to fingerprint configs in reports.
std::string sha256_hex(const std::string& data);

}  // namespace h22
