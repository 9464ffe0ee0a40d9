#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "h22/observables.hpp"
#include "h22/sampler.hpp"
#include "h22/serialize.hpp"

namespace h22 {

// Declarative observable description, the JSON-facing counterpart of the
// evaluator factories. Vertices are 0-based graph indices; kPinnedVertex
// refers to the pinned site.
struct ObservableSpec {
  std::string kind;             // cosh_power | cosh_gap_power | field_square | interaction_product
  int vertex = 0;               // cosh_power, field_square
  int partner = kPinnedVertex;  // second vertex of cosh_gap_power
  double exponent = 1.0;
  std::vector<std::tuple<int, int, double>> edges;  // interaction_product: (i, j, m_e)
  std::vector<double> deltas;                       // optional protections per edge
};

nlohmann::json observable_spec_to_json(const ObservableSpec& spec);
ObservableSpec observable_spec_from_json(const nlohmann::json& node);

// Validates ranges and (for chain families) the disjoint-interval hypothesis
// of the product bounds; violations are invalid-argument errors.
Observable make_observable(const ObservableSpec& spec, const PinnedGraph& graph,
                           const GraphSpec& graph_spec);

struct RegimeParams {
  double alpha = 4.0;
  double gamma = 0.0;
  double kappa = 1.0;
  double wbar = 0.0;  // envelope scale the bounds refer to; 0 = unavailable
};

struct ExperimentConfig {
  GraphSpec graph;
  std::vector<ObservableSpec> observables;
  SamplerSettings sampler;
  RegimeParams regime;
  std::uint64_t seed = 0;
  std::string out;  // default output path; CLI --out overrides
};

ExperimentConfig config_from_json(const nlohmann::json& node);
nlohmann::json config_to_json(const ExperimentConfig& config);

// One CSV row: an estimate with its applicable bound, if any theorem applies
// at the configured regime parameters. status is pass | fail | vacuous.
struct ReportRow {
  std::string observable;
  double degree = 0.0;  // exponent column ("m")
  double estimate = 0.0;
  double stderr_ = 0.0;
  double ess = 0.0;
  std::optional<double> bound;
  std::optional<double> margin_sigma;
  std::string status;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<ChainResult> chains;  // empty for oracle runs
  double max_split_rhat = 1.0;
  bool used_oracle = false;

  bool any_failure() const;
};

// The applicable theorem bound for an observable at the given regime
// parameters, or nothing when every hypothesis route is unmet.
std::optional<double> theorem_bound(const ObservableSpec& spec, const GraphSpec& graph_spec,
                                    const RegimeParams& regime, const PinnedGraph& graph);

enum class Estimator { kSampler, kOracle };

ExperimentReport run_experiment(const ExperimentConfig& config, Estimator estimator);

// Fixed column orders; '\n' line endings; numbers printed with %.17g so
// reruns are byte-identical.
std::string report_csv(const ExperimentReport& report);
std::string chains_csv(const std::vector<ChainResult>& chains);

// Provenance block: config fingerprint, seed, program version, timestamp.
// The timestamp is the only non-reproducible field and lives nowhere else.
nlohmann::json provenance_json(const std::string& config_bytes, std::uint64_t seed);

// Subcommand bodies; parse errors and IO failures return exit code 2,
// statistical failures 1, success (including vacuous rows) 0.
int command_sample(const std::string& config_path, std::optional<std::uint64_t> seed,
                   const std::string& out_override);
int command_oracle(const std::string& config_path);
int command_constants(double alpha, double gamma, double kappa);

}  // namespace h22
