#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "h22/graph.hpp"
#include "h22/model.hpp"
#include "h22/rng.hpp"

namespace h22 {

// Outcome of one lemma-level battery inside a verification suite.
struct LemmaReport {
  std::string lemma;
  long trials = 0;
  long failures = 0;
  double worst_residual = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> details;  // failure notes, capped
};

nlohmann::json lemma_report_json(const LemmaReport& report);

// Suites: normalization | ward | detlemmas | resistance | regime |
// oracle_vs_mcmc. Unknown names are invalid-argument errors. Deterministic
// given (name, trials, seed).
std::vector<LemmaReport> run_verify_suite(const std::string& name, long trials,
                                          std::uint64_t seed);
bool suite_passed(const std::vector<LemmaReport>& reports);

// Prints one JSON line per lemma plus a summary; exit 0 on pass, 1 on any
// failure, 2 on unknown suite.
int command_verify(const std::string& name, long trials, std::uint64_t seed);

// Random small instances shared by the property-based suites and unit tests.
// Graphs have 2..max_vertices vertices, a connected positive part, and at
// least one positive pinning weight.
PinnedGraph random_pinned_graph(RngStream& rng, int max_vertices);
FieldConfig random_field_config(RngStream& rng, int n, double scale);

}  // namespace h22
