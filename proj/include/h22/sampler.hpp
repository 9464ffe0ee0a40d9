#pragma once

#include <map>
#include <string>
#include <vector>

#include "h22/graph.hpp"
#include "h22/observables.hpp"
#include "h22/rng.hpp"

namespace h22 {

// Single-site random-walk Metropolis over the horospherical field, either on
// the marginal density directly or on the joint density with exact Gaussian
// refreshes of the flat field.
enum class UpdateMode { kMarginal, kJoint };

struct SamplerSettings {
  long steps = 20000;  // total sweeps, burn-in included
  long burn_in = 4000;
  long thin = 1;
  int chains = 4;
  double step_size = 1.0;
  bool tune = true;  // Robbins-Monro step adaptation during burn-in only
  UpdateMode mode = UpdateMode::kMarginal;

  void validate() const;
};

struct EstimateSummary {
  double mean = 0.0;
  double stderr_ = 0.0;
  double ess = 0.0;
  long n_used = 0;
};

// Batch-means summary; throws below 20 samples (no honest variance there).
EstimateSummary estimate_batch_means(const std::vector<double>& samples);

struct ChainResult {
  int chain_id = 0;
  double acceptance_rate = 0.0;
  bool acceptance_warning = false;
  std::map<std::string, std::vector<double>> samples;
};

ChainResult run_chain(const PinnedGraph& graph, const std::vector<Observable>& observables,
                      const SamplerSettings& settings, std::uint64_t seed, int chain_id);

std::vector<ChainResult> run_sampler(const PinnedGraph& graph,
                                     const std::vector<Observable>& observables,
                                     const SamplerSettings& settings, std::uint64_t seed);

struct PooledEstimate {
  std::string observable;
  double mean = 0.0;
  double stderr_ = 0.0;
  double ess = 0.0;
  double split_rhat = 1.0;  // potential scale reduction over split chains
  std::vector<EstimateSummary> per_chain;
};

PooledEstimate pool_estimates(const std::vector<ChainResult>& chains,
                              const std::string& observable);

}  // namespace h22
