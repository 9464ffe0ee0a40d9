#pragma once

#include "h22/graph.hpp"
#include "h22/observables.hpp"

namespace h22 {

// Tensor-product trapezoid quadrature on [-L, L]^dims. The grid is linearly
// shrunk by 1/sqrt(min(max weight, min pinning)) when the largest weight
// exceeds rescale_trigger, keeping the sharply peaked density resolved.
struct QuadratureSpec {
  double half_width = 10.0;
  int points_per_axis = 160;  // rounded up to odd so the half grid nests
  bool marginal = false;      // integrate the u-marginal only (s-free observables)
  double flag_tolerance = 1e-3;
  double rescale_trigger = 50.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error_indicator = 0.0;  // |value - half-grid value|
  bool flagged = false;
  int dimensions = 0;
  double grid_scale = 1.0;
};

// Raw integral of exp(log density); close to one by the supersymmetric
// normalization. Joint mode needs 2n <= 4, marginal mode n <= 3.
QuadratureResult oracle_normalization(const PinnedGraph& graph, const QuadratureSpec& spec);

// Self-normalized expectation of the observable under the measure.
QuadratureResult oracle_expectation(const PinnedGraph& graph, const Observable& observable,
                                    const QuadratureSpec& spec);

// Several observables in one density pass (they share the grid and the
// normalization); much cheaper than separate calls in four dimensions.
std::vector<QuadratureResult> oracle_expectations(const PinnedGraph& graph,
                                                  const std::vector<Observable>& observables,
                                                  const QuadratureSpec& spec);

}  // namespace h22
