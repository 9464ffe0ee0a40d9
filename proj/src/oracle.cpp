#include "h22/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "h22/model.hpp"

namespace h22 {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kNegligibleLog = -1000.0;  // exp contributes < 1e-300 relative

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct Axis {
  std::vector<double> points;
  std::vector<double> weight_full;
  std::vector<double> weight_half;  // zero on odd indices
};

Axis make_axis(double half_width, int points) {
  Axis axis;
  const double step = 2.0 * half_width / (points - 1);
  axis.points.resize(static_cast<size_t>(points));
  axis.weight_full.resize(static_cast<size_t>(points));
  axis.weight_half.assign(static_cast<size_t>(points), 0.0);
  for (int i = 0; i < points; ++i) {
    axis.points[static_cast<size_t>(i)] = -half_width + i * step;
    const bool edge = (i == 0 || i == points - 1);
    axis.weight_full[static_cast<size_t>(i)] = step * (edge ? 0.5 : 1.0);
    if (i % 2 == 0)
      axis.weight_half[static_cast<size_t>(i)] = 2.0 * step * (edge ? 0.5 : 1.0);
  }
  return axis;
}

int make_odd(int points) { return points % 2 == 0 ? points + 1 : points; }

double grid_scale_for(const PinnedGraph& graph, const QuadratureSpec& spec) {
  const double max_w = graph.max_weight();
  if (!(max_w > spec.rescale_trigger)) return 1.0;
  const double narrow = std::min(max_w, graph.min_positive_pinning());
  return std::min(1.0, 1.0 / std::sqrt(narrow));
}

void validate_spec(const QuadratureSpec& spec) {
  if (!(spec.half_width >= 6.0)) throw std::invalid_argument("quadrature: half_width below 6");
  if (spec.points_per_axis < 64) throw std::invalid_argument("quadrature: too few points");
}

struct PassResult {
  Kahan norm_full, norm_half;
  std::vector<Kahan> num_full, num_half;
};

struct PositiveEdge {
  int head, tail;  // tail == kPinnedVertex for pinning edges
  double weight;
};

std::vector<PositiveEdge> positive_edge_list(const PinnedGraph& graph) {
  std::vector<PositiveEdge> edges;
  const EdgeSystem sys = EdgeSystem::positive_edges(graph);
  edges.reserve(static_cast<size_t>(sys.count()));
  for (int e = 0; e < sys.count(); ++e)
    edges.push_back({sys.edge(e).head, sys.edge(e).tail,
                     graph.weight(sys.edge(e).head, sys.edge(e).tail)});
  return edges;
}

// Tensor trapezoid over the joint (u, s) density; one pass accumulates the
// normalization and every observable on both the full and the nested half
// grid. The u-dependent parts (log det, cosh terms, edge growth factors) are
// evaluated once per u-tuple, the s-quadratic form per point.
PassResult joint_pass(const PinnedGraph& graph, const std::vector<Observable>& observables,
                      const Axis& axis) {
  const int n = graph.size();
  const int points = static_cast<int>(axis.points.size());
  const auto edges = positive_edge_list(graph);

  PassResult out;
  out.num_full.resize(observables.size());
  out.num_half.resize(observables.size());

  FieldConfig config = FieldConfig::zero(n);
  std::vector<int> iu(static_cast<size_t>(n), 0);
  std::vector<double> growth(edges.size());

  for (;;) {
    for (int k = 0; k < n; ++k) config.u[k] = axis.points[static_cast<size_t>(iu[k])];

    double u_weight_full = 1.0;
    double u_weight_half = 1.0;
    for (int k = 0; k < n; ++k) {
      u_weight_full *= axis.weight_full[static_cast<size_t>(iu[k])];
      u_weight_half *= axis.weight_half[static_cast<size_t>(iu[k])];
    }

    double base = -config.u.sum() - n * kLog2Pi;
    bool base_ok = true;
    {
      Eigen::LLT<Eigen::MatrixXd> llt(weighted_laplacian(graph, config.u));
      if (llt.info() != Eigen::Success) {
        base_ok = false;
      } else {
        for (int i = 0; i < n; ++i) base += 2.0 * std::log(llt.matrixLLT()(i, i));
      }
    }
    for (size_t e = 0; e < edges.size() && base_ok; ++e) {
      const double ui = config.u[edges[e].head];
      const double uj = edges[e].tail == kPinnedVertex ? 0.0 : config.u[edges[e].tail];
      base -= edges[e].weight * (std::cosh(ui - uj) - 1.0);
      growth[e] = std::exp(ui + uj);
    }

    if (base_ok) {
      std::vector<int> is(static_cast<size_t>(n), 0);
      for (;;) {
        for (int k = 0; k < n; ++k) config.s[k] = axis.points[static_cast<size_t>(is[k])];
        double log_density_value = base;
        for (size_t e = 0; e < edges.size(); ++e) {
          const double si = config.s[edges[e].head];
          const double sj = edges[e].tail == kPinnedVertex ? 0.0 : config.s[edges[e].tail];
          const double ds = si - sj;
          log_density_value -= edges[e].weight * 0.5 * ds * ds * growth[e];
        }
        if (log_density_value > kNegligibleLog) {
          double weight_full = u_weight_full;
          double weight_half = u_weight_half;
          for (int k = 0; k < n; ++k) {
            weight_full *= axis.weight_full[static_cast<size_t>(is[k])];
            weight_half *= axis.weight_half[static_cast<size_t>(is[k])];
          }
          const double density = std::exp(log_density_value);
          out.norm_full.add(weight_full * density);
          if (weight_half != 0.0) out.norm_half.add(weight_half * density);
          for (size_t o = 0; o < observables.size(); ++o) {
            const double value =
                observables[o].log_eval
                    ? std::exp(log_density_value + observables[o].log_eval(graph, config))
                    : density * observables[o].eval(graph, config);
            out.num_full[o].add(weight_full * value);
            if (weight_half != 0.0) out.num_half[o].add(weight_half * value);
          }
        }
        int k = 0;
        while (k < n && ++is[static_cast<size_t>(k)] == points) is[static_cast<size_t>(k++)] = 0;
        if (k == n) break;
      }
    }

    int k = 0;
    while (k < n && ++iu[static_cast<size_t>(k)] == points) iu[static_cast<size_t>(k++)] = 0;
    if (k == n) break;
  }
  return out;
}

PassResult marginal_pass(const PinnedGraph& graph, const std::vector<Observable>& observables,
                         const Axis& axis) {
  const int n = graph.size();
  const int points = static_cast<int>(axis.points.size());

  PassResult out;
  out.num_full.resize(observables.size());
  out.num_half.resize(observables.size());

  FieldConfig config = FieldConfig::zero(n);
  std::vector<int> iu(static_cast<size_t>(n), 0);
  for (;;) {
    for (int k = 0; k < n; ++k) config.u[k] = axis.points[static_cast<size_t>(iu[k])];
    const double log_density_value = log_marginal_density(graph, config.u);
    if (log_density_value > kNegligibleLog) {
      double weight_full = 1.0;
      double weight_half = 1.0;
      for (int k = 0; k < n; ++k) {
        weight_full *= axis.weight_full[static_cast<size_t>(iu[k])];
        weight_half *= axis.weight_half[static_cast<size_t>(iu[k])];
      }
      const double density = std::exp(log_density_value);
      out.norm_full.add(weight_full * density);
      if (weight_half != 0.0) out.norm_half.add(weight_half * density);
      for (size_t o = 0; o < observables.size(); ++o) {
        const double value =
            observables[o].log_eval
                ? std::exp(log_density_value + observables[o].log_eval(graph, config))
                : density * observables[o].eval(graph, config);
        out.num_full[o].add(weight_full * value);
        if (weight_half != 0.0) out.num_half[o].add(weight_half * value);
      }
    }
    int k = 0;
    while (k < n && ++iu[static_cast<size_t>(k)] == points) iu[static_cast<size_t>(k++)] = 0;
    if (k == n) break;
  }
  return out;
}

PassResult run_pass(const PinnedGraph& graph, const std::vector<Observable>& observables,
                    const QuadratureSpec& spec, int* dims_out, double* scale_out) {
  validate_spec(spec);
  const int n = graph.size();
  const int dims = spec.marginal ? n : 2 * n;
  if (spec.marginal && n > 3)
    throw std::invalid_argument("quadrature: marginal mode supports up to 3 vertices");
  if (!spec.marginal && 2 * n > 4)
    throw std::invalid_argument("quadrature: joint mode supports up to 2 vertices");
  if (spec.marginal)
    for (const auto& obs : observables)
      if (obs.needs_s)
        throw std::invalid_argument("quadrature: s-dependent observable needs joint mode");

  const double scale = grid_scale_for(graph, spec);
  const Axis axis = make_axis(spec.half_width * scale, make_odd(spec.points_per_axis));
  *dims_out = dims;
  *scale_out = scale;
  return spec.marginal ? marginal_pass(graph, observables, axis)
                       : joint_pass(graph, observables, axis);
}

}  // namespace

QuadratureResult oracle_normalization(const PinnedGraph& graph, const QuadratureSpec& spec) {
  QuadratureResult result;
  PassResult pass = run_pass(graph, {}, spec, &result.dimensions, &result.grid_scale);
  result.value = pass.norm_full.sum;
  result.error_indicator = std::abs(pass.norm_full.sum - pass.norm_half.sum);
  result.flagged = result.error_indicator > spec.flag_tolerance * std::abs(result.value);
  return result;
}

std::vector<QuadratureResult> oracle_expectations(const PinnedGraph& graph,
                                                  const std::vector<Observable>& observables,
                                                  const QuadratureSpec& spec) {
  std::vector<QuadratureResult> results(observables.size());
  if (observables.empty()) return results;
  int dims = 0;
  double scale = 1.0;
  PassResult pass = run_pass(graph, observables, spec, &dims, &scale);
  for (size_t o = 0; o < observables.size(); ++o) {
    QuadratureResult& r = results[o];
    r.dimensions = dims;
    r.grid_scale = scale;
    r.value = pass.num_full[o].sum / pass.norm_full.sum;
    const double half_value = pass.num_half[o].sum / pass.norm_half.sum;
    r.error_indicator = std::abs(r.value - half_value);
    r.flagged = r.error_indicator > spec.flag_tolerance * std::abs(r.value);
  }
  return results;
}

QuadratureResult oracle_expectation(const PinnedGraph& graph, const Observable& observable,
                                    const QuadratureSpec& spec) {
  return oracle_expectations(graph, {observable}, spec)[0];
}

}  // namespace h22
