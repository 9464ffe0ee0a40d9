#include "h22/observables.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

namespace h22 {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double field_at(const Eigen::VectorXd& v, int i) { return i == kPinnedVertex ? 0.0 : v[i]; }

std::string compact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void check_vertex(const PinnedGraph& graph, int v) {
  if (v != kPinnedVertex && (v < 0 || v >= graph.size()))
    throw std::invalid_argument("observable: vertex out of range");
}

}  // namespace

Observable cosh_power(int vertex, double exponent) {
  if (exponent < 0.0) throw std::invalid_argument("cosh_power: negative exponent");
  Observable obs;
  obs.name = "cosh_u" + std::to_string(vertex + 1) + "_pow" + compact(exponent);
  obs.eval = [vertex, exponent](const PinnedGraph& graph, const FieldConfig& config) {
    check_vertex(graph, vertex);
    return std::pow(std::cosh(field_at(config.u, vertex)), exponent);
  };
  return obs;
}

Observable cosh_gap_power(int vertex_a, int vertex_b, double exponent) {
  if (exponent < 0.0) throw std::invalid_argument("cosh_gap_power: negative exponent");
  if (vertex_a == vertex_b) throw std::invalid_argument("cosh_gap_power: identical vertices");
  Observable obs;
  obs.name = "cosh_gap_u" + std::to_string(vertex_a + 1) + "_u" + std::to_string(vertex_b + 1) +
             "_pow" + compact(exponent);
  obs.eval = [vertex_a, vertex_b, exponent](const PinnedGraph& graph, const FieldConfig& config) {
    check_vertex(graph, vertex_a);
    check_vertex(graph, vertex_b);
    const double gap = field_at(config.u, vertex_a) - field_at(config.u, vertex_b);
    return std::pow(std::cosh(gap), exponent);
  };
  return obs;
}

Observable field_square(int vertex) {
  Observable obs;
  obs.name = "s" + std::to_string(vertex + 1) + "_sq";
  obs.needs_s = true;
  obs.eval = [vertex](const PinnedGraph& graph, const FieldConfig& config) {
    check_vertex(graph, vertex);
    const double s = field_at(config.s, vertex);
    return s * s;
  };
  return obs;
}

Observable interaction_product(const std::vector<std::pair<int, int>>& pairs,
                               const std::vector<double>& exponents,
                               const std::vector<double>& deltas) {
  if (pairs.size() != exponents.size())
    throw std::invalid_argument("interaction_product: exponent count mismatch");
  if (!deltas.empty() && deltas.size() != pairs.size())
    throw std::invalid_argument("interaction_product: delta count mismatch");
  for (double m : exponents)
    if (m < 0.0) throw std::invalid_argument("interaction_product: negative exponent");
  for (double d : deltas)
    if (!(d > 0.0)) throw std::invalid_argument("interaction_product: nonpositive delta");

  Observable obs;
  obs.name = deltas.empty() ? "b_product" : "protected_b_product";
  obs.needs_s = true;
  auto log_value = [pairs, exponents, deltas](const PinnedGraph& graph,
                                              const FieldConfig& config) {
    double total = 0.0;
    for (size_t k = 0; k < pairs.size(); ++k) {
      const auto& [i, j] = pairs[k];
      check_vertex(graph, i);
      check_vertex(graph, j);
      const double b = edge_even_interaction(field_at(config.u, i), field_at(config.u, j),
                                             field_at(config.s, i), field_at(config.s, j));
      if (!deltas.empty() && !(b < 1.0 + deltas[k])) return -kInf;
      total += exponents[k] * std::log(b);
    }
    return total;
  };
  obs.log_eval = log_value;
  obs.eval = [log_value](const PinnedGraph& graph, const FieldConfig& config) {
    return std::exp(log_value(graph, config));
  };
  return obs;
}

Observable deficit_product(const EdgeSystem& edges, const Eigen::VectorXd& exponents,
                           const Eigen::VectorXd& deltas) {
  const int count = edges.count();
  if (exponents.size() != count || deltas.size() != count)
    throw std::invalid_argument("deficit_product: per-edge size mismatch");
  for (int e = 0; e < count; ++e) {
    if (!(exponents[e] >= 0.0)) throw std::invalid_argument("deficit_product: negative exponent");
    if (!(deltas[e] > 0.0)) throw std::invalid_argument("deficit_product: nonpositive delta");
  }

  // workspace shared across calls; the oracle evaluates observables serially
  struct Workspace {
    EdgeSystem edges;
    Eigen::VectorXd m, delta;
    Eigen::MatrixXd lap, shifted;
  };
  auto ws = std::make_shared<Workspace>();
  ws->edges = edges;
  ws->m = exponents;
  ws->delta = deltas;

  Observable obs;
  obs.name = "protected_deficit_product";
  obs.needs_s = true;
  obs.eval = [ws](const PinnedGraph& graph, const FieldConfig& config) {
    double log_b_product = 0.0;
    const int count = ws->edges.count();
    Eigen::ArrayXd unit_conductance(count);
    for (int e = 0; e < count; ++e) {
      const OrientedEdge& ed = ws->edges.edge(e);
      const double ui = field_at(config.u, ed.head);
      const double uj = field_at(config.u, ed.tail);
      const double b = edge_even_interaction(ui, uj, field_at(config.s, ed.head),
                                             field_at(config.s, ed.tail));
      if (!(b < 1.0 + ws->delta[e])) return 0.0;  // protection indicator
      log_b_product += ws->m[e] * std::log(b);
      unit_conductance[e] = std::exp(ui + uj) / b;
    }
    ws->lap = weighted_laplacian(graph, config.u);
    ws->shifted = ws->lap;
    for (int e = 0; e < count; ++e) {
      const double c = ws->m[e] * unit_conductance[e];
      if (c == 0.0) continue;
      const OrientedEdge& ed = ws->edges.edge(e);
      ws->shifted(ed.head, ed.head) -= c;
      if (!ed.is_pinning()) {
        ws->shifted(ed.tail, ed.tail) -= c;
        ws->shifted(ed.head, ed.tail) += c;
        ws->shifted(ed.tail, ed.head) += c;
      }
    }
    const double deficit = ws->shifted.partialPivLu().determinant() /
                           ws->lap.partialPivLu().determinant();
    return std::exp(log_b_product) * deficit;
  };
  return obs;
}

}  // namespace h22
