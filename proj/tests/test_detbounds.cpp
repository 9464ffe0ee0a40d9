#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "h22/detbounds.hpp"

using namespace h22;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

PinnedGraph pair_graph(double coupling, double pin_a, double pin_b) {
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(2, 2);
  weights(0, 1) = weights(1, 0) = coupling;
  Eigen::VectorXd pinning(2);
  pinning << pin_a, pin_b;
  return PinnedGraph(std::move(weights), std::move(pinning));
}

PinnedGraph single_vertex(double pinning) {
  return PinnedGraph(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, pinning));
}

Eigen::VectorXd one_exponent(double value) {
  return Eigen::VectorXd::Constant(1, value);
}

}  // namespace

TEST_CASE("deficit determinant on the single-vertex graph") {
  const PinnedGraph graph = single_vertex(2.0);
  const EdgeKernel kernel = make_edge_kernel(graph, FieldConfig::zero(1));

  // Gamma = 1/h, so det(Id - M Gamma) = 1 - m/2
  CHECK(det_deficit(graph, kernel, one_exponent(1.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(det_deficit(graph, kernel, one_exponent(0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(det_deficit(graph, kernel, one_exponent(3.0)) == doctest::Approx(-0.5).epsilon(1e-14));

  const DeficitRoutes routes = det_deficit_routes(graph, kernel, one_exponent(1.0));
  CHECK(routes.direct == doctest::Approx(routes.schur).epsilon(1e-14));

  CHECK(assumption_holds(graph, kernel, one_exponent(1.0)));
  CHECK_FALSE(assumption_holds(graph, kernel, one_exponent(3.0)));
  const AssumptionRoutes above = assumption_routes(graph, kernel, one_exponent(3.0));
  CHECK(above.spectral == above.quadratic_form);
  CHECK(above.margin < 0.0);
}

TEST_CASE("sufficient criterion needs a strict subgraph reaching the pinned vertex") {
  const PinnedGraph graph = pair_graph(3.0, 2.0, 0.0);
  const EdgeSystem edges = EdgeSystem::positive_edges(graph);
  REQUIRE(edges.count() == 2);

  Eigen::VectorXd m(2);
  const int internal = edges.find(0, 1);
  const int pinning = edges.find(0, kPinnedVertex);

  m[internal] = 1.0;
  m[pinning] = 1.0;
  CHECK(assumption_sufficient(graph, edges, m));  // both strict

  // a saturated internal edge cuts the far vertex off the strict subgraph:
  // at B = 1 its conductance contribution vanishes entirely
  m[internal] = 3.0;
  m[pinning] = 1.0;
  CHECK_FALSE(assumption_sufficient(graph, edges, m));

  m[internal] = 1.0;  // strict component no longer reaches rho
  m[pinning] = 2.0;
  CHECK_FALSE(assumption_sufficient(graph, edges, m));

  m[pinning] = 2.5;  // above the weight
  CHECK_FALSE(assumption_sufficient(graph, edges, m));

  // saturated edges still satisfy the assumption pointwise via the criterion
  // at strict exponents nearby
  FieldConfig config = FieldConfig::zero(2);
  config.u << 0.8, -0.5;
  config.s << 0.4, -0.1;
  const EdgeKernel kernel = make_edge_kernel(graph, config);
  m[internal] = 2.9;
  m[pinning] = 1.9;
  CHECK(assumption_sufficient(graph, edges, m));
  CHECK(assumption_holds(graph, kernel, m));
}

TEST_CASE("effective resistance closed forms") {
  // single conductor to ground
  {
    ResistorNetwork net;
    net.vertex_count = 1;
    net.conductors.emplace_back(0, kPinnedVertex, 4.0);
    CHECK(effective_resistance(net, 0, kPinnedVertex) == doctest::Approx(0.25).epsilon(1e-14));
  }
  // two in series
  {
    ResistorNetwork net;
    net.vertex_count = 2;
    net.conductors.emplace_back(0, 1, 2.0);
    net.conductors.emplace_back(1, kPinnedVertex, 3.0);
    CHECK(effective_resistance(net, 0, kPinnedVertex) ==
          doctest::Approx(5.0 / 6.0).epsilon(1e-14));
  }
  // triangle: direct unit edge in parallel with a two-edge path
  {
    ResistorNetwork net;
    net.vertex_count = 3;
    net.conductors.emplace_back(0, 1, 1.0);
    net.conductors.emplace_back(0, 2, 1.0);
    net.conductors.emplace_back(2, 1, 1.0);
    CHECK(effective_resistance(net, 0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  }
  // disconnected terminals throw
  {
    ResistorNetwork net;
    net.vertex_count = 2;
    net.conductors.emplace_back(0, kPinnedVertex, 1.0);
    CHECK_THROWS_AS(effective_resistance(net, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("protected region membership") {
  const PinnedGraph graph = pair_graph(3.0, 2.0, 2.0);
  FieldConfig config = FieldConfig::zero(2);
  config.u << 0.05, -0.05;
  const EdgeKernel kernel = make_edge_kernel(graph, config);

  ExponentAssignment assignment;
  assignment.m = Eigen::VectorXd::Ones(3);
  assignment.delta = Eigen::VectorXd::Constant(3, kInf);
  assignment.validate(3);
  CHECK(in_protected_region(kernel, assignment));  // unprotected always inside

  assignment.delta = Eigen::VectorXd::Constant(3, 0.5);
  CHECK(in_protected_region(kernel, assignment));  // B close to 1 here

  assignment.delta = Eigen::VectorXd::Constant(3, 1e-5);
  CHECK_FALSE(in_protected_region(kernel, assignment));

  assignment.delta = Eigen::VectorXd::Constant(3, -0.1);
  CHECK_THROWS_AS(assignment.validate(3), std::invalid_argument);
  assignment.delta = Eigen::VectorXd::Constant(3, 0.5);
  CHECK_THROWS_AS(assignment.validate(2), std::invalid_argument);
  assignment.m = Eigen::VectorXd::Constant(3, -0.2);
  CHECK_THROWS_AS(assignment.validate(3), std::invalid_argument);

  CHECK(ExponentAssignment::bare(Eigen::VectorXd::Ones(3)).delta.size() == 3);
  CHECK(std::isinf(ExponentAssignment::bare(Eigen::VectorXd::Ones(3)).delta[0]));
}

TEST_CASE("summary bound is tight for a single anchored edge") {
  const PinnedGraph graph = single_vertex(2.0);
  const EdgeKernel kernel = make_edge_kernel(graph, FieldConfig::zero(1));

  std::vector<ResistanceGroup> groups{{0, {0}}};
  const SummaryBound bound = summary_bound(graph, kernel, one_exponent(1.0), groups);
  REQUIRE(bound.applicable);
  REQUIRE(bound.terms.size() == 1);
  // anchored conductance W B = 2, so R = 1/2 and the factor is 1 - m/2
  CHECK(bound.terms[0].resistance == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(bound.lower_bound == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(det_deficit(graph, kernel, one_exponent(1.0)) >= bound.lower_bound - 1e-15);

  // hypothesis fails once m reaches W B
  const SummaryBound saturated = summary_bound(graph, kernel, one_exponent(2.0), groups);
  CHECK_FALSE(saturated.applicable);
  CHECK_FALSE(saturated.failure.empty());
}

TEST_CASE("summary bound validates its structure") {
  const PinnedGraph graph = pair_graph(3.0, 2.0, 2.0);
  const EdgeKernel kernel = make_edge_kernel(graph, FieldConfig::zero(2));
  const int internal = kernel.edges.find(0, 1);
  const int pin_a = kernel.edges.find(0, kPinnedVertex);
  const int pin_b = kernel.edges.find(1, kPinnedVertex);

  Eigen::VectorXd m = Eigen::VectorXd::Zero(3);
  m[internal] = 0.5;

  // anchors must be exactly the positive-exponent edges
  CHECK_THROWS_AS(summary_bound(graph, kernel, m, {}), std::invalid_argument);
  CHECK_THROWS_AS(
      summary_bound(graph, kernel, m, {{pin_a, {pin_a}}}),
      std::invalid_argument);

  // duplicate anchors and overlapping edge sets are structural errors
  m[pin_a] = 0.5;
  CHECK_THROWS_AS(summary_bound(graph, kernel, m,
                                {{internal, {internal}}, {internal, {internal}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(summary_bound(graph, kernel, m,
                                {{internal, {internal, pin_b}}, {pin_a, {pin_a, pin_b}}}),
                  std::invalid_argument);

  // a valid two-group split: disjoint, each containing its anchor endpoints
  const SummaryBound bound = summary_bound(
      graph, kernel, m, {{internal, {internal}}, {pin_a, {pin_a}}});
  CHECK(bound.applicable);
  CHECK(det_deficit(graph, kernel, m) >= bound.lower_bound - 1e-12);

  // anchor endpoints must lie inside the group's vertex set
  CHECK_THROWS_AS(summary_bound(graph, kernel, m,
                                {{internal, {pin_a, pin_b}}, {pin_a, {pin_a}}}),
                  std::invalid_argument);
}

TEST_CASE("vertex splitting loses determinant mass") {
  // one pinned vertex split into two parallel copies sharing the pinning
  const PinnedGraph original = single_vertex(2.0);
  const PinnedGraph split = pair_graph(0.0, 1.0, 1.0);
  VertexSplit map;
  map.image = {0, 0};

  FieldConfig config = FieldConfig::zero(1);
  Eigen::VectorXd m_original = one_exponent(1.0);
  Eigen::VectorXd m_split(2);
  m_split << 0.5, 0.5;

  const SplitComparison comparison =
      split_comparison(original, m_original, config, split, m_split, map);
  CHECK(comparison.det_original == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(comparison.det_split == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(comparison.laplacian_residual <= 1e-14);
  CHECK(comparison.exponent_residual <= 1e-14);
  CHECK(comparison.epsilon_used == 0.0);

  // weight splittings that do not sum back are rejected
  Eigen::VectorXd bad_split(2);
  bad_split << 0.5, 0.6;
  const PinnedGraph bad = pair_graph(0.0, 1.0, 1.2);
  CHECK_THROWS_AS(split_comparison(original, m_original, config, bad, bad_split, map),
                  std::invalid_argument);
}

TEST_CASE("factorization over pinned components") {
  // two blocks, each with its own pinning
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(3, 3);
  weights(0, 1) = weights(1, 0) = 2.0;
  Eigen::VectorXd pinning(3);
  pinning << 1.0, 0.5, 2.0;
  const PinnedGraph graph(weights, pinning);

  FieldConfig config = FieldConfig::zero(3);
  config.u << 0.2, -0.1, 0.4;
  config.s << 0.3, 0.0, -0.2;

  const EdgeSystem edges = EdgeSystem::positive_edges(graph);
  Eigen::VectorXd m = Eigen::VectorXd::Constant(edges.count(), 0.3);

  const FactorizationReport report =
      factorization_check(graph, config, m, {{0, 1}, {2}});
  CHECK(report.residual <= 1e-12);
  REQUIRE(report.component_dets.size() == 2);
  CHECK(report.det_full ==
        doctest::Approx(report.component_dets[0] * report.component_dets[1]).epsilon(1e-12));

  // wrong component structure is a structural error
  CHECK_THROWS_AS(factorization_check(graph, config, m, {{0}, {1, 2}}),
                  std::invalid_argument);
}

TEST_CASE("monotonicity in weights and exponents") {
  const PinnedGraph strong = pair_graph(3.0, 2.0, 2.0);
  const PinnedGraph weak = pair_graph(1.8, 1.2, 1.2);
  const EdgeSystem edges = EdgeSystem::positive_edges(strong);

  FieldConfig config = FieldConfig::zero(2);
  config.u << 0.3, -0.2;
  config.s << -0.4, 0.1;

  const Eigen::VectorXd m_prime = Eigen::VectorXd::Constant(3, 0.6);
  const Eigen::VectorXd m = Eigen::VectorXd::Constant(3, 0.25);

  CHECK(monotonicity_check(strong, weak, edges, config, m, m_prime));
  CHECK(monotonicity_check(strong, strong, edges, config, m_prime, m_prime));

  // violated preconditions throw instead of reporting false
  CHECK_THROWS_AS(monotonicity_check(weak, strong, edges, config, m, m_prime),
                  std::invalid_argument);
  CHECK_THROWS_AS(monotonicity_check(strong, weak, edges, config, m_prime, m),
                  std::invalid_argument);
}
