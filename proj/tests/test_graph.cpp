#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "h22/graph.hpp"

using namespace h22;

namespace {

PinnedGraph pair_graph(double coupling, double pin_a, double pin_b) {
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(2, 2);
  weights(0, 1) = weights(1, 0) = coupling;
  Eigen::VectorXd pinning(2);
  pinning << pin_a, pin_b;
  return PinnedGraph(std::move(weights), std::move(pinning));
}

}  // namespace

TEST_CASE("pinned graph accessors and validation") {
  const PinnedGraph graph = pair_graph(3.0, 2.0, 0.0);
  CHECK(graph.size() == 2);
  CHECK(graph.weight(0, 1) == 3.0);
  CHECK(graph.weight(1, 0) == 3.0);
  CHECK(graph.weight(0, kPinnedVertex) == 2.0);
  CHECK(graph.weight(kPinnedVertex, 1) == 0.0);
  CHECK(graph.max_weight() == 3.0);
  CHECK(graph.min_positive_pinning() == 2.0);
  CHECK(graph.positive_graph_connected());

  // no pinning at all leaves the Laplacian singular
  CHECK_THROWS_AS(PinnedGraph(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
  Eigen::MatrixXd negative = Eigen::MatrixXd::Zero(2, 2);
  negative(0, 1) = negative(1, 0) = -1.0;
  CHECK_THROWS_AS(PinnedGraph(negative, Eigen::VectorXd::Ones(2)), std::invalid_argument);

  // two components, only one reaching rho
  Eigen::VectorXd lonely(2);
  lonely << 1.0, 0.0;
  const PinnedGraph split(Eigen::MatrixXd::Zero(2, 2), lonely);
  CHECK_FALSE(split.positive_graph_connected());
}

TEST_CASE("edge system enumeration and incidence") {
  const PinnedGraph graph = pair_graph(3.0, 2.0, 2.0);
  const EdgeSystem edges = EdgeSystem::positive_edges(graph);
  REQUIRE(edges.count() == 3);
  CHECK(edges.edge(0).head == 0);
  CHECK(edges.edge(0).tail == 1);
  CHECK(edges.edge(1).is_pinning());
  CHECK(edges.find(0, 1) == 0);
  CHECK(edges.find(1, 0) == 0);
  CHECK(edges.find(0, kPinnedVertex) == 1);
  CHECK(edges.find(1, kPinnedVertex) == 2);
  CHECK(edges.find(0, 0) == -1);

  const Eigen::VectorXd weights = edges.weights(graph);
  CHECK(weights[0] == 3.0);
  CHECK(weights[1] == 2.0);
  CHECK(weights[2] == 2.0);

  const Eigen::MatrixXd incidence = edges.signed_incidence(2);
  REQUIRE(incidence.rows() == 2);
  REQUIRE(incidence.cols() == 3);
  CHECK(incidence(0, 0) == 1.0);
  CHECK(incidence(1, 0) == -1.0);
  CHECK(incidence(0, 1) == 1.0);
  CHECK(incidence(1, 1) == 0.0);

  // zero-weight extras join the canonical order: internal before pinning
  const PinnedGraph bare = pair_graph(0.0, 5.0, 5.0);
  const EdgeSystem extra = EdgeSystem::with_extra(bare, {{0, 1}});
  REQUIRE(extra.count() == 3);
  CHECK(extra.find(0, 1) == 0);
  CHECK(extra.weights(bare)[0] == 0.0);
  CHECK(extra.weights(bare)[1] == 5.0);
}

TEST_CASE("hierarchical distance is the depth of the first disagreement") {
  CHECK(hierarchical_distance(0, 0) == 0);
  CHECK(hierarchical_distance(5, 5) == 0);
  CHECK(hierarchical_distance(0, 1) == 1);
  CHECK(hierarchical_distance(4, 0) == 3);
  CHECK(hierarchical_distance(7, 6) == 1);
  CHECK(hierarchical_distance(0b1000, 0) == 4);

  // ultrametric on a sample of triples
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = 0; b < 8; ++b) {
      for (std::uint64_t c = 0; c < 8; ++c) {
        const int ab = hierarchical_distance(a, b);
        const int bc = hierarchical_distance(b, c);
        const int ac = hierarchical_distance(a, c);
        CHECK(ac <= std::max(ab, bc));
      }
    }
  }
}

TEST_CASE("box and binary codes interleave digits") {
  CHECK(box_to_binary({1, 0}, 2, 1) == 1);
  CHECK(box_to_binary({0, 1}, 2, 1) == 2);
  CHECK(box_to_binary({2, 3}, 2, 2) == 14);
  CHECK(box_to_binary({5}, 1, 3) == 5);

  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      const std::uint64_t code = box_to_binary({x, y}, 2, 2);
      CHECK(code < 16);
      const std::vector<int> back = binary_to_box(code, 2, 2);
      CHECK(back[0] == x);
      CHECK(back[1] == y);
    }
  }
}

TEST_CASE("weight profile envelope") {
  const double wbar = 271.0;
  const WeightProfile profile(1, 4.0, wbar);
  CHECK(profile.peak_point() == doctest::Approx(std::exp(2.0)).epsilon(1e-14));

  // clamped below the peak, decreasing beyond it
  CHECK(profile(1.0) == profile(2.0));
  CHECK(profile(1.0) == doctest::Approx(profile.envelope_floor(profile.peak_point())));
  CHECK(profile(8.0) > profile(16.0));
  CHECK(profile(16.0) > profile(64.0));

  // b(x) = 8 wbar 2^{2d} (d log2 x)^alpha x^{-2d} at a hand value
  const double x = 16.0;
  const double by_hand = 8.0 * wbar * 4.0 * std::pow(std::log2(x), 4.0) / (x * x);
  CHECK(profile.envelope_floor(x) == doctest::Approx(by_hand).epsilon(1e-14));

  double band = 0.0;
  const double total = profile.lattice_sum(&band);
  CHECK(total > 0.0);
  CHECK(band >= 0.0);
  CHECK(band <= 1e-6 * total);
}

TEST_CASE("long-range box carries translation-invariant weights and wired pinning") {
  const double wbar = 271.0;
  const WeightProfile profile(1, 4.0, wbar);
  const PinnedGraph box = build_long_range_box(1, 2, profile);
  REQUIRE(box.size() == 4);
  CHECK(box.weight(0, 1) == doctest::Approx(profile(1.0)).epsilon(1e-12));
  CHECK(box.weight(1, 2) == doctest::Approx(profile(1.0)).epsilon(1e-12));
  CHECK(box.weight(0, 2) == doctest::Approx(profile(2.0)).epsilon(1e-12));
  CHECK(box.weight(0, 3) == doctest::Approx(profile(3.0)).epsilon(1e-12));
  CHECK(box.positive_graph_connected());

  // wired pinning dominates the hierarchical floor 2 wbar 2^{-Nd} (Nd+1)^alpha
  const double floor = 2.0 * wbar * std::pow(2.0, -2.0) * std::pow(3.0, 4.0);
  CHECK(box.min_positive_pinning() >= floor * (1.0 - 1e-12));

  // corner pinning dominates interior pinning (ties on the clamped plateau)
  CHECK(box.pinning()[0] >= box.pinning()[1] * (1.0 - 1e-12));
  CHECK(box.pinning()[0] == doctest::Approx(box.pinning()[3]).epsilon(1e-12));

  const PinnedGraph square = build_long_range_box(2, 1, WeightProfile(2, 4.0, wbar));
  REQUIRE(square.size() == 4);
  CHECK(square.positive_graph_connected());

  CHECK_THROWS_AS(build_long_range_box(2, 7, WeightProfile(2, 4.0, wbar)),
                  std::invalid_argument);
}

TEST_CASE("hierarchical weights, pinning, and assembled graph") {
  const double wbar = 1.0;
  const double alpha = 4.0;
  const std::vector<double> weights = hierarchical_level_weights(3, wbar, alpha);
  REQUIRE(weights.size() == 3);
  CHECK(weights[0] == doctest::Approx(8.0 * wbar / 4.0).epsilon(1e-14));
  CHECK(weights[1] == doctest::Approx(8.0 * wbar * 16.0 / 16.0).epsilon(1e-14));
  CHECK(weights[2] == doctest::Approx(8.0 * wbar * 81.0 / 64.0).epsilon(1e-14));
  CHECK(hierarchical_pinning_weight(3, wbar, alpha) ==
        doctest::Approx(2.0 * wbar * 256.0 / 8.0).epsilon(1e-14));

  const PinnedGraph graph = build_hierarchical(2, {1.5, 0.25}, 0.75);
  REQUIRE(graph.size() == 4);
  CHECK(graph.weight(0, 1) == 1.5);   // distance 1
  CHECK(graph.weight(2, 3) == 1.5);
  CHECK(graph.weight(0, 2) == 0.25);  // distance 2
  CHECK(graph.weight(1, 3) == 0.25);
  CHECK(graph.pinning()[2] == 0.75);

  CHECK_THROWS_AS(build_hierarchical(2, {1.0, 0.0}, 0.5), std::invalid_argument);
}

TEST_CASE("chain builder in both pinning modes") {
  Eigen::VectorXd pinning(3);
  pinning << 0.0, 0.0, 1.0;
  const PinnedGraph open_chain = build_chain(3, 1.0, 4.0, ChainPinning::kExplicit, pinning);
  REQUIRE(open_chain.size() == 3);
  CHECK(open_chain.weight(0, 1) == 16.0);  // wbar * 2^4
  CHECK(open_chain.weight(1, 2) == 81.0);  // wbar * 3^4
  CHECK(open_chain.weight(0, 2) == 0.0);
  CHECK(open_chain.pinning()[2] == 1.0);
  REQUIRE(open_chain.labels().size() == 3);
  CHECK(open_chain.labels()[0] == "1");
  CHECK(open_chain.labels()[2] == "3");

  // wired mode folds the deleted last vertex into pinning
  const PinnedGraph wired = build_chain(3, 1.0, 4.0, ChainPinning::kLastVertexPinned);
  REQUIRE(wired.size() == 2);
  CHECK(wired.weight(0, 1) == 16.0);
  CHECK(wired.pinning()[0] == 0.0);
  CHECK(wired.pinning()[1] == 81.0);

  // extra edges appended verbatim; to the deleted vertex they pin instead
  const PinnedGraph crossed = build_chain(4, 1.0, 4.0, ChainPinning::kLastVertexPinned,
                                          Eigen::VectorXd(), {{0, 3, 0.5}});
  REQUIRE(crossed.size() == 3);
  CHECK(crossed.pinning()[0] == 0.5);
  CHECK(crossed.pinning()[2] == 256.0);

  CHECK_THROWS_AS(build_chain(1, 1.0, 4.0, ChainPinning::kExplicit, Eigen::VectorXd::Ones(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_chain(3, 1.0, 4.0, ChainPinning::kExplicit, Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("effective chain reproduces the hierarchical couplings exactly") {
  const double wbar = 271.0;
  const double alpha = 4.0;
  const int levels = 3;
  const std::vector<double> weights = hierarchical_level_weights(levels, wbar, alpha);
  const double base = hierarchical_pinning_weight(levels, wbar, alpha);
  const PinnedGraph chain = build_effective_chain(levels, weights, base);
  REQUIRE(chain.size() == 3);

  // 2^{2l-3} * w_level(l) collapses to wbar * l^alpha in exact floating point
  CHECK(chain.weight(0, 1) == wbar * 16.0);
  CHECK(chain.weight(1, 2) == wbar * 81.0);
  CHECK(chain.weight(0, 1) == doctest::Approx(2.0 * weights[1]).epsilon(1e-15));
  CHECK(chain.weight(1, 2) == doctest::Approx(8.0 * weights[2]).epsilon(1e-15));

  // terminal pinning 2^{levels-1} * base collapses to wbar * (levels+1)^alpha
  CHECK(chain.pinning()[2] == wbar * 256.0);
  CHECK(chain.pinning()[0] == base);
  CHECK(chain.pinning()[1] == 2.0 * base);
  REQUIRE(chain.labels().size() == 3);
  CHECK(chain.labels()[0] == "i1");
}
