#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "h22/model.hpp"

using namespace h22;

namespace {

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

}  // namespace

TEST_CASE("edge interaction even part") {
  CHECK(edge_even_interaction(0.0, 0.0, 0.0, 0.0) == 1.0);
  CHECK(edge_even_interaction(1.0, 1.0, 0.0, 0.0) == 1.0);
  CHECK(edge_even_interaction(1.0, -1.0, 0.0, 0.0) == doctest::Approx(std::cosh(2.0)));

  // (1/2)(s_i - s_j)^2 e^{u_i + u_j} on top of the cosh
  const double value = edge_even_interaction(0.5, -0.25, 2.0, -1.0);
  const double expected = std::cosh(0.75) + 0.5 * 9.0 * std::exp(0.25);
  CHECK(value == doctest::Approx(expected).epsilon(1e-15));
  CHECK(value >= 1.0);

  const PinnedGraph graph = pair_graph(3.0, 2.0, 2.0);
  FieldConfig config = FieldConfig::zero(2);
  config.u << 0.3, -0.1;
  config.s << 0.7, 0.2;
  CHECK(edge_interaction(graph, config, 0, 1) ==
        doctest::Approx(edge_even_interaction(0.3, -0.1, 0.7, 0.2)).epsilon(1e-15));
  // the pinned endpoint carries zero fields
  CHECK(edge_interaction(graph, config, 0, kPinnedVertex) ==
        doctest::Approx(edge_even_interaction(0.3, 0.0, 0.7, 0.0)).epsilon(1e-15));
}

TEST_CASE("weighted laplacian at flat fields") {
  const PinnedGraph graph = pair_graph(2.0, 1.0, 3.0);
  const Eigen::MatrixXd laplacian = weighted_laplacian(graph, Eigen::VectorXd::Zero(2));
  CHECK(laplacian(0, 0) == doctest::Approx(3.0));
  CHECK(laplacian(1, 1) == doctest::Approx(5.0));
  CHECK(laplacian(0, 1) == doctest::Approx(-2.0));
  CHECK(laplacian(1, 0) == doctest::Approx(-2.0));

  CHECK(log_det_spd(laplacian) == doctest::Approx(std::log(11.0)).epsilon(1e-14));

  const Eigen::MatrixXd covariance = s_covariance(graph, Eigen::VectorXd::Zero(2));
  CHECK(covariance(0, 0) == doctest::Approx(5.0 / 11.0).epsilon(1e-14));
  CHECK(covariance(0, 1) == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
  CHECK(covariance(1, 1) == doctest::Approx(3.0 / 11.0).epsilon(1e-14));

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(log_det_spd(indefinite), std::invalid_argument);
}

TEST_CASE("densities at zero fields and their factorization") {
  const PinnedGraph graph = pair_graph(2.0, 1.0, 3.0);
  const FieldConfig zero = FieldConfig::zero(2);
  const double two_pi = 2.0 * M_PI;

  CHECK(log_density(graph, zero) ==
        doctest::Approx(std::log(11.0) - 2.0 * std::log(two_pi)).epsilon(1e-14));
  CHECK(log_marginal_density(graph, zero.u) ==
        doctest::Approx(0.5 * std::log(11.0) - std::log(two_pi)).epsilon(1e-14));

  // joint = marginal + exact Gaussian in s at a generic configuration
  FieldConfig config = FieldConfig::zero(2);
  config.u << 0.4, -0.7;
  config.s << -0.3, 0.9;
  const Eigen::MatrixXd laplacian = weighted_laplacian(graph, config.u);
  const double gaussian = -0.5 * config.s.dot(laplacian * config.s) +
                          0.5 * log_det_spd(laplacian) - std::log(two_pi);
  CHECK(log_density(graph, config) ==
        doctest::Approx(log_marginal_density(graph, config.u) + gaussian).epsilon(1e-13));
}

TEST_CASE("edge kernel fields") {
  const PinnedGraph graph = pair_graph(3.0, 2.0, 2.0);
  FieldConfig config = FieldConfig::zero(2);
  config.u << 0.5, -0.2;
  config.s << 0.1, -0.4;
  const EdgeKernel kernel = make_edge_kernel(graph, config);
  REQUIRE(kernel.edges.count() == 3);

  const int internal = kernel.edges.find(0, 1);
  const int pin_a = kernel.edges.find(0, kPinnedVertex);
  CHECK(kernel.weight[internal] == 3.0);
  CHECK(kernel.pair_growth[internal] == doctest::Approx(std::exp(0.3)).epsilon(1e-15));
  CHECK(kernel.pair_growth[pin_a] == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
  CHECK(kernel.even_part[internal] ==
        doctest::Approx(edge_even_interaction(0.5, -0.2, 0.1, -0.4)).epsilon(1e-15));
  CHECK(kernel.unit_conductance[internal] ==
        doctest::Approx(kernel.pair_growth[internal] / kernel.even_part[internal]));
  CHECK(kernel.weighted_growth[internal] ==
        doctest::Approx(3.0 * std::exp(0.3)).epsilon(1e-15));
}

TEST_CASE("response matrix on the single-vertex graph") {
  const PinnedGraph graph = single_vertex(2.0);
  const EdgeKernel kernel = make_edge_kernel(graph, FieldConfig::zero(1));
  const Eigen::MatrixXd gamma = response_matrix(graph, kernel);
  REQUIRE(gamma.rows() == 1);
  // Q = 1, D = h, so Gamma = 1/h
  CHECK(gamma(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("response matrix matches its definition on a generic pair") {
  const PinnedGraph graph = pair_graph(3.0, 2.0, 1.0);
  FieldConfig config = FieldConfig::zero(2);
  config.u << 0.6, -0.4;
  config.s << -0.2, 0.5;
  const EdgeKernel kernel = make_edge_kernel(graph, config);
  const Eigen::MatrixXd gamma = response_matrix(graph, kernel);
  REQUIRE(gamma.rows() == 3);

  const Eigen::MatrixXd incidence = kernel.edges.signed_incidence(2);
  const Eigen::MatrixXd laplacian = weighted_laplacian(graph, config.u);
  const Eigen::VectorXd root_q = kernel.unit_conductance.cwiseSqrt();
  const Eigen::MatrixXd direct = root_q.asDiagonal() * incidence.transpose() *
                                 laplacian.llt().solve(incidence) * root_q.asDiagonal();
  CHECK((gamma - direct).cwiseAbs().maxCoeff() <= 1e-13);

  // symmetric positive semidefinite with eigenvalues in [0, 1]:
  // the quadratic form is a resistance ratio
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gamma);
  CHECK(eigen.eigenvalues().minCoeff() >= -1e-12);
  CHECK(eigen.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("conditional flat-field sampler is deterministic and unbiased") {
  const PinnedGraph graph = pair_graph(2.0, 1.0, 3.0);
  Eigen::VectorXd u(2);
  u << 0.2, -0.3;

  {
    RngStream first(42, 0);
    RngStream second(42, 0);
    const Eigen::VectorXd a = sample_s_given_u(graph, u, first);
    const Eigen::VectorXd b = sample_s_given_u(graph, u, second);
    CHECK(a == b);
  }

  RngStream rng(7, 0);
  const int draws = 40000;
  Eigen::MatrixXd second_moment = Eigen::MatrixXd::Zero(2, 2);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < draws; ++i) {
    const Eigen::VectorXd s = sample_s_given_u(graph, u, rng);
    mean += s;
    second_moment += s * s.transpose();
  }
  mean /= draws;
  second_moment /= draws;
  const Eigen::MatrixXd covariance = s_covariance(graph, u);
  CHECK(mean.cwiseAbs().maxCoeff() <= 0.02);
  CHECK((second_moment - covariance).cwiseAbs().maxCoeff() <= 0.02);
}
