#pragma once

#include <Eigen/Dense>

#include "h22/graph.hpp"
#include "h22/rng.hpp"

namespace h22 {

// Field configuration over the internal vertices; the pinned vertex carries
// u_rho = s_rho = 0 implicitly.
struct FieldConfig {
  Eigen::VectorXd u;
  Eigen::VectorXd s;

  static FieldConfig zero(int n) {
    return FieldConfig{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  }
};

// Even part of the edge interaction,
//   B = cosh(u_i - u_j) + (1/2)(s_i - s_j)^2 e^{u_i + u_j},
// always >= max(1, cosh(u_i - u_j)).
double edge_even_interaction(double u_i, double u_j, double s_i, double s_j);

// B for an edge of the graph; either endpoint may be kPinnedVertex.
double edge_interaction(const PinnedGraph& graph, const FieldConfig& config, int i, int j);

// Weighted Laplacian D(u): off-diagonal -W_ij e^{u_i+u_j}, diagonal rows sum
// against e^{u_i+u_k} plus the pinning term h_i e^{u_i}. Positive definite
// exactly when the positive-weight graph including rho is connected.
Eigen::MatrixXd weighted_laplacian(const PinnedGraph& graph, const Eigen::VectorXd& u);

// log det of a symmetric positive definite matrix via Cholesky with
// log-accumulated diagonal; throws std::invalid_argument when not SPD.
double log_det_spd(const Eigen::MatrixXd& matrix);

// Log density of the joint (u, s) measure:
//   -sum_{E+} W_e (B_e - 1) + log det D(u) - sum_i u_i - n log(2 pi).
// Integrates to one over R^{2n}.
double log_density(const PinnedGraph& graph, const FieldConfig& config);

// Log density of the u-marginal (the s-Gaussian integrated exactly):
//   -sum_{E+} W_e (cosh(u_{e+} - u_{e-}) - 1) + (1/2) log det D(u)
//   - sum_i u_i - (n/2) log(2 pi).
double log_marginal_density(const PinnedGraph& graph, const Eigen::VectorXd& u);

// Per-edge quantities at a fixed configuration, over an explicit edge system
// (positive edges by default; extra zero-weight edges may be appended by the
// caller through EdgeSystem::with_extra).
struct EdgeKernel {
  EdgeSystem edges;
  FieldConfig field;
  Eigen::VectorXd weight;           // W_e
  Eigen::VectorXd pair_growth;      // e^{u_{e+} + u_{e-}}
  Eigen::VectorXd even_part;        // B_e
  Eigen::VectorXd unit_conductance; // Q_e = pair_growth / B_e
  Eigen::VectorXd weighted_growth;  // W_e * pair_growth (the diagonal of curly-W)
};

EdgeKernel make_edge_kernel(const PinnedGraph& graph, const FieldConfig& config,
                            const EdgeSystem* edges = nullptr);

// Gamma = sqrt(Q) F^t D^{-1} F sqrt(Q), symmetric positive semidefinite.
Eigen::MatrixXd response_matrix(const PinnedGraph& graph, const EdgeKernel& kernel);

// Exact Gaussian conditional: s | u has precision matrix D(u).
Eigen::VectorXd sample_s_given_u(const PinnedGraph& graph, const Eigen::VectorXd& u,
                                 RngStream& rng);

// Covariance of s given u, i.e. D(u)^{-1}.
Eigen::MatrixXd s_covariance(const PinnedGraph& graph, const Eigen::VectorXd& u);

}  // namespace h22
