#include "h22/model.hpp"

#include <cmath>
#include <stdexcept>

namespace h22 {
namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double field_at(const Eigen::VectorXd& v, int i) { return i == kPinnedVertex ? 0.0 : v[i]; }

}  // namespace

double edge_even_interaction(double u_i, double u_j, double s_i, double s_j) {
  const double ds = s_i - s_j;
  return std::cosh(u_i - u_j) + 0.5 * ds * ds * std::exp(u_i + u_j);
}

double edge_interaction(const PinnedGraph& graph, const FieldConfig& config, int i, int j) {
  if (i == j) throw std::invalid_argument("edge_interaction: self edge");
  if (i != kPinnedVertex && (i < 0 || i >= graph.size()))
    throw std::invalid_argument("edge_interaction: vertex out of range");
  if (j != kPinnedVertex && (j < 0 || j >= graph.size()))
    throw std::invalid_argument("edge_interaction: vertex out of range");
  return edge_even_interaction(field_at(config.u, i), field_at(config.u, j),
                               field_at(config.s, i), field_at(config.s, j));
}

Eigen::MatrixXd weighted_laplacian(const PinnedGraph& graph, const Eigen::VectorXd& u) {
  const int n = graph.size();
  if (u.size() != n) throw std::invalid_argument("weighted_laplacian: field size mismatch");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = graph.pinning()[i] * std::exp(u[i]);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = graph.weights()(i, j);
      if (w == 0.0) continue;
      const double coupling = w * std::exp(u[i] + u[j]);
      d(i, j) = -coupling;
      diag += coupling;
    }
    d(i, i) = diag;
  }
  return d;
}

double log_det_spd(const Eigen::MatrixXd& matrix) {
  Eigen::LLT<Eigen::MatrixXd> llt(matrix);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("log_det_spd: matrix not positive definite");
  double sum = 0.0;
  const auto& l = llt.matrixLLT();
  for (int i = 0; i < matrix.rows(); ++i) sum += std::log(l(i, i));
  return 2.0 * sum;
}

namespace {

// -sum over positive edges of W_e * (term(e) - 1)
template <typename Term>
double interaction_exponent(const PinnedGraph& graph, Term term) {
  const int n = graph.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (graph.pinning()[i] > 0.0) total += graph.pinning()[i] * (term(i, kPinnedVertex) - 1.0);
    for (int j = i + 1; j < n; ++j)
      if (graph.weights()(i, j) > 0.0) total += graph.weights()(i, j) * (term(i, j) - 1.0);
  }
  return -total;
}

}  // namespace

double log_density(const PinnedGraph& graph, const FieldConfig& config) {
  const int n = graph.size();
  if (config.u.size() != n || config.s.size() != n)
    throw std::invalid_argument("log_density: field size mismatch");
  const double exponent = interaction_exponent(graph, [&](int i, int j) {
    return edge_even_interaction(field_at(config.u, i), field_at(config.u, j),
                                 field_at(config.s, i), field_at(config.s, j));
  });
  return exponent + log_det_spd(weighted_laplacian(graph, config.u)) - config.u.sum() -
         n * kLog2Pi;
}

double log_marginal_density(const PinnedGraph& graph, const Eigen::VectorXd& u) {
  const int n = graph.size();
  if (u.size() != n) throw std::invalid_argument("log_marginal_density: field size mismatch");
  const double exponent = interaction_exponent(graph, [&](int i, int j) {
    return std::cosh(field_at(u, i) - field_at(u, j));
  });
  return exponent + 0.5 * log_det_spd(weighted_laplacian(graph, u)) - u.sum() -
         0.5 * n * kLog2Pi;
}

EdgeKernel make_edge_kernel(const PinnedGraph& graph, const FieldConfig& config,
                            const EdgeSystem* edges) {
  EdgeKernel kernel;
  kernel.edges = edges ? *edges : EdgeSystem::positive_edges(graph);
  kernel.field = config;
  const int count = kernel.edges.count();
  kernel.weight = kernel.edges.weights(graph);
  kernel.pair_growth.resize(count);
  kernel.even_part.resize(count);
  kernel.unit_conductance.resize(count);
  kernel.weighted_growth.resize(count);
  for (int e = 0; e < count; ++e) {
    const OrientedEdge& ed = kernel.edges.edge(e);
    const double ui = field_at(config.u, ed.head);
    const double uj = field_at(config.u, ed.tail);
    const double si = field_at(config.s, ed.head);
    const double sj = field_at(config.s, ed.tail);
    kernel.pair_growth[e] = std::exp(ui + uj);
    kernel.even_part[e] = edge_even_interaction(ui, uj, si, sj);
    kernel.unit_conductance[e] = kernel.pair_growth[e] / kernel.even_part[e];
    kernel.weighted_growth[e] = kernel.weight[e] * kernel.pair_growth[e];
  }
  return kernel;
}

Eigen::MatrixXd response_matrix(const PinnedGraph& graph, const EdgeKernel& kernel) {
  const Eigen::MatrixXd d = weighted_laplacian(graph, kernel.field.u);
  Eigen::LLT<Eigen::MatrixXd> llt(d);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("response_matrix: Laplacian not positive definite");
  const Eigen::MatrixXd f = kernel.edges.signed_incidence(graph.size());
  const Eigen::MatrixXd solved = llt.solve(f);  // D^{-1} F
  const Eigen::VectorXd root_q = kernel.unit_conductance.cwiseSqrt();
  Eigen::MatrixXd gamma = f.transpose() * solved;
  gamma = root_q.asDiagonal() * gamma * root_q.asDiagonal();
  return 0.5 * (gamma + gamma.transpose());  // symmetrize roundoff
}

Eigen::VectorXd sample_s_given_u(const PinnedGraph& graph, const Eigen::VectorXd& u,
                                 RngStream& rng) {
  const Eigen::MatrixXd d = weighted_laplacian(graph, u);
  Eigen::LLT<Eigen::MatrixXd> llt(d);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("sample_s_given_u: Laplacian not positive definite");
  Eigen::VectorXd z(graph.size());
  for (int i = 0; i < graph.size(); ++i) z[i] = rng.normal();
  // s = L^{-t} z has covariance (L L^t)^{-1} = D^{-1}
  return llt.matrixU().solve(z);
}

Eigen::MatrixXd s_covariance(const PinnedGraph& graph, const Eigen::VectorXd& u) {
  const Eigen::MatrixXd d = weighted_laplacian(graph, u);
  Eigen::LLT<Eigen::MatrixXd> llt(d);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("s_covariance: Laplacian not positive definite");
  return llt.solve(Eigen::MatrixXd::Identity(graph.size(), graph.size()));
}

}  // namespace h22
