#pragma once

#include <Eigen/Dense>

#include <string>
#include <tuple>
#include <vector>

#include "h22/graph.hpp"
#include "h22/model.hpp"

namespace h22 {

// Per-edge exponents m_e >= 0 (the diagonal of M) together with protection
// thresholds delta_e in (0, inf]; an infinite delta means unprotected.
struct ExponentAssignment {
  Eigen::VectorXd m;
  Eigen::VectorXd delta;

  static ExponentAssignment bare(Eigen::VectorXd exponents);
  void validate(int edge_count) const;
};

// True when every edge satisfies B_e < 1 + delta_e strictly (membership in
// the protected region U; boundary configurations count as outside).
bool in_protected_region(const EdgeKernel& kernel, const ExponentAssignment& assignment);

// det(Id - M Gamma) evaluated two ways: through the edge-indexed matrix
// directly and through det(D - F M Q F^t) / det D. The routes agree to
// roundoff; the Schur route is the production one.
struct DeficitRoutes {
  double direct;
  double schur;
};
DeficitRoutes det_deficit_routes(const PinnedGraph& graph, const EdgeKernel& kernel,
                                 const Eigen::VectorXd& m);
double det_deficit(const PinnedGraph& graph, const EdgeKernel& kernel, const Eigen::VectorXd& m);

// The two equivalent spectral conditions: sqrt(M) Gamma sqrt(M) < Id
// and D - F M Q F^t > 0, each decided by its own eigenvalue test.
struct AssumptionRoutes {
  bool spectral;
  bool quadratic_form;
  double margin;  // smallest eigenvalue of D - F M Q F^t, scaled
};
AssumptionRoutes assumption_routes(const PinnedGraph& graph, const EdgeKernel& kernel,
                                   const Eigen::VectorXd& m);
bool assumption_holds(const PinnedGraph& graph, const EdgeKernel& kernel,
                      const Eigen::VectorXd& m);

// Sufficient condition: m_e <= W_e everywhere and the subgraph of edges with
// m_e < W_e strict (plus rho) connected implies the assumption holds for
// every configuration.
bool assumption_sufficient(const PinnedGraph& graph, const EdgeSystem& edges,
                           const Eigen::VectorXd& m);

// Electrical network with conductances on vertex pairs; kPinnedVertex marks
// the grounded vertex rho.
struct ResistorNetwork {
  int vertex_count = 0;
  std::vector<std::tuple<int, int, double>> conductors;
};

// (1_x - 1_y)^t L^{-1} (1_x - 1_y) with the Laplacian grounded at rho when
// present, else at y. Throws std::invalid_argument when the network is not
// connected (through positive conductances) to the ground.
double effective_resistance(const ResistorNetwork& network, int x, int y);

// Conductances c_e = curly-W_e / Q_anchor for every edge of the kernel.
Eigen::VectorXd edge_conductances(const EdgeKernel& kernel, int anchor_edge);

// Network carrying c_e on the listed kernel edges only.
ResistorNetwork anchored_network(const PinnedGraph& graph, const EdgeKernel& kernel,
                                 int anchor_edge, const std::vector<int>& edge_set);

// One factor of the summary lower bound: an anchor edge e_l (carrying the
// exponent) and a connected set E_l of positive-weight edges whose vertex
// set contains both anchor endpoints.
struct ResistanceGroup {
  int anchor_edge;
  std::vector<int> edge_set;
};

struct SummaryTerm {
  double resistance;
  double exponent;
  double factor;  // 1 - m * R
};

struct SummaryBound {
  bool applicable = false;  // every m_l R_l < 1 at this configuration
  double lower_bound = 1.0;
  std::vector<SummaryTerm> terms;
  std::string failure;  // first violated resistance hypothesis, empty if none
};

// Pointwise lower bound det(Id - M Gamma) >= prod_l (1 - m_l R_l) at the
// kernel's configuration. The anchors must be exactly the edges with
// positive exponent, the edge sets pairwise disjoint; structural violations
// throw, a failed resistance hypothesis only marks the bound inapplicable.
SummaryBound summary_bound(const PinnedGraph& graph, const EdgeKernel& kernel,
                           const Eigen::VectorXd& m,
                           const std::vector<ResistanceGroup>& groups);

// Surjection from split vertices onto original ones; image[i'] is the
// original vertex of split vertex i'. rho maps to rho implicitly.
struct VertexSplit {
  std::vector<int> image;
};

struct SplitComparison {
  double det_original;
  double det_split;
  double laplacian_residual;  // ||K F' W' F'^t K^t - F W F^t||_max
  double exponent_residual;   // ||K F' M' Q' F'^t K^t - F M Q F^t||_max
  double epsilon_used;        // pinning regularization, 0 when not needed
};

// Compares det(Id - M Gamma) between a graph and a vertex splitting of it,
// with fields pulled back through the split map. Weight and exponent
// splittings must sum back exactly (1e-12 relative); when the split graph
// loses connectivity to rho, both sides are regularized by adding
// 1e-8 * (min positive pinning) to every pinning weight first.
SplitComparison split_comparison(const PinnedGraph& original, const Eigen::VectorXd& m_original,
                                 const FieldConfig& config, const PinnedGraph& split,
                                 const Eigen::VectorXd& m_split, const VertexSplit& map);

struct FactorizationReport {
  double det_full;
  std::vector<double> component_dets;
  double residual;  // relative gap between det_full and the product
};

// Factorization over the components obtained by removing rho; the component
// list must match the actual positive-weight connectivity exactly.
FactorizationReport factorization_check(const PinnedGraph& graph, const FieldConfig& config,
                                        const Eigen::VectorXd& m,
                                        const std::vector<std::vector<int>>& components);

// Monotonicity in the parameters: with m <= m_prime and weights >= primed
// weights edgewise (shared edge system), and the primed system satisfying
// the assumption at this configuration, returns whether
// det(Id - M Gamma) >= det(Id - M' Gamma') > 0.
bool monotonicity_check(const PinnedGraph& graph, const PinnedGraph& graph_prime,
                        const EdgeSystem& edges, const FieldConfig& config,
                        const Eigen::VectorXd& m, const Eigen::VectorXd& m_prime);

}  // namespace h22
