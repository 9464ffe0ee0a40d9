#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace h22 {

// Index of the pinned vertex rho wherever a vertex argument may refer to it.
inline constexpr int kPinnedVertex = -1;

// Finite weighted graph on vertices {0..n-1} plus the pinned vertex rho.
// weights(i,j) >= 0 are the internal couplings, pinning(i) >= 0 couples i to rho.
// The fields at rho are frozen to zero; pinning must not vanish identically.
class PinnedGraph {
 public:
  PinnedGraph(Eigen::MatrixXd weights, Eigen::VectorXd pinning,
              std::vector<std::string> labels = {});

  int size() const { return static_cast<int>(pinning_.size()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& pinning() const { return pinning_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // weight of the edge {i,j}; either index may be kPinnedVertex.
  double weight(int i, int j) const;

  // Connectivity of the positive-weight graph including rho; positive
  // definiteness of the weighted Laplacian is equivalent to this.
  bool positive_graph_connected() const;

  double max_weight() const;        // max over internal weights and pinnings
  double min_positive_pinning() const;

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd pinning_;
  std::vector<std::string> labels_;
};

// Oriented edge; head is the endpoint with the lower index ("e_plus"),
// tail the other one, with rho always in the tail position.
struct OrientedEdge {
  int head = 0;
  int tail = kPinnedVertex;
  bool is_pinning() const { return tail == kPinnedVertex; }
};

// Canonical edge enumeration used by every edge-indexed quantity:
// internal edges in lexicographic (i,j) order, then pinning edges by vertex.
// May contain zero-weight edges so exponent assignments can live on them.
class EdgeSystem {
 public:
  static EdgeSystem positive_edges(const PinnedGraph& graph);
  static EdgeSystem with_extra(const PinnedGraph& graph,
                               const std::vector<std::pair<int, int>>& extra);

  int count() const { return static_cast<int>(edges_.size()); }
  const OrientedEdge& edge(int e) const { return edges_[static_cast<size_t>(e)]; }
  const std::vector<OrientedEdge>& edges() const { return edges_; }
  int find(int a, int b) const;  // -1 when absent

  Eigen::VectorXd weights(const PinnedGraph& graph) const;
  // Signed incidence F (n x count): +1 at head, -1 at tail, rho row dropped.
  Eigen::MatrixXd signed_incidence(int n) const;

 private:
  void add(int a, int b);
  void finalize();
  std::vector<OrientedEdge> edges_;
  std::map<std::pair<int, int>, int> index_;
};

// Depth of the last level at which two leaves of a binary tree disagree:
// 0 for equal leaves, otherwise the position of the highest differing bit + 1.
int hierarchical_distance(std::uint64_t a, std::uint64_t b);

// Interleaving bijection between box points and hierarchical leaves:
// bit (d*k + c) of the code is the k-th binary digit of coordinate c.
std::uint64_t box_to_binary(const std::vector<int>& point, int dim, int levels);
std::vector<int> binary_to_box(std::uint64_t code, int dim, int levels);

// Monotone envelope w(x) = sup_{t >= x} b(t) of
// b(x) = 8 * wbar * 2^{2d} * (d log2 x)^alpha * x^{-2d}, scaled by `scale`.
// b increases up to x = e^{alpha/(2d)} and decreases beyond it, so w is b
// clamped to its peak for small arguments.
class WeightProfile {
 public:
  WeightProfile(int dim, double alpha, double wbar, double scale = 1.0);

  double operator()(double x) const;      // w(x), requires x >= 1
  double envelope_floor(double x) const;  // b(x)
  double peak_point() const { return peak_; }

  int dim() const { return dim_; }
  double alpha() const { return alpha_; }
  double wbar() const { return wbar_; }
  double scale() const { return scale_; }

  // Certified sum of w(|i|_inf) over the nonzero lattice Z^d.
  // The returned value differs from the true sum by at most *band.
  double lattice_sum(double* band = nullptr) const;

 private:
  int dim_;
  double alpha_, wbar_, scale_, peak_;
};

// Long-range box {0..2^levels-1}^dim with W_ij = w(|i-j|_inf) and wired
// pinning h_i = sum of w over the lattice complement, accurate to
// tail_rel relative truncation (certified analytic tail).
PinnedGraph build_long_range_box(int dim, int levels, const WeightProfile& profile,
                                 double tail_rel = 1e-10);

// Weights 8*wbar*2^{-2r}*r^alpha per hierarchical level r = 1..levels and the
// matching uniform pinning 2*wbar*2^{-levels}*(levels+1)^alpha.
std::vector<double> hierarchical_level_weights(int levels, double wbar, double alpha);
double hierarchical_pinning_weight(int levels, double wbar, double alpha);

// Complete graph on the 2^levels leaves with W_vw = level_weights[d_H(v,w)-1]
// and uniform pinning.
PinnedGraph build_hierarchical(int levels, const std::vector<double>& level_weights,
                               double pinning);

enum class ChainPinning {
  kExplicit,          // all `length` vertices kept, caller supplies pinning
  kLastVertexPinned,  // last vertex deleted, its couplings become pinning
};

// Nearest-neighbor chain with W({l-1,l}) = wbar * (l+1)^alpha in 0-based
// labels (the l-th edge joins chain positions l and l+1, positions count
// from 1 in the labels). extra_edges are (i, j, weight) triples appended
// verbatim; under kLastVertexPinned, couplings to the deleted vertex
// convert into pinning on the surviving endpoint.
PinnedGraph build_chain(int length, double wbar, double alpha, ChainPinning mode,
                        const Eigen::VectorXd& pinning = Eigen::VectorXd(),
                        const std::vector<std::tuple<int, int, double>>& extra_edges = {});

// Chain reduction of the hierarchical model: W({l-1,l}) = 2^{2l-3} * level_weights[l-1]
// for l = 2..length and pinning 2^{l-1} * pinning_base at position l.
PinnedGraph build_effective_chain(int length, const std::vector<double>& level_weights,
                                  double pinning_base);

}  // namespace h22
