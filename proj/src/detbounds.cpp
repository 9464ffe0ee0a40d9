#include "h22/detbounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace h22 {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd exponent_quadratic_form(const PinnedGraph& graph, const EdgeKernel& kernel,
                                        const Eigen::VectorXd& m) {
  // F diag(m_e Q_e) F^t
  const Eigen::MatrixXd f = kernel.edges.signed_incidence(graph.size());
  return f * (m.array() * kernel.unit_conductance.array()).matrix().asDiagonal() * f.transpose();
}

}  // namespace

ExponentAssignment ExponentAssignment::bare(Eigen::VectorXd exponents) {
  ExponentAssignment a;
  a.delta = Eigen::VectorXd::Constant(exponents.size(), kInf);
  a.m = std::move(exponents);
  return a;
}

void ExponentAssignment::validate(int edge_count) const {
  if (m.size() != edge_count || delta.size() != edge_count)
    throw std::invalid_argument("ExponentAssignment: size mismatch");
  for (int e = 0; e < edge_count; ++e) {
    if (!(m[e] >= 0.0)) throw std::invalid_argument("ExponentAssignment: negative exponent");
    if (!(delta[e] > 0.0)) throw std::invalid_argument("ExponentAssignment: nonpositive delta");
  }
}

bool in_protected_region(const EdgeKernel& kernel, const ExponentAssignment& assignment) {
  assignment.validate(kernel.edges.count());
  for (int e = 0; e < kernel.edges.count(); ++e)
    if (!(kernel.even_part[e] < 1.0 + assignment.delta[e])) return false;
  return true;
}

DeficitRoutes det_deficit_routes(const PinnedGraph& graph, const EdgeKernel& kernel,
                                 const Eigen::VectorXd& m) {
  if (m.size() != kernel.edges.count())
    throw std::invalid_argument("det_deficit_routes: exponent count mismatch");
  const Eigen::VectorXd root_m = m.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd gamma = response_matrix(graph, kernel);
  const Eigen::MatrixXd direct_arg =
      Eigen::MatrixXd::Identity(m.size(), m.size()) -
      Eigen::MatrixXd(root_m.asDiagonal() * gamma * root_m.asDiagonal());
  DeficitRoutes out;
  out.direct = direct_arg.partialPivLu().determinant();

  const Eigen::MatrixXd d = weighted_laplacian(graph, kernel.field.u);
  const Eigen::MatrixXd schur_arg = d - exponent_quadratic_form(graph, kernel, m);
  out.schur = schur_arg.partialPivLu().determinant() / d.partialPivLu().determinant();
  return out;
}

double det_deficit(const PinnedGraph& graph, const EdgeKernel& kernel, const Eigen::VectorXd& m) {
  if (m.size() != kernel.edges.count())
    throw std::invalid_argument("det_deficit: exponent count mismatch");
  const Eigen::MatrixXd d = weighted_laplacian(graph, kernel.field.u);
  const Eigen::MatrixXd schur_arg = d - exponent_quadratic_form(graph, kernel, m);
  return schur_arg.partialPivLu().determinant() / d.partialPivLu().determinant();
}

AssumptionRoutes assumption_routes(const PinnedGraph& graph, const EdgeKernel& kernel,
                                   const Eigen::VectorXd& m) {
  if (m.size() != kernel.edges.count())
    throw std::invalid_argument("assumption_routes: exponent count mismatch");
  AssumptionRoutes out;

  const Eigen::VectorXd root_m = m.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd gamma = response_matrix(graph, kernel);
  const Eigen::MatrixXd spectral_arg = root_m.asDiagonal() * gamma * root_m.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spectral(spectral_arg, Eigen::EigenvaluesOnly);
  out.spectral = spectral.eigenvalues().maxCoeff() < 1.0;

  const Eigen::MatrixXd d = weighted_laplacian(graph, kernel.field.u);
  const Eigen::MatrixXd s = d - exponent_quadratic_form(graph, kernel, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> quad(s, Eigen::EigenvaluesOnly);
  const double scale = std::max(s.cwiseAbs().maxCoeff(), 1e-300);
  out.margin = quad.eigenvalues().minCoeff() / scale;
  out.quadratic_form = quad.eigenvalues().minCoeff() > 0.0;
  return out;
}

bool assumption_holds(const PinnedGraph& graph, const EdgeKernel& kernel,
                      const Eigen::VectorXd& m) {
  return assumption_routes(graph, kernel, m).quadratic_form;
}

bool assumption_sufficient(const PinnedGraph& graph, const EdgeSystem& edges,
                           const Eigen::VectorXd& m) {
  if (m.size() != edges.count())
    throw std::invalid_argument("assumption_sufficient: exponent count mismatch");
  const int n = graph.size();
  std::vector<int> parent(static_cast<size_t>(n) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<size_t>(a)] != a) {
      parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
      a = parent[static_cast<size_t>(a)];
    }
    return a;
  };
  for (int e = 0; e < edges.count(); ++e) {
    const double w = edges.edge(e).is_pinning() ? graph.pinning()[edges.edge(e).head]
                                                : graph.weights()(edges.edge(e).head,
                                                                  edges.edge(e).tail);
    if (m[e] > w) return false;
    if (m[e] < w) {
      const int a = edges.edge(e).head;
      const int b = edges.edge(e).is_pinning() ? n : edges.edge(e).tail;
      parent[static_cast<size_t>(find(a))] = find(b);
    }
  }
  const int root = find(n);
  for (int i = 0; i < n; ++i)
    if (find(i) != root) return false;
  return true;
}

double effective_resistance(const ResistorNetwork& network, int x, int y) {
  if (x == y) return 0.0;
  auto check = [&](int v, const char* what) {
    if (v != kPinnedVertex && (v < 0 || v >= network.vertex_count))
      throw std::invalid_argument(std::string("effective_resistance: ") + what);
  };
  check(x, "terminal out of range");
  check(y, "terminal out of range");

  bool has_ground = (x == kPinnedVertex || y == kPinnedVertex);
  std::set<int> used;
  if (x != kPinnedVertex) used.insert(x);
  if (y != kPinnedVertex) used.insert(y);
  for (const auto& [a, b, c] : network.conductors) {
    check(a, "conductor endpoint out of range");
    check(b, "conductor endpoint out of range");
    if (a == b) throw std::invalid_argument("effective_resistance: self loop");
    if (!(c >= 0.0)) throw std::invalid_argument("effective_resistance: negative conductance");
    if (c == 0.0) continue;
    if (a == kPinnedVertex || b == kPinnedVertex) has_ground = true;
    if (a != kPinnedVertex) used.insert(a);
    if (b != kPinnedVertex) used.insert(b);
  }
  const int ground = has_ground ? kPinnedVertex : y;
  std::map<int, int> index;
  for (int v : used)
    if (v != ground) index[v] = static_cast<int>(index.size());
  const int nu = static_cast<int>(index.size());
  if (nu == 0) throw std::invalid_argument("effective_resistance: terminals not connected");

  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(nu, nu);
  for (const auto& [a, b, c] : network.conductors) {
    if (c == 0.0) continue;
    const bool a_in = (a != ground && a != kPinnedVertex);
    const bool b_in = (b != ground && b != kPinnedVertex);
    if (a_in) lap(index[a], index[a]) += c;
    if (b_in) lap(index[b], index[b]) += c;
    if (a_in && b_in) {
      lap(index[a], index[b]) -= c;
      lap(index[b], index[a]) -= c;
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu);
  if (x != ground && x != kPinnedVertex) rhs[index[x]] += 1.0;
  if (y != ground && y != kPinnedVertex) rhs[index[y]] -= 1.0;

  Eigen::LLT<Eigen::MatrixXd> llt(lap);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("effective_resistance: terminals not connected");
  return rhs.dot(llt.solve(rhs));
}

Eigen::VectorXd edge_conductances(const EdgeKernel& kernel, int anchor_edge) {
  if (anchor_edge < 0 || anchor_edge >= kernel.edges.count())
    throw std::invalid_argument("edge_conductances: anchor out of range");
  return kernel.weighted_growth / kernel.unit_conductance[anchor_edge];
}

ResistorNetwork anchored_network(const PinnedGraph& graph, const EdgeKernel& kernel,
                                 int anchor_edge, const std::vector<int>& edge_set) {
  if (anchor_edge < 0 || anchor_edge >= kernel.edges.count())
    throw std::invalid_argument("anchored_network: anchor out of range");
  const double anchor_q = kernel.unit_conductance[anchor_edge];
  ResistorNetwork net;
  net.vertex_count = graph.size();
  net.conductors.reserve(edge_set.size());
  for (int e : edge_set) {
    if (e < 0 || e >= kernel.edges.count())
      throw std::invalid_argument("anchored_network: edge out of range");
    const OrientedEdge& ed = kernel.edges.edge(e);
    net.conductors.emplace_back(ed.head, ed.tail, kernel.weighted_growth[e] / anchor_q);
  }
  return net;
}

SummaryBound summary_bound(const PinnedGraph& graph, const EdgeKernel& kernel,
                           const Eigen::VectorXd& m,
                           const std::vector<ResistanceGroup>& groups) {
  const int count = kernel.edges.count();
  if (m.size() != count) throw std::invalid_argument("summary_bound: exponent count mismatch");
  for (int e = 0; e < count; ++e)
    if (!(m[e] >= 0.0)) throw std::invalid_argument("summary_bound: negative exponent");

  std::set<int> anchors;
  for (const auto& g : groups) {
    if (g.anchor_edge < 0 || g.anchor_edge >= count)
      throw std::invalid_argument("summary_bound: anchor out of range");
    if (!anchors.insert(g.anchor_edge).second)
      throw std::invalid_argument("summary_bound: duplicate anchor");
  }
  for (int e = 0; e < count; ++e) {
    const bool carries = m[e] > 0.0;
    if (carries != (anchors.count(e) > 0))
      throw std::invalid_argument("summary_bound: anchors must be exactly the exponent edges");
  }

  std::set<int> all_edges_used;
  SummaryBound out;
  out.applicable = true;
  for (const auto& g : groups) {
    if (g.edge_set.empty()) throw std::invalid_argument("summary_bound: empty edge set");
    // vertices of the group's subgraph, rho encoded as graph.size()
    std::vector<int> parent(static_cast<size_t>(graph.size()) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
      while (parent[static_cast<size_t>(a)] != a) {
        parent[static_cast<size_t>(a)] =
            parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
        a = parent[static_cast<size_t>(a)];
      }
      return a;
    };
    std::set<int> vertices;
    for (int e : g.edge_set) {
      if (e < 0 || e >= count) throw std::invalid_argument("summary_bound: edge out of range");
      if (!(kernel.weight[e] > 0.0))
        throw std::invalid_argument("summary_bound: edge sets must carry positive weight");
      if (!all_edges_used.insert(e).second)
        throw std::invalid_argument("summary_bound: edge sets must be disjoint");
      const OrientedEdge& ed = kernel.edges.edge(e);
      const int a = ed.head;
      const int b = ed.is_pinning() ? graph.size() : ed.tail;
      vertices.insert(a);
      vertices.insert(b);
      parent[static_cast<size_t>(find(a))] = find(b);
    }
    const int root = find(*vertices.begin());
    for (int v : vertices)
      if (find(v) != root) throw std::invalid_argument("summary_bound: edge set not connected");
    const OrientedEdge& anchor = kernel.edges.edge(g.anchor_edge);
    const int ax = anchor.head;
    const int ay = anchor.is_pinning() ? graph.size() : anchor.tail;
    if (!vertices.count(ax) || !vertices.count(ay))
      throw std::invalid_argument("summary_bound: anchor endpoints outside the edge set");

    const ResistorNetwork net = anchored_network(graph, kernel, g.anchor_edge, g.edge_set);
    const double resistance = effective_resistance(
        net, anchor.head, anchor.is_pinning() ? kPinnedVertex : anchor.tail);
    const double exponent = m[g.anchor_edge];
    SummaryTerm term{resistance, exponent, 1.0 - exponent * resistance};
    out.terms.push_back(term);
    if (!(term.factor > 0.0)) {
      out.applicable = false;
      if (out.failure.empty())
        out.failure = "resistance hypothesis m*R < 1 fails at an anchor edge";
    }
  }
  if (out.applicable)
    for (const auto& t : out.terms) out.lower_bound *= t.factor;
  return out;
}

namespace {

// exact pairwise totals of a per-edge quantity, keyed by mapped endpoints
std::map<std::pair<int, int>, double> pair_totals(const Eigen::VectorXd& per_edge,
                                                  const EdgeSystem& edges,
                                                  const std::vector<int>* image) {
  const auto map_vertex = [&](int v) {
    if (v == kPinnedVertex) return kPinnedVertex;
    return image ? (*image)[static_cast<size_t>(v)] : v;
  };
  std::map<std::pair<int, int>, double> totals;
  for (int e = 0; e < edges.count(); ++e) {
    if (per_edge[e] == 0.0) continue;
    int a = map_vertex(edges.edge(e).head);
    int b = map_vertex(edges.edge(e).tail);
    if (a == b) throw std::invalid_argument("split_comparison: split edge collapses");
    if (b != kPinnedVertex && a > b) std::swap(a, b);
    if (a == kPinnedVertex) std::swap(a, b);
    totals[{a, b}] += per_edge[e];
  }
  return totals;
}

void compare_totals(const std::map<std::pair<int, int>, double>& lhs,
                    const std::map<std::pair<int, int>, double>& rhs, double scale,
                    const char* what) {
  auto close = [&](double a, double b) { return std::abs(a - b) <= 1e-12 * scale; };
  for (const auto& [key, value] : lhs) {
    const auto it = rhs.find(key);
    if (it == rhs.end() ? !close(value, 0.0) : !close(value, it->second))
      throw std::invalid_argument(std::string("split_comparison: ") + what +
                                  " splitting does not sum back");
  }
  for (const auto& [key, value] : rhs)
    if (!lhs.count(key) && !close(value, 0.0))
      throw std::invalid_argument(std::string("split_comparison: ") + what +
                                  " splitting does not sum back");
}

}  // namespace

SplitComparison split_comparison(const PinnedGraph& original, const Eigen::VectorXd& m_original,
                                 const FieldConfig& config, const PinnedGraph& split,
                                 const Eigen::VectorXd& m_split, const VertexSplit& map) {
  const int n = original.size();
  const int np = split.size();
  if (static_cast<int>(map.image.size()) != np)
    throw std::invalid_argument("split_comparison: map size mismatch");
  std::vector<bool> hit(static_cast<size_t>(n), false);
  for (int ip = 0; ip < np; ++ip) {
    const int i = map.image[static_cast<size_t>(ip)];
    if (i < 0 || i >= n) throw std::invalid_argument("split_comparison: map image out of range");
    hit[static_cast<size_t>(i)] = true;
  }
  for (bool b : hit)
    if (!b) throw std::invalid_argument("split_comparison: map not surjective");
  if (config.u.size() != n || config.s.size() != n)
    throw std::invalid_argument("split_comparison: config size mismatch");

  const EdgeSystem orig_edges = EdgeSystem::positive_edges(original);
  const EdgeSystem split_edges = EdgeSystem::positive_edges(split);
  if (m_original.size() != orig_edges.count() || m_split.size() != split_edges.count())
    throw std::invalid_argument("split_comparison: exponent count mismatch");

  const double weight_scale = std::max(original.max_weight(), 1.0);
  compare_totals(pair_totals(orig_edges.weights(original), orig_edges, nullptr),
                 pair_totals(split_edges.weights(split), split_edges, &map.image),
                 weight_scale, "weight");
  const double m_scale = std::max({m_original.size() ? m_original.maxCoeff() : 0.0,
                                   m_split.size() ? m_split.maxCoeff() : 0.0, 1.0});
  compare_totals(pair_totals(m_original, orig_edges, nullptr),
                 pair_totals(m_split, split_edges, &map.image), m_scale, "exponent");

  // epsilon-regularize when the split graph loses its connection to rho;
  // copies of vertex i each gain epsilon, the original gains one epsilon per
  // copy, keeping the splitting sums exact.
  double epsilon = 0.0;
  if (!split.positive_graph_connected()) epsilon = 1e-8 * original.min_positive_pinning();

  Eigen::VectorXd copies = Eigen::VectorXd::Zero(n);
  for (int ip = 0; ip < np; ++ip) copies[map.image[static_cast<size_t>(ip)]] += 1.0;

  const PinnedGraph graph_a(original.weights(), original.pinning() + epsilon * copies);
  const PinnedGraph graph_b(split.weights(),
                            split.pinning() + Eigen::VectorXd::Constant(np, epsilon));

  FieldConfig pulled;
  pulled.u.resize(np);
  pulled.s.resize(np);
  for (int ip = 0; ip < np; ++ip) {
    pulled.u[ip] = config.u[map.image[static_cast<size_t>(ip)]];
    pulled.s[ip] = config.s[map.image[static_cast<size_t>(ip)]];
  }

  const EdgeSystem edges_a = EdgeSystem::positive_edges(graph_a);
  const EdgeSystem edges_b = EdgeSystem::positive_edges(graph_b);
  auto remap = [](const EdgeSystem& to, const EdgeSystem& from, const Eigen::VectorXd& m) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(to.count());
    for (int e = 0; e < from.count(); ++e) {
      const int idx = to.find(from.edge(e).head, from.edge(e).tail);
      if (idx >= 0) out[idx] = m[e];
    }
    return out;
  };
  const Eigen::VectorXd ma = remap(edges_a, orig_edges, m_original);
  const Eigen::VectorXd mb = remap(edges_b, split_edges, m_split);

  const EdgeKernel kernel_a = make_edge_kernel(graph_a, config, &edges_a);
  const EdgeKernel kernel_b = make_edge_kernel(graph_b, pulled, &edges_b);

  SplitComparison out;
  out.epsilon_used = epsilon;
  out.det_original = det_deficit(graph_a, kernel_a, ma);
  out.det_split = det_deficit(graph_b, kernel_b, mb);

  // auxiliary identities through the 0/1 merge matrix K
  Eigen::MatrixXd merge = Eigen::MatrixXd::Zero(n, np);
  for (int ip = 0; ip < np; ++ip) merge(map.image[static_cast<size_t>(ip)], ip) = 1.0;
  const Eigen::MatrixXd fa = edges_a.signed_incidence(n);
  const Eigen::MatrixXd fb = edges_b.signed_incidence(np);
  const Eigen::MatrixXd lap_a = fa * kernel_a.weighted_growth.asDiagonal() * fa.transpose();
  const Eigen::MatrixXd lap_b = fb * kernel_b.weighted_growth.asDiagonal() * fb.transpose();
  out.laplacian_residual = (merge * lap_b * merge.transpose() - lap_a).cwiseAbs().maxCoeff() /
                           std::max(lap_a.cwiseAbs().maxCoeff(), 1e-300);
  const Eigen::MatrixXd quad_a =
      fa * (ma.array() * kernel_a.unit_conductance.array()).matrix().asDiagonal() *
      fa.transpose();
  const Eigen::MatrixXd quad_b =
      fb * (mb.array() * kernel_b.unit_conductance.array()).matrix().asDiagonal() *
      fb.transpose();
  out.exponent_residual = (merge * quad_b * merge.transpose() - quad_a).cwiseAbs().maxCoeff() /
                          std::max({quad_a.cwiseAbs().maxCoeff(), 1.0});
  return out;
}

FactorizationReport factorization_check(const PinnedGraph& graph, const FieldConfig& config,
                                        const Eigen::VectorXd& m,
                                        const std::vector<std::vector<int>>& components) {
  const int n = graph.size();
  std::vector<int> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<size_t>(a)] != a) {
      parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
      a = parent[static_cast<size_t>(a)];
    }
    return a;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (graph.weights()(i, j) > 0.0) parent[static_cast<size_t>(find(i))] = find(j);

  std::vector<int> claimed(static_cast<size_t>(n), -1);
  for (size_t c = 0; c < components.size(); ++c) {
    if (components[c].empty())
      throw std::invalid_argument("factorization_check: empty component");
    for (int v : components[c]) {
      if (v < 0 || v >= n || claimed[static_cast<size_t>(v)] != -1)
        throw std::invalid_argument("factorization_check: components must partition the vertices");
      claimed[static_cast<size_t>(v)] = static_cast<int>(c);
    }
    for (int v : components[c])
      if (find(v) != find(components[c].front()))
        throw std::invalid_argument("factorization_check: listed component not connected");
  }
  for (int v = 0; v < n; ++v) {
    if (claimed[static_cast<size_t>(v)] == -1)
      throw std::invalid_argument("factorization_check: components must partition the vertices");
    if (claimed[static_cast<size_t>(v)] != claimed[static_cast<size_t>(find(v))])
      throw std::invalid_argument("factorization_check: vertices of one component listed apart");
  }

  const EdgeSystem edges = EdgeSystem::positive_edges(graph);
  if (m.size() != edges.count())
    throw std::invalid_argument("factorization_check: exponent count mismatch");
  const EdgeKernel kernel = make_edge_kernel(graph, config, &edges);

  FactorizationReport report;
  report.det_full = det_deficit(graph, kernel, m);
  double product = 1.0;
  for (const auto& comp : components) {
    const int nc = static_cast<int>(comp.size());
    Eigen::MatrixXd w(nc, nc);
    Eigen::VectorXd h(nc);
    FieldConfig sub;
    sub.u.resize(nc);
    sub.s.resize(nc);
    for (int a = 0; a < nc; ++a) {
      h[a] = graph.pinning()[comp[static_cast<size_t>(a)]];
      sub.u[a] = config.u[comp[static_cast<size_t>(a)]];
      sub.s[a] = config.s[comp[static_cast<size_t>(a)]];
      for (int b = 0; b < nc; ++b)
        w(a, b) = a == b ? 0.0
                         : graph.weights()(comp[static_cast<size_t>(a)],
                                           comp[static_cast<size_t>(b)]);
    }
    const PinnedGraph sub_graph(std::move(w), std::move(h));
    const EdgeSystem sub_edges = EdgeSystem::positive_edges(sub_graph);
    Eigen::VectorXd sub_m(sub_edges.count());
    for (int e = 0; e < sub_edges.count(); ++e) {
      const OrientedEdge& ed = sub_edges.edge(e);
      const int head = comp[static_cast<size_t>(ed.head)];
      const int tail = ed.is_pinning() ? kPinnedVertex : comp[static_cast<size_t>(ed.tail)];
      const int full_index = edges.find(head, tail);
      if (full_index < 0)
        throw std::logic_error("factorization_check: component edge missing from full system");
      sub_m[e] = m[full_index];
    }
    const EdgeKernel sub_kernel = make_edge_kernel(sub_graph, sub, &sub_edges);
    report.component_dets.push_back(det_deficit(sub_graph, sub_kernel, sub_m));
    product *= report.component_dets.back();
  }
  report.residual = std::abs(report.det_full - product) /
                    std::max({std::abs(report.det_full), std::abs(product), 1e-300});
  return report;
}

bool monotonicity_check(const PinnedGraph& graph, const PinnedGraph& graph_prime,
                        const EdgeSystem& edges, const FieldConfig& config,
                        const Eigen::VectorXd& m, const Eigen::VectorXd& m_prime) {
  if (graph.size() != graph_prime.size())
    throw std::invalid_argument("monotonicity_check: vertex count mismatch");
  if (m.size() != edges.count() || m_prime.size() != edges.count())
    throw std::invalid_argument("monotonicity_check: exponent count mismatch");
  for (int e = 0; e < edges.count(); ++e) {
    const OrientedEdge& ed = edges.edge(e);
    if (!(m[e] >= 0.0) || m[e] > m_prime[e])
      throw std::invalid_argument("monotonicity_check: need 0 <= m <= m'");
    if (graph.weight(ed.head, ed.tail) < graph_prime.weight(ed.head, ed.tail))
      throw std::invalid_argument("monotonicity_check: need W >= W'");
  }
  const EdgeKernel kernel = make_edge_kernel(graph, config, &edges);
  const EdgeKernel kernel_prime = make_edge_kernel(graph_prime, config, &edges);
  const double det = det_deficit(graph, kernel, m);
  const double det_prime = det_deficit(graph_prime, kernel_prime, m_prime);
  return det_prime > 0.0 && det - det_prime >= -1e-10 * std::max(1.0, std::abs(det));
}

}  // namespace h22
