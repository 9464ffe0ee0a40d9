#include "h22/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <utility>

#include "h22/detbounds.hpp"
#include "h22/observables.hpp"
#include "h22/oracle.hpp"
#include "h22/regime.hpp"
#include "h22/sampler.hpp"

namespace h22 {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void fail(LemmaReport& report, const std::string& note) {
  ++report.failures;
  if (report.details.size() < 5) report.details.push_back(note);
}

void track(LemmaReport& report, double residual) {
  report.worst_residual = std::max(report.worst_residual, residual);
}

PinnedGraph single_vertex(double pinning) {
  return PinnedGraph(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, pinning));
}

PinnedGraph vertex_pair(double coupling, double pin_a, double pin_b) {
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(2, 2);
  weights(0, 1) = weights(1, 0) = coupling;
  Eigen::VectorXd pinning(2);
  pinning << pin_a, pin_b;
  return PinnedGraph(std::move(weights), std::move(pinning));
}

// ---------------------------------------------------------------- suites --

LemmaReport normalization_suite() {
  LemmaReport report;
  report.lemma = "normalization";
  struct Case {
    PinnedGraph graph;
    QuadratureSpec spec;
    std::string tag;
  };
  std::vector<Case> cases;
  {
    QuadratureSpec wide;
    wide.half_width = 16.0;
    cases.push_back({single_vertex(0.5), wide, "n1 h=0.5"});
    cases.push_back({single_vertex(2.0), QuadratureSpec{}, "n1 h=2"});
    QuadratureSpec marginal;
    marginal.marginal = true;
    cases.push_back({vertex_pair(0.5, 0.5, 2.0), marginal, "n2 W=0.5 h=(0.5,2)"});
    cases.push_back({vertex_pair(3.0, 2.0, 2.0), marginal, "n2 W=3 h=(2,2)"});
    cases.push_back({vertex_pair(50.0, 0.5, 0.5), marginal, "n2 W=50 h=(0.5,0.5)"});
    cases.push_back({vertex_pair(3.0, 0.5, 0.5), marginal, "n2 W=3 h=(0.5,0.5)"});
    cases.push_back({vertex_pair(50.0, 2.0, 2.0), marginal, "n2 W=50 h=(2,2)"});
    QuadratureSpec joint4;
    joint4.points_per_axis = 96;
    cases.push_back({vertex_pair(3.0, 2.0, 2.0), joint4, "n2 W=3 h=(2,2) joint"});
  }
  for (const auto& c : cases) {
    const QuadratureResult result = oracle_normalization(c.graph, c.spec);
    const double residual = std::abs(result.value - 1.0);
    track(report, residual);
    if (residual > 1e-3) fail(report, c.tag + ": norm " + std::to_string(result.value));
    ++report.trials;
  }
  return report;
}

LemmaReport ward_suite() {
  LemmaReport report;
  report.lemma = "ward_unprotected";
  const double ratios[] = {0.1, 0.5, 0.9};

  // single vertex: the pinning edge carries the exponent
  for (const double pinning : {0.5, 2.0}) {
    const PinnedGraph graph = single_vertex(pinning);
    std::vector<Observable> observables;
    for (const double r : ratios) {
      observables.push_back(
          interaction_product({{0, kPinnedVertex}}, {r * pinning}));
      observables.back().name += "_r" + std::to_string(r);
    }
    QuadratureSpec spec;
    if (pinning < 1.0) {
      spec.half_width = 16.0;
      spec.points_per_axis = 192;
    }
    const auto results = oracle_expectations(graph, observables, spec);
    for (std::size_t k = 0; k < results.size(); ++k) {
      const double bound = 1.0 / (1.0 - ratios[k]);
      track(report, results[k].value - bound);
      if (results[k].value > bound + 1e-4) {
        fail(report, "n1 h=" + std::to_string(pinning) + " r=" + std::to_string(ratios[k]));
      }
      ++report.trials;
    }
  }

  // two vertices: every positive edge at the same exponent ratio
  {
    const PinnedGraph graph = vertex_pair(3.0, 2.0, 2.0);
    std::vector<Observable> observables;
    for (const double r : ratios) {
      observables.push_back(interaction_product(
          {{0, 1}, {0, kPinnedVertex}, {1, kPinnedVertex}}, {r * 3.0, r * 2.0, r * 2.0}));
      observables.back().name += "_r" + std::to_string(r);
    }
    QuadratureSpec spec;
    spec.points_per_axis = 96;
    const auto results = oracle_expectations(graph, observables, spec);
    for (std::size_t k = 0; k < results.size(); ++k) {
      const double bound = std::pow(1.0 - ratios[k], -3.0);
      track(report, results[k].value - bound);
      if (results[k].value > bound + 1e-4) {
        fail(report, "n2 product r=" + std::to_string(ratios[k]));
      }
      ++report.trials;
    }
  }
  return report;
}

Eigen::VectorXd random_exponents(RngStream& rng, const Eigen::VectorXd& weights, double top) {
  Eigen::VectorXd m(weights.size());
  for (Eigen::Index e = 0; e < m.size(); ++e) m[e] = rng.uniform() * top * weights[e];
  return m;
}

LemmaReport equivalence_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "equivalence";
  report.seed = seed;
  RngStream rng(seed, 101);
  for (long t = 0; t < trials; ++t) {
    const PinnedGraph graph = random_pinned_graph(rng, 8);
    const FieldConfig config = random_field_config(rng, graph.size(), 0.6);
    const EdgeKernel kernel = make_edge_kernel(graph, config);
    const Eigen::VectorXd m = random_exponents(rng, kernel.weight, 1.4);

    const DeficitRoutes routes = det_deficit_routes(graph, kernel, m);
    const double rel =
        std::abs(routes.direct - routes.schur) / std::max(1.0, std::abs(routes.schur));
    track(report, rel);
    if (rel > 1e-9) fail(report, "det routes disagree by " + std::to_string(rel));

    const AssumptionRoutes assumption = assumption_routes(graph, kernel, m);
    if (std::abs(assumption.margin) > 1e-7 &&
        assumption.spectral != assumption.quadratic_form) {
      fail(report, "assumption routes disagree at margin " + std::to_string(assumption.margin));
    }
    ++report.trials;
  }
  return report;
}

LemmaReport monotonicity_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "monotonicity";
  report.seed = seed;
  RngStream rng(seed, 102);
  for (long t = 0; t < trials; ++t) {
    const PinnedGraph strong = random_pinned_graph(rng, 7);
    const FieldConfig config = random_field_config(rng, strong.size(), 0.4);
    const EdgeSystem edges = EdgeSystem::positive_edges(strong);

    // primed system: same support, weaker weights, exponents strictly below
    // them so the assumption holds by the sufficient criterion
    const PinnedGraph weak(0.6 * strong.weights(), 0.6 * strong.pinning());
    Eigen::VectorXd m_prime = random_exponents(rng, edges.weights(weak), 0.6);
    Eigen::VectorXd m = m_prime;
    const int variant = static_cast<int>(t % 3);
    PinnedGraph base = weak;
    if (variant == 1) {
      Eigen::MatrixXd weights = weak.weights();
      Eigen::VectorXd pinning = weak.pinning();
      const OrientedEdge& edge = edges.edge(rng.uniform_int(edges.count()));
      if (edge.is_pinning()) {
        pinning[edge.head] += 1.0;
      } else {
        weights(edge.head, edge.tail) += 1.0;
        weights(edge.tail, edge.head) += 1.0;
      }
      base = PinnedGraph(std::move(weights), std::move(pinning));
    } else if (variant == 2) {
      m[rng.uniform_int(edges.count())] *= rng.uniform();
    }

    if (!monotonicity_check(base, weak, edges, config, m, m_prime)) {
      const EdgeKernel kernel = make_edge_kernel(base, config, &edges);
      const EdgeKernel kernel_prime = make_edge_kernel(weak, config, &edges);
      const double gap = det_deficit(weak, kernel_prime, m_prime) -
                         det_deficit(base, kernel, m);
      track(report, gap);
      fail(report, "variant " + std::to_string(variant) + " gap " + std::to_string(gap));
    }
    ++report.trials;
  }
  return report;
}

PinnedGraph random_block_pair(RngStream& rng, std::vector<std::vector<int>>& components) {
  const int size_a = 1 + rng.uniform_int(4);
  const int size_b = 1 + rng.uniform_int(4);
  const int n = size_a + size_b;
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd pinning = Eigen::VectorXd::Zero(n);
  const auto fill_block = [&](int lo, int size) {
    for (int i = lo + 1; i < lo + size; ++i) {  // path backbone keeps it connected
      const double w = std::exp(rng.uniform() * 2.0 - 0.5);
      weights(i - 1, i) = weights(i, i - 1) = w;
    }
    for (int i = lo; i < lo + size; ++i) {
      for (int j = i + 2; j < lo + size; ++j) {
        if (rng.uniform() < 0.4) {
          const double w = std::exp(rng.uniform() * 2.0 - 0.5);
          weights(i, j) = weights(j, i) = w;
        }
      }
      if (rng.uniform() < 0.5) pinning[i] = std::exp(rng.uniform() * 2.0 - 0.5);
    }
    pinning[lo + rng.uniform_int(size)] += 1.0;  // every block must reach rho
  };
  fill_block(0, size_a);
  fill_block(size_a, size_b);
  components.clear();
  components.emplace_back();
  for (int i = 0; i < size_a; ++i) components.back().push_back(i);
  components.emplace_back();
  for (int i = size_a; i < n; ++i) components.back().push_back(i);
  return PinnedGraph(std::move(weights), std::move(pinning));
}

LemmaReport factorization_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "factorization";
  report.seed = seed;
  RngStream rng(seed, 103);
  for (long t = 0; t < trials; ++t) {
    std::vector<std::vector<int>> components;
    const PinnedGraph graph = random_block_pair(rng, components);
    const FieldConfig config = random_field_config(rng, graph.size(), 0.5);
    const EdgeSystem edges = EdgeSystem::positive_edges(graph);
    const Eigen::VectorXd m = random_exponents(rng, edges.weights(graph), 0.8);
    const FactorizationReport result = factorization_check(graph, config, m, components);
    track(report, result.residual);
    if (result.residual > 1e-9) fail(report, "residual " + std::to_string(result.residual));
    ++report.trials;
  }
  return report;
}

LemmaReport splitting_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "splitting";
  report.seed = seed;
  RngStream rng(seed, 104);
  for (long t = 0; t < trials; ++t) {
    const PinnedGraph original = random_pinned_graph(rng, 5);
    const int n = original.size();
    const FieldConfig config = random_field_config(rng, n, 0.5);

    VertexSplit map;
    std::vector<std::vector<int>> copies(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int count = rng.uniform() < 0.5 ? 2 : 1;
      for (int c = 0; c < count; ++c) {
        copies[static_cast<std::size_t>(i)].push_back(static_cast<int>(map.image.size()));
        map.image.push_back(i);
      }
    }
    const int split_n = static_cast<int>(map.image.size());

    // distribute each original weight over the copy pairs; normalized shares
    // keep the sums exact to roundoff
    Eigen::MatrixXd split_weights = Eigen::MatrixXd::Zero(split_n, split_n);
    Eigen::VectorXd split_pinning = Eigen::VectorXd::Zero(split_n);
    const EdgeSystem edges = EdgeSystem::positive_edges(original);
    std::vector<double> share_ratio(static_cast<std::size_t>(split_n * split_n), 0.0);
    for (int e = 0; e < edges.count(); ++e) {
      const OrientedEdge& edge = edges.edge(e);
      if (edge.is_pinning()) {
        const auto& cs = copies[static_cast<std::size_t>(edge.head)];
        std::vector<double> shares(cs.size());
        double total = 0.0;
        for (auto& s : shares) total += (s = rng.uniform() + 0.05);
        for (std::size_t k = 0; k < cs.size(); ++k) {
          split_pinning[cs[k]] = original.pinning()[edge.head] * (shares[k] / total);
        }
      } else {
        const auto& ca = copies[static_cast<std::size_t>(edge.head)];
        const auto& cb = copies[static_cast<std::size_t>(edge.tail)];
        std::vector<double> shares(ca.size() * cb.size());
        double total = 0.0;
        for (auto& s : shares) total += (s = rng.uniform() + 0.05);
        std::size_t k = 0;
        for (const int a : ca) {
          for (const int b : cb) {
            const double ratio = shares[k++] / total;
            const double w = original.weight(edge.head, edge.tail) * ratio;
            split_weights(a, b) = split_weights(b, a) = w;
            share_ratio[static_cast<std::size_t>(a * split_n + b)] = ratio;
            share_ratio[static_cast<std::size_t>(b * split_n + a)] = ratio;
          }
        }
      }
    }
    const PinnedGraph split(split_weights, split_pinning);

    // exponents distributed with the same shares so they sum back exactly
    Eigen::VectorXd m_original = random_exponents(rng, edges.weights(original), 0.3);
    const EdgeSystem split_edges = EdgeSystem::positive_edges(split);
    Eigen::VectorXd m_split = Eigen::VectorXd::Zero(split_edges.count());
    for (int e = 0; e < split_edges.count(); ++e) {
      const OrientedEdge& edge = split_edges.edge(e);
      if (edge.is_pinning()) {
        const int orig = map.image[static_cast<std::size_t>(edge.head)];
        const int full = edges.find(orig, kPinnedVertex);
        if (full >= 0) {
          m_split[e] = m_original[full] * split.pinning()[edge.head] /
                       original.pinning()[orig];
        }
      } else {
        const int a = map.image[static_cast<std::size_t>(edge.head)];
        const int b = map.image[static_cast<std::size_t>(edge.tail)];
        const int full = edges.find(a, b);
        if (full >= 0) {
          m_split[e] =
              m_original[full] *
              share_ratio[static_cast<std::size_t>(edge.head * split_n + edge.tail)];
        }
      }
    }

    const SplitComparison comparison =
        split_comparison(original, m_original, config, split, m_split, map);
    track(report, comparison.laplacian_residual);
    track(report, comparison.exponent_residual);
    if (comparison.laplacian_residual > 1e-10 || comparison.exponent_residual > 1e-10) {
      fail(report, "pullback residuals too large");
    }
    if (comparison.det_original < comparison.det_split - 1e-9) {
      track(report, comparison.det_split - comparison.det_original);
      fail(report, "separation inequality violated by " +
                       std::to_string(comparison.det_split - comparison.det_original));
    }
    ++report.trials;
  }
  return report;
}

LemmaReport auxiliary_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "auxiliary";
  report.seed = seed;
  RngStream rng(seed, 105);
  for (long t = 0; t < trials; ++t) {
    const PinnedGraph graph = random_pinned_graph(rng, 8);
    const int n = graph.size();
    const FieldConfig config = random_field_config(rng, n, 0.5);
    const EdgeKernel kernel = make_edge_kernel(graph, config);

    // incidence assembly of the weighted Laplacian
    const Eigen::MatrixXd laplacian = weighted_laplacian(graph, config.u);
    const Eigen::MatrixXd incidence = kernel.edges.signed_incidence(n);
    const Eigen::MatrixXd assembled =
        incidence * kernel.weighted_growth.asDiagonal() * incidence.transpose();
    const double lap_residual = (assembled - laplacian).cwiseAbs().maxCoeff() /
                                laplacian.cwiseAbs().maxCoeff();
    track(report, lap_residual);
    if (lap_residual > 1e-10) fail(report, "laplacian assembly residual");

    // joint density = u-marginal times the exact Gaussian in s
    const double joint = log_density(graph, config);
    const double marginal = log_marginal_density(graph, config.u);
    const double quad = config.s.dot(laplacian * config.s);
    const double gaussian = -0.5 * quad + 0.5 * log_det_spd(laplacian) -
                            0.5 * n * std::log(2.0 * M_PI);
    const double density_residual = std::abs(joint - marginal - gaussian);
    track(report, density_residual);
    if (density_residual > 1e-10) fail(report, "marginal factorization residual");
    ++report.trials;
  }
  return report;
}

LemmaReport summary_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "summary";
  report.seed = seed;
  RngStream rng(seed, 106);
  for (long t = 0; t < trials; ++t) {
    const PinnedGraph graph = random_pinned_graph(rng, 8);
    const FieldConfig config = random_field_config(rng, graph.size(), 0.25);
    const EdgeKernel kernel = make_edge_kernel(graph, config);
    const int edge_count = kernel.edges.count();

    const int anchors = 1 + rng.uniform_int(std::min(3, edge_count));
    std::vector<int> order(static_cast<std::size_t>(edge_count));
    for (int e = 0; e < edge_count; ++e) order[static_cast<std::size_t>(e)] = e;
    for (int e = edge_count - 1; e > 0; --e) {
      std::swap(order[static_cast<std::size_t>(e)],
                order[static_cast<std::size_t>(rng.uniform_int(e + 1))]);
    }

    Eigen::VectorXd m = Eigen::VectorXd::Zero(edge_count);
    std::vector<ResistanceGroup> groups;
    for (int k = 0; k < anchors; ++k) {
      const int e = order[static_cast<std::size_t>(k)];
      // singleton group: the anchored conductance is W_e B_e, so the factor
      // stays positive exactly for m below that
      const double conductance = kernel.weight[e] * kernel.even_part[e];
      m[e] = (0.2 + 0.7 * rng.uniform()) * conductance;
      groups.push_back(ResistanceGroup{e, {e}});
    }

    const SummaryBound bound = summary_bound(graph, kernel, m, groups);
    if (!bound.applicable) {
      fail(report, "constructed bound unexpectedly inapplicable: " + bound.failure);
      ++report.trials;
      continue;
    }
    const double det = det_deficit(graph, kernel, m);
    track(report, bound.lower_bound - det);
    if (det < bound.lower_bound - 1e-9) {
      fail(report, "lower bound exceeds determinant by " +
                       std::to_string(bound.lower_bound - det));
    }
    ++report.trials;
  }
  return report;
}

LemmaReport series_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "series_law";
  report.seed = seed;
  RngStream rng(seed, 107);
  for (long t = 0; t < trials; ++t) {
    const int segments = 2 + rng.uniform_int(7);
    ResistorNetwork network;
    network.vertex_count = segments + 1;
    double expected = 0.0;
    for (int i = 0; i < segments; ++i) {
      const double c = std::exp(rng.uniform() * 3.0 - 1.0);
      network.conductors.emplace_back(i, i + 1, c);
      expected += 1.0 / c;
    }
    const double resistance = effective_resistance(network, 0, segments);
    const double rel = std::abs(resistance - expected) / expected;
    track(report, rel);
    if (rel > 1e-12) fail(report, "series residual " + std::to_string(rel));
    ++report.trials;
  }
  return report;
}

LemmaReport rayleigh_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "rayleigh";
  report.seed = seed;
  RngStream rng(seed, 108);
  for (long t = 0; t < trials; ++t) {
    const int n = 3 + rng.uniform_int(6);
    ResistorNetwork network;
    network.vertex_count = n;
    for (int i = 1; i < n; ++i) {
      network.conductors.emplace_back(rng.uniform_int(i), i,
                                      std::exp(rng.uniform() * 3.0 - 1.0));
    }
    // one removable extra edge on top of the spanning tree
    const int extra_a = rng.uniform_int(n);
    int extra_b = rng.uniform_int(n);
    if (extra_b == extra_a) extra_b = (extra_b + 1) % n;
    network.conductors.emplace_back(extra_a, extra_b, std::exp(rng.uniform() * 3.0 - 1.0));

    const int x = rng.uniform_int(n);
    int y = rng.uniform_int(n);
    if (y == x) y = (y + 1) % n;

    const double base = effective_resistance(network, x, y);

    ResistorNetwork raised = network;
    std::get<2>(raised.conductors[static_cast<std::size_t>(
        rng.uniform_int(static_cast<int>(raised.conductors.size())))]) *= 1.5;
    const double with_raised = effective_resistance(raised, x, y);
    track(report, with_raised - base);
    if (with_raised > base + 1e-12 * std::max(1.0, base)) {
      fail(report, "raising a conductance raised the resistance");
    }

    ResistorNetwork removed = network;
    removed.conductors.pop_back();  // the extra edge; the tree keeps it connected
    const double with_removed = effective_resistance(removed, x, y);
    track(report, base - with_removed);
    if (with_removed < base - 1e-12 * std::max(1.0, base)) {
      fail(report, "removing an edge lowered the resistance");
    }
    ++report.trials;
  }
  return report;
}

LemmaReport chain_resistance_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "est_r2_chain";
  report.seed = seed;
  RngStream rng(seed, 109);
  const double alpha = 4.0;
  for (long t = 0; t < trials; ++t) {
    const int length = 3 + rng.uniform_int(6);
    const double wbar = std::exp(rng.uniform() * std::log(300.0));
    const PinnedGraph chain = build_chain(length, wbar, alpha, ChainPinning::kExplicit,
                                          Eigen::VectorXd::Constant(length, 0.3));

    // draw configurations until every chain edge is inside its protection window
    FieldConfig config = FieldConfig::zero(length);
    bool inside = false;
    for (int attempt = 0; attempt < 60 && !inside; ++attempt) {
      config = random_field_config(rng, length, 0.01);
      inside = true;
      for (int j = 2; j <= length; ++j) {
        const double delta = std::pow(static_cast<double>(j), -(alpha - 1.0));
        if (!(edge_interaction(chain, config, j - 2, j - 1) < 1.0 + delta)) {
          inside = false;
          break;
        }
      }
    }
    if (!inside) {
      fail(report, "could not draw an in-window configuration");
      ++report.trials;
      continue;
    }

    ResistorNetwork network;
    network.vertex_count = length;
    double weight_sum = 0.0;
    for (int j = 2; j <= length; ++j) {
      const double weight = chain.weight(j - 2, j - 1);
      const double b = edge_interaction(chain, config, j - 2, j - 1);
      const double growth = std::exp(config.u[j - 2] + config.u[j - 1]);
      network.conductors.emplace_back(j - 2, j - 1, weight * growth / b);
      weight_sum += 1.0 / weight;
    }
    const double resistance = effective_resistance(network, 0, length - 1);
    const double amplification =
        std::exp(kSqrt2 * sqrt_delta_partial_sum(alpha, 0.0, length));
    const double bound = amplification * weight_sum;
    track(report, resistance - bound);
    if (resistance > bound * (1.0 + 1e-12)) {
      fail(report, "chain resistance bound violated");
    }
    ++report.trials;
  }
  return report;
}

LemmaReport regime_identity_lemma() {
  LemmaReport report;
  report.lemma = "regime_identities";
  const double alphas[] = {3.5, 4.0, 5.0, 10.0};

  for (const double alpha : alphas) {
    const RegimeConstants rc = regime_constants(alpha, 0.0, 1.0);
    const double closed = special_case_wbar0(alpha);
    const double rel = std::abs(rc.wbar0 - closed) / closed;
    track(report, rel);
    if (rel > 1e-12) fail(report, "threshold closed form at alpha " + std::to_string(alpha));
    ++report.trials;
  }

  // at gamma = 0, c3 collapses to c1 * kappa whenever the min picks the
  // exponential branch
  for (const double alpha : alphas) {
    for (const double kappa : {0.25, 1.0}) {
      const RegimeConstants rc = regime_constants(alpha, 0.0, kappa);
      const double budget_limit = 1.0 / (16.0 * rc.c1 * std::log(2.0));
      if (kappa > budget_limit) continue;
      const double rel = std::abs(rc.c3 - rc.c1 * kappa) / rc.c3;
      track(report, rel);
      if (rel > 1e-13) fail(report, "c3 identity at alpha " + std::to_string(alpha));
      ++report.trials;
    }
  }

  // monotonicity on grids
  {
    double previous_threshold = 0.0;
    double previous_c4 = 0.0;
    bool first = true;
    for (double kappa = 0.1; kappa <= 1.0001; kappa += 0.1) {
      const RegimeConstants rc = regime_constants(4.0, 0.0, kappa);
      if (!first) {
        if (rc.wbar0 > previous_threshold + 1e-12) fail(report, "wbar0 not decreasing in kappa");
        if (rc.c4 < previous_c4 - 1e-15) fail(report, "c4 decreasing in kappa");
      }
      previous_threshold = rc.wbar0;
      previous_c4 = rc.c4;
      first = false;
      ++report.trials;
    }
    double previous_limit = 0.0;
    for (double wbar = 50.0; wbar <= 500.0; wbar += 50.0) {
      const double limit = check_admissible(1.0, wbar, 0.0, 4.0).exponent_limit;
      if (limit < previous_limit - 1e-12) fail(report, "exponent limit not increasing in wbar");
      previous_limit = limit;
      ++report.trials;
    }
  }
  return report;
}

LemmaReport hierarchical_transfer_lemma() {
  LemmaReport report;
  report.lemma = "hierarchical_transfer";
  for (const double wbar : {1.0, 271.0}) {
    for (const double alpha : {4.0, 5.0}) {
      for (int levels = 2; levels <= 6; ++levels) {
        const std::vector<double> level_weights =
            hierarchical_level_weights(levels, wbar, alpha);
        const double pinning = hierarchical_pinning_weight(levels, wbar, alpha);
        const PinnedGraph chain = build_effective_chain(levels, level_weights, pinning);
        for (int l = 2; l <= levels; ++l) {
          const double target = wbar * std::pow(static_cast<double>(l), alpha);
          const double got = chain.weight(l - 2, l - 1);
          const double rel = std::abs(got - target) / target;
          track(report, rel);
          if (got < target * (1.0 - 1e-13) || rel > 1e-13) {
            fail(report, "effective weight off at level " + std::to_string(l));
          }
        }
        const double terminal = chain.pinning()[levels - 1];
        const double target = wbar * std::pow(static_cast<double>(levels + 1), alpha);
        const double rel = std::abs(terminal - target) / target;
        track(report, rel);
        if (terminal < target * (1.0 - 1e-13) || rel > 1e-13) {
          fail(report, "terminal pinning below target");
        }
        ++report.trials;
      }
    }
  }
  return report;
}

LemmaReport box_transfer_lemma() {
  LemmaReport report;
  report.lemma = "box_transfer";
  const double wbar = 271.0;
  const double alpha = 4.0;
  for (const int dim : {1, 2}) {
    for (int levels = 1; levels <= 3; ++levels) {
      const WeightProfile profile(dim, alpha, wbar);
      const int depth = dim * levels;
      for (int r = 1; r <= depth; ++r) {
        const double argument =
            std::pow(2.0, std::ceil(static_cast<double>(r) / dim));
        const double transferred = profile(argument);
        const double target =
            8.0 * wbar * std::pow(2.0, -2.0 * r) * std::pow(static_cast<double>(r), alpha);
        track(report, target - transferred);
        if (transferred < target * (1.0 - 1e-12)) {
          fail(report, "profile transfer fails at depth " + std::to_string(r));
        }
        ++report.trials;
      }
      const PinnedGraph box = build_long_range_box(dim, levels, profile);
      const double pinning_floor = 2.0 * wbar * std::pow(2.0, -depth) *
                                   std::pow(static_cast<double>(depth + 1), alpha);
      track(report, pinning_floor - box.min_positive_pinning());
      if (box.min_positive_pinning() < pinning_floor * (1.0 - 1e-12)) {
        fail(report, "wired pinning below hierarchical floor");
      }
      ++report.trials;
    }
  }
  return report;
}

struct OracleMcmcCase {
  std::string tag;
  PinnedGraph graph;
  std::vector<Observable> observables;
  QuadratureSpec spec;
};

std::vector<OracleMcmcCase> oracle_mcmc_battery() {
  std::vector<OracleMcmcCase> battery;
  {
    OracleMcmcCase c{"n1 h=2", single_vertex(2.0), {}, {}};
    c.observables.push_back(cosh_power(0, 1.0));
    c.observables.push_back(cosh_power(0, 2.0));
    c.observables.push_back(field_square(0));
    c.observables.push_back(interaction_product({{0, kPinnedVertex}}, {1.0}));
    c.spec.half_width = 12.0;
    c.spec.points_per_axis = 200;
    battery.push_back(std::move(c));
  }
  {
    OracleMcmcCase c{"n2 W=3 h=(2,2)", vertex_pair(3.0, 2.0, 2.0), {}, {}};
    c.observables.push_back(cosh_power(0, 2.0));
    c.observables.push_back(cosh_gap_power(0, 1, 2.0));
    c.observables.push_back(field_square(0));
    c.observables.push_back(interaction_product({{0, 1}}, {1.0}));
    c.spec.points_per_axis = 96;
    battery.push_back(std::move(c));
  }
  {
    OracleMcmcCase c{"n2 W=0.5 h=(0.5,2)", vertex_pair(0.5, 0.5, 2.0), {}, {}};
    c.observables.push_back(cosh_power(0, 1.0));
    c.observables.push_back(cosh_gap_power(0, 1, 1.0));
    c.spec.marginal = true;
    c.spec.half_width = 16.0;
    c.spec.points_per_axis = 256;
    battery.push_back(std::move(c));
  }
  return battery;
}

SamplerSettings oracle_mcmc_settings(long trials) {
  SamplerSettings settings;
  settings.burn_in = 2000;
  settings.steps = settings.burn_in + 40 * std::max(trials, 100L);
  settings.chains = 4;
  settings.mode = UpdateMode::kMarginal;
  return settings;
}

LemmaReport oracle_mcmc_lemma(long trials, std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "oracle_vs_mcmc";
  report.seed = seed;
  const SamplerSettings settings = oracle_mcmc_settings(trials);
  std::uint64_t case_seed = seed;
  for (auto& c : oracle_mcmc_battery()) {
    const auto oracle_values = oracle_expectations(c.graph, c.observables, c.spec);
    const auto chains = run_sampler(c.graph, c.observables, settings, case_seed);
    for (std::size_t k = 0; k < c.observables.size(); ++k) {
      const PooledEstimate pooled = pool_estimates(chains, c.observables[k].name);
      const double combined = std::sqrt(pooled.stderr_ * pooled.stderr_ +
                                        oracle_values[k].error_indicator *
                                            oracle_values[k].error_indicator);
      const double gap = std::abs(pooled.mean - oracle_values[k].value);
      const double sigmas = combined > 0.0 ? gap / combined : (gap > 0.0 ? 1e9 : 0.0);
      track(report, sigmas);
      if (sigmas > 3.0) {
        fail(report, c.tag + " " + c.observables[k].name + " off by " +
                         std::to_string(sigmas) + " sigma");
      }
      ++report.trials;
    }
    case_seed += 1000003;
  }
  return report;
}

LemmaReport determinism_lemma(std::uint64_t seed) {
  LemmaReport report;
  report.lemma = "determinism";
  report.seed = seed;
  const PinnedGraph graph = vertex_pair(3.0, 2.0, 2.0);
  std::vector<Observable> observables;
  observables.push_back(cosh_power(0, 2.0));
  observables.push_back(field_square(0));
  SamplerSettings settings;
  settings.steps = 4000;
  settings.burn_in = 1000;
  const auto first = run_sampler(graph, observables, settings, seed);
  const auto second = run_sampler(graph, observables, settings, seed);
  for (std::size_t c = 0; c < first.size(); ++c) {
    if (first[c].acceptance_rate != second[c].acceptance_rate ||
        first[c].samples != second[c].samples) {
      fail(report, "replay diverged on chain " + std::to_string(first[c].chain_id));
    }
  }
  ++report.trials;
  return report;
}

}  // namespace

nlohmann::json lemma_report_json(const LemmaReport& report) {
  return nlohmann::json{{"lemma", report.lemma},
                        {"trials", report.trials},
                        {"failures", report.failures},
                        {"worst_residual", report.worst_residual},
                        {"seed", report.seed}};
}

std::vector<LemmaReport> run_verify_suite(const std::string& name, long trials,
                                          std::uint64_t seed) {
  const long effective = trials > 0 ? trials : 500;
  if (name == "normalization") return {normalization_suite()};
  if (name == "ward") return {ward_suite()};
  if (name == "detlemmas") {
    return {equivalence_lemma(effective, seed),   monotonicity_lemma(effective, seed),
            factorization_lemma(effective, seed), splitting_lemma(effective, seed),
            auxiliary_lemma(effective, seed),     summary_lemma(effective, seed)};
  }
  if (name == "resistance") {
    return {series_lemma(effective, seed), rayleigh_lemma(effective, seed),
            chain_resistance_lemma(effective, seed)};
  }
  if (name == "regime") {
    return {regime_identity_lemma(), hierarchical_transfer_lemma(), box_transfer_lemma()};
  }
  if (name == "oracle_vs_mcmc") {
    return {oracle_mcmc_lemma(effective, seed), determinism_lemma(seed)};
  }
  throw std::invalid_argument("unknown verification suite: " + name);
}

bool suite_passed(const std::vector<LemmaReport>& reports) {
  for (const auto& report : reports) {
    if (report.failures > 0) return false;
  }
  return true;
}

int command_verify(const std::string& name, long trials, std::uint64_t seed) {
  std::vector<LemmaReport> reports;
  try {
    reports = run_verify_suite(name, trials, seed);
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  long failures = 0;
  for (const auto& report : reports) {
    std::cout << lemma_report_json(report).dump() << "\n";
    for (const auto& note : report.details) {
      std::cout << "  note: " << note << "\n";
    }
    failures += report.failures;
  }
  std::cout << "suite " << name << ": " << (failures == 0 ? "PASS" : "FAIL") << " ("
            << reports.size() << " lemmas, " << failures << " failures)\n";
  return failures == 0 ? 0 : 1;
}

PinnedGraph random_pinned_graph(RngStream& rng, int max_vertices) {
  const int n = 2 + rng.uniform_int(std::max(1, max_vertices - 1));
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd pinning = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform() < 0.55) {
          const double w = std::exp(rng.uniform() * 2.0 - 0.5);
          weights(i, j) = weights(j, i) = w;
        }
      }
      if (rng.uniform() < 0.4) pinning[i] = std::exp(rng.uniform() * 2.0 - 0.5);
    }
    if (pinning.maxCoeff() <= 0.0) pinning[rng.uniform_int(n)] = 1.0;
    PinnedGraph graph(std::move(weights), std::move(pinning));
    if (graph.positive_graph_connected()) return graph;
  }
  // dense fallback; reachable only for pathological draws
  Eigen::MatrixXd weights = Eigen::MatrixXd::Constant(n, n, 1.0);
  weights.diagonal().setZero();
  return PinnedGraph(std::move(weights), Eigen::VectorXd::Constant(n, 1.0));
}

FieldConfig random_field_config(RngStream& rng, int n, double scale) {
  FieldConfig config = FieldConfig::zero(n);
  for (int i = 0; i < n; ++i) {
    config.u[i] = scale * rng.normal();
    config.s[i] = scale * rng.normal();
  }
  return config;
}

}  // namespace h22
