#include "h22/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "h22/oracle.hpp"
#include "h22/regime.hpp"

namespace h22 {
namespace {

using nlohmann::json;

constexpr double kMarginCap = 1e9;
constexpr double kMarginPass = 3.0;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// 1-based chain positions of an edge endpoint pair, when the graph is a chain
// and the edge belongs to the complete graph the product bounds reason about.
// A wired last vertex counts as position `length`; an external pinned vertex
// has no position.
std::optional<std::pair<int, int>> chain_positions(const GraphSpec& graph_spec, int a, int b) {
  const auto* chain = std::get_if<ChainSpec>(&graph_spec);
  const auto* effective = std::get_if<EffectiveChainSpec>(&graph_spec);
  if (chain == nullptr && effective == nullptr) return std::nullopt;
  int pinned_position = 0;
  if (chain != nullptr && chain->mode == ChainPinning::kLastVertexPinned) {
    pinned_position = chain->length;
  }
  const auto position = [pinned_position](int v) {
    return v == kPinnedVertex ? pinned_position : v + 1;
  };
  const int pa = position(a);
  const int pb = position(b);
  if (pa == 0 || pb == 0 || pa == pb) return std::nullopt;
  return std::make_pair(std::min(pa, pb), std::max(pa, pb));
}

bool is_chain_family(const GraphSpec& graph_spec) {
  return std::holds_alternative<ChainSpec>(graph_spec) ||
         std::holds_alternative<EffectiveChainSpec>(graph_spec);
}

// Pairwise disjointness of the open intervals spanned by product edges on a
// chain; trivially true off chains and for edges without chain positions.
bool chain_intervals_disjoint(const GraphSpec& graph_spec,
                              const std::vector<std::tuple<int, int, double>>& edges) {
  if (!is_chain_family(graph_spec)) return true;
  std::vector<std::pair<int, int>> intervals;
  for (const auto& [a, b, m] : edges) {
    (void)m;
    if (const auto pos = chain_positions(graph_spec, a, b)) intervals.push_back(*pos);
  }
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    for (std::size_t j = i + 1; j < intervals.size(); ++j) {
      if (std::max(intervals[i].first, intervals[j].first) <
          std::min(intervals[i].second, intervals[j].second)) {
        return false;
      }
    }
  }
  return true;
}

void check_vertex_range(int v, int n, bool allow_pinned) {
  if (v == kPinnedVertex && allow_pinned) return;
  if (v < 0 || v >= n) throw std::invalid_argument("observable vertex out of range");
}

double spec_degree(const ObservableSpec& spec) {
  if (spec.kind == "field_square") return 2.0;
  if (spec.kind == "interaction_product") {
    double total = 0.0;
    for (const auto& [a, b, m] : spec.edges) {
      (void)a;
      (void)b;
      total += m;
    }
    return total;
  }
  return spec.exponent;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ReportRow finish_row(ReportRow row, const std::optional<double>& bound) {
  if (!bound.has_value()) {
    row.status = "vacuous";
    return row;
  }
  row.bound = bound;
  const double gap = *bound - row.estimate;
  double margin;
  if (row.stderr_ > 0.0) {
    margin = std::clamp(gap / row.stderr_, -kMarginCap, kMarginCap);
  } else {
    margin = gap > 0.0 ? kMarginCap : (gap < 0.0 ? -kMarginCap : 0.0);
  }
  row.margin_sigma = margin;
  row.status = margin >= kMarginPass ? "pass" : "fail";
  return row;
}

}  // namespace

json observable_spec_to_json(const ObservableSpec& spec) {
  json node{{"kind", spec.kind}};
  if (spec.kind == "cosh_power" || spec.kind == "field_square") {
    node["vertex"] = spec.vertex;
    if (spec.kind == "cosh_power") node["m"] = spec.exponent;
  } else if (spec.kind == "cosh_gap_power") {
    node["vertices"] = json::array({spec.vertex, spec.partner});
    node["m"] = spec.exponent;
  } else if (spec.kind == "interaction_product") {
    json edges = json::array();
    for (const auto& [a, b, m] : spec.edges) edges.push_back(json::array({a, b, m}));
    node["edges"] = edges;
    if (!spec.deltas.empty()) node["deltas"] = spec.deltas;
  } else {
    throw std::invalid_argument("unknown observable kind: " + spec.kind);
  }
  return node;
}

ObservableSpec observable_spec_from_json(const json& node) {
  ObservableSpec spec;
  spec.kind = node.at("kind").get<std::string>();
  if (spec.kind == "cosh_power") {
    spec.vertex = node.at("vertex").get<int>();
    spec.exponent = node.at("m").get<double>();
  } else if (spec.kind == "field_square") {
    spec.vertex = node.at("vertex").get<int>();
  } else if (spec.kind == "cosh_gap_power") {
    const auto pair = node.at("vertices");
    if (!pair.is_array() || pair.size() != 2)
      throw std::invalid_argument("cosh_gap_power needs two vertices");
    spec.vertex = pair[0].get<int>();
    spec.partner = pair[1].get<int>();
    spec.exponent = node.at("m").get<double>();
  } else if (spec.kind == "interaction_product") {
    for (const auto& e : node.at("edges")) {
      if (!e.is_array() || e.size() != 3)
        throw std::invalid_argument("product edge must be [i,j,m]");
      spec.edges.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
    }
    if (node.contains("deltas")) spec.deltas = node.at("deltas").get<std::vector<double>>();
  } else {
    throw std::invalid_argument("unknown observable kind: " + spec.kind);
  }
  return spec;
}

Observable make_observable(const ObservableSpec& spec, const PinnedGraph& graph,
                           const GraphSpec& graph_spec) {
  const int n = graph.size();
  if (spec.kind == "cosh_power") {
    check_vertex_range(spec.vertex, n, true);
    return cosh_power(spec.vertex, spec.exponent);
  }
  if (spec.kind == "cosh_gap_power") {
    check_vertex_range(spec.vertex, n, true);
    check_vertex_range(spec.partner, n, true);
    return cosh_gap_power(spec.vertex, spec.partner, spec.exponent);
  }
  if (spec.kind == "field_square") {
    check_vertex_range(spec.vertex, n, true);
    return field_square(spec.vertex);
  }
  if (spec.kind == "interaction_product") {
    if (spec.edges.empty()) throw std::invalid_argument("interaction_product needs edges");
    std::vector<std::pair<int, int>> pairs;
    std::vector<double> exponents;
    for (const auto& [a, b, m] : spec.edges) {
      check_vertex_range(a, n, true);
      check_vertex_range(b, n, true);
      pairs.emplace_back(a, b);
      exponents.push_back(m);
    }
    if (!chain_intervals_disjoint(graph_spec, spec.edges)) {
      throw std::invalid_argument("product edges span overlapping chain intervals");
    }
    return interaction_product(pairs, exponents, spec.deltas);
  }
  throw std::invalid_argument("unknown observable kind: " + spec.kind);
}

std::optional<double> theorem_bound(const ObservableSpec& spec, const GraphSpec& graph_spec,
                                    const RegimeParams& regime, const PinnedGraph& graph) {
  const bool have_wbar = regime.wbar > 0.0;

  if (spec.kind == "cosh_power") {
    if (!have_wbar) return std::nullopt;
    if (check_admissible(regime.kappa, regime.wbar, spec.exponent, regime.alpha).admissible) {
      return 1.0 + regime.kappa;
    }
    return std::nullopt;
  }

  if (spec.kind == "cosh_gap_power") {
    if (!have_wbar) return std::nullopt;
    if (is_chain_family(graph_spec)) {
      const auto pos = chain_positions(graph_spec, spec.vertex, spec.partner);
      if (pos.has_value()) {
        const RegimeConstants rc = regime_constants(regime.alpha, regime.gamma, regime.kappa);
        const double exponent_limit =
            rc.c3 * regime.wbar * std::pow(static_cast<double>(pos->first), regime.gamma);
        if (regime.wbar >= rc.wbar0 && spec.exponent <= exponent_limit) {
          return 1.0 + regime.kappa;
        }
      }
      return std::nullopt;
    }
    // Gap corollary on box / hierarchical graphs: exponent q is covered when
    // 2q satisfies the cosh-moment hypotheses, at the price of a 2^q factor.
    if (std::holds_alternative<BoxSpec>(graph_spec) ||
        std::holds_alternative<HierarchicalSpec>(graph_spec)) {
      if (check_admissible(regime.kappa, regime.wbar, 2.0 * spec.exponent, regime.alpha)
              .admissible) {
        return std::pow(2.0, spec.exponent) * (1.0 + regime.kappa);
      }
    }
    return std::nullopt;
  }

  if (spec.kind == "interaction_product") {
    // Chain product theorem: gap-one edges with m < W contribute Ward
    // factors, any other edge needs m below the schedule at its left
    // endpoint; intervals must be disjoint and wbar past its threshold.
    if (is_chain_family(graph_spec) && have_wbar &&
        chain_intervals_disjoint(graph_spec, spec.edges)) {
      const RegimeConstants rc = regime_constants(regime.alpha, regime.gamma, regime.kappa);
      if (regime.wbar >= rc.wbar0) {
        double bound = 1.0;
        bool all_classified = true;
        for (const auto& [a, b, m] : spec.edges) {
          if (m == 0.0) continue;
          const auto pos = chain_positions(graph_spec, a, b);
          if (!pos.has_value()) {
            all_classified = false;
            break;
          }
          const double weight = graph.weight(a, b);
          const double schedule_limit =
              rc.c3 * regime.wbar * std::pow(static_cast<double>(pos->first), regime.gamma);
          if (pos->second - pos->first == 1 && m < weight) {
            bound /= 1.0 - m / weight;
          } else if (m <= schedule_limit) {
            bound *= 1.0 + regime.kappa;
          } else {
            all_classified = false;
            break;
          }
        }
        if (all_classified) return bound;
      }
    }
    // Unprotected Ward product: applies on any graph once every exponent
    // sits strictly below its edge weight.
    double bound = 1.0;
    for (const auto& [a, b, m] : spec.edges) {
      if (m == 0.0) continue;
      const double weight = graph.weight(a, b);
      if (!(m < weight)) return std::nullopt;
      bound /= 1.0 - m / weight;
    }
    return bound;
  }

  return std::nullopt;
}

ExperimentConfig config_from_json(const json& node) {
  ExperimentConfig config;
  config.graph = graph_spec_from_json(node.at("graph"));
  for (const auto& obs : node.at("observables")) {
    config.observables.push_back(observable_spec_from_json(obs));
  }
  if (node.contains("sampler")) {
    const auto& s = node.at("sampler");
    if (s.contains("steps")) config.sampler.steps = s.at("steps").get<long>();
    if (s.contains("burn_in")) config.sampler.burn_in = s.at("burn_in").get<long>();
    if (s.contains("thin")) config.sampler.thin = s.at("thin").get<long>();
    if (s.contains("chains")) config.sampler.chains = s.at("chains").get<int>();
    if (s.contains("step_size")) config.sampler.step_size = s.at("step_size").get<double>();
    if (s.contains("tune")) config.sampler.tune = s.at("tune").get<bool>();
    if (s.contains("mode")) {
      const std::string mode = s.at("mode").get<std::string>();
      if (mode == "marginal") {
        config.sampler.mode = UpdateMode::kMarginal;
      } else if (mode == "joint") {
        config.sampler.mode = UpdateMode::kJoint;
      } else {
        throw std::invalid_argument("unknown sampler mode: " + mode);
      }
    }
  }
  if (node.contains("regime")) {
    const auto& r = node.at("regime");
    if (r.contains("alpha")) config.regime.alpha = r.at("alpha").get<double>();
    if (r.contains("gamma")) config.regime.gamma = r.at("gamma").get<double>();
    if (r.contains("kappa")) config.regime.kappa = r.at("kappa").get<double>();
    if (r.contains("wbar")) config.regime.wbar = r.at("wbar").get<double>();
  }
  if (config.regime.wbar <= 0.0 && node.at("graph").contains("wbar")) {
    config.regime.wbar = node.at("graph").at("wbar").get<double>();
  }
  config.seed = node.at("seed").get<std::uint64_t>();
  if (node.contains("out")) config.out = node.at("out").get<std::string>();
  return config;
}

json config_to_json(const ExperimentConfig& config) {
  json observables = json::array();
  for (const auto& spec : config.observables) observables.push_back(observable_spec_to_json(spec));
  json node{{"graph", graph_spec_to_json(config.graph)},
            {"observables", observables},
            {"sampler",
             {{"steps", config.sampler.steps},
              {"burn_in", config.sampler.burn_in},
              {"thin", config.sampler.thin},
              {"chains", config.sampler.chains},
              {"step_size", config.sampler.step_size},
              {"tune", config.sampler.tune},
              {"mode", config.sampler.mode == UpdateMode::kMarginal ? "marginal" : "joint"}}},
            {"regime",
             {{"alpha", config.regime.alpha},
              {"gamma", config.regime.gamma},
              {"kappa", config.regime.kappa},
              {"wbar", config.regime.wbar}}},
            {"seed", config.seed}};
  if (!config.out.empty()) node["out"] = config.out;
  return node;
}

bool ExperimentReport::any_failure() const {
  for (const auto& row : rows) {
    if (row.status == "fail") return true;
  }
  return false;
}

ExperimentReport run_experiment(const ExperimentConfig& config, Estimator estimator) {
  const PinnedGraph graph = build_graph(config.graph);
  std::vector<Observable> observables;
  bool any_needs_s = false;
  for (const auto& spec : config.observables) {
    Observable obs = make_observable(spec, graph, config.graph);
    any_needs_s |= obs.needs_s;
    // keep names collision-free; they key the per-chain sample map
    const std::string base = obs.name;
    int suffix = 2;
    const auto taken = [&observables](const std::string& name) {
      for (const auto& o : observables) {
        if (o.name == name) return true;
      }
      return false;
    };
    while (taken(obs.name)) obs.name = base + "#" + std::to_string(suffix++);
    observables.push_back(std::move(obs));
  }

  ExperimentReport report;
  if (estimator == Estimator::kOracle) {
    report.used_oracle = true;
    QuadratureSpec quad;
    if (!any_needs_s && graph.size() <= 3) {
      quad.marginal = true;
    } else {
      quad.marginal = false;
      quad.half_width = 16.0;
      if (graph.size() == 2) quad.points_per_axis = 128;
    }
    const std::vector<QuadratureResult> results = oracle_expectations(graph, observables, quad);
    for (std::size_t k = 0; k < observables.size(); ++k) {
      ReportRow row;
      row.observable = observables[k].name;
      row.degree = spec_degree(config.observables[k]);
      row.estimate = results[k].value;
      row.stderr_ = results[k].error_indicator;
      row.ess = 0.0;
      report.rows.push_back(finish_row(
          row, theorem_bound(config.observables[k], config.graph, config.regime, graph)));
    }
    return report;
  }

  report.chains = run_sampler(graph, observables, config.sampler, config.seed);
  for (std::size_t k = 0; k < observables.size(); ++k) {
    const PooledEstimate pooled = pool_estimates(report.chains, observables[k].name);
    report.max_split_rhat = std::max(report.max_split_rhat, pooled.split_rhat);
    ReportRow row;
    row.observable = pooled.observable;
    row.degree = spec_degree(config.observables[k]);
    row.estimate = pooled.mean;
    row.stderr_ = pooled.stderr_;
    row.ess = pooled.ess;
    report.rows.push_back(finish_row(
        row, theorem_bound(config.observables[k], config.graph, config.regime, graph)));
  }
  return report;
}

std::string report_csv(const ExperimentReport& report) {
  std::string out = "observable,m,estimate,stderr,ess,bound,margin_sigma,status\n";
  for (const auto& row : report.rows) {
    out += row.observable;
    out += ',' + fmt(row.degree);
    out += ',' + fmt(row.estimate);
    out += ',' + fmt(row.stderr_);
    out += ',' + fmt(row.ess);
    out += ',';
    if (row.bound.has_value()) out += fmt(*row.bound);
    out += ',';
    if (row.margin_sigma.has_value()) out += fmt(*row.margin_sigma);
    out += ',' + row.status + '\n';
  }
  return out;
}

std::string chains_csv(const std::vector<ChainResult>& chains) {
  std::string out = "chain_id,observable,mean,stderr,ess,acceptance_rate\n";
  for (const auto& chain : chains) {
    for (const auto& [name, samples] : chain.samples) {
      const EstimateSummary est = estimate_batch_means(samples);
      out += std::to_string(chain.chain_id);
      out += ',' + name;
      out += ',' + fmt(est.mean);
      out += ',' + fmt(est.stderr_);
      out += ',' + fmt(est.ess);
      out += ',' + fmt(chain.acceptance_rate) + '\n';
    }
  }
  return out;
}

json provenance_json(const std::string& config_bytes, std::uint64_t seed) {
  return json{{"config_sha256", sha256_hex(config_bytes)},
              {"program", "h22lab"},
              {"version", "0.1.0"},
              {"seed", seed},
              {"timestamp", iso_timestamp()}};
}

namespace {

int load_config(const std::string& path, std::string& bytes, ExperimentConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open config: " << path << "\n";
    return 2;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  bytes = buffer.str();
  try {
    config = config_from_json(json::parse(bytes));
  } catch (const std::exception& err) {
    std::cerr << "error: bad config: " << err.what() << "\n";
    return 2;
  }
  return 0;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return out.good();
}

void print_rows(const ExperimentReport& report) {
  for (const auto& row : report.rows) {
    std::cout << row.observable << ": estimate " << row.estimate << " +- " << row.stderr_;
    if (row.bound.has_value()) std::cout << ", bound " << *row.bound;
    std::cout << " [" << row.status << "]\n";
  }
}

}  // namespace

int command_sample(const std::string& config_path, std::optional<std::uint64_t> seed,
                   const std::string& out_override) {
  std::string bytes;
  ExperimentConfig config;
  if (const int rc = load_config(config_path, bytes, config); rc != 0) return rc;
  if (seed.has_value()) config.seed = *seed;
  const std::string out = out_override.empty() ? config.out : out_override;
  if (out.empty()) {
    std::cerr << "error: no output path (config \"out\" or --out)\n";
    return 2;
  }

  ExperimentReport report;
  try {
    report = run_experiment(config, Estimator::kSampler);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }

  json meta = provenance_json(bytes, config.seed);
  meta["max_split_rhat"] = report.max_split_rhat;
  json warnings = json::array();
  for (const auto& chain : report.chains) {
    if (chain.acceptance_warning) {
      warnings.push_back("chain " + std::to_string(chain.chain_id) +
                         " acceptance rate outside [0.1, 0.9]");
    }
  }
  if (report.max_split_rhat > 1.05) warnings.push_back("split rhat above 1.05");
  meta["warnings"] = warnings;

  if (!write_file(out, report_csv(report)) ||
      !write_file(out + ".chains.csv", chains_csv(report.chains)) ||
      !write_file(out + ".meta.json", meta.dump(2) + "\n")) {
    std::cerr << "error: cannot write outputs at " << out << "\n";
    return 2;
  }
  print_rows(report);
  for (const auto& w : warnings) std::cout << "warning: " << w.get<std::string>() << "\n";
  std::cout << "report written to " << out << "\n";
  return report.any_failure() ? 1 : 0;
}

int command_oracle(const std::string& config_path) {
  std::string bytes;
  ExperimentConfig config;
  if (const int rc = load_config(config_path, bytes, config); rc != 0) return rc;
  ExperimentReport report;
  try {
    report = run_experiment(config, Estimator::kOracle);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  std::cout << report_csv(report);
  return report.any_failure() ? 1 : 0;
}

int command_constants(double alpha, double gamma, double kappa) {
  try {
    const RegimeConstants rc = regime_constants(alpha, gamma, kappa);
    const AdmissibilityReport adm = check_admissible(kappa, rc.wbar0, 0.0, alpha);
    const AmplificationBound amp = protection_amplification(alpha, gamma);
    json node{{"alpha", rc.alpha},
              {"gamma", rc.gamma},
              {"kappa", rc.kappa},
              {"c1", rc.c1},
              {"c3", rc.c3},
              {"c4", rc.c4},
              {"wbar0", rc.wbar0},
              {"cdelta_bound", rc.cdelta_bound},
              {"cdelta_lower", amp.lower},
              {"cdelta_upper", amp.upper},
              {"kappa_limit", adm.kappa_limit},
              {"wbar_threshold", adm.wbar_threshold},
              {"log_coefficient_threshold", log_coefficient_threshold(alpha)},
              {"default_log_coefficient", default_log_coefficient(alpha)}};
    if (gamma == 0.0 && kappa == 1.0) node["wbar0_closed_form"] = special_case_wbar0(alpha);
    std::cout << node.dump(2) << "\n";
    return 0;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
}

}  // namespace h22
