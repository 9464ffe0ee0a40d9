#include "h22/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "h22/model.hpp"

namespace h22 {
namespace {

constexpr double kTargetAcceptance = 0.44;  // scalar-update sweet spot
constexpr long kTuneWindow = 100;           // sweeps between step adaptations
constexpr double kMinStep = 1e-3;
constexpr double kMaxStep = 50.0;

double mean_of(const std::vector<double>& xs, std::size_t begin, std::size_t end) {
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) sum += xs[i];
  return sum / static_cast<double>(end - begin);
}

double variance_of(const std::vector<double>& xs, std::size_t begin, std::size_t end,
                   double mean) {
  if (end - begin < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double d = xs[i] - mean;
    sum += d * d;
  }
  return sum / static_cast<double>(end - begin - 1);
}

}  // namespace

void SamplerSettings::validate() const {
  if (steps <= 0) throw std::invalid_argument("steps must be positive");
  if (burn_in < 0 || burn_in >= steps) throw std::invalid_argument("need 0 <= burn_in < steps");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (chains < 1) throw std::invalid_argument("need at least one chain");
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
}

EstimateSummary estimate_batch_means(const std::vector<double>& samples) {
  const long n = static_cast<long>(samples.size());
  if (n < 20) throw std::invalid_argument("too few samples for batch means");
  const long batches = std::clamp(static_cast<long>(std::floor(std::sqrt(double(n)))), 20L, 50L);
  const long batch_len = n / batches;
  const long n_used = batches * batch_len;
  const std::size_t start = static_cast<std::size_t>(n - n_used);  // drop warm head

  EstimateSummary est;
  est.n_used = n_used;
  est.mean = mean_of(samples, start, samples.size());

  double bm_var = 0.0;
  for (long b = 0; b < batches; ++b) {
    const std::size_t lo = start + static_cast<std::size_t>(b * batch_len);
    const double bm = mean_of(samples, lo, lo + static_cast<std::size_t>(batch_len));
    bm_var += (bm - est.mean) * (bm - est.mean);
  }
  bm_var /= static_cast<double>(batches - 1);
  est.stderr_ = std::sqrt(bm_var / static_cast<double>(batches));

  const double sample_var = variance_of(samples, start, samples.size(), est.mean);
  if (bm_var > 0.0 && sample_var > 0.0) {
    const double longrun = static_cast<double>(batch_len) * bm_var;
    est.ess = std::clamp(static_cast<double>(n_used) * sample_var / longrun, 1.0,
                         static_cast<double>(n_used));
  } else {
    est.ess = static_cast<double>(n_used);  // constant series
  }
  return est;
}

ChainResult run_chain(const PinnedGraph& graph, const std::vector<Observable>& observables,
                      const SamplerSettings& settings, std::uint64_t seed, int chain_id) {
  settings.validate();
  const int n = graph.size();
  RngStream rng(seed, static_cast<std::uint64_t>(chain_id));

  bool wants_flat_field = false;
  for (const auto& obs : observables) wants_flat_field |= obs.needs_s;
  const bool joint = settings.mode == UpdateMode::kJoint;

  FieldConfig state = FieldConfig::zero(n);
  std::vector<double> step(static_cast<std::size_t>(n), settings.step_size);
  std::vector<long> window_accepts(static_cast<std::size_t>(n), 0);

  auto log_target = [&](const FieldConfig& c) {
    return joint ? log_density(graph, c) : log_marginal_density(graph, c.u);
  };
  double current = log_target(state);

  ChainResult result;
  result.chain_id = chain_id;
  for (const auto& obs : observables) result.samples[obs.name] = {};

  long kept_proposals = 0;
  long kept_accepts = 0;
  for (long sweep = 0; sweep < settings.steps; ++sweep) {
    const bool in_burn = sweep < settings.burn_in;
    for (int i = 0; i < n; ++i) {
      const double old_value = state.u[i];
      state.u[i] = old_value + step[static_cast<std::size_t>(i)] * rng.normal();
      const double proposed = log_target(state);
      const bool accept = std::log(rng.uniform_open()) < proposed - current;
      if (accept) {
        current = proposed;
        ++window_accepts[static_cast<std::size_t>(i)];
        if (!in_burn) ++kept_accepts;
      } else {
        state.u[i] = old_value;
      }
      if (!in_burn) ++kept_proposals;
    }

    if (joint) {
      state.s = sample_s_given_u(graph, state.u, rng);
      current = log_target(state);
    }

    if (settings.tune && in_burn && (sweep + 1) % kTuneWindow == 0) {
      for (int i = 0; i < n; ++i) {
        const double rate =
            static_cast<double>(window_accepts[static_cast<std::size_t>(i)]) / kTuneWindow;
        double& s_i = step[static_cast<std::size_t>(i)];
        s_i = std::clamp(s_i * std::exp(0.5 * (rate - kTargetAcceptance)), kMinStep, kMaxStep);
        window_accepts[static_cast<std::size_t>(i)] = 0;
      }
    }

    if (!in_burn && (sweep - settings.burn_in) % settings.thin == 0) {
      if (!joint && wants_flat_field) {
        state.s = sample_s_given_u(graph, state.u, rng);
      }
      for (const auto& obs : observables) {
        result.samples[obs.name].push_back(obs.eval(graph, state));
      }
    }
  }

  result.acceptance_rate =
      kept_proposals > 0 ? static_cast<double>(kept_accepts) / kept_proposals : 0.0;
  result.acceptance_warning = result.acceptance_rate < 0.1 || result.acceptance_rate > 0.9;
  return result;
}

std::vector<ChainResult> run_sampler(const PinnedGraph& graph,
                                     const std::vector<Observable>& observables,
                                     const SamplerSettings& settings, std::uint64_t seed) {
  settings.validate();
  std::vector<ChainResult> chains;
  chains.reserve(static_cast<std::size_t>(settings.chains));
  for (int c = 0; c < settings.chains; ++c) {
    chains.push_back(run_chain(graph, observables, settings, seed, c));
  }
  return chains;
}

PooledEstimate pool_estimates(const std::vector<ChainResult>& chains,
                              const std::string& observable) {
  if (chains.empty()) throw std::invalid_argument("no chains to pool");
  PooledEstimate pooled;
  pooled.observable = observable;

  double total_n = 0.0;
  for (const auto& chain : chains) {
    const auto it = chain.samples.find(observable);
    if (it == chain.samples.end()) {
      throw std::invalid_argument("observable missing from chain: " + observable);
    }
    pooled.per_chain.push_back(estimate_batch_means(it->second));
    total_n += static_cast<double>(pooled.per_chain.back().n_used);
  }

  double var_acc = 0.0;
  for (const auto& est : pooled.per_chain) {
    const double w = static_cast<double>(est.n_used) / total_n;
    pooled.mean += w * est.mean;
    var_acc += w * w * est.stderr_ * est.stderr_;
    pooled.ess += est.ess;
  }
  pooled.stderr_ = std::sqrt(var_acc);

  // Split-chain potential scale reduction: each chain contributes two halves.
  std::vector<double> half_means;
  std::vector<double> half_vars;
  std::size_t half_len = SIZE_MAX;
  for (const auto& chain : chains) {
    half_len = std::min(half_len, chain.samples.at(observable).size() / 2);
  }
  if (half_len >= 2) {
    for (const auto& chain : chains) {
      const auto& xs = chain.samples.at(observable);
      for (int part = 0; part < 2; ++part) {
        const std::size_t lo = part == 0 ? 0 : xs.size() - half_len;
        const double m = mean_of(xs, lo, lo + half_len);
        half_means.push_back(m);
        half_vars.push_back(variance_of(xs, lo, lo + half_len, m));
      }
    }
    const double grand = mean_of(half_means, 0, half_means.size());
    const double between =
        static_cast<double>(half_len) * variance_of(half_means, 0, half_means.size(), grand);
    const double within = mean_of(half_vars, 0, half_vars.size());
    if (within > 0.0) {
      const double l = static_cast<double>(half_len);
      pooled.split_rhat = std::sqrt(((l - 1.0) / l * within + between / l) / within);
    }
  }
  return pooled;
}

}  // namespace h22
