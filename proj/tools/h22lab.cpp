#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "h22/report.hpp"
#include "h22/verify.hpp"

int main(int argc, char** argv) {
  CLI::App app{"h22lab: pinned-field lattice experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed = 0;
  auto* sample = app.add_subcommand("sample", "run MCMC chains and write a report");
  sample->add_option("--config", config_path, "experiment config JSON")->required();
  auto* sample_seed = sample->add_option("--seed", seed, "override the config seed");
  sample->add_option("--out", out_override, "report CSV path (chains/meta written next to it)");

  std::string suite;
  long trials = 0;
  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "run a randomized verification suite");
  verify->add_option("--suite", suite,
                     "normalization|ward|detlemmas|resistance|regime|oracle_vs_mcmc")
      ->required();
  verify->add_option("--trials", trials, "randomized trials per lemma (default 500)");
  verify->add_option("--seed", verify_seed, "base seed for the suite");

  double alpha = 4.0;
  double gamma = 0.0;
  double kappa = 1.0;
  auto* constants = app.add_subcommand("constants", "print regime constants as JSON");
  constants->add_option("--alpha", alpha, "decay exponent, must exceed gamma + 3");
  constants->add_option("--gamma", gamma, "protection growth exponent");
  constants->add_option("--kappa", kappa, "target amplification in (0, 1]");

  std::string oracle_config;
  auto* oracle = app.add_subcommand("oracle", "integrate the config's observables exactly");
  oracle->add_option("--config", oracle_config, "experiment config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  if (sample->parsed()) {
    std::optional<std::uint64_t> seed_value;
    if (sample_seed->count() > 0) seed_value = seed;
    return h22::command_sample(config_path, seed_value, out_override);
  }
  if (verify->parsed()) return h22::command_verify(suite, trials, verify_seed);
  if (constants->parsed()) return h22::command_constants(alpha, gamma, kappa);
  if (oracle->parsed()) return h22::command_oracle(oracle_config);
  return 2;
}
