// shiftbreak: recover hidden shifts, test shift identity, sweep the exact
// counters and benchmark oracle-call budgets.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "shiftbreak/error.hpp"
#include "shiftbreak/experiment.hpp"

namespace {

using shiftbreak::Command;
using shiftbreak::Errc;
using shiftbreak::ExperimentConfig;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::AlgorithmFailure: return 3;
    case Errc::TooLarge:
    case Errc::TooLargeForScan:
    case Errc::Stalled: return 4;
    default: return 2;
  }
}

void add_common(CLI::App* sub, ExperimentConfig& cfg, std::string& output, std::string& grid) {
  sub->add_option("--p", cfg.p, "Prime modulus");
  sub->add_option("--e", cfg.e, "Exponent dividing p - 1");
  sub->add_option("--s", cfg.s, "Planted shift, an integer or \"random\"");
  sub->add_option("--t", cfg.t, "Second shift for identity testing");
  sub->add_option("--algorithm", cfg.algorithm,
                  "interpolation | zero_call+narrow | smooth+narrow | randomized | large_e | all");
  sub->add_option("--epsilon", cfg.epsilon, "Slack exponent");
  sub->add_option("--delta", cfg.delta, "Size exponent for the small-e window (ln e / ln p)");
  sub->add_option("--c0", cfg.c0, "Small-e constant multiplier");
  sub->add_option("--window-cap", cfg.window_cap, "Largest probe window (or identity h cap)");
  sub->add_option("--max-rounds", cfg.max_rounds, "Narrowing round limit");
  sub->add_option("--seed", cfg.seed, "Seed for random secrets and randomized recovery");
  sub->add_option("--trials", cfg.trials, "Repetitions");
  sub->add_option("--output", output, "json | csv | table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  sub->add_option("--grid", grid, "JSON array of parameter objects, as a file or inline");
  sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  sub->add_flag("--timing", cfg.timing, "Include wall-clock times");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hidden shifted power experiments"};
  app.set_config("--config", "", "TOML or INI file with option defaults; flags win");
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string output = "json";
  std::string grid;
  std::string mode = "exact";

  auto* recover = app.add_subcommand("recover", "Recover a planted shift");
  auto* identity = app.add_subcommand("identity", "Decide whether two shifts are equal");
  auto* lab = app.add_subcommand("lab", "Exact counts against predicted bounds");
  auto* bench = app.add_subcommand("bench", "Oracle-call comparison across algorithms");
  for (auto* sub : {recover, identity, lab, bench}) add_common(sub, cfg, output, grid);
  identity->add_option("--variant", cfg.variant, "known_t | unknown_t");
  identity->add_option("--mode", mode, "exact | theoretical")
      ->check(CLI::IsMember({"exact", "theoretical"}));
  lab->add_option("--lemma", cfg.lemma, "Counter to sweep")->required();
  lab->add_option("--p-max", cfg.p_max, "For N(e): every prime up to this bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (recover->parsed()) cfg.command = Command::Recover;
    if (identity->parsed()) cfg.command = Command::Identity;
    if (lab->parsed()) cfg.command = Command::Lab;
    if (bench->parsed()) {
      cfg.command = Command::Bench;
      if (bench->count("--algorithm") == 0) cfg.algorithm = "all";
    }
    static const std::map<std::string, shiftbreak::OutputFormat> formats = {
        {"json", shiftbreak::OutputFormat::Json},
        {"csv", shiftbreak::OutputFormat::Csv},
        {"table", shiftbreak::OutputFormat::Table}};
    cfg.output = formats.at(output);
    cfg.mode = mode == "exact" ? shiftbreak::HMode::Exact : shiftbreak::HMode::Theoretical;
    if (!grid.empty()) cfg.grid = shiftbreak::load_grid(grid);

    const auto rows = shiftbreak::run_command(cfg);
    shiftbreak::emit_rows(std::cout, cfg.output, rows);
    return 0;
  } catch (const shiftbreak::Error& err) {
    std::cerr << "shiftbreak: " << err.what() << '\n';
    return exit_code_for(err.code());
  } catch (const std::exception& err) {
    std::cerr << "shiftbreak: " << err.what() << '\n';
    return 2;
  }
}
