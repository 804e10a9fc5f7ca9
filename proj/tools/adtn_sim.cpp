// Command-line front end: run, sweep, attack, oracle.

#include <CLI11.hpp>

#include <iostream>

#include "adtn/experiment.hpp"

namespace {

void add_scenario_options(CLI::App* app, adtn::ScenarioSource& src, bool required = true) {
  auto* opt = app->add_option("--scenario", src.path, "Scenario file (YAML, or JSON by extension)");
  if (required) opt->required();
  app->add_option("--seed", src.seed, "Override the scenario seed");
  app->add_option("--set", src.overrides, "Override a config field, key=value (repeatable)");
  app->add_flag("--trace-frames", src.trace_frames, "Include frame bytes in events.jsonl");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-mix delay-tolerant network simulator"};
  app.require_subcommand(1);

  adtn::RunCommand run;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write reports");
  add_scenario_options(run_cmd, run.scenario);
  run_cmd->add_option("--out", run.out_dir, "Output directory")->required();

  adtn::SweepCommand sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter grid");
  add_scenario_options(sweep_cmd, sweep.scenario);
  sweep_cmd->add_option("--grid", sweep.grid, "Axis key=v1,v2,... (repeatable)");
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory")->required();
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (default: ADTN_SIM_THREADS)");

  adtn::AttackCommand attack;
  adtn::ScenarioSource attack_src;
  auto* attack_cmd = app.add_subcommand("attack", "Replay an adversary over trace files");
  attack_cmd->add_option("--trace", attack.trace_dir, "Trace directory from `run`")->required();
  attack_cmd->add_option("--adversary", attack.adversary, "external | internal");
  attack_cmd->add_option("--keys", attack.keys, "Compromised group ids, or '*'")->delimiter(',');
  attack_cmd->add_option("--scope", attack.scope, "global | disk:x,y,radius");
  attack_cmd->add_option("--name", attack.name, "Label for the report");
  attack_cmd->add_option("--out", attack.out_dir, "Output directory")->required();
  add_scenario_options(attack_cmd, attack_src, false);

  adtn::OracleCommand oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Compare protocol deliveries with the contact oracle");
  add_scenario_options(oracle_cmd, oracle.scenario);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? adtn::kExitOk : adtn::kExitUsage;
  }

  if (*run_cmd) return adtn::cmd_run(run, std::cout, std::cerr);
  if (*sweep_cmd) return adtn::cmd_sweep(sweep, std::cout, std::cerr);
  if (*attack_cmd) {
    if (!attack_src.path.empty()) attack.scenario = attack_src;
    return adtn::cmd_attack(attack, std::cout, std::cerr);
  }
  return adtn::cmd_oracle(oracle, std::cout, std::cerr);
}
