// Command-line front end: run / certify / trace experiments from a config file.
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "jtprec/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("-c,--config", f.config_path, "key=value config file");
  cmd->add_option("-o,--out-dir", f.out_dir, "directory for CSV output");
  cmd->add_option("-D,--set", f.overrides, "override a config key (key=value)");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&f](std::uint64_t s) { f.seed = s, f.seed_set = true; }, "master seed");
  cmd->add_option("-j,--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
}

jtprec::ExperimentConfig load(const CommonFlags& f) {
  jtprec::Config c = f.config_path.empty() ? jtprec::Config{} : jtprec::Config::load(f.config_path);
  for (const auto& o : f.overrides) c.apply_override(o);
  if (f.seed_set) c.set("seed", std::to_string(f.seed));
  if (f.workers > 0) c.set("workers", std::to_string(f.workers));
  return jtprec::ExperimentConfig::from_config(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint-transmission precoder design experiments"};
  app.require_subcommand(1);

  CommonFlags run_flags, certify_flags, trace_flags;
  std::vector<double> thresholds;
  CLI::App* run = app.add_subcommand("run", "rates for every drop, threshold and algorithm");
  add_common(run, run_flags);
  run->add_option("--threshold-db", thresholds, "feedback thresholds in dB (inf allowed)");
  CLI::App* certify = app.add_subcommand("certify", "branch-and-bound bounds per drop");
  add_common(certify, certify_flags);
  CLI::App* trace = app.add_subcommand("trace", "convergence trace of one drop");
  add_common(trace, trace_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    jtprec::ExperimentTables tables;
    std::string out_dir;
    if (run->parsed()) {
      if (!thresholds.empty()) {
        std::string list;
        for (double t : thresholds) list += (list.empty() ? "" : ",") + std::to_string(t);
        run_flags.overrides.push_back("thresholds_db=" + list);
      }
      tables = jtprec::run_experiment(load(run_flags));
      out_dir = run_flags.out_dir;
    } else if (certify->parsed()) {
      tables = jtprec::run_certify(load(certify_flags));
      out_dir = certify_flags.out_dir;
    } else {
      tables = jtprec::run_trace(load(trace_flags));
      out_dir = trace_flags.out_dir;
    }
    for (const auto& path : jtprec::write_tables(out_dir, tables)) std::cout << path << '\n';
  } catch (const jtprec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
