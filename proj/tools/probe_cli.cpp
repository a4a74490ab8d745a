// Command-line front end: run a single experiment, replicate it, run a
// verification suite, or re-emit a stored report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "probe/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitIo = 3;

probe::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return probe::ExperimentConfig::from_json(nlohmann::json::parse(in));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probe-augmented online learning simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format = "csv", suite = "lemmas";
  std::uint64_t seed = 0;
  long reps = 0;
  bool have_seed = false, have_reps = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* c = cmd->add_option("--config", config_path, "experiment config (JSON)");
    if (needs_config) c->required();
    cmd->add_option("--seed", seed, "base seed override")
        ->each([&](const std::string&) { have_seed = true; });
    cmd->add_option("--reps", reps, "replication count override")
        ->each([&](const std::string&) { have_reps = true; });
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--format", format, "report format: csv or json");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "single run (replication 0)");
  add_common(run_cmd, true);
  CLI::App* rep_cmd = app.add_subcommand("replicate", "replicated experiment + report");
  add_common(rep_cmd, true);
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "verification suites (lemmas, tails, regressions)");
  verify_cmd->add_option("--suite", suite, "suite name")->required();
  verify_cmd->add_option("--seed", seed, "base seed override")
      ->each([&](const std::string&) { have_seed = true; });
  CLI::App* report_cmd = app.add_subcommand("report", "re-emit a stored summary.json");
  report_cmd->add_option("--config", config_path, "path to summary.json")->required();
  report_cmd->add_option("--out", out_dir, "output directory")->required();
  report_cmd->add_option("--format", format, "report format: csv or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed() || rep_cmd->parsed()) {
      probe::ExperimentConfig cfg = load_config(config_path);
      if (have_seed) cfg.seed = seed;
      if (have_reps) cfg.reps = reps;
      if (!out_dir.empty()) cfg.out = out_dir;
      if (run_cmd->parsed()) {
        cfg.reps = 1;
        cfg.record_trace = true;
        const probe::RunResult rr = probe::run_experiment(cfg, 0);
        std::printf("final_regret %.17g\nhash %016llx\n", rr.final_regret,
                    static_cast<unsigned long long>(rr.hash));
        if (!cfg.out.empty()) {
          std::error_code ec;
          std::filesystem::create_directories(cfg.out, ec);
          if (ec) throw std::runtime_error("cannot create output dir: " + cfg.out);
          rr.trace.save(cfg.out + "/trace.txt");
        }
      }
      const probe::Report report = probe::replicate(cfg);
      if (!cfg.out.empty()) probe::emit_report(report, cfg.out, format);
      std::printf("mean_final_regret %.17g\nstderr %.17g\n", report.mean,
                  report.stderr_);
      return kExitOk;
    }
    if (verify_cmd->parsed()) {
      const probe::VerifyResult vr =
          probe::verify_suite(suite, have_seed ? seed : 1);
      for (const std::string& line : vr.lines) std::printf("%s\n", line.c_str());
      if (!vr.ok) {
        std::printf("first failing instance:\n%s\n", vr.first_failure.c_str());
        return kExitVerification;
      }
      return kExitOk;
    }
    // report
    const probe::Report report = probe::report_from_json(config_path);
    probe::emit_report(report, out_dir, format);
    return kExitOk;
  } catch (const probe::ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}
