#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "probe/harness.hpp"

using namespace probe;

namespace {

ExperimentConfig small_bandit() {
  ExperimentConfig cfg;
  cfg.policy = "meta-ucbv";
  cfg.env.type = "bernoulli";
  cfg.env.means = {0.8, 0.4, 0.2};
  cfg.horizon = 500;
  cfg.seed = 42;
  cfg.reps = 4;
  return cfg;
}

ExperimentConfig small_experts() {
  ExperimentConfig cfg;
  cfg.policy = "hwc";
  cfg.params.eta = 0.4;
  cfg.env.type = "stream";
  cfg.env.stream.generator = "seeded-random";
  cfg.env.stream.dim = 4;
  cfg.horizon = 300;
  cfg.seed = 7;
  cfg.reps = 3;
  return cfg;
}

}  // namespace

TEST_CASE("config JSON round-trip") {
  ExperimentConfig cfg = small_experts();
  cfg.corruption.mode = "none";
  cfg.checkpoints = {10, 100, 300};
  cfg.threads = 2;
  const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.policy == cfg.policy);
  CHECK(back.params.eta == cfg.params.eta);
  CHECK(back.env.type == cfg.env.type);
  CHECK(back.env.stream.generator == cfg.env.stream.generator);
  CHECK(back.env.stream.dim == cfg.env.stream.dim);
  CHECK(back.horizon == cfg.horizon);
  CHECK(back.seed == cfg.seed);
  CHECK(back.reps == cfg.reps);
  CHECK(back.checkpoints == cfg.checkpoints);
  CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_bandit();
  CHECK_NOTHROW(cfg.validate());

  cfg.horizon = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.horizon = 500;

  cfg.reps = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.reps = 4;

  // Policy/environment mismatch: a bandit policy needs stochastic arms.
  cfg.env.type = "stream";
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.env.type = "bernoulli";

  // Corruption is only meaningful for the imperfect-hint policy.
  cfg.corruption.mode = "front";
  cfg.corruption.budget = 5;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);

  ExperimentConfig bad = small_bandit();
  bad.policy = "no-such-policy";
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("checkpoint grid is sorted powers of ten plus the horizon") {
  ExperimentConfig cfg = small_bandit();
  cfg.horizon = 25000;
  CHECK(cfg.checkpoint_grid() == std::vector<long>{100, 1000, 10000, 25000});
  cfg.horizon = 1000;
  CHECK(cfg.checkpoint_grid() == std::vector<long>{100, 1000});
}

TEST_CASE("single runs are deterministic in (config, seed)") {
  const ExperimentConfig cfg = small_bandit();
  const RunResult a = run_experiment(cfg, 0);
  const RunResult b = run_experiment(cfg, 0);
  CHECK(a.hash == b.hash);
  CHECK(a.final_regret == b.final_regret);
  CHECK(a.checkpoints == b.checkpoints);

  // Different replications draw different streams.
  const RunResult c = run_experiment(cfg, 1);
  CHECK(a.hash != c.hash);
}

TEST_CASE("single-replication reports have zero standard error") {
  ExperimentConfig cfg = small_bandit();
  cfg.reps = 1;
  const Report rep = replicate(cfg);
  CHECK(rep.finals.size() == 1);
  CHECK(rep.mean == doctest::Approx(rep.finals[0]));
  CHECK(rep.stderr_ == 0.0);
}

TEST_CASE("parallel and serial replication agree") {
  ExperimentConfig serial = small_experts();
  serial.threads = 1;
  ExperimentConfig parallel = small_experts();
  parallel.threads = 4;
  const Report a = replicate(serial);
  const Report b = replicate(parallel);
  CHECK(a.finals == b.finals);
  CHECK(a.hashes == b.hashes);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("reports round-trip through emission") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "probe_report_rt";
  fs::remove_all(dir);

  ExperimentConfig cfg = small_bandit();
  const Report rep = replicate(cfg);
  emit_report(rep, dir.string(), "csv");

  // Curve file contract.
  std::ifstream curve(dir / "curve.csv");
  REQUIRE(curve.good());
  std::string header;
  std::getline(curve, header);
  CHECK(header == "t,mean_regret,stderr");

  // Summary reload preserves the aggregates and the embedded config.
  const Report back = report_from_json((dir / "summary.json").string());
  CHECK(back.mean == doctest::Approx(rep.mean).epsilon(1e-12));
  CHECK(back.stderr_ == doctest::Approx(rep.stderr_).epsilon(1e-12));
  REQUIRE(back.curve.size() == rep.curve.size());
  for (std::size_t i = 0; i < rep.curve.size(); ++i) {
    CHECK(back.curve[i].t == rep.curve[i].t);
    CHECK(back.curve[i].mean_regret == doctest::Approx(rep.curve[i].mean_regret));
  }
  CHECK_NOTHROW(ExperimentConfig::from_json(nlohmann::json::parse(back.config_echo)));

  fs::remove_all(dir);
}

TEST_CASE("curve points agree with per-run checkpoints") {
  ExperimentConfig cfg = small_experts();
  cfg.reps = 1;
  const Report rep = replicate(cfg);
  const RunResult run = run_experiment(cfg, 0);
  REQUIRE(rep.curve.size() == run.checkpoints.size());
  for (std::size_t i = 0; i < rep.curve.size(); ++i) {
    CHECK(rep.curve[i].t == run.checkpoints[i].first);
    CHECK(rep.curve[i].mean_regret == doctest::Approx(run.checkpoints[i].second));
  }
}

TEST_CASE("regression suite passes on the shipped implementation") {
  const VerifyResult vr = verify_suite("regressions", 1);
  if (!vr.ok) {
    MESSAGE(vr.first_failure);
  }
  CHECK(vr.ok);
  CHECK_THROWS_AS(verify_suite("no-such-suite", 1), ParameterError);
}

TEST_CASE("lemma suite detects a broken noise sampler") {
  const VerifyResult vr = verify_lemmas(1, 0.5);
  CHECK_FALSE(vr.ok);
  CHECK_FALSE(vr.first_failure.empty());
}
