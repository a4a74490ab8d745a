#pragma once
// Experiment runner: config parsing, replication with derived seeds,
// regret-curve aggregation, report emission and the verification suites.

#include <string>
#include <vector>

#include "json.hpp"
#include "probe/core.hpp"
#include "probe/distribution.hpp"

namespace probe {

struct StreamSpec {
  std::string generator = "constant";  // or a file path via `file`
  std::string file;
  int dim = 0;
  Vec pattern;
  std::string range = "experts";
  long budget = 0;
};

struct EnvSpec {
  // "stream" (adversarial losses), "bernoulli" / "discrete" (independent
  // stochastic arms), "tight" (the correlated hard instance), "quadratic"
  // (fixed convex loss over the unit ball).
  std::string type = "stream";
  StreamSpec stream;
  std::vector<double> means;                // bernoulli
  std::vector<DiscreteDistribution> arms;   // discrete
  int tight_n = 6;
  double tight_delta = 0.04;
  Vec quad_center;                          // quadratic
  double quad_scale = 1.0;
};

struct CorruptionSpec {
  std::string mode = "none";  // none | front | random | explicit
  long budget = 0;
  std::vector<long> steps;
};

struct ExperimentConfig {
  std::string policy;  // lwc | btrl | lwc-imperfect | hwc | hedge | cwc |
                       // meta-ucbv | ucb1-toptwo | explore-exploit | corr-exploit
  AlgoParams params;
  EnvSpec env;
  std::string option_kind = "hypercube";  // hypercube | simplex (linear policies)
  CorruptionSpec corruption;
  long horizon = 1;
  std::uint64_t seed = 1;
  long reps = 1;
  std::string out;
  bool emit_curve = true;
  bool record_trace = false;
  int threads = 1;
  std::vector<long> checkpoints;   // defaults to powers of 10 up to T, plus T
  std::vector<long> probe_times;   // primary-arm snapshots (corr-exploit)

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // throws ParameterError on any violation

  std::vector<long> checkpoint_grid() const;
};

struct RunResult {
  double final_regret = 0.0;
  std::vector<std::pair<long, double>> checkpoints;
  std::uint64_t hash = 0;  // FNV over every step's (action, value, cum_regret)
  double signed_pseudo_regret = 0.0;  // vs best single mean (MAB families)
  long mispredictions = -1;           // imperfect-hint runs
  std::vector<int> primary_at;        // one entry per probe time
  Trace trace;                        // populated when record_trace
};

RunResult run_experiment(const ExperimentConfig& config, long replication);

struct CurvePoint {
  long t;
  double mean_regret;
  double stderr_;
};

struct Report {
  std::string config_echo;  // JSON text
  std::vector<double> finals;
  double mean = 0.0;
  double stderr_ = 0.0;  // sample std / sqrt(R); 0 when R = 1
  std::vector<CurvePoint> curve;
  std::vector<std::pair<std::string, double>> bounds;
  std::vector<std::uint64_t> hashes;
  double mean_signed_pseudo = 0.0;
  std::vector<std::vector<long>> primary_counts;  // [probe time][arm]
};

Report replicate(const ExperimentConfig& config);

// Writes <out_dir>/curve.csv (header "t,mean_regret,stderr") and/or
// <out_dir>/summary.json depending on format ("csv" writes both, "json"
// only the summary, which embeds the curve either way).
void emit_report(const Report& report, const std::string& out_dir,
                 const std::string& format);

Report report_from_json(const std::string& path);  // reload a summary.json

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> lines;
  std::string first_failure;  // serialized instance for replay

  void check(bool pass, const std::string& line, const std::string& instance = "");
  void note(const std::string& line) { lines.push_back("      " + line); }
};

VerifyResult verify_suite(const std::string& name, std::uint64_t seed = 1);
// scale_multiplier != 1 models a broken Laplace sampler (mutation testing).
VerifyResult verify_lemmas(std::uint64_t seed, double laplace_scale_multiplier = 1.0);
VerifyResult verify_tails(std::uint64_t seed);
VerifyResult verify_regressions(std::uint64_t seed);

// Monte-Carlo action-level privacy check for the perturbed argmin: the
// probability of each simplex-vertex action under cumulative losses L and
// L + l must agree within exp(eta * ||l||_1 / d) up to sampling error.
bool lwc_dp_check(double eta, double scale_multiplier, long draws, Rng& rng,
                  std::string* detail);

}  // namespace probe
