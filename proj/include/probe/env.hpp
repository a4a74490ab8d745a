#pragma once
// Loss/reward generators and the probe feedback contracts, including hint
// corruption and the correlated tight instance.

#include <optional>
#include <string>

#include "probe/distribution.hpp"

namespace probe {

// ---------------------------------------------------------------------------
// Stochastic rewards: independent per-arm laws or one joint draw per step.
// ---------------------------------------------------------------------------
class StochasticEnv {
 public:
  static StochasticEnv independent(std::vector<DiscreteDistribution> arms);
  static StochasticEnv correlated(JointDistribution joint);

  std::size_t arm_count() const { return means_.size(); }
  bool is_correlated() const { return joint_.has_value(); }
  const std::vector<double>& means() const { return means_; }
  double best_mean() const;

  // Exact E[max(X_i, X_j)] under the environment's true law.
  double pair_mean(std::size_t i, std::size_t j) const;
  // Exact Var[max(X_i, X_j)].
  double pair_variance(std::size_t i, std::size_t j) const;
  // max over pairs of pair_mean.
  double best_pair_mean() const;

  const DiscreteDistribution& arm(std::size_t i) const;
  const JointDistribution& joint() const;

  // One reward per arm; independent mode uses one uniform per arm,
  // correlated mode one uniform for the joint atom. Hidden from policies.
  void realize_step(Rng& rng, Vec& out) const;

 private:
  std::vector<DiscreteDistribution> arms_;       // independent mode
  std::optional<JointDistribution> joint_;       // correlated mode
  std::vector<double> means_;
};

// The correlated construction with a suboptimal partner trap: arm 1 uniform
// on {1/3, 2/3}; arm 2 adds 1/3 w.p. 3*delta; arm 3 adds 1/3 w.p.
// 3*delta*(1-sqrt(delta)), coupled so the arm-3 bonus only fires when the
// arm-2 bonus does; arms 4..n are constant zero.
StochasticEnv tight_instance(int n, double delta);

// ---------------------------------------------------------------------------
// Oblivious loss streams.
// ---------------------------------------------------------------------------
class AdversarialStream {
 public:
  AdversarialStream() = default;
  AdversarialStream(int d, std::vector<Vec> losses);

  int dim() const { return d_; }
  long horizon() const { return static_cast<long>(losses_.size()); }
  const Vec& loss(long t) const { return losses_.at(t - 1); }  // t in [1,T]
  const std::vector<Vec>& losses() const { return losses_; }

  // Plain text: header "d T", then one step per line, d decimals.
  static AdversarialStream load(const std::string& path);
  void save(const std::string& path) const;

 private:
  int d_ = 0;
  std::vector<Vec> losses_;
};

// Named generators. The whole sequence is materialized before the run.
//   constant          every step equals `pattern`
//   alternating       entry i at step t is pattern[i] if (i+t) even else 1-pattern[i]
//                     (pattern in {0,1} gives the two-phase experts stream)
//   seeded-random     i.i.d. entries: Bernoulli(0.5) on {0,1} ("experts" range)
//                     or uniform on [-1,1] ("linear" range)
//   frontload         first `budget` steps alternate +pattern/-pattern, zero after
AdversarialStream make_adversarial(const std::string& generator, int d, long horizon,
                                   std::uint64_t seed, const Vec& pattern = {},
                                   const std::string& range = "experts", long budget = 0);

// ---------------------------------------------------------------------------
// Corruption schedules for the imperfect-hint setting.
// ---------------------------------------------------------------------------
class CorruptionSchedule {
 public:
  CorruptionSchedule() = default;

  // The first `budget` steps of the horizon.
  static CorruptionSchedule front_loaded(long budget);
  // `budget` distinct uniform-random steps in [1, horizon].
  static CorruptionSchedule uniform_random(long budget, long horizon, std::uint64_t seed);
  static CorruptionSchedule explicit_steps(std::vector<long> steps);

  long budget() const { return budget_; }
  bool corrupted(long t) const;

 private:
  long budget_ = 0;
  bool front_ = false;
  std::vector<long> steps_;  // sorted, for the explicit/random modes
};

// ---------------------------------------------------------------------------
// Probe feedback.
// ---------------------------------------------------------------------------
struct ProbeFeedback {
  enum class Mode { BestIndex, AllValues };
  Mode mode = Mode::BestIndex;
  int best_index = -1;                         // BestIndex
  std::vector<std::pair<int, double>> values;  // AllValues
};

enum class ProbeDirection { MaxReward, MinLoss };

// Identity of the best probed option; ties break to the lowest index.
// Reveals no values.
ProbeFeedback best_probe(std::span<const double> realized, std::span<const int> probed,
                         ProbeDirection direction);

// Corrupted comparison for |S| = 2: on corrupted steps the worse option is
// reported (a tie reports the option the tie rule would not pick).
ProbeFeedback best_probe_corrupted(std::span<const double> realized,
                                   std::span<const int> probed, ProbeDirection direction,
                                   const CorruptionSchedule& schedule, long t);

// Values of all probed options.
ProbeFeedback all_probe(std::span<const double> realized, std::span<const int> probed);

}  // namespace probe
