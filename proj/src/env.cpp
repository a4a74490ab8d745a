#include "probe/env.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "probe/oracle.hpp"

namespace probe {

StochasticEnv StochasticEnv::independent(std::vector<DiscreteDistribution> arms) {
  if (arms.empty()) throw ParameterError("environment needs at least one arm");
  StochasticEnv env;
  for (const auto& a : arms) {
    for (double v : a.values()) {
      if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("arm support outside [0,1]");
    }
    env.means_.push_back(oracle::expect(a));
  }
  env.arms_ = std::move(arms);
  return env;
}

StochasticEnv StochasticEnv::correlated(JointDistribution joint) {
  if (joint.outcomes.empty()) throw ParameterError("empty joint distribution");
  StochasticEnv env;
  const std::size_t n = joint.arm_count();
  for (const Vec& o : joint.outcomes) {
    for (double v : o) {
      if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("joint support outside [0,1]^n");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    env.means_.push_back(oracle::expect(joint.marginal(i)));
  }
  env.joint_ = std::move(joint);
  return env;
}

double StochasticEnv::best_mean() const {
  return *std::max_element(means_.begin(), means_.end());
}

double StochasticEnv::pair_mean(std::size_t i, std::size_t j) const {
  if (joint_) return oracle::expect_max(*joint_, i, j);
  return oracle::expect_max(arms_.at(i), arms_.at(j));
}

double StochasticEnv::pair_variance(std::size_t i, std::size_t j) const {
  if (joint_) return oracle::meta_stats(*joint_, i, j).var;
  return oracle::meta_stats(arms_.at(i), arms_.at(j)).var;
}

double StochasticEnv::best_pair_mean() const {
  double best = -1.0;
  for (std::size_t i = 0; i + 1 < arm_count(); ++i) {
    for (std::size_t j = i + 1; j < arm_count(); ++j) best = std::max(best, pair_mean(i, j));
  }
  return best;
}

const DiscreteDistribution& StochasticEnv::arm(std::size_t i) const {
  if (joint_) throw ContractError("correlated environment has no per-arm law");
  return arms_.at(i);
}

const JointDistribution& StochasticEnv::joint() const {
  if (!joint_) throw ContractError("independent environment has no joint law");
  return *joint_;
}

void StochasticEnv::realize_step(Rng& rng, Vec& out) const {
  out.resize(arm_count());
  if (joint_) {
    const Vec& o = joint_->sample(rng.next_unit());
    std::copy(o.begin(), o.end(), out.begin());
  } else {
    for (std::size_t i = 0; i < arms_.size(); ++i) out[i] = arms_[i].sample(rng.next_unit());
  }
}

StochasticEnv tight_instance(int n, double delta) {
  if (n < 3) throw ParameterError("tight instance needs n >= 3");
  if (!(delta > 0.0 && delta <= 1.0 / 9.0)) throw ParameterError("delta outside (0, 1/9]");
  const double pa = 3.0 * delta;                            // Pr[A = 1/3]
  const double pb = 3.0 * delta * (1.0 - std::sqrt(delta)); // Pr[B = 1/3]
  if (!(pa <= 1.0 && pb <= 1.0)) throw ParameterError("delta too large for coupling");
  // One uniform u drives the coupling: A fires iff u < pa, B iff u < pb
  // (pb <= pa, so B=1/3 implies A=1/3 and Pr[B=0 | A=0] = 1). Crossed with
  // the independent X in {1/3, 2/3} this gives six atoms.
  std::vector<Vec> outcomes;
  std::vector<double> probs;
  for (double x : {1.0 / 3.0, 2.0 / 3.0}) {
    const double third = 1.0 / 3.0;
    // u < pb: both bonuses
    outcomes.push_back({x, x + third, x + third});
    probs.push_back(0.5 * pb);
    // pb <= u < pa: only arm 2's bonus
    outcomes.push_back({x, x + third, x});
    probs.push_back(0.5 * (pa - pb));
    // u >= pa: no bonus
    outcomes.push_back({x, x, x});
    probs.push_back(0.5 * (1.0 - pa));
  }
  for (Vec& o : outcomes) o.resize(n, 0.0);  // dummy arms: constant zero
  return StochasticEnv::correlated(JointDistribution(std::move(outcomes), std::move(probs)));
}

AdversarialStream::AdversarialStream(int d, std::vector<Vec> losses)
    : d_(d), losses_(std::move(losses)) {
  for (const Vec& l : losses_) {
    if (static_cast<int>(l.size()) != d_) throw ParameterError("stream dimension mismatch");
  }
}

AdversarialStream AdversarialStream::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file: " + path);
  int d;
  long horizon;
  if (!(in >> d >> horizon)) throw std::runtime_error("bad stream header");
  std::vector<Vec> losses(horizon, Vec(d));
  for (long t = 0; t < horizon; ++t) {
    for (int j = 0; j < d; ++j) {
      if (!(in >> losses[t][j])) throw std::runtime_error("truncated stream file");
    }
  }
  return AdversarialStream(d, std::move(losses));
}

void AdversarialStream::save(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open stream file: " + path);
  std::fprintf(f, "%d %ld\n", d_, horizon());
  for (const Vec& l : losses_) {
    for (int j = 0; j < d_; ++j) std::fprintf(f, "%s%.17g", j ? " " : "", l[j]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

AdversarialStream make_adversarial(const std::string& generator, int d, long horizon,
                                   std::uint64_t seed, const Vec& pattern,
                                   const std::string& range, long budget) {
  if (d < 1 || horizon < 0) throw ParameterError("bad stream shape");
  Vec base = pattern;
  if (base.empty()) base.assign(d, 1.0);
  if (static_cast<int>(base.size()) != d) throw ParameterError("pattern dimension mismatch");

  std::vector<Vec> losses(horizon, Vec(d, 0.0));
  if (generator == "constant") {
    for (auto& l : losses) l = base;
  } else if (generator == "alternating") {
    for (long t = 0; t < horizon; ++t) {
      for (int j = 0; j < d; ++j) {
        losses[t][j] = ((t + j) % 2 == 0) ? base[j] : 1.0 - base[j];
      }
    }
  } else if (generator == "seeded-random") {
    Rng rng(seed, 0, "adversarial-stream");
    for (auto& l : losses) {
      for (int j = 0; j < d; ++j) {
        l[j] = range == "linear" ? 2.0 * rng.next_unit() - 1.0
                                 : (rng.next_unit() < 0.5 ? 0.0 : 1.0);
      }
    }
  } else if (generator == "frontload") {
    for (long t = 0; t < std::min(budget, horizon); ++t) {
      const double sign = (t % 2 == 0) ? 1.0 : -1.0;
      for (int j = 0; j < d; ++j) losses[t][j] = sign * base[j];
    }
  } else {
    throw ParameterError("unknown stream generator: " + generator);
  }
  return AdversarialStream(d, std::move(losses));
}

CorruptionSchedule CorruptionSchedule::front_loaded(long budget) {
  if (budget < 0) throw ParameterError("budget must be nonnegative");
  CorruptionSchedule s;
  s.budget_ = budget;
  s.front_ = true;
  return s;
}

CorruptionSchedule CorruptionSchedule::uniform_random(long budget, long horizon,
                                                      std::uint64_t seed) {
  if (budget < 0 || budget > horizon) throw ParameterError("budget outside [0, horizon]");
  // Floyd's sampling of `budget` distinct steps.
  Rng rng(seed, 0, "corruption-schedule");
  std::vector<long> chosen;
  for (long j = horizon - budget + 1; j <= horizon; ++j) {
    long t = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(j))) + 1;
    if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) t = j;
    chosen.push_back(t);
  }
  std::sort(chosen.begin(), chosen.end());
  return explicit_steps(std::move(chosen));
}

CorruptionSchedule CorruptionSchedule::explicit_steps(std::vector<long> steps) {
  std::sort(steps.begin(), steps.end());
  CorruptionSchedule s;
  s.budget_ = static_cast<long>(steps.size());
  s.steps_ = std::move(steps);
  return s;
}

bool CorruptionSchedule::corrupted(long t) const {
  if (front_) return t <= budget_;
  return std::binary_search(steps_.begin(), steps_.end(), t);
}

namespace {

void validate_probes(std::span<const double> realized, std::span<const int> probed) {
  if (probed.empty()) throw ParameterError("empty probe set");
  if (probed.size() > 4) throw ParameterError("more than k=4 probes");
  for (int i : probed) {
    if (i < 0 || static_cast<std::size_t>(i) >= realized.size()) {
      throw ParameterError("probe index out of range");
    }
  }
}

int best_of(std::span<const double> realized, std::span<const int> probed,
            ProbeDirection direction) {
  int best = probed[0];
  for (int i : probed) {
    const bool better = direction == ProbeDirection::MaxReward
                            ? realized[i] > realized[best]
                            : realized[i] < realized[best];
    if (better || (realized[i] == realized[best] && i < best)) best = i;
  }
  return best;
}

}  // namespace

ProbeFeedback best_probe(std::span<const double> realized, std::span<const int> probed,
                         ProbeDirection direction) {
  validate_probes(realized, probed);
  ProbeFeedback fb;
  fb.mode = ProbeFeedback::Mode::BestIndex;
  fb.best_index = best_of(realized, probed, direction);
  return fb;
}

ProbeFeedback best_probe_corrupted(std::span<const double> realized,
                                   std::span<const int> probed, ProbeDirection direction,
                                   const CorruptionSchedule& schedule, long t) {
  if (probed.size() != 2) throw ParameterError("corrupted comparison needs exactly 2 probes");
  ProbeFeedback fb = best_probe(realized, probed, direction);
  if (schedule.corrupted(t)) {
    fb.best_index = fb.best_index == probed[0] ? probed[1] : probed[0];
  }
  return fb;
}

ProbeFeedback all_probe(std::span<const double> realized, std::span<const int> probed) {
  validate_probes(realized, probed);
  ProbeFeedback fb;
  fb.mode = ProbeFeedback::Mode::AllValues;
  for (int i : probed) fb.values.emplace_back(i, realized[i]);
  return fb;
}

}  // namespace probe
