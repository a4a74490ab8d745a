#pragma once
// Finite-support distributions; the basis for all exact oracle computations
// and for the stochastic environments.

#include <string>
#include <utility>
#include <vector>

#include "probe/core.hpp"

namespace probe {

class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;
  // Atoms need not be sorted or distinct; probabilities must be nonnegative
  // and sum to 1 within 1e-12.
  DiscreteDistribution(std::vector<double> values, std::vector<double> probs);

  static DiscreteDistribution point_mass(double v);
  static DiscreteDistribution bernoulli(double p);  // {0,1}
  static DiscreteDistribution uniform(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return values_.size(); }

  double sample(double u) const;  // inverse CDF on one uniform draw
  double sample(Rng& rng) const { return sample(rng.next_unit()); }

  // Shift the whole distribution by a constant.
  DiscreteDistribution shifted(double delta) const;

  // Text fixture format: one "value probability" pair per line.
  static DiscreteDistribution parse(const std::string& text);
  std::string serialize() const;

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

// Joint distribution over reward vectors, one atom per row.
struct JointDistribution {
  std::vector<Vec> outcomes;
  std::vector<double> probs;
  std::vector<double> cdf;

  JointDistribution() = default;
  JointDistribution(std::vector<Vec> out, std::vector<double> p);

  std::size_t arm_count() const { return outcomes.empty() ? 0 : outcomes.front().size(); }
  const Vec& sample(double u) const;
  DiscreteDistribution marginal(std::size_t arm) const;
};

}  // namespace probe
