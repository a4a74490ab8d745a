#include "probe/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace probe {

namespace {

std::vector<double> build_cdf(const std::vector<double>& probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ParameterError("negative or non-finite probability");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw ParameterError("probabilities do not sum to 1");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> values,
                                           std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)) {
  if (values_.empty() || values_.size() != probs_.size()) {
    throw ParameterError("distribution needs matching non-empty values/probs");
  }
  cdf_ = build_cdf(probs_);
}

DiscreteDistribution DiscreteDistribution::point_mass(double v) {
  return DiscreteDistribution({v}, {1.0});
}

DiscreteDistribution DiscreteDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("bernoulli parameter outside [0,1]");
  return DiscreteDistribution({0.0, 1.0}, {1.0 - p, p});
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<double> values) {
  std::vector<double> probs(values.size(), 1.0 / static_cast<double>(values.size()));
  return DiscreteDistribution(std::move(values), std::move(probs));
}

double DiscreteDistribution::sample(double u) const {
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t i = std::min<std::size_t>(it - cdf_.begin(), values_.size() - 1);
  return values_[i];
}

DiscreteDistribution DiscreteDistribution::shifted(double delta) const {
  std::vector<double> v = values_;
  for (double& x : v) x += delta;
  return DiscreteDistribution(std::move(v), probs_);
}

DiscreteDistribution DiscreteDistribution::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> values, probs;
  double v, p;
  while (in >> v >> p) {
    values.push_back(v);
    probs.push_back(p);
  }
  return DiscreteDistribution(std::move(values), std::move(probs));
}

std::string DiscreteDistribution::serialize() const {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < values_.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", values_[i], probs_[i]);
    out += buf;
  }
  return out;
}

JointDistribution::JointDistribution(std::vector<Vec> out, std::vector<double> p)
    : outcomes(std::move(out)), probs(std::move(p)) {
  if (outcomes.empty() || outcomes.size() != probs.size()) {
    throw ParameterError("joint distribution needs matching non-empty outcomes/probs");
  }
  const std::size_t n = outcomes.front().size();
  for (const Vec& o : outcomes) {
    if (o.size() != n) throw ParameterError("joint outcome dimension mismatch");
  }
  cdf = build_cdf(probs);
}

const Vec& JointDistribution::sample(double u) const {
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  const std::size_t i = std::min<std::size_t>(it - cdf.begin(), outcomes.size() - 1);
  return outcomes[i];
}

DiscreteDistribution JointDistribution::marginal(std::size_t arm) const {
  std::map<double, double> mass;
  for (std::size_t i = 0; i < outcomes.size(); ++i) mass[outcomes[i].at(arm)] += probs[i];
  std::vector<double> v, p;
  for (const auto& [val, pr] : mass) {
    v.push_back(val);
    p.push_back(pr);
  }
  return DiscreteDistribution(std::move(v), std::move(p));
}

}  // namespace probe
