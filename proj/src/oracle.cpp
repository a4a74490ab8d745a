#include "probe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace probe::oracle {

namespace {

// Collapse to sorted distinct atoms.
std::map<double, double> atom_map(const DiscreteDistribution& d) {
  std::map<double, double> m;
  for (std::size_t i = 0; i < d.size(); ++i) m[d.values()[i]] += d.probs()[i];
  return m;
}

}  // namespace

double expect(const DiscreteDistribution& d) {
  double e = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) e += d.values()[i] * d.probs()[i];
  return e;
}

double variance(const DiscreteDistribution& d) {
  const double mu = expect(d);
  double v = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double delta = d.values()[i] - mu;
    v += delta * delta * d.probs()[i];
  }
  return v;
}

double expect_min_two_iid(const DiscreteDistribution& d) {
  const auto atoms = atom_map(d);
  // Pr[min >= v] = G(v)^2 with G(v) = Pr[X >= v]; walk atoms from the top.
  double e = 0.0;
  double g = 0.0;          // Pr[X >= v] for the atom just processed
  double prev_surv = 0.0;  // Pr[min >= previous v]
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    g += it->second;
    const double surv = g * g;  // Pr[min >= v]
    e += it->first * (surv - prev_surv);
    prev_surv = surv;
  }
  return e;
}

double expect_mixed_min(const DiscreteDistribution& d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("p outside [0,1]");
  return (1.0 - p) * expect(d) + p * expect_min_two_iid(d);
}

double dp_ratio(const DiscreteDistribution& d1, const DiscreteDistribution& d2) {
  const auto a1 = atom_map(d1);
  const auto a2 = atom_map(d2);
  if (a1.size() != a2.size()) throw ContractError("dp_ratio: support mismatch");
  double worst = 0.0;
  auto it2 = a2.begin();
  for (auto it1 = a1.begin(); it1 != a1.end(); ++it1, ++it2) {
    if (std::fabs(it1->first - it2->first) > 1e-12) {
      throw ContractError("dp_ratio: support mismatch");
    }
    if (!(it1->second > 0.0) || !(it2->second > 0.0)) {
      throw ContractError("dp_ratio: zero mass on common support");
    }
    worst = std::max(worst, std::fabs(std::log(it1->second / it2->second)));
  }
  return worst;
}

double expect_max(const DiscreteDistribution& x, const DiscreteDistribution& y) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      e += x.probs()[i] * y.probs()[j] * std::max(x.values()[i], y.values()[j]);
    }
  }
  return e;
}

double expect_max(const JointDistribution& joint, std::size_t i, std::size_t j) {
  double e = 0.0;
  for (std::size_t a = 0; a < joint.outcomes.size(); ++a) {
    e += joint.probs[a] * std::max(joint.outcomes[a].at(i), joint.outcomes[a].at(j));
  }
  return e;
}

namespace {

template <typename MaxFn>
MeanVar meta_stats_impl(MaxFn&& for_each) {
  double mean = 0.0, second = 0.0;
  for_each([&](double p, double m) {
    mean += p * m;
    second += p * m * m;
  });
  return {mean, std::max(0.0, second - mean * mean)};
}

}  // namespace

MeanVar meta_stats(const DiscreteDistribution& x, const DiscreteDistribution& y) {
  return meta_stats_impl([&](auto&& emit) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < y.size(); ++j) {
        emit(x.probs()[i] * y.probs()[j], std::max(x.values()[i], y.values()[j]));
      }
    }
  });
}

MeanVar meta_stats(const JointDistribution& joint, std::size_t i, std::size_t j) {
  return meta_stats_impl([&](auto&& emit) {
    for (std::size_t a = 0; a < joint.outcomes.size(); ++a) {
      emit(joint.probs[a], std::max(joint.outcomes[a].at(i), joint.outcomes[a].at(j)));
    }
  });
}

double gain_exact(const DiscreteDistribution& xj, const DiscreteDistribution& xi) {
  double e = 0.0;
  for (std::size_t a = 0; a < xj.size(); ++a) {
    for (std::size_t b = 0; b < xi.size(); ++b) {
      e += xj.probs()[a] * xi.probs()[b] * std::max(0.0, xj.values()[a] - xi.values()[b]);
    }
  }
  return e;
}

double gain_exact(const JointDistribution& joint, std::size_t j, std::size_t i) {
  double e = 0.0;
  for (std::size_t a = 0; a < joint.outcomes.size(); ++a) {
    e += joint.probs[a] * std::max(0.0, joint.outcomes[a].at(j) - joint.outcomes[a].at(i));
  }
  return e;
}

void check_marginals(const JointDistribution& joint, std::size_t arm,
                     const DiscreteDistribution& declared) {
  const DiscreteDistribution got = joint.marginal(arm);
  const auto a1 = joint.marginal(arm).values();
  const DiscreteDistribution want(declared.values(), declared.probs());
  // Compare as atom maps.
  std::map<double, double> m1, m2;
  for (std::size_t i = 0; i < got.size(); ++i) m1[got.values()[i]] += got.probs()[i];
  for (std::size_t i = 0; i < want.size(); ++i) m2[want.values()[i]] += want.probs()[i];
  // Drop zero-mass atoms from the declared side.
  for (auto it = m2.begin(); it != m2.end();) {
    it = it->second == 0.0 ? m2.erase(it) : std::next(it);
  }
  if (m1.size() != m2.size()) throw ContractError("joint marginal support mismatch");
  auto it2 = m2.begin();
  for (auto it1 = m1.begin(); it1 != m1.end(); ++it1, ++it2) {
    if (std::fabs(it1->first - it2->first) > 1e-12 ||
        std::fabs(it1->second - it2->second) > 1e-12) {
      throw ContractError("joint marginal mismatch");
    }
  }
}

double tail_violation_rate(const DiscreteDistribution& d, long s, TailBound bound,
                           double q, long trials, Rng& rng) {
  if (s < 1 || trials < 1) throw ParameterError("s and trials must be positive");
  const double mu = expect(d);
  const double sigma2 = variance(d);
  long violations = 0;
  for (long t = 0; t < trials; ++t) {
    SampleStats stats;
    for (long i = 0; i < s; ++i) stats.add(d.sample(rng));
    bool bad = false;
    switch (bound) {
      case TailBound::MeanDeviation:
        bad = std::fabs(stats.mean() - mu) > q * sigma2;
        break;
      case TailBound::VarUpper:
        bad = stats.variance() > (1.0 + q) * sigma2;
        break;
      case TailBound::VarLower:
        bad = stats.variance() < 0.65 * sigma2;
        break;
    }
    if (bad) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(trials);
}

double tail_bound_value(const DiscreteDistribution& d, long s, TailBound bound, double q) {
  const double sigma2 = variance(d);
  switch (bound) {
    case TailBound::MeanDeviation:
    case TailBound::VarUpper:
      if (!(q >= 1.0 / 18.0)) throw ParameterError("q must be >= 1/18");
      return 3.0 * std::exp(-q * sigma2 * static_cast<double>(s) / 23.0);
    case TailBound::VarLower:
      return 3.0 * std::exp(-0.01 * sigma2 * static_cast<double>(s));
  }
  throw ParameterError("bad tail bound id");
}

double chernoff_bound(double mu, double delta, ChernoffRegime regime) {
  if (!(mu >= 0.0)) throw ParameterError("mu must be nonnegative");
  switch (regime) {
    case ChernoffRegime::Small:
      if (!(delta >= 0.0 && delta <= 1.0)) throw ParameterError("small regime needs delta in [0,1]");
      return std::exp(-mu * delta * delta / 3.0);
    case ChernoffRegime::Large:
      if (!(delta >= 1.0)) throw ParameterError("large regime needs delta >= 1");
      return std::exp(-mu * delta / 3.0);
  }
  throw ParameterError("bad regime");
}

DiscreteDistribution random_distribution(Rng& rng, int support_size) {
  if (support_size < 1) throw ParameterError("support size must be >= 1");
  std::vector<double> values(support_size), probs(support_size);
  for (int i = 0; i < support_size; ++i) values[i] = rng.next_unit();
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (int i = 0; i < support_size; ++i) {
    probs[i] = 0.05 + rng.next_unit();  // keep every atom strictly positive
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  // Renormalize exactly enough for the 1e-12 constructor check.
  double acc = std::accumulate(probs.begin(), probs.end() - 1, 0.0);
  probs.back() = 1.0 - acc;
  return DiscreteDistribution(std::move(values), std::move(probs));
}

std::pair<DiscreteDistribution, DiscreteDistribution> random_dp_pair(Rng& rng, double eta,
                                                                     int support_size) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    DiscreteDistribution d2 = random_distribution(rng, support_size);
    std::vector<double> p1(d2.size());
    double total = 0.0;
    for (std::size_t i = 0; i < d2.size(); ++i) {
      const double u = 2.0 * rng.next_unit() - 1.0;
      p1[i] = d2.probs()[i] * std::exp(u * eta);
      total += p1[i];
    }
    for (double& p : p1) p /= total;
    double acc = std::accumulate(p1.begin(), p1.end() - 1, 0.0);
    p1.back() = 1.0 - acc;
    DiscreteDistribution d1(d2.values(), p1);
    if (dp_ratio(d1, d2) <= eta) return {std::move(d1), std::move(d2)};
  }
  throw std::runtime_error("random_dp_pair: rejection sampling failed");
}

JointDistribution random_joint(Rng& rng, int arms, int atoms) {
  if (arms < 1 || atoms < 1) throw ParameterError("arms and atoms must be >= 1");
  std::vector<Vec> outcomes(atoms, Vec(arms));
  std::vector<double> probs(atoms);
  double total = 0.0;
  for (int a = 0; a < atoms; ++a) {
    for (int i = 0; i < arms; ++i) outcomes[a][i] = rng.next_unit();
    probs[a] = 0.05 + rng.next_unit();
    total += probs[a];
  }
  for (double& p : probs) p /= total;
  double acc = std::accumulate(probs.begin(), probs.end() - 1, 0.0);
  probs.back() = 1.0 - acc;
  return JointDistribution(std::move(outcomes), std::move(probs));
}

}  // namespace probe::oracle
