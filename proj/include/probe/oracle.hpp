#pragma once
// Exact computations over finite discrete distributions, used to
// property-test the probabilistic lemmas behind the policies, plus
// Monte-Carlo verifiers for the sample mean/variance tail bounds.

#include <optional>

#include "probe/distribution.hpp"

namespace probe::oracle {

double expect(const DiscreteDistribution& d);
double variance(const DiscreteDistribution& d);

// E[min(A,B)] for A,B i.i.d. from d, via the survival-function square.
double expect_min_two_iid(const DiscreteDistribution& d);

// (1-p) E[A] + p E[min(A,B)] for A,B i.i.d. from d.
double expect_mixed_min(const DiscreteDistribution& d, double p);

// Smallest eta' with e^{-eta'} <= P1(w)/P2(w) <= e^{eta'} on the common
// support. Throws ContractError on support mismatch or zero mass.
double dp_ratio(const DiscreteDistribution& d1, const DiscreteDistribution& d2);

// Exact E[max(X,Y)]; the two-argument form assumes independence, the joint
// form reads arms (i,j) of a joint table.
double expect_max(const DiscreteDistribution& x, const DiscreteDistribution& y);
double expect_max(const JointDistribution& joint, std::size_t i, std::size_t j);

struct MeanVar {
  double mean;
  double var;
};
// Mean and variance of max(X_i, X_j).
MeanVar meta_stats(const DiscreteDistribution& x, const DiscreteDistribution& y);
MeanVar meta_stats(const JointDistribution& joint, std::size_t i, std::size_t j);

// Exact E[(X_j - X_i)_+].
double gain_exact(const DiscreteDistribution& xj, const DiscreteDistribution& xi);
double gain_exact(const JointDistribution& joint, std::size_t j, std::size_t i);

// Throws if the joint's computed marginal for `arm` does not match
// `declared` within 1e-12.
void check_marginals(const JointDistribution& joint, std::size_t arm,
                     const DiscreteDistribution& declared);

enum class TailBound { MeanDeviation, VarUpper, VarLower };

// Monte-Carlo frequency over `trials` independent s-sample experiments of
//   |m - mu| > q sigma^2      (MeanDeviation, q >= 1/18)
//   V > (1+q) sigma^2         (VarUpper, q >= 1/18)
//   V < 0.65 sigma^2          (VarLower; q ignored)
double tail_violation_rate(const DiscreteDistribution& d, long s, TailBound bound,
                           double q, long trials, Rng& rng);

// The analytic value the empirical rate is compared against.
double tail_bound_value(const DiscreteDistribution& d, long s, TailBound bound, double q);

enum class ChernoffRegime { Small, Large };
// e^{-mu delta^2 / 3} (small, delta in [0,1]) or e^{-mu delta / 3}
// (large, delta >= 1).
double chernoff_bound(double mu, double delta, ChernoffRegime regime);

// ---------------------------------------------------------------------------
// Random-instance generators for the lemma sweeps.
// ---------------------------------------------------------------------------

// Random distribution on a fresh support of `support_size` values in [0,1].
DiscreteDistribution random_distribution(Rng& rng, int support_size);

// Pair (d1, d2) on a common support with dp_ratio(d1,d2) <= eta: d2 drawn
// freely, d1(w) proportional to d2(w) e^{u_w eta} with u_w uniform in [-1,1],
// renormalized and rejected if the realized ratio exceeds eta.
std::pair<DiscreteDistribution, DiscreteDistribution> random_dp_pair(Rng& rng, double eta,
                                                                     int support_size);

// Random joint table over `arms` arms with `atoms` outcomes in [0,1]^arms.
JointDistribution random_joint(Rng& rng, int arms, int atoms);

}  // namespace probe::oracle
