#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "probe/core.hpp"

using namespace probe;

TEST_CASE("laplace sampler: inverse-CDF pins") {
  CHECK(sample_laplace(2.0, 0.5) == doctest::Approx(0.0));
  CHECK(sample_laplace(1.0, 0.75) == doctest::Approx(std::log(2.0)));
  CHECK(sample_laplace(10.0, 0.25) == doctest::Approx(-10.0 * std::log(2.0)));
  CHECK_THROWS_AS(sample_laplace(0.0, 0.5), ParameterError);
  CHECK_THROWS_AS(sample_laplace(1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(sample_laplace(1.0, 1.0), ParameterError);
}

TEST_CASE("gumbel sampler: inverse-CDF pins") {
  CHECK(sample_gumbel(1.0, std::exp(-1.0)) == doctest::Approx(0.0));
  CHECK(sample_gumbel(0.4, 0.5) == doctest::Approx(-std::log(std::log(2.0)) / 0.4));
  CHECK(sample_gumbel(0.4, 0.5) == doctest::Approx(0.91637).epsilon(1e-4));
  CHECK(sample_gumbel(1.0, std::exp(-std::exp(1.0))) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(sample_gumbel(-1.0, 0.5), ParameterError);
}

namespace {

// Two-sided Kolmogorov-Smirnov statistic against an analytic CDF.
template <class Cdf>
double ks_stat(std::vector<double> draws, Cdf cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    worst = std::max(worst, std::fabs(f - static_cast<double>(i) / n));
    worst = std::max(worst, std::fabs(f - static_cast<double>(i + 1) / n));
  }
  return worst;
}

}  // namespace

TEST_CASE("samplers match their analytic CDFs (KS < 0.005)") {
  Rng rng(123);
  const long n = 200000;
  std::vector<double> lap(n), gum(n);
  for (long i = 0; i < n; ++i) lap[i] = sample_laplace(2.0, rng.next_unit());
  for (long i = 0; i < n; ++i) gum[i] = sample_gumbel(0.4, rng.next_unit());

  CHECK(ks_stat(std::move(lap), [](double x) {
          return x < 0.0 ? 0.5 * std::exp(x / 2.0) : 1.0 - 0.5 * std::exp(-x / 2.0);
        }) < 0.005);
  CHECK(ks_stat(std::move(gum), [](double x) {
          return std::exp(-std::exp(-0.4 * x));
        }) < 0.005);
}

TEST_CASE("gamma vector sampler") {
  Rng rng(5);
  CHECK_THROWS_AS(sample_gamma_vector(0, 0.4, 1.0, rng), ParameterError);
  CHECK_THROWS_AS(sample_gamma_vector(2, -0.1, 1.0, rng), ParameterError);

  // d=1 reduces to Laplace(beta/eta): mean |x| = beta/eta = 5.
  double abs_sum = 0.0;
  const long n = 200000;
  for (long i = 0; i < n; ++i) abs_sum += std::fabs(sample_gamma_vector(1, 0.4, 2.0, rng)[0]);
  CHECK(abs_sum / n == doctest::Approx(5.0).epsilon(0.02));

  // Expected norm = d * beta / eta = 20 at d=4, beta=2, eta=0.4.
  double norm_sum = 0.0;
  for (long i = 0; i < n; ++i) {
    const Vec x = sample_gamma_vector(4, 0.4, 2.0, rng);
    double sq = 0.0;
    for (double v : x) {
      CHECK(std::isfinite(v));
      sq += v * v;
    }
    norm_sum += std::sqrt(sq);
  }
  CHECK(norm_sum / n == doctest::Approx(20.0).epsilon(0.02));
}

TEST_CASE("running stats match the batch formulas") {
  SampleStats s;
  CHECK_THROWS_AS(s.mean(), ContractError);
  CHECK_THROWS_AS(s.variance(), ContractError);

  s = update_stats(s, 0.7);
  CHECK(s.count == 1);
  CHECK(s.mean() == doctest::Approx(0.7));
  CHECK(s.variance() == doctest::Approx(0.0));

  SampleStats two;
  two.add(0.0);
  two.add(1.0);
  CHECK(two.mean() == doctest::Approx(0.5));
  CHECK(two.variance() == doctest::Approx(0.25));

  SampleStats flat;
  for (int i = 0; i < 3; ++i) flat.add(0.2);
  CHECK(flat.mean() == doctest::Approx(0.2));
  CHECK(flat.variance() == doctest::Approx(0.0));

  CHECK_THROWS_AS(flat.add(1.5), ContractError);
  CHECK_THROWS_AS(flat.add(-0.1), ContractError);
}

TEST_CASE("one-pass update equals batch recomputation over 1e4 points") {
  Rng rng(99);
  std::vector<double> obs(10000);
  SampleStats s;
  for (double& x : obs) {
    x = rng.next_unit();
    s.add(x);
  }
  const double mean = std::accumulate(obs.begin(), obs.end(), 0.0) / obs.size();
  double m2 = 0.0;
  for (double x : obs) m2 += (x - mean) * (x - mean);
  CHECK(s.mean() == doctest::Approx(mean).epsilon(1e-9));
  CHECK(s.variance() == doctest::Approx(m2 / obs.size()).epsilon(1e-9));
}

TEST_CASE("linear argmin over the three option kinds") {
  const OptionSet cube = OptionSet::hypercube(2);
  CHECK(argmin_linear(cube, std::vector<double>{1.0, -2.0}) == Vec{-1.0, 1.0});
  // Zero coordinates map to -1.
  CHECK(argmin_linear(cube, std::vector<double>{0.0, 0.0}) == Vec{-1.0, -1.0});

  const OptionSet simplex = OptionSet::simplex_vertices(3);
  CHECK(argmin_linear_index(simplex, std::vector<double>{0.3, 0.1, 0.5}) == 1);
  CHECK(argmin_linear(simplex, std::vector<double>{0.3, 0.1, 0.5}) == Vec{0.0, 1.0, 0.0});

  const OptionSet pts = OptionSet::explicit_points({{0.0, 0.0}, {1.0, 1.0}});
  CHECK(argmin_linear(pts, std::vector<double>{0.0, 0.0}) == Vec{0.0, 0.0});  // tie: lowest index
  CHECK(argmin_linear_index(pts, std::vector<double>{-1.0, 0.0}) == 1);

  CHECK_THROWS_AS(argmin_linear(cube, std::vector<double>{1.0}), ParameterError);
  CHECK_THROWS_AS(OptionSet::explicit_points({{2.0}}), ParameterError);
}

TEST_CASE("argmin is never beaten by any hypercube corner") {
  Rng rng(31);
  const int d = 6;
  const OptionSet cube = OptionSet::hypercube(d);
  for (int trial = 0; trial < 50; ++trial) {
    Vec cost(d);
    for (double& c : cost) c = 2.0 * rng.next_unit() - 1.0;
    const Vec best = argmin_linear(cube, cost);
    double best_val = 0.0;
    for (int j = 0; j < d; ++j) best_val += cost[j] * best[j];
    for (int mask = 0; mask < (1 << d); ++mask) {
      double val = 0.0;
      for (int j = 0; j < d; ++j) val += cost[j] * ((mask >> j) & 1 ? 1.0 : -1.0);
      CHECK(best_val <= val + 1e-12);
    }
  }
}

TEST_CASE("linear regret accounting") {
  const OptionSet opts = OptionSet::explicit_points({{-1.0}, {1.0}});
  const long horizon = 5;
  std::vector<Vec> losses(horizon, Vec{1.0});

  Trace trace;
  trace.point_dim = 1;
  for (long t = 0; t < horizon; ++t) {
    Trace::Step step;
    step.value = (t == 2) ? 1.0 : -1.0;  // plays +1 once, -1 elsewhere
    trace.steps.push_back(step);
    trace.action_points.push_back(t == 2 ? 1.0 : -1.0);
  }
  CHECK(regret_linear(trace, opts, losses) == doctest::Approx(2.0));

  // Zero losses: zero regret for any play.
  std::vector<Vec> zeros(horizon, Vec{0.0});
  CHECK(regret_linear(trace, opts, zeros) == doctest::Approx(0.0));

  // Identity: regret + sum <l, w*> = sum <l, w^t>.
  const double hindsight = -5.0;  // best fixed option -1 on all-ones losses
  double played = 0.0;
  for (long t = 0; t < horizon; ++t) played += trace.action_points[t];
  CHECK(regret_linear(trace, opts, losses) + hindsight == doctest::Approx(played));
}

TEST_CASE("bandit pseudo-regret") {
  CHECK(pseudo_regret_mab(std::vector<double>(10, 0.4), std::vector<double>{0.4}) ==
        doctest::Approx(0.0));
  // Two arms 0.9 / 0.1, policy credited the bad arm's mean for T=10.
  CHECK(pseudo_regret_mab(std::vector<double>(10, 0.1), std::vector<double>{0.9, 0.1}) ==
        doctest::Approx(8.0));
  CHECK_THROWS_AS(pseudo_regret_mab(std::vector<double>{}, std::vector<double>{}),
                  ParameterError);
}

TEST_CASE("imperfect-hint parameter rule") {
  const AlgoParams p0 = imperfect_hint_params(0);
  CHECK(p0.eta == doctest::Approx(0.2));
  CHECK(p0.p == doctest::Approx(1.0));
  const AlgoParams p24 = imperfect_hint_params(24);
  CHECK(p24.eta == doctest::Approx(0.04));
  CHECK(p24.p == doctest::Approx(0.2));
  CHECK_THROWS_AS(imperfect_hint_params(-1), ParameterError);
}

TEST_CASE("trace hash is content-determined") {
  Trace a, b;
  for (int t = 0; t < 10; ++t) {
    Trace::Step s;
    s.action = t % 3;
    s.value = 0.1 * t;
    s.cum_regret = 0.05 * t;
    a.steps.push_back(s);
    b.steps.push_back(s);
  }
  CHECK(a.content_hash() == b.content_hash());
  b.steps[4].value += 1e-9;
  CHECK(a.content_hash() != b.content_hash());
}
