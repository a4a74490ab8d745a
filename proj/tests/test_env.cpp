#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "probe/env.hpp"
#include "probe/oracle.hpp"

using namespace probe;

TEST_CASE("independent environment realizes one draw per arm") {
  const StochasticEnv env = StochasticEnv::independent(
      {DiscreteDistribution::point_mass(0.3), DiscreteDistribution::point_mass(0.7)});
  CHECK(env.arm_count() == 2);
  CHECK_FALSE(env.is_correlated());
  CHECK(env.means() == std::vector<double>{0.3, 0.7});
  CHECK(env.best_mean() == doctest::Approx(0.7));

  Rng rng(1);
  Vec out(2);
  env.realize_step(rng, out);
  CHECK(out == Vec{0.3, 0.7});

  const StochasticEnv sure = StochasticEnv::independent({DiscreteDistribution::bernoulli(1.0)});
  Vec one(1);
  for (int i = 0; i < 20; ++i) {
    sure.realize_step(rng, one);
    CHECK(one[0] == 1.0);
  }

  CHECK_THROWS_AS(StochasticEnv::independent({}), ParameterError);
  CHECK_THROWS_AS(StochasticEnv::independent({DiscreteDistribution::point_mass(1.5)}),
                  ParameterError);
}

TEST_CASE("empirical arm mean converges") {
  const StochasticEnv env = StochasticEnv::independent({DiscreteDistribution::bernoulli(0.4)});
  Rng rng(2);
  Vec out(1);
  double total = 0.0;
  const long n = 1000000;
  for (long i = 0; i < n; ++i) {
    env.realize_step(rng, out);
    total += out[0];
  }
  CHECK(total / n == doctest::Approx(0.4).epsilon(0.005));
}

TEST_CASE("pair means match the exact oracle") {
  const StochasticEnv env = StochasticEnv::independent(
      {DiscreteDistribution::bernoulli(0.5), DiscreteDistribution::bernoulli(0.5)});
  CHECK(env.pair_mean(0, 1) == doctest::Approx(0.75));
  CHECK(env.pair_variance(0, 1) == doctest::Approx(0.1875));
  CHECK(env.best_pair_mean() == doctest::Approx(0.75));
}

TEST_CASE("correlated hard instance: marginals, coupling and support") {
  const double delta = 0.04;
  const StochasticEnv env = tight_instance(6, delta);
  CHECK(env.is_correlated());
  CHECK(env.arm_count() == 6);
  CHECK(env.means()[0] == doctest::Approx(0.5));
  CHECK(env.means()[1] == doctest::Approx(0.5 + delta));
  CHECK(env.means()[2] == doctest::Approx(0.5 + delta * (1.0 - std::sqrt(delta))));
  CHECK(env.means()[3] == doctest::Approx(0.0));
  CHECK(env.means()[1] - env.means()[2] == doctest::Approx(std::pow(delta, 1.5)));

  // Adding the base arm to the bonus arm gains nothing.
  CHECK(env.pair_mean(0, 1) == doctest::Approx(env.means()[1]).epsilon(1e-12));

  Rng rng(3);
  Vec out(6);
  for (int i = 0; i < 5000; ++i) {
    env.realize_step(rng, out);
    const double a = out[1] - out[0], b = out[2] - out[0];
    CHECK((a == doctest::Approx(0.0) || a == doctest::Approx(1.0 / 3)));
    CHECK((b == doctest::Approx(0.0) || b == doctest::Approx(1.0 / 3)));
    if (b > 0.1) CHECK(a > 0.1);  // arm-3 bonus only fires with the arm-2 bonus
    CHECK(out[3] == 0.0);
    CHECK(out[4] == 0.0);
    CHECK(out[5] == 0.0);
  }

  CHECK_THROWS_AS(tight_instance(2, 0.04), ParameterError);
  CHECK_THROWS_AS(tight_instance(6, 0.2), ParameterError);
  CHECK_THROWS_AS(tight_instance(6, 0.0), ParameterError);
}

TEST_CASE("best-probe feedback") {
  const Vec rewards = {0.1, 0.3, 0.7, 0.5};
  const std::vector<int> pair = {1, 2};
  CHECK(best_probe(rewards, pair, ProbeDirection::MaxReward).best_index == 2);
  CHECK(best_probe(rewards, pair, ProbeDirection::MinLoss).best_index == 1);

  const Vec tied = {0.5, 0.5};
  const std::vector<int> both = {0, 1};
  CHECK(best_probe(tied, both, ProbeDirection::MaxReward).best_index == 0);

  const std::vector<int> single = {3};
  CHECK(best_probe(rewards, single, ProbeDirection::MaxReward).best_index == 3);

  CHECK_THROWS_AS(best_probe(rewards, std::vector<int>{}, ProbeDirection::MaxReward),
                  ParameterError);
  CHECK_THROWS_AS(best_probe(rewards, std::vector<int>{9}, ProbeDirection::MaxReward),
                  ParameterError);
}

TEST_CASE("corrupted comparison flips to the worse option") {
  const Vec losses = {0.2, 0.8};
  const std::vector<int> pair = {0, 1};
  const CorruptionSchedule sched = CorruptionSchedule::front_loaded(3);

  // Steps 1..3 corrupted, later steps clean.
  CHECK(best_probe_corrupted(losses, pair, ProbeDirection::MinLoss, sched, 1).best_index == 1);
  CHECK(best_probe_corrupted(losses, pair, ProbeDirection::MinLoss, sched, 4).best_index == 0);

  // Corrupted tie reports the option the tie rule would not pick.
  const Vec tied = {0.5, 0.5};
  CHECK(best_probe_corrupted(tied, pair, ProbeDirection::MinLoss, sched, 2).best_index == 1);
  CHECK(best_probe_corrupted(tied, pair, ProbeDirection::MinLoss, sched, 9).best_index == 0);

  CHECK_THROWS_AS(
      best_probe_corrupted(losses, std::vector<int>{0}, ProbeDirection::MinLoss, sched, 1),
      ParameterError);
}

TEST_CASE("all-values feedback") {
  const Vec rewards = {0.1, 0.5, 0.9};
  const std::vector<int> probed = {0, 2};
  const ProbeFeedback fb = all_probe(rewards, probed);
  REQUIRE(fb.values.size() == 2);
  CHECK(fb.values[0] == std::pair<int, double>{0, 0.1});
  CHECK(fb.values[1] == std::pair<int, double>{2, 0.9});
}

TEST_CASE("stream generators") {
  const AdversarialStream c = make_adversarial("constant", 2, 5, 0, {1.0, 0.0});
  for (long t = 1; t <= 5; ++t) CHECK(c.loss(t) == Vec{1.0, 0.0});

  const AdversarialStream alt = make_adversarial("alternating", 2, 4, 0, {1.0, 0.0});
  CHECK(alt.loss(1) == Vec{1.0, 1.0});  // (t+j) parity flips entry by entry
  CHECK(alt.loss(2) == Vec{0.0, 0.0});

  const AdversarialStream r1 = make_adversarial("seeded-random", 3, 100, 77);
  const AdversarialStream r2 = make_adversarial("seeded-random", 3, 100, 77);
  CHECK(r1.losses() == r2.losses());
  for (const Vec& l : r1.losses()) {
    for (double v : l) CHECK((v == 0.0 || v == 1.0));
  }

  const AdversarialStream lin = make_adversarial("seeded-random", 3, 100, 77, {}, "linear");
  for (const Vec& l : lin.losses()) {
    for (double v : l) CHECK((v >= -1.0 && v <= 1.0));
  }

  const AdversarialStream fr = make_adversarial("frontload", 1, 6, 0, {1.0}, "linear", 3);
  CHECK(fr.loss(1) == Vec{1.0});
  CHECK(fr.loss(2) == Vec{-1.0});
  CHECK(fr.loss(3) == Vec{1.0});
  CHECK(fr.loss(4) == Vec{0.0});

  CHECK_THROWS_AS(make_adversarial("nope", 1, 1, 0), ParameterError);
}

TEST_CASE("streams round-trip through the file format") {
  const AdversarialStream s = make_adversarial("seeded-random", 2, 20, 5, {}, "linear");
  const std::string path = (std::filesystem::temp_directory_path() / "stream_rt.txt").string();
  s.save(path);
  const AdversarialStream back = AdversarialStream::load(path);
  CHECK(back.dim() == 2);
  CHECK(back.horizon() == 20);
  CHECK(back.losses() == s.losses());
  std::remove(path.c_str());
}

TEST_CASE("corruption schedules respect the budget") {
  const CorruptionSchedule front = CorruptionSchedule::front_loaded(4);
  long count = 0;
  for (long t = 1; t <= 100; ++t) count += front.corrupted(t) ? 1 : 0;
  CHECK(count == 4);
  CHECK(front.corrupted(4));
  CHECK_FALSE(front.corrupted(5));

  const CorruptionSchedule rnd = CorruptionSchedule::uniform_random(10, 50, 9);
  count = 0;
  for (long t = 1; t <= 50; ++t) count += rnd.corrupted(t) ? 1 : 0;
  CHECK(count == 10);  // distinct steps inside [1, horizon]
  CHECK(rnd.budget() == 10);

  const CorruptionSchedule ex = CorruptionSchedule::explicit_steps({7, 3});
  CHECK(ex.corrupted(3));
  CHECK(ex.corrupted(7));
  CHECK_FALSE(ex.corrupted(5));

  CHECK_THROWS_AS(CorruptionSchedule::uniform_random(60, 50, 1), ParameterError);
}
