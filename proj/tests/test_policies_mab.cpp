#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "probe/policies_mab.hpp"

using namespace probe;

namespace {

SampleStats make_stats(long count, double mean, double var) {
  SampleStats s;
  s.count = count;
  s.mean_ = mean;
  s.m2_ = var * static_cast<double>(count);
  return s;
}

}  // namespace

TEST_CASE("variance-aware index formula") {
  const double lt = std::log(3.0);
  CHECK(ucbv_index(0.5, 0.25, 100, 3) ==
        doctest::Approx(0.5 + std::sqrt(2.4 * 0.25 * lt / 100) + 3.6 * lt / 100));
  // At ln t = 1 the example value is 0.5 + sqrt(0.006) + 0.036.
  CHECK(0.5 + std::sqrt(2.4 * 0.25 / 100) + 3.6 / 100 == doctest::Approx(0.613460).epsilon(1e-6));
  CHECK(ucbv_index(0.5, 0.25, 100, 1) == doctest::Approx(0.5));  // ln 1 = 0
  CHECK(ucbv_index(0.7, 0.0, 1000000, 100) == doctest::Approx(0.7).epsilon(1e-3));
  CHECK(ucbv_index(0.5, 0.25, 0, 10) == std::numeric_limits<double>::infinity());
  CHECK(ucbv_index(SampleStats{}, 10) == std::numeric_limits<double>::infinity());
  CHECK(ucbv_index(make_stats(100, 0.5, 0.25), 3) == doctest::Approx(ucbv_index(0.5, 0.25, 100, 3)));
}

TEST_CASE("optimistic-variance index formula") {
  CHECK(allprobe_index(make_stats(10, 0.5, 0.2), 0.1) == doctest::Approx(0.52));
  CHECK(allprobe_index(make_stats(10, 0.5, 0.0), 0.1) == doctest::Approx(0.5));
  CHECK(allprobe_index(make_stats(10, 0.5, 0.2), 0.0) == doctest::Approx(0.5));
  CHECK(allprobe_index(SampleStats{}, 0.1) == std::numeric_limits<double>::infinity());
}

TEST_CASE("pair indexer is a lexicographic bijection") {
  for (int n = 2; n <= 8; ++n) {
    const PairIndexer px(n);
    CHECK(px.count() == n * (n - 1) / 2);
    int rank = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        CHECK(px.index(i, j) == rank);
        CHECK(px.pair(rank) == std::pair<int, int>{i, j});
        ++rank;
      }
    }
  }
  const PairIndexer px(4);
  CHECK_THROWS_AS(px.index(2, 1), ParameterError);
  CHECK_THROWS_AS(px.pair(6), ParameterError);
}

TEST_CASE("pair policy initializes every meta-arm then follows the index") {
  MetaUcbVPolicy p(4);
  const PairIndexer px(4);
  // Unplayed meta-arms have infinite index; ties resolve lexicographically,
  // so the first 6 steps sweep the pairs in order.
  for (long t = 1; t <= 6; ++t) {
    const auto sel = p.select(t);
    CHECK(sel == px.pair(static_cast<int>(t - 1)));
    p.observe(sel.first, sel.second, sel == std::pair<int, int>{0, 1} ? 0.9 : 0.1);
  }
  // One dominant observed max: that pair is selected next.
  CHECK(p.select(7) == std::pair<int, int>{0, 1});
  CHECK(p.pair_stats(0, 1).mean() == doctest::Approx(0.9));
  CHECK(p.pair_stats(0, 1).count == 1);

  CHECK_THROWS_AS(MetaUcbVPolicy(1), ParameterError);
}

TEST_CASE("explore-exploit policy selection") {
  ExploreExploitPolicy p(3, 0.1);
  CHECK_THROWS_AS(ExploreExploitPolicy(2), ParameterError);

  // Round-robin exploration.
  CHECK(p.select(1).explore == 0);
  CHECK(p.select(2).explore == 1);
  CHECK(p.select(3).explore == 2);
  CHECK(p.select(4).explore == 0);

  // All indices infinite: tie rule gives the two lowest arms.
  auto sel = p.select(1);
  CHECK(sel.exploit[0] == 0);
  CHECK(sel.exploit[1] == 1);

  p.observe_explore(0, 0.9);
  p.observe_explore(1, 0.1);
  p.observe_explore(2, 0.5);
  sel = p.select(4);
  CHECK(sel.exploit[0] == 0);
  CHECK(sel.exploit[1] == 2);

  // Exploration floor: under round-robin feeding every arm has >= floor(t/n)
  // samples.
  ExploreExploitPolicy q(4);
  const long horizon = 103;
  for (long t = 1; t <= horizon; ++t) {
    const auto s = q.select(t);
    q.observe_explore(s.explore, 0.5);
  }
  for (int i = 0; i < 4; ++i) CHECK(q.arm_stats(i).count >= horizon / 4);
}

TEST_CASE("gain bookkeeping") {
  CorrExploitPolicy p(3);
  p.observe_explore(0, 1, 0.3, 0.8);
  CHECK(p.gain_stats(1, 0).count == 1);
  CHECK(p.gain_stats(1, 0).mean() == doctest::Approx(0.5));
  CHECK(p.gain_stats(0, 1).mean() == doctest::Approx(0.0));
  CHECK(p.mean_stats(0).mean() == doctest::Approx(0.3));
  CHECK(p.mean_stats(1).mean() == doctest::Approx(0.8));

  // Comonotone arms never show a gain.
  CorrExploitPolicy q(3);
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const double x = rng.next_unit();
    q.observe_explore(0, 1, x, x);
  }
  CHECK(q.gain_stats(1, 0).mean() == doctest::Approx(0.0));

  CHECK_THROWS_AS(p.observe_explore(1, 0, 0.1, 0.2), ParameterError);
  CHECK_THROWS_AS(p.gain_stats(1, 1), ParameterError);
}

TEST_CASE("correlation policy warm start and partner choice") {
  const int n = 4;
  CorrExploitPolicy p(n);
  const PairIndexer px(n);

  // Warm start: exploit duplicates the explore pair until each pair is seen.
  for (long t = 1; t <= px.count(); ++t) {
    const auto sel = p.select(t);
    CHECK(sel.warm_start);
    const auto [i, j] = px.pair(static_cast<int>((t - 1) % px.count()));
    CHECK(sel.explore[0] == i);
    CHECK(sel.explore[1] == j);
    CHECK(sel.exploit[0] == i);
    CHECK(sel.exploit[1] == j);
    CHECK_FALSE(p.warmed_up());
    // Arm 1 dominant overall, but arm 3 beats it when played together.
    double vi = (i == 1) ? 0.9 : (i == 3 ? 0.6 : 0.1);
    double vj = (j == 1) ? 0.9 : (j == 3 ? 0.6 : 0.1);
    if (i == 1 && j == 3) vj = 0.95;
    p.observe_explore(i, j, vi, vj);
  }
  CHECK(p.warmed_up());

  const auto sel = p.select(px.count() + 1);
  CHECK_FALSE(sel.warm_start);
  CHECK(p.primary_arm() == 1);
  CHECK(sel.exploit[0] == 1);
  CHECK(p.partner_of(0) == 1);  // biggest gain over arm 0 comes from arm 1
  CHECK(p.partner_of(1) == 3);  // arm 3 offers the best gain over arm 1
  CHECK(sel.exploit[1] == 3);

  // Pair-count floor after many cycles.
  const long horizon = 7 * px.count() + 3;
  CorrExploitPolicy q(n);
  std::vector<long> counts(px.count(), 0);
  for (long t = 1; t <= horizon; ++t) {
    const auto s = q.select(t);
    q.observe_explore(s.explore[0], s.explore[1], 0.5, 0.5);
    counts[px.index(s.explore[0], s.explore[1])] += 1;
  }
  for (long c : counts) CHECK(c >= horizon / px.count());
}

TEST_CASE("baseline top-two policy") {
  Ucb1TopTwoPolicy p(3);
  // Unplayed arms have infinite index; tie rule gives the lowest pair.
  CHECK(p.select(1) == std::pair<int, int>{0, 1});
  p.observe(0, 0.9);
  p.observe(1, 0.1);
  p.observe(2, 0.8);
  CHECK(p.select(4) == std::pair<int, int>{0, 2});
}
