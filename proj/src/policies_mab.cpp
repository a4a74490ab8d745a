#include "probe/policies_mab.hpp"

#include <cmath>
#include <limits>

namespace probe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_arms(int arms, int minimum) {
  if (arms < minimum) throw ParameterError("too few arms for policy");
}

}  // namespace

double ucbv_index(double m, double v, long s, long t) {
  if (s == 0) return kInf;
  const double lt = std::log(static_cast<double>(t));
  return m + std::sqrt(2.4 * v * lt / static_cast<double>(s)) +
         3.6 * lt / static_cast<double>(s);
}

double ucbv_index(const SampleStats& stats, long t) {
  if (stats.count == 0) return kInf;
  return ucbv_index(stats.mean(), stats.variance(), stats.count, t);
}

double allprobe_index(const SampleStats& stats, double epsilon) {
  if (stats.count == 0) return kInf;
  return stats.mean() + epsilon * stats.variance();
}

int PairIndexer::index(int i, int j) const {
  if (!(0 <= i && i < j && j < n)) throw ParameterError("bad pair");
  // Rank of (i,j) in lexicographic order over i<j.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> PairIndexer::pair(int idx) const {
  if (idx < 0 || idx >= count()) throw ParameterError("pair rank out of range");
  int i = 0;
  while (idx >= n - 1 - i) {
    idx -= n - 1 - i;
    ++i;
  }
  return {i, i + 1 + idx};
}

MetaUcbVPolicy::MetaUcbVPolicy(int arms) : pairs_(arms), stats_(pairs_.count()) {
  check_arms(arms, 2);
}

std::pair<int, int> MetaUcbVPolicy::select(long t) {
  int best = 0;
  double best_idx = -kInf;
  for (int r = 0; r < pairs_.count(); ++r) {
    const double idx = ucbv_index(stats_[r], t);
    if (idx > best_idx) {
      best = r;
      best_idx = idx;
    }
  }
  return pairs_.pair(best);
}

void MetaUcbVPolicy::observe(int i, int j, double max_value) {
  stats_.at(pairs_.index(i, j)).add(max_value);
}

const SampleStats& MetaUcbVPolicy::pair_stats(int i, int j) const {
  return stats_.at(pairs_.index(i, j));
}

ExploreExploitPolicy::ExploreExploitPolicy(int arms, double epsilon)
    : n_(arms), epsilon_(epsilon), stats_(arms) {
  check_arms(arms, 3);
  if (epsilon < 0.0) throw ParameterError("epsilon must be nonnegative");
}

ExploreExploitPolicy::Selection ExploreExploitPolicy::select(long t) const {
  Selection sel;
  sel.explore = static_cast<int>((t - 1) % n_);
  // Top two by index (ties to lower arm id).
  int first = -1, second = -1;
  double fv = -kInf, sv = -kInf;
  for (int i = 0; i < n_; ++i) {
    const double idx = allprobe_index(stats_[i], epsilon_);
    if (idx > fv) {
      second = first;
      sv = fv;
      first = i;
      fv = idx;
    } else if (idx > sv) {
      second = i;
      sv = idx;
    }
  }
  sel.exploit[0] = std::min(first, second);
  sel.exploit[1] = std::max(first, second);
  return sel;
}

void ExploreExploitPolicy::observe_explore(int arm, double value) {
  stats_.at(arm).add(value);
}

CorrExploitPolicy::CorrExploitPolicy(int arms)
    : n_(arms), pairs_(arms), mu_(arms), gain_(static_cast<std::size_t>(arms) * arms) {
  check_arms(arms, 2);
}

const SampleStats& CorrExploitPolicy::gain_stats(int j, int i) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) throw ParameterError("bad gain pair");
  return gain_[static_cast<std::size_t>(j) * n_ + i];
}

bool CorrExploitPolicy::warmed_up() const {
  // Every pair seen at least once; pairs are visited in a fixed cycle, so
  // checking the last pair suffices.
  return gain_[static_cast<std::size_t>(n_ - 1) * n_ + (n_ - 2)].count > 0;
}

int CorrExploitPolicy::primary_arm() const {
  int best = 0;
  for (int i = 1; i < n_; ++i) {
    if (mu_[i].mean() > mu_[best].mean()) best = i;
  }
  return best;
}

int CorrExploitPolicy::partner_of(int i) const {
  int best = -1;
  double best_gain = -kInf;
  for (int j = 0; j < n_; ++j) {
    if (j == i) continue;
    const double g = gain_[static_cast<std::size_t>(j) * n_ + i].mean();
    if (g > best_gain) {
      best = j;
      best_gain = g;
    }
  }
  return best;
}

CorrExploitPolicy::Selection CorrExploitPolicy::select(long t) const {
  Selection sel;
  const auto [i, j] = pairs_.pair(static_cast<int>((t - 1) % pairs_.count()));
  sel.explore[0] = i;
  sel.explore[1] = j;
  sel.warm_start = !warmed_up();
  if (sel.warm_start) {
    sel.exploit[0] = i;
    sel.exploit[1] = j;
  } else {
    const int primary = primary_arm();
    sel.exploit[0] = primary;
    sel.exploit[1] = partner_of(primary);
  }
  return sel;
}

void CorrExploitPolicy::observe_explore(int i, int j, double xi, double xj) {
  if (!(0 <= i && i < j && j < n_)) throw ParameterError("bad explore pair");
  mu_[i].add(xi);
  mu_[j].add(xj);
  gain_[static_cast<std::size_t>(j) * n_ + i].add(std::max(xj - xi, 0.0));
  gain_[static_cast<std::size_t>(i) * n_ + j].add(std::max(xi - xj, 0.0));
}

Ucb1TopTwoPolicy::Ucb1TopTwoPolicy(int arms) : n_(arms), stats_(arms) {
  check_arms(arms, 2);
}

std::pair<int, int> Ucb1TopTwoPolicy::select(long t) const {
  int first = -1, second = -1;
  double fv = -kInf, sv = -kInf;
  for (int i = 0; i < n_; ++i) {
    double idx = kInf;
    if (stats_[i].count > 0) {
      idx = stats_[i].mean() +
            std::sqrt(2.0 * std::log(static_cast<double>(t)) / stats_[i].count);
    }
    if (idx > fv) {
      second = first;
      sv = fv;
      first = i;
      fv = idx;
    } else if (idx > sv) {
      second = i;
      sv = idx;
    }
  }
  return {std::min(first, second), std::max(first, second)};
}

void Ucb1TopTwoPolicy::observe(int arm, double value) { stats_.at(arm).add(value); }

}  // namespace probe
