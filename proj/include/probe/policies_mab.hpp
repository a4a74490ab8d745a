#pragma once
// The three bandit policies: Meta UCB-V (pair probes with best-arm
// feedback), the simultaneous explore-exploit policy (k=3, all-values
// feedback) and the correlation-exploitation policy (k=4), plus the
// UCB1-top-two baseline.

#include "probe/core.hpp"

namespace probe {

// m + sqrt(2.4 V ln t / s) + 3.6 ln t / s; +inf when s = 0.
double ucbv_index(double m, double v, long s, long t);
double ucbv_index(const SampleStats& stats, long t);

// m + epsilon * V; +inf when s = 0.
double allprobe_index(const SampleStats& stats, double epsilon);

// Unordered pairs (i,j), i<j, in lexicographic order.
struct PairIndexer {
  int n = 0;
  explicit PairIndexer(int arms) : n(arms) {}
  int count() const { return n * (n - 1) / 2; }
  int index(int i, int j) const;            // i < j
  std::pair<int, int> pair(int idx) const;  // lexicographic rank -> (i,j)
};

// ---------------------------------------------------------------------------
// Meta UCB-V: UCB-V over the n(n-1)/2 meta-arms; each meta-arm observed
// through the max of its pair.
// ---------------------------------------------------------------------------
class MetaUcbVPolicy {
 public:
  explicit MetaUcbVPolicy(int arms);

  // Pair to probe at step t (1-based). Each meta-arm is played once before
  // index-based selection (s=0 indices are +inf; ties lexicographic).
  std::pair<int, int> select(long t);
  // Observed value of the played meta-arm: the realized max of the pair.
  void observe(int i, int j, double max_value);

  const SampleStats& pair_stats(int i, int j) const;

 private:
  PairIndexer pairs_;
  std::vector<SampleStats> stats_;
};

// ---------------------------------------------------------------------------
// Simultaneous explore-exploit (k=3): round-robin exploration probe plus the
// top two arms by m + eps*V; exploration feedback applied at end of step.
// ---------------------------------------------------------------------------
class ExploreExploitPolicy {
 public:
  // epsilon = 0 gives the plain sample-mean ranking (experiment mode).
  ExploreExploitPolicy(int arms, double epsilon = 0.1);

  struct Selection {
    int explore;     // round-robin arm
    int exploit[2];  // top-2 by index, exploit[0] < exploit[1]
  };
  Selection select(long t) const;  // t is 1-based
  void observe_explore(int arm, double value);

  const SampleStats& arm_stats(int arm) const { return stats_.at(arm); }

 private:
  int n_;
  double epsilon_;
  std::vector<SampleStats> stats_;
};

// ---------------------------------------------------------------------------
// Correlation-exploitation (k=4): explore probes cycle over pairs feeding
// gain estimates G_ji = E[(X_j - X_i)_+]; exploit probes play the
// highest-mean arm with its best-gain partner. During the first full pair
// cycle the exploit probes duplicate the explore pair.
// ---------------------------------------------------------------------------
class CorrExploitPolicy {
 public:
  explicit CorrExploitPolicy(int arms);

  struct Selection {
    int explore[2];  // pair (i,j), i<j
    int exploit[2];  // primary, partner (unordered as probed)
    bool warm_start;
  };
  Selection select(long t) const;  // t is 1-based
  // Feed the explore pair's realized values.
  void observe_explore(int i, int j, double xi, double xj);

  int primary_arm() const;               // argmax of mean estimates
  int partner_of(int i) const;           // argmax_j of gain estimates G_ji
  const SampleStats& mean_stats(int i) const { return mu_.at(i); }
  const SampleStats& gain_stats(int j, int i) const;  // \hat G_ji
  bool warmed_up() const;

 private:
  int n_;
  PairIndexer pairs_;
  std::vector<SampleStats> mu_;
  std::vector<SampleStats> gain_;  // row-major j*n + i
};

// ---------------------------------------------------------------------------
// UCB1 top-two baseline (not claim-bearing): probes the two arms with the
// highest m + sqrt(2 ln t / s); stats fed by the max-feedback play like
// Meta UCB-V feeds pairs.
// ---------------------------------------------------------------------------
class Ucb1TopTwoPolicy {
 public:
  explicit Ucb1TopTwoPolicy(int arms);
  std::pair<int, int> select(long t) const;
  void observe(int arm, double value);

 private:
  int n_;
  std::vector<SampleStats> stats_;
};

}  // namespace probe
