#pragma once
// Online linear/convex optimization policies with two probes: LwC, the
// diagnostic BtRL, the imperfect-hint LwC, HwC for experts, and CwC for
// convex losses. Each policy exposes a propose/observe pair; the harness
// owns the probe oracle and the loss stream.

#include <functional>

#include "probe/core.hpp"

namespace probe {

// ---------------------------------------------------------------------------
// LwC: two fresh Laplace(d/eta) perturbations of the cumulative loss per
// step; probe the two regularized optima for the smaller loss.
// ---------------------------------------------------------------------------
class LwcPolicy {
 public:
  LwcPolicy(OptionSet options, double eta);

  struct Proposal {
    Vec a, b;
  };
  Proposal propose(Rng& rng);
  void observe(std::span<const double> loss);  // full-information update

  const OptionSet& options() const { return options_; }
  double eta() const { return eta_; }
  const Vec& cumulative() const { return loss_.total; }

 private:
  OptionSet options_;
  double eta_;
  CumulativeLoss loss_;
  Vec perturbed_;  // scratch
};

// ---------------------------------------------------------------------------
// BtRL diagnostic: a single noise vector drawn up front; the step-t action
// peeks at the true l^t (not realizable online).
// ---------------------------------------------------------------------------
class BtrlPolicy {
 public:
  BtrlPolicy(OptionSet options, double eta, Rng& rng);
  // Injected noise (e.g. zero) for the leader-recovery checks.
  BtrlPolicy(OptionSet options, Vec noise);

  Vec step(std::span<const double> current_loss);  // also advances L

  const Vec& noise() const { return noise_; }

 private:
  OptionSet options_;
  Vec noise_;
  CumulativeLoss loss_;
  Vec perturbed_;
};

// ---------------------------------------------------------------------------
// Imperfect-hint LwC: plays the hinted option with probability p = 5*eta,
// otherwise falls back to a^t; eta = 1/(5 sqrt(B+1)).
// ---------------------------------------------------------------------------
class LwcImperfectPolicy {
 public:
  LwcImperfectPolicy(OptionSet options, long budget);

  struct Proposal {
    Vec a, b;
  };
  Proposal propose(Rng& rng);
  // `hint_is_a`: which proposal the (possibly corrupted) oracle endorsed.
  // Draws the dedicated p-coin; returns the action to play and whether the
  // hint was used.
  struct Decision {
    Vec action;
    bool used_hint;
  };
  Decision decide(bool hint_is_a, Rng& rng);
  void observe(std::span<const double> loss);

  // Post-hoc bookkeeping: the harness tells the policy whether the hint it
  // received was correct.
  void record_hint_outcome(bool correct) { mispredictions_ += correct ? 0 : 1; }
  long mispredictions() const { return mispredictions_; }

  const AlgoParams& params() const { return params_; }

 private:
  OptionSet options_;
  AlgoParams params_;
  CumulativeLoss loss_;
  Vec perturbed_;
  Proposal last_;
  long mispredictions_ = 0;
};

// ---------------------------------------------------------------------------
// HwC: Hedge weights (kept as log-weights), two i.i.d. arm draws per step,
// probe for the smaller loss.
// ---------------------------------------------------------------------------
class HwcPolicy {
 public:
  HwcPolicy(int arms, double eta);

  struct Proposal {
    int a, b;
  };
  Proposal propose(Rng& rng);
  void observe(std::span<const double> loss);  // hedge update

  // Current probabilities p_i (max-shifted exponentiation of log-weights).
  Vec probabilities() const;
  int sample_arm(Rng& rng) const;
  int arms() const { return static_cast<int>(log_weights_.size()); }
  double eta() const { return eta_; }

 private:
  double eta_;
  Vec log_weights_;
};

// Classic Hedge (k=1 baseline): sample one arm from the same weights.
class HedgePolicy {
 public:
  HedgePolicy(int arms, double eta) : inner_(arms, eta) {}
  int propose(Rng& rng) { return inner_.sample_arm(rng); }
  void observe(std::span<const double> loss) { inner_.observe(loss); }
  Vec probabilities() const { return inner_.probabilities(); }

 private:
  HwcPolicy inner_;
};

// ---------------------------------------------------------------------------
// CwC: convex losses, Gamma-vector noise, quadratic regularizer.
// ---------------------------------------------------------------------------

// Quadratic loss a*||w||^2 + <b, w> + c (a >= 0); closed under summation,
// which keeps the cumulative objective O(d) to evaluate.
struct QuadLoss {
  double a = 0.0;
  Vec b;
  double c = 0.0;

  double value(std::span<const double> w) const;
  void add_gradient(std::span<const double> w, std::span<double> grad) const;
  void accumulate_into(QuadLoss& sum) const;

  static QuadLoss squared_distance(const Vec& v);  // ||w - v||^2
  static QuadLoss linear(const Vec& b);
};

struct ConvexDomain {
  enum class Kind { Ball, ExplicitPoints };
  Kind kind = Kind::Ball;
  int dim = 0;
  double radius = 1.0;
  std::vector<Vec> points;

  static ConvexDomain ball(int d, double radius = 1.0);
  static ConvexDomain explicit_points(std::vector<Vec> pts);
  void project(std::span<double> w) const;  // Ball only
};

struct ConvexProblem {
  ConvexDomain domain;
  double beta;   // gradient-norm bound
  double gamma;  // Hessian-eigenvalue bound
};

class CwcPolicy {
 public:
  CwcPolicy(ConvexProblem problem, double eta);

  struct Proposal {
    Vec a, b;
  };
  Proposal propose(Rng& rng);
  void observe(const QuadLoss& loss);

  // argmin over the domain of cumulative(w) + <noise, w> + (gamma/eta)||w||^2.
  // Explicit domains enumerate; the ball runs projected gradient descent to a
  // 1e-8 projected-gradient tolerance (throws on non-convergence).
  Vec regularized_argmin(const Vec& noise) const;

 private:
  ConvexProblem problem_;
  double eta_;
  QuadLoss cumulative_;
};

}  // namespace probe
