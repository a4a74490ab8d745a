#pragma once
// Shared domain types, noise samplers, running statistics and regret
// accounting for the probe-augmented online learning policies.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "probe/rng.hpp"

namespace probe {

using Vec = std::vector<double>;

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Decision space: an explicit finite point set in [-1,1]^d, the hypercube
// {-1,1}^d, or the vertices of the unit simplex.
// ---------------------------------------------------------------------------
struct OptionSet {
  enum class Kind { ExplicitPoints, Hypercube, SimplexVertices };

  Kind kind = Kind::Hypercube;
  int dim = 0;
  std::vector<Vec> points;  // only for ExplicitPoints

  static OptionSet hypercube(int d);
  static OptionSet simplex_vertices(int d);
  static OptionSet explicit_points(std::vector<Vec> pts);

  // Number of distinct options when finite (hypercube counts corners).
  std::size_t option_count() const;
  // Materialize option i as a point (ExplicitPoints / SimplexVertices only).
  Vec point(std::size_t i) const;
};

// Minimizer of <cost, w> over the option set. Ties break toward the
// lexicographically smallest point (lowest index for explicit sets); a zero
// cost coordinate on the hypercube maps to -1.
Vec argmin_linear(const OptionSet& options, std::span<const double> cost);
// Index form for the finite kinds (ExplicitPoints, SimplexVertices).
std::size_t argmin_linear_index(const OptionSet& options, std::span<const double> cost);

struct CumulativeLoss {
  Vec total;  // L^{t-1}
  long step = 0;

  explicit CumulativeLoss(int d) : total(d, 0.0) {}
  void accumulate(std::span<const double> loss);
};

// ---------------------------------------------------------------------------
// Running sample mean / biased (divide-by-s) sample variance.
// ---------------------------------------------------------------------------
struct SampleStats {
  long count = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;  // sum of squared deviations

  void add(double observation);
  double mean() const;
  double variance() const;  // divide-by-count
};

SampleStats update_stats(SampleStats stats, double observation);

// ---------------------------------------------------------------------------
// Algorithm parameters (validated on construction by the policies that use
// them; defaults follow the analysis constants).
// ---------------------------------------------------------------------------
struct AlgoParams {
  double eta = 0.4;       // privacy / learning rate, in (0, 0.4]
  double epsilon = 0.1;   // optimistic-variance weight
  double p = 1.0;         // hint-use probability
  long budget = 0;        // corruption budget B
  int probes = 2;         // k
  double beta = 1.0;      // gradient-norm bound (convex setting)
  double gamma = 0.0;     // Hessian-eigenvalue bound (convex setting)
};

// eta = 1/(5 sqrt(B+1)), p = 5 eta for the imperfect-hint policy.
AlgoParams imperfect_hint_params(long budget);

// ---------------------------------------------------------------------------
// Per-step trace. Kept POD-ish so a 1e5-step run stays cheap; point-valued
// actions are stored in a side matrix.
// ---------------------------------------------------------------------------
struct Trace {
  struct Step {
    std::array<std::int32_t, 4> probed{-1, -1, -1, -1};
    std::int8_t probe_count = 0;
    std::int32_t feedback_index = -1;                 // best-probe feedback
    std::array<double, 4> feedback_values{};          // all-probe feedback
    std::int32_t action = -1;                         // arm index when indexed
    double value = 0.0;                               // realized loss / reward
    double cum_regret = 0.0;
  };

  std::vector<Step> steps;
  int point_dim = 0;
  std::vector<double> action_points;  // row-major, steps x point_dim when used

  void reserve(long horizon) { steps.reserve(static_cast<std::size_t>(horizon)); }
  double final_regret() const { return steps.empty() ? 0.0 : steps.back().cum_regret; }

  // FNV-1a over the raw bytes of every step record; used by the
  // determinism checks.
  std::uint64_t content_hash() const;
  void save(const std::string& path) const;
};

// ---------------------------------------------------------------------------
// Noise samplers (inverse-CDF; one or a fixed number of uniforms per draw).
// ---------------------------------------------------------------------------
double sample_laplace(double scale, double u);
double sample_gumbel(double eta, double u);  // scale 1/eta, CDF exp(-exp(-eta z))
// Density proportional to exp(-eta ||x||_2 / beta): uniform direction on the
// sphere times a Gamma(shape d, scale beta/eta) magnitude.
Vec sample_gamma_vector(int d, double eta, double beta, Rng& rng);

// ---------------------------------------------------------------------------
// Regret accounting.
// ---------------------------------------------------------------------------
// sum_t <l^t, w^t> - min_w sum_t <l^t, w>, actions taken from the trace's
// point matrix.
double regret_linear(const Trace& trace, const OptionSet& options,
                     const std::vector<Vec>& losses);

// T * max_i mu_i minus the sum of credited per-step rewards.
double pseudo_regret_mab(std::span<const double> credited_rewards,
                         std::span<const double> true_means);

}  // namespace probe
