#include "probe/policies_linear.hpp"

#include <algorithm>
#include <cmath>

#include "probe/kernels.hpp"

namespace probe {

namespace {

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 0.4)) throw ParameterError("eta outside (0, 0.4]");
}

// L + coordinatewise Laplace(d/eta) noise into `out`.
void perturb_laplace(const Vec& cumulative, double eta, Rng& rng, Vec& out) {
  const int d = static_cast<int>(cumulative.size());
  const double scale = static_cast<double>(d) / eta;
  out.resize(d);
  for (int j = 0; j < d; ++j) {
    out[j] = cumulative[j] + sample_laplace(scale, rng.next_unit());
  }
}

}  // namespace

LwcPolicy::LwcPolicy(OptionSet options, double eta)
    : options_(std::move(options)), eta_(eta), loss_(options_.dim) {
  check_eta(eta_);
}

LwcPolicy::Proposal LwcPolicy::propose(Rng& rng) {
  Proposal p;
  perturb_laplace(loss_.total, eta_, rng, perturbed_);
  p.a = argmin_linear(options_, perturbed_);
  perturb_laplace(loss_.total, eta_, rng, perturbed_);
  p.b = argmin_linear(options_, perturbed_);
  return p;
}

void LwcPolicy::observe(std::span<const double> loss) { loss_.accumulate(loss); }

BtrlPolicy::BtrlPolicy(OptionSet options, double eta, Rng& rng)
    : options_(std::move(options)), loss_(options_.dim) {
  check_eta(eta);
  const double scale = static_cast<double>(options_.dim) / eta;
  noise_.resize(options_.dim);
  for (double& x : noise_) x = sample_laplace(scale, rng.next_unit());
}

BtrlPolicy::BtrlPolicy(OptionSet options, Vec noise)
    : options_(std::move(options)), noise_(std::move(noise)), loss_(options_.dim) {
  if (static_cast<int>(noise_.size()) != options_.dim) {
    throw ParameterError("noise dimension mismatch");
  }
}

Vec BtrlPolicy::step(std::span<const double> current_loss) {
  perturbed_.assign(noise_.begin(), noise_.end());
  kern::add(perturbed_.data(), loss_.total.data(), perturbed_.size());
  kern::add(perturbed_.data(), current_loss.data(), perturbed_.size());
  loss_.accumulate(current_loss);
  return argmin_linear(options_, perturbed_);
}

LwcImperfectPolicy::LwcImperfectPolicy(OptionSet options, long budget)
    : options_(std::move(options)),
      params_(imperfect_hint_params(budget)),
      loss_(options_.dim) {}

LwcImperfectPolicy::Proposal LwcImperfectPolicy::propose(Rng& rng) {
  perturb_laplace(loss_.total, params_.eta, rng, perturbed_);
  last_.a = argmin_linear(options_, perturbed_);
  perturb_laplace(loss_.total, params_.eta, rng, perturbed_);
  last_.b = argmin_linear(options_, perturbed_);
  return last_;
}

LwcImperfectPolicy::Decision LwcImperfectPolicy::decide(bool hint_is_a, Rng& rng) {
  const bool use_hint = rng.next_unit() < params_.p;  // one dedicated draw per step
  Decision d;
  d.used_hint = use_hint;
  d.action = use_hint ? (hint_is_a ? last_.a : last_.b) : last_.a;
  return d;
}

void LwcImperfectPolicy::observe(std::span<const double> loss) { loss_.accumulate(loss); }

HwcPolicy::HwcPolicy(int arms, double eta) : eta_(eta), log_weights_(arms, 0.0) {
  if (arms < 1) throw ParameterError("need at least one arm");
  check_eta(eta_);
}

Vec HwcPolicy::probabilities() const {
  const double shift = *std::max_element(log_weights_.begin(), log_weights_.end());
  Vec p(log_weights_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_weights_[i] - shift);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

int HwcPolicy::sample_arm(Rng& rng) const {
  const Vec p = probabilities();
  const double u = rng.next_unit();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

HwcPolicy::Proposal HwcPolicy::propose(Rng& rng) {
  Proposal pr;
  pr.a = sample_arm(rng);
  pr.b = sample_arm(rng);
  return pr;
}

void HwcPolicy::observe(std::span<const double> loss) {
  if (loss.size() != log_weights_.size()) throw ParameterError("loss dimension mismatch");
  kern::axpy(log_weights_.data(), -eta_, loss.data(), loss.size());
}

double QuadLoss::value(std::span<const double> w) const {
  double v = c;
  if (a != 0.0) v += a * kern::dot(w.data(), w.data(), w.size());
  if (!b.empty()) v += kern::dot(b.data(), w.data(), w.size());
  return v;
}

void QuadLoss::add_gradient(std::span<const double> w, std::span<double> grad) const {
  if (a != 0.0) kern::axpy(grad.data(), 2.0 * a, w.data(), w.size());
  if (!b.empty()) kern::add(grad.data(), b.data(), w.size());
}

void QuadLoss::accumulate_into(QuadLoss& sum) const {
  sum.a += a;
  sum.c += c;
  if (!b.empty()) {
    if (sum.b.empty()) sum.b.assign(b.size(), 0.0);
    kern::add(sum.b.data(), b.data(), b.size());
  }
}

QuadLoss QuadLoss::squared_distance(const Vec& v) {
  QuadLoss l;
  l.a = 1.0;
  l.b.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) l.b[i] = -2.0 * v[i];
  l.c = kern::dot(v.data(), v.data(), v.size());
  return l;
}

QuadLoss QuadLoss::linear(const Vec& b) {
  QuadLoss l;
  l.b = b;
  return l;
}

ConvexDomain ConvexDomain::ball(int d, double radius) {
  if (d < 1 || !(radius > 0.0)) throw ParameterError("bad ball domain");
  ConvexDomain dom;
  dom.kind = Kind::Ball;
  dom.dim = d;
  dom.radius = radius;
  return dom;
}

ConvexDomain ConvexDomain::explicit_points(std::vector<Vec> pts) {
  if (pts.empty()) throw ParameterError("empty domain");
  ConvexDomain dom;
  dom.kind = Kind::ExplicitPoints;
  dom.dim = static_cast<int>(pts.front().size());
  dom.points = std::move(pts);
  return dom;
}

void ConvexDomain::project(std::span<double> w) const {
  if (kind != Kind::Ball) throw ContractError("projection only for ball domains");
  const double norm = std::sqrt(kern::dot(w.data(), w.data(), w.size()));
  if (norm > radius) {
    const double s = radius / norm;
    for (double& x : w) x *= s;
  }
}

CwcPolicy::CwcPolicy(ConvexProblem problem, double eta)
    : problem_(std::move(problem)), eta_(eta) {
  check_eta(eta_);
  if (!(problem_.beta > 0.0) || problem_.gamma < 0.0) {
    throw ParameterError("beta must be positive and gamma nonnegative");
  }
}

Vec CwcPolicy::regularized_argmin(const Vec& noise) const {
  const int d = problem_.domain.dim;
  if (static_cast<int>(noise.size()) != d) throw ParameterError("noise dimension mismatch");
  const double reg = problem_.gamma / eta_;
  auto objective = [&](std::span<const double> w) {
    return cumulative_.value(w) + kern::dot(noise.data(), w.data(), w.size()) +
           reg * kern::dot(w.data(), w.data(), w.size());
  };
  if (problem_.domain.kind == ConvexDomain::Kind::ExplicitPoints) {
    std::size_t best = 0;
    double best_val = objective(problem_.domain.points[0]);
    for (std::size_t i = 1; i < problem_.domain.points.size(); ++i) {
      const double v = objective(problem_.domain.points[i]);
      if (v < best_val) {
        best = i;
        best_val = v;
      }
    }
    return problem_.domain.points[best];
  }

  // Projected gradient descent on a quadratic: curvature 2*(sum a + reg),
  // so the 1/L step gives linear convergence; the projected-gradient norm
  // certifies the optimality gap.
  const double curvature = 2.0 * (cumulative_.a + reg);
  const double step = curvature > 0.0 ? 1.0 / curvature : 1.0;
  Vec w(d, 0.0), grad(d), next(d);
  constexpr double kTol = 1e-8;
  constexpr int kMaxIter = 100000;
  for (int it = 0; it < kMaxIter; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    cumulative_.add_gradient(w, grad);
    kern::add(grad.data(), noise.data(), grad.size());
    kern::axpy(grad.data(), 2.0 * reg, w.data(), grad.size());
    next = w;
    kern::axpy(next.data(), -step, grad.data(), next.size());
    problem_.domain.project(next);
    double move2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double delta = next[j] - w[j];
      move2 += delta * delta;
    }
    w.swap(next);
    if (std::sqrt(move2) / step <= kTol) return w;
  }
  throw std::runtime_error("CwC inner solver did not converge; residual above tolerance");
}

CwcPolicy::Proposal CwcPolicy::propose(Rng& rng) {
  const int d = problem_.domain.dim;
  Proposal p;
  p.a = regularized_argmin(sample_gamma_vector(d, eta_, problem_.beta, rng));
  p.b = regularized_argmin(sample_gamma_vector(d, eta_, problem_.beta, rng));
  return p;
}

void CwcPolicy::observe(const QuadLoss& loss) { loss.accumulate_into(cumulative_); }

}  // namespace probe
