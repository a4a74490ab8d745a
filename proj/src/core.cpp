#include "probe/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

#include "probe/kernels.hpp"

namespace probe {

OptionSet OptionSet::hypercube(int d) {
  if (d < 1) throw ParameterError("hypercube dimension must be >= 1");
  OptionSet s;
  s.kind = Kind::Hypercube;
  s.dim = d;
  return s;
}

OptionSet OptionSet::simplex_vertices(int d) {
  if (d < 1) throw ParameterError("simplex dimension must be >= 1");
  OptionSet s;
  s.kind = Kind::SimplexVertices;
  s.dim = d;
  return s;
}

OptionSet OptionSet::explicit_points(std::vector<Vec> pts) {
  if (pts.empty()) throw ParameterError("explicit option set must be non-empty");
  const std::size_t d = pts.front().size();
  for (const Vec& p : pts) {
    if (p.size() != d) throw ParameterError("option set points have mixed dimensions");
    for (double v : p) {
      if (!(v >= -1.0 && v <= 1.0)) throw ParameterError("option outside [-1,1]^d");
    }
  }
  OptionSet s;
  s.kind = Kind::ExplicitPoints;
  s.dim = static_cast<int>(d);
  s.points = std::move(pts);
  return s;
}

std::size_t OptionSet::option_count() const {
  switch (kind) {
    case Kind::ExplicitPoints:
      return points.size();
    case Kind::SimplexVertices:
      return static_cast<std::size_t>(dim);
    case Kind::Hypercube:
      return std::size_t{1} << dim;
  }
  return 0;
}

Vec OptionSet::point(std::size_t i) const {
  switch (kind) {
    case Kind::ExplicitPoints:
      return points.at(i);
    case Kind::SimplexVertices: {
      Vec v(dim, 0.0);
      v.at(i) = 1.0;
      return v;
    }
    case Kind::Hypercube: {
      // corner i in lexicographic order with -1 < +1
      Vec v(dim, -1.0);
      for (int j = 0; j < dim; ++j) {
        if (i & (std::size_t{1} << (dim - 1 - j))) v[j] = 1.0;
      }
      return v;
    }
  }
  throw ParameterError("bad option set");
}

Vec argmin_linear(const OptionSet& options, std::span<const double> cost) {
  if (static_cast<int>(cost.size()) != options.dim) {
    throw ParameterError("cost dimension mismatch");
  }
  switch (options.kind) {
    case OptionSet::Kind::Hypercube: {
      Vec w(options.dim);
      for (int j = 0; j < options.dim; ++j) w[j] = cost[j] < 0.0 ? 1.0 : -1.0;
      return w;
    }
    case OptionSet::Kind::SimplexVertices:
    case OptionSet::Kind::ExplicitPoints: {
      return options.point(argmin_linear_index(options, cost));
    }
  }
  throw ParameterError("bad option set");
}

std::size_t argmin_linear_index(const OptionSet& options, std::span<const double> cost) {
  if (static_cast<int>(cost.size()) != options.dim) {
    throw ParameterError("cost dimension mismatch");
  }
  if (options.kind == OptionSet::Kind::SimplexVertices) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < cost.size(); ++j) {
      if (cost[j] < cost[best]) best = j;
    }
    return best;
  }
  if (options.kind == OptionSet::Kind::ExplicitPoints) {
    std::size_t best = 0;
    double best_val = kern::dot(options.points[0].data(), cost.data(), cost.size());
    for (std::size_t i = 1; i < options.points.size(); ++i) {
      double v = kern::dot(options.points[i].data(), cost.data(), cost.size());
      if (v < best_val) {
        best = i;
        best_val = v;
      }
    }
    return best;
  }
  throw ParameterError("index form requires a finite option kind");
}

void CumulativeLoss::accumulate(std::span<const double> loss) {
  if (loss.size() != total.size()) throw ParameterError("loss dimension mismatch");
  kern::add(total.data(), loss.data(), loss.size());
  ++step;
}

void SampleStats::add(double observation) {
  if (!(observation >= -1e-12 && observation <= 1.0 + 1e-12)) {
    throw ContractError("observation outside [0,1]");
  }
  ++count;
  const double delta = observation - mean_;
  mean_ += delta / static_cast<double>(count);
  m2_ += delta * (observation - mean_);
}

double SampleStats::mean() const {
  if (count == 0) throw ContractError("mean of empty SampleStats");
  return mean_;
}

double SampleStats::variance() const {
  if (count == 0) throw ContractError("variance of empty SampleStats");
  return std::max(0.0, m2_ / static_cast<double>(count));
}

SampleStats update_stats(SampleStats stats, double observation) {
  stats.add(observation);
  return stats;
}

AlgoParams imperfect_hint_params(long budget) {
  if (budget < 0) throw ParameterError("corruption budget must be nonnegative");
  AlgoParams p;
  p.budget = budget;
  p.eta = 1.0 / (5.0 * std::sqrt(static_cast<double>(budget) + 1.0));
  p.p = 5.0 * p.eta;
  return p;
}

std::uint64_t Trace::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const Step& s : steps) {
    feed(s.probed.data(), sizeof(s.probed));
    feed(&s.probe_count, sizeof(s.probe_count));
    feed(&s.feedback_index, sizeof(s.feedback_index));
    feed(s.feedback_values.data(), sizeof(s.feedback_values));
    feed(&s.action, sizeof(s.action));
    feed(&s.value, sizeof(s.value));
    feed(&s.cum_regret, sizeof(s.cum_regret));
  }
  if (!action_points.empty()) feed(action_points.data(), action_points.size() * sizeof(double));
  return h;
}

void Trace::save(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open trace file: " + path);
  std::fprintf(f, "steps %zu point_dim %d\n", steps.size(), point_dim);
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const Step& s = steps[t];
    std::fprintf(f, "%zu probed", t + 1);
    for (int i = 0; i < s.probe_count; ++i) std::fprintf(f, " %d", s.probed[i]);
    std::fprintf(f, " fb %d", s.feedback_index);
    for (int i = 0; i < s.probe_count; ++i) std::fprintf(f, " %a", s.feedback_values[i]);
    std::fprintf(f, " action %d", s.action);
    if (point_dim > 0) {
      for (int j = 0; j < point_dim; ++j) {
        std::fprintf(f, " %a", action_points[t * point_dim + j]);
      }
    }
    std::fprintf(f, " value %a regret %a\n", s.value, s.cum_regret);
  }
  std::fclose(f);
}

double sample_laplace(double scale, double u) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("laplace scale must be positive");
  if (!(u > 0.0 && u < 1.0)) throw ParameterError("uniform draw outside (0,1)");
  const double c = u - 0.5;
  const double s = c > 0.0 ? 1.0 : (c < 0.0 ? -1.0 : 0.0);
  return -scale * s * std::log1p(-2.0 * std::fabs(c));
}

double sample_gumbel(double eta, double u) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ParameterError("gumbel rate must be positive");
  if (!(u > 0.0 && u < 1.0)) throw ParameterError("uniform draw outside (0,1)");
  return -std::log(-std::log(u)) / eta;
}

Vec sample_gamma_vector(int d, double eta, double beta, Rng& rng) {
  if (d < 1) throw ParameterError("dimension must be >= 1");
  if (!(eta > 0.0) || !(beta > 0.0)) throw ParameterError("eta and beta must be positive");
  // Gamma(shape d, scale beta/eta) magnitude as a sum of d exponentials.
  double mag = 0.0;
  for (int i = 0; i < d; ++i) mag -= std::log(rng.next_unit());
  mag *= beta / eta;
  if (d == 1) {
    return Vec{rng.next_unit() < 0.5 ? -mag : mag};
  }
  // Uniform direction: normalized Gaussian via Box-Muller.
  Vec x(d);
  double norm2 = 0.0;
  for (int i = 0; i < d; i += 2) {
    const double u1 = rng.next_unit();
    const double u2 = rng.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    x[i] = r * std::cos(2.0 * M_PI * u2);
    if (i + 1 < d) x[i + 1] = r * std::sin(2.0 * M_PI * u2);
  }
  for (int i = 0; i < d; ++i) norm2 += x[i] * x[i];
  const double inv = mag / std::sqrt(norm2);
  for (int i = 0; i < d; ++i) x[i] *= inv;
  return x;
}

double regret_linear(const Trace& trace, const OptionSet& options,
                     const std::vector<Vec>& losses) {
  if (losses.size() != trace.steps.size()) throw ParameterError("trace/loss length mismatch");
  if (trace.point_dim != options.dim) throw ParameterError("trace dimension mismatch");
  const std::size_t d = static_cast<std::size_t>(options.dim);
  Vec total(d, 0.0);
  double alg = 0.0;
  for (std::size_t t = 0; t < losses.size(); ++t) {
    if (losses[t].size() != d) throw ParameterError("loss dimension mismatch");
    alg += kern::dot(&trace.action_points[t * d], losses[t].data(), d);
    kern::add(total.data(), losses[t].data(), d);
  }
  const Vec best = argmin_linear(options, total);
  return alg - kern::dot(best.data(), total.data(), d);
}

double pseudo_regret_mab(std::span<const double> credited_rewards,
                         std::span<const double> true_means) {
  if (true_means.empty()) throw ParameterError("empty mean vector");
  double best = *std::max_element(true_means.begin(), true_means.end());
  double total = kern::sum(credited_rewards.data(), credited_rewards.size());
  return best * static_cast<double>(credited_rewards.size()) - total;
}

}  // namespace probe
