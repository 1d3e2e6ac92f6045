#include "grfabc/samplers.hpp"

#include <cmath>
#include <numeric>

#include "grfabc/error.hpp"

namespace grfabc {

namespace {

double logistic(double t) { return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); }

}  // namespace

ModelPrior::ModelPrior(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidInput("model prior needs at least one weight");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("model prior weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("model prior weights must sum to 1");
  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
}

ModelPrior ModelPrior::uniform(std::size_t n_models) {
  if (n_models == 0) throw InvalidInput("model prior needs at least one model");
  return ModelPrior(std::vector<double>(n_models, 1.0 / static_cast<double>(n_models)));
}

ModelPrior ModelPrior::two_model(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidInput("rho must lie in [0, 1]");
  return ModelPrior({1.0 - rho, rho});
}

double sample_prior_theta(const ModelSpec& m, Rng& rng) { return rng.uniform(m.prior_low(), m.prior_high()); }

std::size_t sample_model_index(const ModelPrior& prior, Rng& rng) {
  const double u = rng.uniform();
  const auto weights = prior.weights();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t m = 0; m < weights.size(); ++m) {
    if (weights[m] <= 0.0) continue;
    cumulative += weights[m];
    last_positive = m;
    if (u < cumulative) return m;
  }
  // Rounding left u above the accumulated total.
  return last_positive;
}

void sample_bernoulli_grf(double theta0, std::span<Label> out, Rng& rng) {
  const double p = logistic(theta0);
  for (auto& v : out) v = static_cast<Label>(rng.uniform() < p);
}

Configuration sample_bernoulli_grf(double theta0, std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidInput("need at least one site");
  std::vector<Label> x(n);
  sample_bernoulli_grf(theta0, x, rng);
  return Configuration(std::move(x));
}

void sample_markov_grf(double theta1, std::span<Label> out, Rng& rng) {
  if (out.empty()) return;
  const double stay = logistic(theta1);
  out[0] = static_cast<Label>(rng.uniform() < 0.5);
  for (std::size_t i = 1; i < out.size(); ++i) {
    out[i] = rng.uniform() < stay ? out[i - 1] : static_cast<Label>(1 - out[i - 1]);
  }
}

Configuration sample_markov_grf(double theta1, std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidInput("need at least one site");
  std::vector<Label> x(n);
  sample_markov_grf(theta1, x, rng);
  return Configuration(std::move(x));
}

void gibbs_sample_ising(const SiteGraph& g, double theta, std::size_t sweeps, std::span<Label> out, Rng& rng) {
  const std::size_t n = g.n_sites();
  for (auto& v : out) v = static_cast<Label>(rng.uniform() < 0.5);

  // P(x_i = 1 | rest) = logistic(theta * (n_1 - n_0)), where n_1 - n_0 ranges
  // over [-deg, deg]; tabulate once per call.
  const auto max_deg = static_cast<std::ptrdiff_t>(g.max_degree());
  std::vector<double> p_one(static_cast<std::size_t>(2 * max_deg + 1));
  for (std::ptrdiff_t d = -max_deg; d <= max_deg; ++d) {
    p_one[static_cast<std::size_t>(d + max_deg)] = logistic(theta * static_cast<double>(d));
  }

  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto nbrs = g.neighbours(i);
      std::ptrdiff_t ones = 0;
      for (auto j : nbrs) ones += out[j];
      const std::ptrdiff_t diff = 2 * ones - static_cast<std::ptrdiff_t>(nbrs.size());
      out[i] = static_cast<Label>(rng.uniform() < p_one[static_cast<std::size_t>(diff + max_deg)]);
    }
  }
}

Configuration gibbs_sample_ising(const SiteGraph& g, double theta, std::size_t sweeps, Rng& rng) {
  if (sweeps == 0) throw InvalidInput("Gibbs sampler needs at least one sweep");
  if (g.n_sites() == 0) throw InvalidInput("need at least one site");
  std::vector<Label> x(g.n_sites());
  gibbs_sample_ising(g, theta, sweeps, x, rng);
  return Configuration(std::move(x));
}

void simulate_dataset(const ModelSpec& m, double theta, std::size_t gibbs_sweeps, std::span<Label> out, Rng& rng) {
  switch (m.kind()) {
    case StatisticKind::bernoulli:
      sample_bernoulli_grf(theta, out, rng);
      return;
    case StatisticKind::markov:
      sample_markov_grf(theta, out, rng);
      return;
    case StatisticKind::ising:
      gibbs_sample_ising(*m.graph(), theta, gibbs_sweeps, out, rng);
      return;
  }
}

}  // namespace grfabc
