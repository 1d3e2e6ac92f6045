#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "grfabc/grf.hpp"
#include "grfabc/rng.hpp"

namespace grfabc {

/// Probability distribution over model indices.
class ModelPrior {
 public:
  /// Weights must be non-negative and sum to 1 within 1e-12.
  explicit ModelPrior(std::vector<double> weights);

  static ModelPrior uniform(std::size_t n_models);
  /// Two-model prior with P(M = 1) = rho.
  static ModelPrior two_model(double rho);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t m) const { return weights_[m]; }
  std::span<const double> weights() const noexcept { return weights_; }

  friend bool operator==(const ModelPrior&, const ModelPrior&) = default;

 private:
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

double sample_prior_theta(const ModelSpec& m, Rng& rng);
std::size_t sample_model_index(const ModelPrior& prior, Rng& rng);

/// iid sites with P(x_i = 1) = e^theta / (1 + e^theta).
Configuration sample_bernoulli_grf(double theta0, std::size_t n, Rng& rng);
void sample_bernoulli_grf(double theta0, std::span<Label> out, Rng& rng);

/// Uniform first site, then the label persists with probability
/// e^theta / (1 + e^theta) at every step.
Configuration sample_markov_grf(double theta1, std::size_t n, Rng& rng);
void sample_markov_grf(double theta1, std::span<Label> out, Rng& rng);

/// Systematic-scan single-site Gibbs sampler for the Ising model on g,
/// started from a uniform random configuration. Each sweep visits sites
/// 0..n-1 once.
Configuration gibbs_sample_ising(const SiteGraph& g, double theta, std::size_t sweeps, Rng& rng);
void gibbs_sample_ising(const SiteGraph& g, double theta, std::size_t sweeps, std::span<Label> out, Rng& rng);

inline constexpr std::size_t kDefaultGibbsSweeps = 1000;

/// Draws one dataset from model m at parameter theta into out
/// (out.size() == m.n_sites()). Ising models use `gibbs_sweeps` sweeps.
void simulate_dataset(const ModelSpec& m, double theta, std::size_t gibbs_sweeps, std::span<Label> out, Rng& rng);

}  // namespace grfabc
