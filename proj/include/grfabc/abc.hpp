#pragma once

// Rejection-based ABC for model choice.
//
// Proposal i of a run is simulated from RngStream{seed, i}: model index from
// the sampling prior, theta from that model's uniform prior, a dataset from
// the model, and the concatenated statistic vector of that dataset. Because
// every proposal owns its stream, a run is a pure function of its inputs and
// is independent of the worker count.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "grfabc/grf.hpp"
#include "grfabc/samplers.hpp"

namespace grfabc {

class ModelCounts;

inline constexpr double kInfiniteTolerance = std::numeric_limits<double>::infinity();

struct EngineOptions {
  std::size_t gibbs_sweeps = kDefaultGibbsSweeps;
  std::size_t workers = 1;
};

/// Acceptance test `distance < epsilon`. epsilon == 0 is read as an exact
/// statistic match (distance == 0).
inline bool within_tolerance(double distance, double epsilon) noexcept {
  return epsilon == 0.0 ? distance == 0.0 : distance < epsilon;
}

/// Euclidean distance between statistic vectors. Throws on length mismatch.
double euclidean_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

struct Proposal {
  std::uint64_t index = 0;
  std::size_t model_index = 0;
  double theta = 0.0;
  StatVector stats;
  double distance = 0.0;

  friend bool operator==(const Proposal&, const Proposal&) = default;
};

/// Every simulated proposal of a run, stored column-wise.
class ProposalTable {
 public:
  ProposalTable(StatVector observed, std::size_t n_proposals);

  std::size_t size() const noexcept { return model_.size(); }
  std::size_t n_models() const noexcept { return observed_.size(); }
  const StatVector& observed() const noexcept { return observed_; }

  std::size_t model_index(std::size_t i) const { return model_[i]; }
  double theta(std::size_t i) const { return theta_[i]; }
  double distance(std::size_t i) const { return distance_[i]; }
  std::span<const std::int64_t> stats(std::size_t i) const {
    return {stats_.data() + i * n_models(), n_models()};
  }
  std::span<const double> distances() const noexcept { return distance_; }
  Proposal proposal(std::size_t i) const;

 private:
  friend ProposalTable simulate_proposals(std::span<const ModelSpec>, const ModelPrior&, const Configuration&,
                                          std::uint64_t, std::uint64_t, const EngineOptions&);

  StatVector observed_;
  std::vector<std::uint32_t> model_;
  std::vector<double> theta_;
  std::vector<std::int64_t> stats_;
  std::vector<double> distance_;
};

struct AbcRun {
  StatVector observed_stats;
  double epsilon = 0.0;
  std::uint64_t proposals_total = 0;
  std::vector<Proposal> accepted;  // ascending proposal index
  ModelPrior sampling_prior{{1.0}};
  ModelPrior target_prior{{1.0}};

  ModelCounts counts() const;
  double acceptance_rate() const noexcept;
};

/// Checks that every model is defined on x0's site count and that the priors
/// cover the model list. Throws InvalidInput otherwise.
void validate_problem(std::span<const ModelSpec> models, const ModelPrior& sampling_prior, const Configuration& x0);

/// Simulates n_proposals proposals under `sampling_prior` and records their
/// distance to S(x0).
ProposalTable simulate_proposals(std::span<const ModelSpec> models, const ModelPrior& sampling_prior,
                                 const Configuration& x0, std::uint64_t n_proposals, std::uint64_t seed,
                                 const EngineOptions& options);

/// Keeps the proposals that fall within epsilon.
AbcRun accept_within(const ProposalTable& table, double epsilon, const ModelPrior& target_prior,
                     const ModelPrior& sampling_prior);

/// ABC-MC: simulate, then accept proposals with rho(S(x0), S(x*)) < epsilon.
AbcRun abc_mc_run(std::span<const ModelSpec> models, const ModelPrior& target_prior, const ModelPrior& sampling_prior,
                  const Configuration& x0, std::uint64_t n_proposals, double epsilon, std::uint64_t seed,
                  const EngineOptions& options);

/// Sorted distances of n_pilot proposals drawn exactly as in abc_mc_run.
std::vector<double> pilot_distances(std::span<const ModelSpec> models, const ModelPrior& sampling_prior,
                                    const Configuration& x0, std::uint64_t n_pilot, std::uint64_t seed,
                                    const EngineOptions& options);

/// Nearest-rank quantile: element ceil(q * N) - 1 of the ascending list.
double select_epsilon(std::span<const double> sorted_distances, double q);

/// Single-model rejection sampler accepting theta when the simulated dataset
/// equals x0 site by site.
std::vector<double> exact_rejection(const ModelSpec& model, const Configuration& x0, std::uint64_t n_proposals,
                                    std::uint64_t seed, const EngineOptions& options);

struct TwoStepResult {
  AbcRun first;
  double rho = 0.5;
  AbcRun second;
};

/// Two-model reweighting scheme: a first run under the equal model prior
/// fixes rho = two_step_rho(first counts), then a second run proposes m1
/// with probability rho. The second run replaces the first for estimation
/// (see bf_reweighted); its samples are not pooled with the first.
TwoStepResult two_step_run(std::span<const ModelSpec> models, const Configuration& x0, std::uint64_t first_proposals,
                           std::uint64_t second_proposals, double epsilon, std::uint64_t seed,
                           const EngineOptions& options);

}  // namespace grfabc
