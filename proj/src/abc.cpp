#include "grfabc/abc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "grfabc/error.hpp"
#include "grfabc/estimators.hpp"

namespace grfabc {

namespace {

// Runs body(begin, end) over [0, count) in contiguous blocks, one per worker.
template <class Body>
void parallel_blocks(std::uint64_t count, std::size_t workers, Body&& body) {
  workers = std::max<std::size_t>(1, std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
  if (workers == 1) {
    body(std::uint64_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::uint64_t block = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min(count, w * block);
    const std::uint64_t end = std::min(count, begin + block);
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

double squared_to_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto d = static_cast<double>(a[i] - b[i]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

double euclidean_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) throw InvalidInput("statistic vectors differ in length");
  return squared_to_distance(a, b);
}

ProposalTable::ProposalTable(StatVector observed, std::size_t n_proposals)
    : observed_(std::move(observed)),
      model_(n_proposals),
      theta_(n_proposals),
      stats_(n_proposals * observed_.size()),
      distance_(n_proposals) {}

Proposal ProposalTable::proposal(std::size_t i) const {
  const auto s = stats(i);
  return Proposal{i, model_[i], theta_[i], StatVector(s.begin(), s.end()), distance_[i]};
}

ModelCounts AbcRun::counts() const {
  std::vector<std::uint64_t> n(sampling_prior.size(), 0);
  for (const auto& p : accepted) ++n[p.model_index];
  return ModelCounts(std::move(n));
}

double AbcRun::acceptance_rate() const noexcept {
  return proposals_total == 0 ? 0.0 : static_cast<double>(accepted.size()) / static_cast<double>(proposals_total);
}

void validate_problem(std::span<const ModelSpec> models, const ModelPrior& sampling_prior, const Configuration& x0) {
  if (models.empty()) throw InvalidInput("at least one candidate model is required");
  if (sampling_prior.size() != models.size()) {
    throw InvalidInput("model prior has " + std::to_string(sampling_prior.size()) + " weights for " +
                       std::to_string(models.size()) + " models");
  }
  if (x0.empty()) throw InvalidInput("observed configuration is empty");
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (models[m].n_sites() != x0.size()) {
      throw InvalidInput("model " + std::to_string(m) + " has " + std::to_string(models[m].n_sites()) +
                         " sites but the observed configuration has " + std::to_string(x0.size()));
    }
  }
}

ProposalTable simulate_proposals(std::span<const ModelSpec> models, const ModelPrior& sampling_prior,
                                 const Configuration& x0, std::uint64_t n_proposals, std::uint64_t seed,
                                 const EngineOptions& options) {
  validate_problem(models, sampling_prior, x0);
  ProposalTable table(concat_stats(x0, models), n_proposals);
  const std::size_t n_models = models.size();

  parallel_blocks(n_proposals, options.workers, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<Label> x(x0.size());
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(seed, i);
      const std::size_t m = sample_model_index(sampling_prior, rng);
      const double theta = sample_prior_theta(models[m], rng);
      simulate_dataset(models[m], theta, options.gibbs_sweeps, x, rng);
      std::span<std::int64_t> stats{table.stats_.data() + i * n_models, n_models};
      concat_stats(x, models, stats);
      table.model_[i] = static_cast<std::uint32_t>(m);
      table.theta_[i] = theta;
      table.distance_[i] = squared_to_distance(stats, table.observed_);
    }
  });
  return table;
}

AbcRun accept_within(const ProposalTable& table, double epsilon, const ModelPrior& target_prior,
                     const ModelPrior& sampling_prior) {
  if (!(epsilon >= 0.0)) throw InvalidInput("tolerance must be non-negative");
  if (target_prior.size() != table.n_models() || sampling_prior.size() != table.n_models()) {
    throw InvalidInput("model priors do not match the number of models");
  }
  AbcRun run;
  run.observed_stats = table.observed();
  run.epsilon = epsilon;
  run.proposals_total = table.size();
  run.sampling_prior = sampling_prior;
  run.target_prior = target_prior;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (within_tolerance(table.distance(i), epsilon)) run.accepted.push_back(table.proposal(i));
  }
  return run;
}

AbcRun abc_mc_run(std::span<const ModelSpec> models, const ModelPrior& target_prior, const ModelPrior& sampling_prior,
                  const Configuration& x0, std::uint64_t n_proposals, double epsilon, std::uint64_t seed,
                  const EngineOptions& options) {
  if (target_prior.size() != models.size()) throw InvalidInput("target prior does not match the model list");
  return accept_within(simulate_proposals(models, sampling_prior, x0, n_proposals, seed, options), epsilon,
                       target_prior, sampling_prior);
}

std::vector<double> pilot_distances(std::span<const ModelSpec> models, const ModelPrior& sampling_prior,
                                    const Configuration& x0, std::uint64_t n_pilot, std::uint64_t seed,
                                    const EngineOptions& options) {
  if (n_pilot == 0) throw InvalidInput("pilot size must be at least 1");
  const auto table = simulate_proposals(models, sampling_prior, x0, n_pilot, seed, options);
  std::vector<double> d(table.distances().begin(), table.distances().end());
  std::sort(d.begin(), d.end());
  return d;
}

double select_epsilon(std::span<const double> sorted_distances, double q) {
  if (sorted_distances.empty()) throw InvalidInput("cannot select a tolerance from an empty distance list");
  if (!(q > 0.0 && q <= 1.0)) throw InvalidInput("quantile must lie in (0, 1]");
  const auto n = static_cast<double>(sorted_distances.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted_distances.size());
  return sorted_distances[rank - 1];
}

std::vector<double> exact_rejection(const ModelSpec& model, const Configuration& x0, std::uint64_t n_proposals,
                                    std::uint64_t seed, const EngineOptions& options) {
  if (model.n_sites() != x0.size()) throw InvalidInput("model and data differ in site count");
  std::vector<std::uint8_t> hit(n_proposals, 0);
  std::vector<double> theta(n_proposals, 0.0);
  parallel_blocks(n_proposals, options.workers, [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<Label> x(x0.size());
    const auto observed = x0.states();
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng(seed, i);
      theta[i] = sample_prior_theta(model, rng);
      simulate_dataset(model, theta[i], options.gibbs_sweeps, x, rng);
      hit[i] = std::equal(x.begin(), x.end(), observed.begin());
    }
  });
  std::vector<double> accepted;
  for (std::uint64_t i = 0; i < n_proposals; ++i) {
    if (hit[i]) accepted.push_back(theta[i]);
  }
  return accepted;
}

TwoStepResult two_step_run(std::span<const ModelSpec> models, const Configuration& x0, std::uint64_t first_proposals,
                           std::uint64_t second_proposals, double epsilon, std::uint64_t seed,
                           const EngineOptions& options) {
  if (models.size() != 2) throw InvalidInput("two-step reweighting is defined for two models");
  const auto equal = ModelPrior::uniform(2);
  TwoStepResult out;
  out.first = abc_mc_run(models, equal, equal, x0, first_proposals, epsilon, derive_seed(seed, "two-step/first"), options);
  out.rho = two_step_rho(out.first.counts());
  out.second = abc_mc_run(models, equal, ModelPrior::two_model(out.rho), x0, second_proposals, epsilon,
                          derive_seed(seed, "two-step/second"), options);
  return out;
}

}  // namespace grfabc
