#pragma once

// Posterior model probabilities and Bayes factors from ABC model indices.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "grfabc/samplers.hpp"

namespace grfabc {

/// Accepted-sample counts per model index.
class ModelCounts {
 public:
  ModelCounts() = default;
  explicit ModelCounts(std::vector<std::uint64_t> counts);

  std::size_t n_models() const noexcept { return counts_.size(); }
  std::uint64_t operator[](std::size_t m) const { return counts_.at(m); }
  std::uint64_t total() const noexcept { return total_; }
  const std::vector<std::uint64_t>& values() const noexcept { return counts_; }

  friend bool operator==(const ModelCounts&, const ModelCounts&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

enum class LogBase { ten, e };

/// Jeffreys scale, ordered from strongest evidence for m1 to strongest for m0.
enum class JeffreysCategory {
  m1_decisive,
  m1_strong,
  m1_substantial,
  m1_weak,
  m0_weak,
  m0_substantial,
  m0_strong,
  m0_decisive,
};

inline constexpr std::size_t kJeffreysCategories = 8;

/// Thresholds 0.5, 1 and 2 on log BF; values on a boundary fall into the
/// weaker category and log BF == 0 counts as weak evidence for m0.
JeffreysCategory jeffreys_category(double log_bf) noexcept;
JeffreysCategory jeffreys_category_of(double bf, LogBase base) noexcept;
double log_in_base(double value, LogBase base) noexcept;

std::string_view to_string(JeffreysCategory c) noexcept;
std::optional<JeffreysCategory> parse_jeffreys_category(std::string_view s) noexcept;
std::string_view to_string(LogBase base) noexcept;

enum class BfKind { plugin, smoothed, reweighted };
std::string_view to_string(BfKind kind) noexcept;

struct BfEstimate {
  double value = 0.0;
  BfKind kind = BfKind::smoothed;
  /// Factor applied to the count ratio: pi(m1)/pi(m0), or rho/(1-rho) when
  /// reweighting.
  double prior_odds_used = 1.0;
  ModelCounts counts;
  JeffreysCategory jeffreys = JeffreysCategory::m0_weak;
};

/// N_m / N. Throws NoEstimate when N == 0.
double posterior_prob_hat(const ModelCounts& counts, std::size_t m);

/// (N_num / N_den) * pi(den) / pi(num). Throws NoEstimate when N_den == 0.
BfEstimate bf_plugin(const ModelCounts& counts, const ModelPrior& target_prior, std::size_t num = 0,
                     std::size_t den = 1, LogBase base = LogBase::ten);

/// (1 + N_num) / (1 + N_den) * pi(den) / pi(num). Always defined.
BfEstimate bf_smoothed(const ModelCounts& counts, const ModelPrior& target_prior, std::size_t num = 0,
                       std::size_t den = 1, LogBase base = LogBase::ten);

/// Bias of (1 + N_0)/(1 + N_1) given N, where N_1 ~ Binomial(N, p) and the
/// true Bayes factor is (1 - p)/p:
///   {1 - (N + 2)(1 - p)^(N + 1)} / ((N + 1) p).
double bf_bias(double p, std::uint64_t n);

/// Count ratio from a run that proposed m1 with probability rho, corrected
/// back to equal prior weights: (1 + N_0)/(1 + N_1) * rho/(1 - rho).
BfEstimate bf_reweighted(const ModelCounts& counts, double rho, LogBase base = LogBase::ten);

inline constexpr double kRhoMin = 0.01;
inline constexpr double kRhoMax = 0.99;

/// Proposal weight on m1 for the second run of the two-step scheme:
/// rho proportional to 1 / P(M = 1 | x0), normalised over both models with
/// (N_j + 1)/(N + 2) in place of the raw frequencies and clamped to
/// [kRhoMin, kRhoMax].
double two_step_rho(const ModelCounts& first_run);

}  // namespace grfabc
