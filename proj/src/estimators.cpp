#include "grfabc/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "grfabc/error.hpp"

namespace grfabc {

namespace {

constexpr std::array<std::string_view, kJeffreysCategories> kCategoryNames = {
    "m1-decisive", "m1-strong", "m1-substantial", "m1-weak", "m0-weak", "m0-substantial", "m0-strong", "m0-decisive",
};

void check_pair(const ModelCounts& counts, const ModelPrior& prior, std::size_t num, std::size_t den) {
  if (num >= counts.n_models() || den >= counts.n_models() || num == den) {
    throw InvalidInput("invalid model pair for a Bayes factor");
  }
  if (prior.size() != counts.n_models()) throw InvalidInput("prior does not match the number of models");
  if (prior[num] <= 0.0 || prior[den] <= 0.0) throw InvalidInput("Bayes factor needs positive prior mass on both models");
}

BfEstimate make_estimate(double value, BfKind kind, double odds, const ModelCounts& counts, LogBase base) {
  return BfEstimate{value, kind, odds, counts, jeffreys_category_of(value, base)};
}

}  // namespace

ModelCounts::ModelCounts(std::vector<std::uint64_t> counts)
    : counts_(std::move(counts)), total_(std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0})) {}

double log_in_base(double value, LogBase base) noexcept {
  return base == LogBase::ten ? std::log10(value) : std::log(value);
}

JeffreysCategory jeffreys_category(double log_bf) noexcept {
  const double a = std::abs(log_bf);
  int strength = 0;  // weak
  if (a > 2.0) {
    strength = 3;
  } else if (a > 1.0) {
    strength = 2;
  } else if (a > 0.5) {
    strength = 1;
  }
  const int index = log_bf >= 0.0 ? 4 + strength : 3 - strength;
  return static_cast<JeffreysCategory>(index);
}

JeffreysCategory jeffreys_category_of(double bf, LogBase base) noexcept {
  return jeffreys_category(log_in_base(bf, base));
}

std::string_view to_string(JeffreysCategory c) noexcept { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<JeffreysCategory> parse_jeffreys_category(std::string_view s) noexcept {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == s) return static_cast<JeffreysCategory>(i);
  }
  return std::nullopt;
}

std::string_view to_string(LogBase base) noexcept { return base == LogBase::ten ? "10" : "e"; }

std::string_view to_string(BfKind kind) noexcept {
  switch (kind) {
    case BfKind::plugin:
      return "plugin";
    case BfKind::smoothed:
      return "smoothed";
    case BfKind::reweighted:
      return "reweighted";
  }
  return "?";
}

double posterior_prob_hat(const ModelCounts& counts, std::size_t m) {
  if (m >= counts.n_models()) throw InvalidInput("model index out of range");
  if (counts.total() == 0) throw NoEstimate("no accepted samples: posterior probabilities cannot be estimated");
  return static_cast<double>(counts[m]) / static_cast<double>(counts.total());
}

BfEstimate bf_plugin(const ModelCounts& counts, const ModelPrior& target_prior, std::size_t num, std::size_t den,
                     LogBase base) {
  check_pair(counts, target_prior, num, den);
  if (counts[den] == 0) throw NoEstimate("plug-in Bayes factor undefined: no accepted samples from the denominator model");
  const double odds = target_prior[den] / target_prior[num];
  const double value = static_cast<double>(counts[num]) / static_cast<double>(counts[den]) * odds;
  return make_estimate(value, BfKind::plugin, odds, counts, base);
}

BfEstimate bf_smoothed(const ModelCounts& counts, const ModelPrior& target_prior, std::size_t num, std::size_t den,
                       LogBase base) {
  check_pair(counts, target_prior, num, den);
  const double odds = target_prior[den] / target_prior[num];
  const double value =
      (1.0 + static_cast<double>(counts[num])) / (1.0 + static_cast<double>(counts[den])) * odds;
  return make_estimate(value, BfKind::smoothed, odds, counts, base);
}

double bf_bias(double p, std::uint64_t n) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidInput("bias formula needs 0 < p <= 1");
  const auto nn = static_cast<double>(n);
  return (1.0 - (nn + 2.0) * std::pow(1.0 - p, nn + 1.0)) / ((nn + 1.0) * p);
}

BfEstimate bf_reweighted(const ModelCounts& counts, double rho, LogBase base) {
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidInput("rho must lie strictly between 0 and 1");
  if (counts.n_models() != 2) throw InvalidInput("reweighted Bayes factor is defined for two models");
  const double odds = rho / (1.0 - rho);
  const double value = (1.0 + static_cast<double>(counts[0])) / (1.0 + static_cast<double>(counts[1])) * odds;
  return make_estimate(value, BfKind::reweighted, odds, counts, base);
}

double two_step_rho(const ModelCounts& first_run) {
  if (first_run.n_models() != 2) throw InvalidInput("two-step reweighting is defined for two models");
  const auto n = static_cast<double>(first_run.total());
  const double p0 = (static_cast<double>(first_run[0]) + 1.0) / (n + 2.0);
  const double p1 = (static_cast<double>(first_run[1]) + 1.0) / (n + 2.0);
  const double rho = (1.0 / p1) / (1.0 / p0 + 1.0 / p1);
  return std::clamp(rho, kRhoMin, kRhoMax);
}

}  // namespace grfabc
