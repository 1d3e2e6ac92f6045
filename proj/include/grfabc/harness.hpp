#pragma once

// Run configuration, experiment drivers and the command-line front end.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "grfabc/estimators.hpp"
#include "grfabc/results.hpp"

namespace grfabc {

inline constexpr std::string_view kVersion = "0.1.0";

/// Tolerance rule: "0", "inf", "q:<fraction>" or "v:<value>".
struct EpsilonMode {
  enum class Kind { exact_zero, quantile, fixed, infinite };
  Kind kind = Kind::quantile;
  double value = 0.01;

  static EpsilonMode parse(std::string_view text);
  std::string to_string() const;
  friend bool operator==(const EpsilonMode&, const EpsilonMode&) = default;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::uint64_t proposals = 200'000;
  EpsilonMode epsilon{};
  std::uint64_t pilot_size = 10'000;
  bool pilot_from_run = false;
  std::size_t gibbs_sweeps = 1000;
  LogBase log_base = LogBase::ten;
  std::size_t workers = 1;
  bool two_step = false;
  /// Share of the proposal budget spent on the first two-step run.
  double two_step_split = 0.1;
  std::size_t datasets = 200;
  std::size_t sites = 50;
  std::filesystem::path out_dir;

  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

/// Tolerance for a run. `sorted_pilot` is consulted only in quantile mode.
double resolve_epsilon(const EpsilonMode& mode, std::span<const double> sorted_pilot);

struct ToyStudy {
  std::vector<results::ToyRow> rows;
  results::ConfusionMatrix eps0_confusion{};
  results::ConfusionMatrix tol_confusion{};
  /// q_0.25, q_0.5, q_0.75 of estimated / exact Bayes factor.
  std::array<double, 3> eps0_ratio_quantiles{};
  std::array<double, 3> tol_ratio_quantiles{};
  std::size_t constant_datasets = 0;
};

/// Simulates config.datasets sequences of config.sites sites under each toy
/// model (parameters from the priors), computes the exact posterior and
/// Bayes factor of each, and estimates both with ABC-MC at epsilon = 0 and
/// at config.epsilon from a single proposal table per dataset.
ToyStudy run_toy_study(const RunConfig& config);

/// Writes toy_datasets.csv (+ schema), confusion_eps0.csv,
/// confusion_tolerance.csv, ratio_quantiles.csv and summary.json.
void write_toy_study(const ToyStudy& study, const RunConfig& config, const std::filesystem::path& dir);

/// Entry point of the `grfabc` executable. Returns the process exit code:
/// 0 success, 2 validation error, 3 runtime or I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grfabc
