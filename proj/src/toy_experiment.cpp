#include "grfabc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "grfabc/abc.hpp"
#include "grfabc/error.hpp"
#include "grfabc/toy_oracle.hpp"

namespace grfabc {

namespace {

std::optional<double> p0_or_na(const ModelCounts& counts) {
  if (counts.total() == 0) return std::nullopt;
  return posterior_prob_hat(counts, 0);
}

std::array<double, 3> ratio_quantiles(std::vector<double> ratios) {
  if (ratios.empty()) return {};
  std::sort(ratios.begin(), ratios.end());
  return {results::sample_quantile(ratios, 0.25), results::sample_quantile(ratios, 0.5),
          results::sample_quantile(ratios, 0.75)};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

EpsilonMode EpsilonMode::parse(std::string_view text) {
  auto number = [&](std::string_view s) {
    try {
      return results::parse_double(s);
    } catch (const InvalidInput&) {
      throw InvalidInput("bad tolerance '" + std::string(text) + "'");
    }
  };
  if (text == "0") return {Kind::exact_zero, 0.0};
  if (text == "inf") return {Kind::infinite, kInfiniteTolerance};
  if (text.starts_with("q:")) {
    const double q = number(text.substr(2));
    if (!(q > 0.0 && q <= 1.0)) throw InvalidInput("quantile tolerance must lie in (0, 1]");
    return {Kind::quantile, q};
  }
  if (text.starts_with("v:")) {
    const double v = number(text.substr(2));
    if (!(v >= 0.0)) throw InvalidInput("fixed tolerance must be non-negative");
    return {Kind::fixed, v};
  }
  throw InvalidInput("tolerance must be 0, inf, q:<fraction> or v:<value>, got '" + std::string(text) + "'");
}

std::string EpsilonMode::to_string() const {
  switch (kind) {
    case Kind::exact_zero:
      return "0";
    case Kind::infinite:
      return "inf";
    case Kind::quantile:
      return "q:" + results::format_double(value);
    case Kind::fixed:
      return "v:" + results::format_double(value);
  }
  return "?";
}

void RunConfig::validate() const {
  if (epsilon.kind == EpsilonMode::Kind::quantile) {
    if (!(epsilon.value > 0.0 && epsilon.value <= 1.0)) throw InvalidInput("quantile must lie in (0, 1]");
    if (!pilot_from_run && pilot_size < 100) throw InvalidInput("pilot size must be at least 100 in quantile mode");
  }
  if (gibbs_sweeps == 0) throw InvalidInput("Gibbs sweeps must be at least 1");
  if (workers == 0) throw InvalidInput("workers must be at least 1");
  if (!(two_step_split > 0.0 && two_step_split < 1.0)) throw InvalidInput("two-step split must lie in (0, 1)");
  if (sites == 0) throw InvalidInput("site count must be at least 1");
}

double resolve_epsilon(const EpsilonMode& mode, std::span<const double> sorted_pilot) {
  switch (mode.kind) {
    case EpsilonMode::Kind::exact_zero:
      return 0.0;
    case EpsilonMode::Kind::infinite:
      return kInfiniteTolerance;
    case EpsilonMode::Kind::fixed:
      return mode.value;
    case EpsilonMode::Kind::quantile:
      return select_epsilon(sorted_pilot, mode.value);
  }
  return 0.0;
}

ToyStudy run_toy_study(const RunConfig& config) {
  config.validate();
  const auto models = toy::models(config.sites);
  const auto prior = ModelPrior::uniform(2);
  const EngineOptions options{config.gibbs_sweeps, config.workers};

  ToyStudy study;
  std::vector<double> eps0_ratios;
  std::vector<double> tol_ratios;
  for (int truth = 0; truth < 2; ++truth) {
    for (std::size_t d = 0; d < config.datasets; ++d) {
      const std::string tag = std::to_string(truth) + "/" + std::to_string(d);
      Rng data_rng(derive_seed(config.seed, "toy/data/" + tag), 0);
      const double theta = sample_prior_theta(models[truth], data_rng);
      std::vector<Label> x(config.sites);
      simulate_dataset(models[truth], theta, config.gibbs_sweeps, x, data_rng);
      const Configuration x0(std::move(x));

      const auto exact = toy::exact_posterior_and_bf(x0, prior);
      const auto table =
          simulate_proposals(models, prior, x0, config.proposals, derive_seed(config.seed, "toy/run/" + tag), options);

      double tolerance = 0.0;
      if (config.epsilon.kind == EpsilonMode::Kind::quantile) {
        std::vector<double> pilot;
        if (config.pilot_from_run) {
          pilot.assign(table.distances().begin(), table.distances().end());
          std::sort(pilot.begin(), pilot.end());
        } else {
          pilot = pilot_distances(models, prior, x0, config.pilot_size, derive_seed(config.seed, "toy/pilot/" + tag),
                                  options);
        }
        tolerance = resolve_epsilon(config.epsilon, pilot);
      } else {
        tolerance = resolve_epsilon(config.epsilon, {});
      }

      const auto exact_counts = accept_within(table, 0.0, prior, prior).counts();
      const auto tol_counts = accept_within(table, tolerance, prior, prior).counts();
      const auto eps0_bf = bf_smoothed(exact_counts, prior, 0, 1, config.log_base);
      const auto tol_bf = bf_smoothed(tol_counts, prior, 0, 1, config.log_base);

      results::ToyRow row;
      row.dataset = d;
      row.true_model = truth;
      row.theta = theta;
      row.s0 = table.observed()[0];
      row.s1 = table.observed()[1];
      row.constant_data = exact.constant_data;
      row.exact_p0 = exact.p0;
      row.exact_log10_bf = exact.log_bf / std::log(10.0);
      row.exact_category = jeffreys_category(config.log_base == LogBase::ten ? row.exact_log10_bf : exact.log_bf);
      row.eps0_n0 = exact_counts[0];
      row.eps0_n1 = exact_counts[1];
      row.eps0_p0 = p0_or_na(exact_counts);
      row.eps0_bf = eps0_bf.value;
      row.eps0_category = eps0_bf.jeffreys;
      row.tol_epsilon = tolerance;
      row.tol_n0 = tol_counts[0];
      row.tol_n1 = tol_counts[1];
      row.tol_p0 = p0_or_na(tol_counts);
      row.tol_bf = tol_bf.value;
      row.tol_category = tol_bf.jeffreys;

      study.constant_datasets += exact.constant_data ? 1 : 0;
      ++study.eps0_confusion[static_cast<std::size_t>(row.exact_category)][static_cast<std::size_t>(row.eps0_category)];
      ++study.tol_confusion[static_cast<std::size_t>(row.exact_category)][static_cast<std::size_t>(row.tol_category)];
      eps0_ratios.push_back(std::exp(std::log(row.eps0_bf) - exact.log_bf));
      tol_ratios.push_back(std::exp(std::log(row.tol_bf) - exact.log_bf));
      study.rows.push_back(std::move(row));
    }
  }
  study.eps0_ratio_quantiles = ratio_quantiles(std::move(eps0_ratios));
  study.tol_ratio_quantiles = ratio_quantiles(std::move(tol_ratios));
  return study;
}

void write_toy_study(const ToyStudy& study, const RunConfig& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  std::string table = results::toy_header() + "\n";
  for (const auto& row : study.rows) table += results::to_csv(row) + "\n";
  write_file(dir / "toy_datasets.csv", table);
  write_file(dir / "toy_datasets.schema.csv", results::schema_csv(results::toy_columns()));
  write_file(dir / "confusion_eps0.csv", results::to_csv(study.eps0_confusion));
  write_file(dir / "confusion_tolerance.csv", results::to_csv(study.tol_confusion));

  std::string quantiles = "rule,q25,q50,q75\n";
  auto line = [](std::string_view rule, const std::array<double, 3>& q) {
    return std::string(rule) + "," + results::format_double(q[0]) + "," + results::format_double(q[1]) + "," +
           results::format_double(q[2]) + "\n";
  };
  quantiles += line("eps0", study.eps0_ratio_quantiles);
  quantiles += line(config.epsilon.to_string(), study.tol_ratio_quantiles);
  write_file(dir / "ratio_quantiles.csv", quantiles);

  nlohmann::ordered_json summary;
  summary["command"] = "toy-experiment";
  summary["version"] = kVersion;
  summary["config"] = {{"seed", config.seed},
                       {"datasets_per_model", config.datasets},
                       {"sites", config.sites},
                       {"proposals", config.proposals},
                       {"epsilon", config.epsilon.to_string()},
                       {"pilot", config.pilot_size},
                       {"pilot_from_run", config.pilot_from_run},
                       {"log_base", to_string(config.log_base)}};
  summary["rows"] = study.rows.size();
  summary["constant_datasets"] = study.constant_datasets;
  summary["eps0"] = {{"diagonal", results::diagonal(study.eps0_confusion)},
                     {"within_one_category", results::within_one_fraction(study.eps0_confusion)},
                     {"ratio_quantiles", study.eps0_ratio_quantiles}};
  summary["tolerance"] = {{"diagonal", results::diagonal(study.tol_confusion)},
                          {"within_one_category", results::within_one_fraction(study.tol_confusion)},
                          {"ratio_quantiles", study.tol_ratio_quantiles}};
  write_file(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace grfabc
