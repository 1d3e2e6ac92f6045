#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "grfabc/abc.hpp"
#include "grfabc/error.hpp"
#include "grfabc/harness.hpp"
#include "grfabc/protein.hpp"

namespace grfabc {

namespace {

using nlohmann::ordered_json;

struct NamedModel {
  std::string name;
  std::string source;
  ModelSpec spec;
};

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return std::isspace(c) == 0; };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

// Model file: key = value lines with keys name, statistic (bernoulli |
// markov | ising), sites, graph (path relative to the model file),
// prior_low, prior_high. '#' starts a comment.
NamedModel load_model_file(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path.string(), line_no, "expected key = value");
    kv[trim(line.substr(0, eq))] = {trim(line.substr(eq + 1)), line_no};
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(path.string(), line_no, "missing key '" + key + "'");
    return it->second.first;
  };
  auto number = [&](const std::string& key) {
    try {
      return results::parse_double(get(key));
    } catch (const ParseError&) {
      throw;
    } catch (const InvalidInput&) {
      throw ParseError(path.string(), kv[key].second, "key '" + key + "' is not a number");
    }
  };
  const std::string& statistic = get("statistic");
  const double lo = number("prior_low");
  const double hi = number("prior_high");
  const std::string name = kv.count("name") ? kv["name"].first : path.stem().string();

  if (statistic == "ising") {
    auto graph_path = std::filesystem::path(get("graph"));
    if (graph_path.is_relative()) graph_path = path.parent_path() / graph_path;
    return {name, path.string(), ModelSpec::ising(protein::load_contact_graph(graph_path), lo, hi)};
  }
  const double sites = number("sites");
  if (!(sites >= 1) || sites != std::floor(sites)) throw ParseError(path.string(), kv["sites"].second, "bad site count");
  const auto n = static_cast<std::size_t>(sites);
  if (statistic == "bernoulli") return {name, path.string(), ModelSpec::bernoulli(n, lo, hi)};
  if (statistic == "markov") return {name, path.string(), ModelSpec::markov(n, lo, hi)};
  throw ParseError(path.string(), kv["statistic"].second, "unknown statistic '" + statistic + "'");
}

// A data file holds either 0/1 labels or one-letter amino-acid codes, which
// are mapped to hydrophobicity labels.
Configuration load_observation(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  const bool binary = std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return c == '0' || c == '1' || std::isspace(c) != 0;
  });
  if (binary) return Configuration::from_string(text);
  return protein::hydrophobicity_labels(protein::AminoSequence(trim(text)));
}

ordered_json epsilon_json(double eps) {
  if (std::isinf(eps)) return "inf";
  return eps;
}

ordered_json estimate_json(const BfEstimate& bf, LogBase base) {
  return {{"kind", to_string(bf.kind)},
          {"value", bf.value},
          {"log", log_in_base(bf.value, base)},
          {"category", to_string(bf.jeffreys)},
          {"prior_odds_used", bf.prior_odds_used}};
}

ordered_json counts_json(const ModelCounts& counts) { return counts.values(); }

ordered_json config_json(const RunConfig& cfg) {
  // Worker count is deliberately absent: outputs must not depend on it.
  return {{"seed", cfg.seed},
          {"proposals", cfg.proposals},
          {"epsilon", cfg.epsilon.to_string()},
          {"pilot", cfg.pilot_size},
          {"pilot_from_run", cfg.pilot_from_run},
          {"sweeps", cfg.gibbs_sweeps},
          {"log_base", to_string(cfg.log_base)},
          {"two_step", cfg.two_step},
          {"two_step_split", cfg.two_step_split}};
}

std::vector<ModelSpec> specs_of(const std::vector<NamedModel>& models) {
  std::vector<ModelSpec> out;
  for (const auto& m : models) out.push_back(m.spec);
  return out;
}

double tolerance_for(const RunConfig& cfg, std::span<const ModelSpec> specs, const ModelPrior& prior,
                     const Configuration& x0, const ProposalTable* own_run, std::uint64_t seed) {
  if (cfg.epsilon.kind != EpsilonMode::Kind::quantile) return resolve_epsilon(cfg.epsilon, {});
  std::vector<double> pilot;
  if (cfg.pilot_from_run && own_run) {
    pilot.assign(own_run->distances().begin(), own_run->distances().end());
    std::sort(pilot.begin(), pilot.end());
  } else {
    pilot = pilot_distances(specs, prior, x0, cfg.pilot_size, derive_seed(seed, "pilot"),
                            EngineOptions{cfg.gibbs_sweeps, cfg.workers});
  }
  return resolve_epsilon(cfg.epsilon, pilot);
}

void cmd_abc_run(const RunConfig& cfg, const std::vector<NamedModel>& models, const std::string& data_file,
                 std::ostream& out) {
  const auto specs = specs_of(models);
  const auto x0 = load_observation(data_file);
  const auto prior = ModelPrior::uniform(specs.size());
  validate_problem(specs, prior, x0);
  const EngineOptions options{cfg.gibbs_sweeps, cfg.workers};

  ordered_json summary;
  summary["command"] = "abc-run";
  summary["version"] = kVersion;
  summary["config"] = config_json(cfg);
  ordered_json model_list = ordered_json::array();
  for (const auto& m : models) {
    model_list.push_back({{"name", m.name},
                          {"source", m.source},
                          {"sites", m.spec.n_sites()},
                          {"prior_low", m.spec.prior_low()},
                          {"prior_high", m.spec.prior_high()}});
  }
  summary["config"]["models"] = model_list;
  summary["config"]["data"] = data_file;
  summary["observed_stats"] = concat_stats(x0, specs);

  if (cfg.two_step) {
    if (specs.size() != 2) throw InvalidInput("--two-step needs exactly two models");
    if (cfg.pilot_from_run) throw InvalidInput("--two-step cannot take its tolerance from the estimation run");
    const double eps = tolerance_for(cfg, specs, prior, x0, nullptr, cfg.seed);
    const auto first = static_cast<std::uint64_t>(std::llround(cfg.two_step_split * static_cast<double>(cfg.proposals)));
    const auto result = two_step_run(specs, x0, first, cfg.proposals - first, eps, cfg.seed, options);
    const auto first_counts = result.first.counts();
    const auto second_counts = result.second.counts();
    summary["epsilon"] = epsilon_json(eps);
    summary["first_run"] = {{"proposals", result.first.proposals_total},
                            {"accepted", result.first.accepted.size()},
                            {"counts", counts_json(first_counts)},
                            {"bf_smoothed", estimate_json(bf_smoothed(first_counts, prior, 0, 1, cfg.log_base), cfg.log_base)}};
    summary["rho"] = result.rho;
    summary["second_run"] = {{"proposals", result.second.proposals_total},
                             {"accepted", result.second.accepted.size()},
                             {"counts", counts_json(second_counts)},
                             {"bf_reweighted", estimate_json(bf_reweighted(second_counts, result.rho, cfg.log_base), cfg.log_base)}};
  } else {
    const auto table = simulate_proposals(specs, prior, x0, cfg.proposals, derive_seed(cfg.seed, "run"), options);
    const double eps = tolerance_for(cfg, specs, prior, x0, &table, cfg.seed);
    const auto run = accept_within(table, eps, prior, prior);
    const auto counts = run.counts();
    summary["epsilon"] = epsilon_json(eps);
    summary["proposals"] = run.proposals_total;
    summary["accepted"] = run.accepted.size();
    summary["acceptance_rate"] = run.acceptance_rate();
    summary["counts"] = counts_json(counts);
    if (counts.total() == 0) {
      summary["posterior"] = nullptr;
      summary["note"] = "no accepted proposals; only the smoothed Bayes factor (prior odds) is reported";
    } else {
      ordered_json post = ordered_json::array();
      for (std::size_t m = 0; m < specs.size(); ++m) post.push_back(posterior_prob_hat(counts, m));
      summary["posterior"] = post;
    }
    ordered_json factors = ordered_json::array();
    for (std::size_t j = 1; j < specs.size(); ++j) {
      ordered_json entry = {{"numerator", models[0].name}, {"denominator", models[j].name}};
      entry["smoothed"] = estimate_json(bf_smoothed(counts, prior, 0, j, cfg.log_base), cfg.log_base);
      if (counts[j] > 0) entry["plugin"] = estimate_json(bf_plugin(counts, prior, 0, j, cfg.log_base), cfg.log_base);
      factors.push_back(entry);
    }
    summary["bayes_factors"] = factors;
  }

  const std::string text = summary.dump(2) + "\n";
  out << text;
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir / "summary.json", text);
  }
}

void cmd_pilot_epsilon(const RunConfig& cfg, const std::vector<NamedModel>& models, const std::string& data_file,
                       std::ostream& out) {
  const auto specs = specs_of(models);
  const auto x0 = load_observation(data_file);
  const auto prior = ModelPrior::uniform(specs.size());
  const auto d = pilot_distances(specs, prior, x0, cfg.pilot_size, derive_seed(cfg.seed, "pilot"),
                                 EngineOptions{cfg.gibbs_sweeps, cfg.workers});
  ordered_json summary;
  summary["command"] = "pilot-epsilon";
  summary["version"] = kVersion;
  summary["config"] = config_json(cfg);
  summary["config"]["data"] = data_file;
  summary["pilot_size"] = d.size();
  summary["rule"] = cfg.epsilon.to_string();
  summary["epsilon"] = epsilon_json(resolve_epsilon(cfg.epsilon, d));
  summary["distance_min"] = d.front();
  summary["distance_median"] = select_epsilon(d, 0.5);
  summary["distance_max"] = d.back();
  const std::string text = summary.dump(2) + "\n";
  out << text;
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir / "pilot.json", text);
  }
}

std::string fixed(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void cmd_protein_select(const RunConfig& cfg, const std::string& sequence_file, const std::vector<std::string>& graphs,
                        const std::string& reference, std::ostream& out) {
  const auto seq = protein::AminoSequence::load(sequence_file);
  std::vector<protein::CandidateStructure> candidates;
  for (const auto& spec : graphs) {
    const auto eq = spec.find('=');
    const std::filesystem::path path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    const std::string name = eq == std::string::npos ? path.stem().string() : spec.substr(0, eq);
    candidates.push_back({name, protein::load_contact_graph(path)});
  }

  protein::SelectionConfig sel;
  sel.seed = cfg.seed;
  sel.proposals = cfg.proposals;
  sel.pilot_size = cfg.pilot_size;
  sel.pilot_from_run = cfg.pilot_from_run;
  sel.gibbs_sweeps = cfg.gibbs_sweeps;
  sel.workers = cfg.workers;
  sel.log_base = cfg.log_base;
  if (cfg.epsilon.kind == EpsilonMode::Kind::quantile) {
    sel.quantile = cfg.epsilon.value;
  } else {
    sel.fixed_epsilon = resolve_epsilon(cfg.epsilon, {});
  }

  const auto rows = protein::run_structure_selection(seq, candidates, reference, sel);

  std::string csv = results::protein_header() + "\n";
  char line[512];
  std::snprintf(line, sizeof(line), "%-4s %-12s %-12s %12s %9s %-15s %10s %10s %10s\n", "rank", "reference",
                "candidate", "BF", "log BF", "category", "n_ref", "n_cand", "epsilon");
  std::string table = line;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    results::ProteinRow row{i + 1,
                            r.reference,
                            r.candidate,
                            r.bf.value,
                            log_in_base(r.bf.value, cfg.log_base),
                            r.bf.jeffreys,
                            r.bf.counts[0],
                            r.bf.counts[1],
                            r.epsilon,
                            r.proposals};
    csv += results::to_csv(row) + "\n";
    std::snprintf(line, sizeof(line), "%-4zu %-12s %-12s %12s %9s %-15s %10llu %10llu %10s\n", row.rank,
                  row.reference.c_str(), row.candidate.c_str(), fixed(row.bf, 4).c_str(), fixed(row.log_bf, 3).c_str(),
                  std::string(to_string(row.category)).c_str(), static_cast<unsigned long long>(row.n_reference),
                  static_cast<unsigned long long>(row.n_candidate), fixed(row.epsilon, 4).c_str());
    table += line;
  }
  out << table;
  const auto dir = cfg.out_dir.empty() ? std::filesystem::path(".") : cfg.out_dir;
  std::filesystem::create_directories(dir);
  write_text(dir / "protein_selection.csv", csv);
  write_text(dir / "protein_selection.schema.csv", results::schema_csv(results::protein_columns()));
}

void cmd_toy_experiment(const RunConfig& cfg, std::ostream& out) {
  const auto study = run_toy_study(cfg);
  const auto dir = cfg.out_dir.empty() ? std::filesystem::path(".") : cfg.out_dir;
  write_toy_study(study, cfg, dir);
  out << "rows: " << study.rows.size() << " (constant sequences: " << study.constant_datasets << ")\n";
  out << "eps=0: diagonal " << results::diagonal(study.eps0_confusion) << ", within one category "
      << fixed(results::within_one_fraction(study.eps0_confusion), 4) << ", median BF ratio "
      << fixed(study.eps0_ratio_quantiles[1], 4) << "\n";
  out << "eps=" << cfg.epsilon.to_string() << ": diagonal " << results::diagonal(study.tol_confusion)
      << ", within one category " << fixed(results::within_one_fraction(study.tol_confusion), 4)
      << ", median BF ratio " << fixed(study.tol_ratio_quantiles[1], 4) << "\n";
  out << "results written to " << dir.string() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian model choice between Gibbs random fields by approximate Bayesian computation", "grfabc"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.set_version_flag("--version", std::string(kVersion));

  RunConfig cfg;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  std::string epsilon_text = cfg.epsilon.to_string();
  std::string log_base_text = "10";
  std::string out_dir;

  app.add_option("--seed", cfg.seed, "run seed")->capture_default_str();
  app.add_option("--proposals", cfg.proposals, "ABC proposals per run")->capture_default_str();
  app.add_option("--epsilon", epsilon_text, "tolerance: 0, inf, q:<fraction> or v:<value>")->capture_default_str();
  app.add_option("--pilot", cfg.pilot_size, "pilot proposals for quantile tolerances")->capture_default_str();
  app.add_flag("--pilot-from-run", cfg.pilot_from_run, "take the quantile from the estimation run itself");
  app.add_option("--sweeps", cfg.gibbs_sweeps, "Gibbs sweeps per simulated Ising dataset")->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads (default: logical cores)");
  app.add_flag("--two-step", cfg.two_step, "reweighted two-step estimation (two models)");
  app.add_option("--two-step-split", cfg.two_step_split, "budget share of the first two-step run")
      ->capture_default_str();
  app.add_option("--log-base", log_base_text, "Jeffreys scale logarithm: 10 or e")->capture_default_str();
  app.add_option("--datasets", cfg.datasets, "toy datasets per model")->capture_default_str();
  app.add_option("--sites", cfg.sites, "toy sequence length")->capture_default_str();
  app.add_option("--out", out_dir, "output directory")->envname("GRFABC_OUT");

  auto* toy = app.add_subcommand("toy-experiment", "Bernoulli versus Markov chain study against exact Bayes factors");

  std::vector<std::string> model_files;
  std::string data_file;
  auto* abc = app.add_subcommand("abc-run", "ABC-MC on user-supplied models and data");
  abc->add_option("--model", model_files, "model file (repeat, first is the numerator)")->required();
  abc->add_option("--data", data_file, "observed data: 0/1 labels or amino-acid sequence")->required();

  auto* pilot = app.add_subcommand("pilot-epsilon", "tolerance from a pilot run");
  pilot->add_option("--model", model_files, "model file (repeat)")->required();
  pilot->add_option("--data", data_file, "observed data")->required();

  std::string sequence_file;
  std::vector<std::string> graph_specs;
  std::string reference;
  auto* prot = app.add_subcommand("protein-select", "rank candidate structures against a reference");
  prot->add_option("--sequence", sequence_file, "query sequence file")->required();
  prot->add_option("--graph", graph_specs, "NAME=PATH contact graph (repeat)")->required();
  prot->add_option("--reference", reference, "reference structure name")->required();

  std::vector<std::string> argv_storage = {"grfabc"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.epsilon = EpsilonMode::parse(epsilon_text);
    if (log_base_text == "10") {
      cfg.log_base = LogBase::ten;
    } else if (log_base_text == "e") {
      cfg.log_base = LogBase::e;
    } else {
      throw InvalidInput("--log-base must be 10 or e");
    }
    cfg.out_dir = out_dir;
    cfg.validate();

    if (*toy) {
      cmd_toy_experiment(cfg, out);
    } else if (*abc || *pilot) {
      std::vector<NamedModel> models;
      for (const auto& f : model_files) models.push_back(load_model_file(f));
      if (*abc) {
        cmd_abc_run(cfg, models, data_file, out);
      } else {
        cmd_pilot_epsilon(cfg, models, data_file, out);
      }
    } else if (*prot) {
      cmd_protein_select(cfg, sequence_file, graph_specs, reference, out);
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace grfabc
