#include "grfabc/protein.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "grfabc/abc.hpp"
#include "grfabc/error.hpp"

namespace grfabc::protein {

namespace {

constexpr std::string_view kHydrophilic = "KERDQNPHSTG";
constexpr std::string_view kHydrophobic = "AYMWFVLIC";

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

bool parse_index(std::istringstream& fields, std::size_t& out) {
  long long value = 0;
  if (!(fields >> value) || value < 0) return false;
  out = static_cast<std::size_t>(value);
  return true;
}

}  // namespace

AminoSequence::AminoSequence(std::string residues) : residues_(std::move(residues)) {
  for (std::size_t i = 0; i < residues_.size(); ++i) {
    if (kHydrophilic.find(residues_[i]) == std::string_view::npos &&
        kHydrophobic.find(residues_[i]) == std::string_view::npos) {
      throw InvalidInput(std::string("invalid residue '") + residues_[i] + "' at position " + std::to_string(i));
    }
  }
}

AminoSequence AminoSequence::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open sequence file " + path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string rest;
  while (std::getline(in, rest)) {
    if (!blank(rest)) throw ParseError(path.string(), 2, "sequence file must hold a single line");
  }
  try {
    return AminoSequence(std::move(line));
  } catch (const InvalidInput& e) {
    throw ParseError(path.string(), 1, e.what());
  }
}

Label hydrophobicity_class(char residue) {
  if (kHydrophilic.find(residue) != std::string_view::npos) return 0;
  if (kHydrophobic.find(residue) != std::string_view::npos) return 1;
  throw InvalidInput(std::string("invalid residue '") + residue + "'");
}

Configuration hydrophobicity_labels(const AminoSequence& seq) {
  std::vector<Label> labels;
  labels.reserve(seq.size());
  const auto& r = seq.residues();
  for (std::size_t i = 0; i < r.size(); ++i) {
    try {
      labels.push_back(hydrophobicity_class(r[i]));
    } catch (const InvalidInput& e) {
      throw InvalidInput(std::string(e.what()) + " at position " + std::to_string(i));
    }
  }
  return Configuration(std::move(labels));
}

SiteGraph parse_contact_graph(std::istream& in, const std::string& source) {
  std::string raw;
  std::size_t line_no = 0;
  std::size_t n_sites = 0;
  bool have_count = false;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (blank(line)) continue;
    std::istringstream fields(line);
    std::string extra;
    if (!have_count) {
      if (!parse_index(fields, n_sites) || (fields >> extra)) throw ParseError(source, line_no, "expected site count");
      have_count = true;
      continue;
    }
    std::size_t i = 0;
    std::size_t j = 0;
    if (!parse_index(fields, i) || !parse_index(fields, j) || (fields >> extra)) {
      throw ParseError(source, line_no, "expected two site indices");
    }
    if (i >= n_sites || j >= n_sites) {
      throw ParseError(source, line_no, "site index out of range for " + std::to_string(n_sites) + " sites");
    }
    if (i == j) throw ParseError(source, line_no, "self-loop at site " + std::to_string(i));
    if (!seen.emplace(std::min(i, j), std::max(i, j)).second) {
      throw ParseError(source, line_no, "duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
    edges.emplace_back(i, j);
  }
  if (!have_count) throw ParseError(source, line_no, "missing site count");
  return SiteGraph(n_sites, edges);
}

SiteGraph load_contact_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file " + path.string());
  return parse_contact_graph(in, path.string());
}

PairwiseResult compare_structures(const Configuration& labels, const CandidateStructure& a,
                                  const CandidateStructure& b, const SelectionConfig& config) {
  for (const auto* c : {&a, &b}) {
    if (c->graph.n_sites() != labels.size()) {
      throw InvalidInput("structure " + c->name + " has " + std::to_string(c->graph.n_sites()) +
                         " sites but the sequence has " + std::to_string(labels.size()));
    }
  }
  const std::vector<ModelSpec> models = {ModelSpec::ising(a.graph, config.prior_low, config.prior_high),
                                         ModelSpec::ising(b.graph, config.prior_low, config.prior_high)};
  const auto prior = ModelPrior::uniform(2);
  const EngineOptions options{config.gibbs_sweeps, config.workers};
  const std::uint64_t pair_seed = derive_seed(config.seed, "pair/" + a.name + "/" + b.name);

  const auto table = simulate_proposals(models, prior, labels, config.proposals, derive_seed(pair_seed, "run"), options);
  double epsilon = 0.0;
  if (config.fixed_epsilon) {
    epsilon = *config.fixed_epsilon;
  } else if (config.pilot_from_run) {
    std::vector<double> d(table.distances().begin(), table.distances().end());
    std::sort(d.begin(), d.end());
    epsilon = select_epsilon(d, config.quantile);
  } else {
    epsilon = select_epsilon(
        pilot_distances(models, prior, labels, config.pilot_size, derive_seed(pair_seed, "pilot"), options),
        config.quantile);
  }
  const auto run = accept_within(table, epsilon, prior, prior);
  PairwiseResult out;
  out.reference = a.name;
  out.candidate = b.name;
  out.bf = bf_smoothed(run.counts(), prior, 0, 1, config.log_base);
  out.epsilon = epsilon;
  out.proposals = run.proposals_total;
  out.accepted = run.accepted.size();
  return out;
}

std::vector<PairwiseResult> run_structure_selection(const Configuration& labels,
                                                    std::span<const CandidateStructure> candidates,
                                                    std::string_view reference, const SelectionConfig& config) {
  if (candidates.size() < 2) throw InvalidInput("structure selection needs at least two candidates");
  std::set<std::string> names;
  for (const auto& c : candidates) {
    if (!names.insert(c.name).second) throw InvalidInput("duplicate candidate name " + c.name);
  }
  const auto ref = std::find_if(candidates.begin(), candidates.end(), [&](const auto& c) { return c.name == reference; });
  if (ref == candidates.end()) throw InvalidInput("reference structure " + std::string(reference) + " not found");

  std::vector<PairwiseResult> rows;
  for (const auto& c : candidates) {
    if (c.name == ref->name) continue;
    rows.push_back(compare_structures(labels, *ref, c, config));
  }
  std::sort(rows.begin(), rows.end(), [](const auto& l, const auto& r) {
    if (l.bf.value != r.bf.value) return l.bf.value > r.bf.value;
    return l.candidate < r.candidate;
  });
  return rows;
}

std::vector<PairwiseResult> run_structure_selection(const AminoSequence& seq,
                                                    std::span<const CandidateStructure> candidates,
                                                    std::string_view reference, const SelectionConfig& config) {
  return run_structure_selection(hydrophobicity_labels(seq), candidates, reference, config);
}

}  // namespace grfabc::protein
