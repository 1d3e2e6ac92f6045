#pragma once

// Structure selection for a query protein: hydrophobicity labels on the
// residues are treated as one Ising observation per candidate contact graph,
// and candidates are compared pairwise against a reference structure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grfabc/estimators.hpp"
#include "grfabc/grf.hpp"
#include "grfabc/samplers.hpp"

namespace grfabc::protein {

/// Residues over the 20 one-letter amino-acid codes.
class AminoSequence {
 public:
  AminoSequence() = default;
  /// Throws InvalidInput naming the offending position.
  explicit AminoSequence(std::string residues);

  /// Single line of one-letter codes; a trailing newline is allowed.
  static AminoSequence load(const std::filesystem::path& path);

  const std::string& residues() const noexcept { return residues_; }
  std::size_t size() const noexcept { return residues_.size(); }

 private:
  std::string residues_;
};

/// 0 = hydrophilic (K E R D Q N P H S T G), 1 = hydrophobic (A Y M W F V L I C).
/// Throws InvalidInput for anything else.
Label hydrophobicity_class(char residue);
Configuration hydrophobicity_labels(const AminoSequence& seq);

/// Edge-list format: first non-comment line holds the site count, every
/// further non-empty line two 0-based site indices. '#' starts a comment.
SiteGraph parse_contact_graph(std::istream& in, const std::string& source = "<stream>");
SiteGraph load_contact_graph(const std::filesystem::path& path);

struct CandidateStructure {
  std::string name;
  SiteGraph graph;
};

struct SelectionConfig {
  std::uint64_t seed = 1;
  std::uint64_t proposals = 1'200'000;
  std::uint64_t pilot_size = 10'000;
  double quantile = 0.01;
  /// When set, used as the tolerance and no pilot is drawn.
  std::optional<double> fixed_epsilon;
  /// Take the quantile from the estimation run's own distances instead of a
  /// separate pilot.
  bool pilot_from_run = false;
  std::size_t gibbs_sweeps = kDefaultGibbsSweeps;
  double prior_low = 0.0;
  double prior_high = 4.0;
  std::size_t workers = 1;
  LogBase log_base = LogBase::ten;
};

struct PairwiseResult {
  std::string reference;
  std::string candidate;
  BfEstimate bf;  // reference / candidate
  double epsilon = 0.0;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

/// For every candidate other than `reference`, runs ABC-MC on the pair
/// {reference, candidate} with equal model prior and reports the smoothed
/// Bayes factor reference/candidate. Each pair's randomness is keyed by the
/// run seed and the two names, so results do not depend on candidate order.
/// Rows come back sorted by descending Bayes factor, ties by candidate name.
std::vector<PairwiseResult> run_structure_selection(const Configuration& labels,
                                                    std::span<const CandidateStructure> candidates,
                                                    std::string_view reference, const SelectionConfig& config);
std::vector<PairwiseResult> run_structure_selection(const AminoSequence& seq,
                                                    std::span<const CandidateStructure> candidates,
                                                    std::string_view reference, const SelectionConfig& config);

/// BF(a/b) for a single pair, as used by run_structure_selection.
PairwiseResult compare_structures(const Configuration& labels, const CandidateStructure& a,
                                  const CandidateStructure& b, const SelectionConfig& config);

}  // namespace grfabc::protein
