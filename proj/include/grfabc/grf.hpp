#pragma once

// Binary Gibbs random fields: configurations, neighbourhood graphs, the
// sufficient statistics of the candidate models, and exact enumeration of
// normalising constants for small site counts.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace grfabc {

using Label = std::uint8_t;

/// A labelling of n sites with states in {0,1}.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Label> states);

  /// Parses a string of '0'/'1' characters. Whitespace is ignored.
  static Configuration from_string(std::string_view bits);

  std::size_t size() const noexcept { return states_.size(); }
  bool empty() const noexcept { return states_.empty(); }
  std::span<const Label> states() const noexcept { return states_; }
  Label operator[](std::size_t i) const { return states_[i]; }
  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Label> states_;
};

struct Edge {
  std::uint32_t a;  // a < b
  std::uint32_t b;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph over sites 0..n_sites-1.
///
/// Edges are stored canonically as (min, max), sorted. Self-loops, duplicate
/// edges and out-of-range indices are rejected with InvalidInput. Adjacency
/// is kept in compressed row form for the Gibbs sampler.
class SiteGraph {
 public:
  SiteGraph() = default;
  SiteGraph(std::size_t n_sites, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  static SiteGraph path(std::size_t n_sites);
  static SiteGraph cycle(std::size_t n_sites);

  std::size_t n_sites() const noexcept { return n_sites_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const std::uint32_t> neighbours(std::size_t site) const noexcept {
    return {adjacency_.data() + offsets_[site], adjacency_.data() + offsets_[site + 1]};
  }
  std::size_t max_degree() const noexcept { return max_degree_; }

  friend bool operator==(const SiteGraph& l, const SiteGraph& r) {
    return l.n_sites_ == r.n_sites_ && l.edges_ == r.edges_;
  }

 private:
  std::size_t n_sites_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> adjacency_;
  std::size_t max_degree_ = 0;
};

struct BernoulliCount {};
struct MarkovPersistence {};
struct IsingMatch {
  std::shared_ptr<const SiteGraph> graph;
};

enum class StatisticKind { bernoulli, markov, ising };

using Statistic = std::variant<BernoulliCount, MarkovPersistence, IsingMatch>;

/// One candidate model: f(x|theta) = exp(theta * S(x)) / Z_theta with a
/// uniform prior on theta over [prior_low, prior_high].
class ModelSpec {
 public:
  static ModelSpec bernoulli(std::size_t n_sites, double prior_low, double prior_high);
  static ModelSpec markov(std::size_t n_sites, double prior_low, double prior_high);
  static ModelSpec ising(SiteGraph graph, double prior_low, double prior_high);

  StatisticKind kind() const noexcept;
  const Statistic& statistic() const noexcept { return statistic_; }
  std::size_t n_sites() const noexcept { return n_sites_; }
  double prior_low() const noexcept { return prior_low_; }
  double prior_high() const noexcept { return prior_high_; }
  /// Null unless kind() == ising.
  const SiteGraph* graph() const noexcept;

  /// S_m(x). The caller guarantees x.size() == n_sites().
  std::int64_t evaluate(std::span<const Label> x) const;

 private:
  ModelSpec(Statistic statistic, std::size_t n_sites, double prior_low, double prior_high);

  Statistic statistic_;
  std::size_t n_sites_;
  double prior_low_;
  double prior_high_;
};

using StatVector = std::vector<std::int64_t>;

std::int64_t suff_stat_bernoulli(std::span<const Label> x) noexcept;
std::int64_t suff_stat_bernoulli(const Configuration& x) noexcept;

/// Number of i in 1..n-1 with x[i] == x[i-1]; zero for n <= 1.
std::int64_t suff_stat_markov(std::span<const Label> x) noexcept;
std::int64_t suff_stat_markov(const Configuration& x) noexcept;

/// Number of edges whose endpoints carry equal labels.
std::int64_t suff_stat_ising(std::span<const Label> x, const SiteGraph& g);
std::int64_t suff_stat_ising(const Configuration& x, const SiteGraph& g);

/// (S_0(x), ..., S_{M-1}(x)) in model order.
StatVector concat_stats(const Configuration& x, std::span<const ModelSpec> models);
void concat_stats(std::span<const Label> x, std::span<const ModelSpec> models, std::span<std::int64_t> out);

/// theta * S_m(x). The normalising constant is never evaluated here.
double log_unnorm_density(const ModelSpec& m, double theta, const Configuration& x);

inline constexpr std::size_t kEnumerationCap = 20;

/// Exact sum of exp(theta * S_m(x)) over all 2^n configurations.
/// Throws InvalidInput when n exceeds kEnumerationCap.
double brute_force_z(const ModelSpec& m, double theta);
double log_brute_force_z(const ModelSpec& m, double theta);

/// (1+e^theta)^n for the Bernoulli model, 2(1+e^theta)^(n-1) for the
/// Markov model. No closed form exists for Ising graphs (InvalidInput).
double closed_form_z(StatisticKind kind, double theta, std::size_t n);
double log_closed_form_z(StatisticKind kind, double theta, std::size_t n);

}  // namespace grfabc
