#include "grfabc/grf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grfabc/error.hpp"

namespace grfabc {

namespace {

double log1p_exp(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

// Histogram of S_m over all 2^n configurations, indexed by statistic value.
std::vector<double> enumerate_statistic(const ModelSpec& m) {
  const std::size_t n = m.n_sites();
  if (n > kEnumerationCap) {
    throw InvalidInput("brute-force enumeration limited to " + std::to_string(kEnumerationCap) + " sites, got " +
                       std::to_string(n));
  }
  std::vector<double> histogram;
  std::vector<Label> x(n, 0);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<Label>((mask >> i) & 1u);
    const auto s = static_cast<std::size_t>(m.evaluate(x));
    if (s >= histogram.size()) histogram.resize(s + 1, 0.0);
    histogram[s] += 1.0;
  }
  return histogram;
}

}  // namespace

Configuration::Configuration(std::vector<Label> states) : states_(std::move(states)) {
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (states_[i] > 1) throw InvalidInput("label at site " + std::to_string(i) + " is not 0 or 1");
  }
}

Configuration Configuration::from_string(std::string_view bits) {
  std::vector<Label> states;
  states.reserve(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const char c = bits[i];
    if (c == '0' || c == '1') {
      states.push_back(static_cast<Label>(c - '0'));
    } else if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
      throw InvalidInput("invalid label character '" + std::string(1, c) + "' at position " + std::to_string(i));
    }
  }
  return Configuration(std::move(states));
}

std::string Configuration::to_string() const {
  std::string s(states_.size(), '0');
  for (std::size_t i = 0; i < states_.size(); ++i) s[i] = static_cast<char>('0' + states_[i]);
  return s;
}

SiteGraph::SiteGraph(std::size_t n_sites, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
    : n_sites_(n_sites) {
  if (n_sites > std::numeric_limits<std::uint32_t>::max()) throw InvalidInput("too many sites");
  edges_.reserve(edges.size());
  for (auto [i, j] : edges) {
    if (i >= n_sites || j >= n_sites) {
      throw InvalidInput("edge (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range for " +
                         std::to_string(n_sites) + " sites");
    }
    if (i == j) throw InvalidInput("self-loop at site " + std::to_string(i));
    edges_.push_back({static_cast<std::uint32_t>(std::min(i, j)), static_cast<std::uint32_t>(std::max(i, j))});
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw InvalidInput("duplicate edge (" + std::to_string(dup->a) + ", " + std::to_string(dup->b) + ")");
  }

  std::vector<std::size_t> degree(n_sites, 0);
  for (const auto& e : edges_) {
    ++degree[e.a];
    ++degree[e.b];
  }
  offsets_.assign(n_sites + 1, 0);
  for (std::size_t i = 0; i < n_sites; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.a]++] = e.b;
    adjacency_[fill[e.b]++] = e.a;
  }
  max_degree_ = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
}

SiteGraph SiteGraph::path(std::size_t n_sites) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i < n_sites; ++i) edges.emplace_back(i - 1, i);
  return SiteGraph(n_sites, edges);
}

SiteGraph SiteGraph::cycle(std::size_t n_sites) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i < n_sites; ++i) edges.emplace_back(i - 1, i);
  if (n_sites > 2) edges.emplace_back(n_sites - 1, 0);
  return SiteGraph(n_sites, edges);
}

ModelSpec::ModelSpec(Statistic statistic, std::size_t n_sites, double prior_low, double prior_high)
    : statistic_(std::move(statistic)), n_sites_(n_sites), prior_low_(prior_low), prior_high_(prior_high) {
  if (!(prior_low < prior_high) || !std::isfinite(prior_low) || !std::isfinite(prior_high)) {
    throw InvalidInput("prior interval must satisfy low < high with finite bounds");
  }
}

ModelSpec ModelSpec::bernoulli(std::size_t n_sites, double prior_low, double prior_high) {
  return ModelSpec(BernoulliCount{}, n_sites, prior_low, prior_high);
}

ModelSpec ModelSpec::markov(std::size_t n_sites, double prior_low, double prior_high) {
  return ModelSpec(MarkovPersistence{}, n_sites, prior_low, prior_high);
}

ModelSpec ModelSpec::ising(SiteGraph graph, double prior_low, double prior_high) {
  const std::size_t n = graph.n_sites();
  return ModelSpec(IsingMatch{std::make_shared<const SiteGraph>(std::move(graph))}, n, prior_low, prior_high);
}

StatisticKind ModelSpec::kind() const noexcept {
  return static_cast<StatisticKind>(statistic_.index());
}

const SiteGraph* ModelSpec::graph() const noexcept {
  if (const auto* ising = std::get_if<IsingMatch>(&statistic_)) return ising->graph.get();
  return nullptr;
}

std::int64_t ModelSpec::evaluate(std::span<const Label> x) const {
  switch (kind()) {
    case StatisticKind::bernoulli:
      return suff_stat_bernoulli(x);
    case StatisticKind::markov:
      return suff_stat_markov(x);
    case StatisticKind::ising:
      return suff_stat_ising(x, *graph());
  }
  return 0;
}

std::int64_t suff_stat_bernoulli(std::span<const Label> x) noexcept {
  std::int64_t s = 0;
  for (Label v : x) s += v;
  return s;
}

std::int64_t suff_stat_bernoulli(const Configuration& x) noexcept { return suff_stat_bernoulli(x.states()); }

std::int64_t suff_stat_markov(std::span<const Label> x) noexcept {
  std::int64_t s = 0;
  for (std::size_t i = 1; i < x.size(); ++i) s += (x[i] == x[i - 1]);
  return s;
}

std::int64_t suff_stat_markov(const Configuration& x) noexcept { return suff_stat_markov(x.states()); }

std::int64_t suff_stat_ising(std::span<const Label> x, const SiteGraph& g) {
  if (x.size() != g.n_sites()) {
    throw InvalidInput("configuration has " + std::to_string(x.size()) + " sites but graph has " +
                       std::to_string(g.n_sites()));
  }
  std::int64_t s = 0;
  for (const auto& e : g.edges()) s += (x[e.a] == x[e.b]);
  return s;
}

std::int64_t suff_stat_ising(const Configuration& x, const SiteGraph& g) { return suff_stat_ising(x.states(), g); }

void concat_stats(std::span<const Label> x, std::span<const ModelSpec> models, std::span<std::int64_t> out) {
  for (std::size_t m = 0; m < models.size(); ++m) out[m] = models[m].evaluate(x);
}

StatVector concat_stats(const Configuration& x, std::span<const ModelSpec> models) {
  for (const auto& m : models) {
    if (m.n_sites() != x.size()) {
      throw InvalidInput("inconsistent site counts: model has " + std::to_string(m.n_sites()) +
                         " sites, configuration has " + std::to_string(x.size()));
    }
  }
  StatVector out(models.size());
  concat_stats(x.states(), models, out);
  return out;
}

double log_unnorm_density(const ModelSpec& m, double theta, const Configuration& x) {
  if (x.size() != m.n_sites()) throw InvalidInput("configuration size does not match model");
  return theta * static_cast<double>(m.evaluate(x.states()));
}

double log_brute_force_z(const ModelSpec& m, double theta) {
  const auto histogram = enumerate_statistic(m);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < histogram.size(); ++s) {
    if (histogram[s] > 0) top = std::max(top, theta * static_cast<double>(s));
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < histogram.size(); ++s) {
    if (histogram[s] > 0) sum += histogram[s] * std::exp(theta * static_cast<double>(s) - top);
  }
  return top + std::log(sum);
}

double brute_force_z(const ModelSpec& m, double theta) { return std::exp(log_brute_force_z(m, theta)); }

double log_closed_form_z(StatisticKind kind, double theta, std::size_t n) {
  const double per_site = log1p_exp(theta);
  switch (kind) {
    case StatisticKind::bernoulli:
      return static_cast<double>(n) * per_site;
    case StatisticKind::markov:
      if (n == 0) throw InvalidInput("Markov model needs at least one site");
      return std::log(2.0) + static_cast<double>(n - 1) * per_site;
    case StatisticKind::ising:
      break;
  }
  throw InvalidInput("no closed-form normalising constant for Ising graphs");
}

double closed_form_z(StatisticKind kind, double theta, std::size_t n) {
  return std::exp(log_closed_form_z(kind, theta, n));
}

}  // namespace grfabc
