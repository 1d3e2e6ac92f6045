#include "grfabc/toy_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "grfabc/error.hpp"

namespace grfabc::toy {

namespace {

using HighPrecision = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;

constexpr double kRouteAgreement = 1e-6;

double log1p_exp(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double log_integrand(double theta, std::int64_t s, std::size_t n) {
  return theta * static_cast<double>(s) - static_cast<double>(n) * log1p_exp(theta);
}

void check_range(std::int64_t s, std::int64_t hi, const char* what) {
  if (s < 0 || s > hi) {
    throw InvalidInput(std::string(what) + " statistic " + std::to_string(s) + " outside [0, " + std::to_string(hi) +
                       "]");
  }
}

class MarginalCache {
 public:
  template <class Compute>
  double get(int model, std::int64_t s, std::size_t n, Compute&& compute) {
    const auto key = std::make_tuple(model, s, n);
    {
      std::shared_lock lock(mutex_);
      if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double value = compute();
    std::unique_lock lock(mutex_);
    values_.emplace(key, value);
    return value;
  }

 private:
  std::shared_mutex mutex_;
  std::map<std::tuple<int, std::int64_t, std::size_t>, double> values_;
};

MarginalCache& cache() {
  static MarginalCache instance;
  return instance;
}

bool routes_agree(double log_a, double log_b) { return std::abs(std::expm1(log_a - log_b)) <= kRouteAgreement; }

// Prefers the alternating sum when it is defined and agrees with quadrature.
double reconcile(std::int64_t s, std::size_t n, double lo, double hi, double log_scale) {
  const double by_quadrature = log_integral_quadrature(s, n, lo, hi) + log_scale;
  if (s < 1 || s > static_cast<std::int64_t>(n) - 1) return by_quadrature;
  double by_sum = 0.0;
  try {
    by_sum = log_integral_alternating(s, n, lo, hi) + log_scale;
  } catch (const Error&) {
    return by_quadrature;
  }
  return routes_agree(by_sum, by_quadrature) ? by_sum : by_quadrature;
}

}  // namespace

std::vector<ModelSpec> models(std::size_t n) {
  return {ModelSpec::bernoulli(n, kTheta0Low, kTheta0High), ModelSpec::markov(n, kTheta1Low, kTheta1High)};
}

double log_integral_quadrature(std::int64_t s, std::size_t n, double lo, double hi) {
  using boost::math::quadrature::gauss_kronrod;
  // The log integrand is concave with its maximum at logit(s/n).
  double peak = 0.0;
  if (n == 0 || s >= static_cast<std::int64_t>(n)) {
    peak = hi;
  } else if (s <= 0) {
    peak = lo;
  } else {
    peak = std::clamp(std::log(static_cast<double>(s) / static_cast<double>(static_cast<std::int64_t>(n) - s)), lo, hi);
  }
  const double top = log_integrand(peak, s, n);
  auto f = [&](double theta) { return std::exp(log_integrand(theta, s, n) - top); };

  double total = 0.0;
  if (peak > lo) total += gauss_kronrod<double, 61>::integrate(f, lo, peak, 20, 1e-12);
  if (peak < hi) total += gauss_kronrod<double, 61>::integrate(f, peak, hi, 20, 1e-12);
  return top + std::log(total);
}

double log_integral_alternating(std::int64_t s, std::size_t n, double lo, double hi) {
  if (s < 1 || s > static_cast<std::int64_t>(n) - 1) {
    throw InvalidInput("alternating sum requires 1 <= s <= n - 1");
  }
  // With t = e^theta and u = 1 + t the integrand becomes (u-1)^(s-1) u^(-n) du,
  // whose expansion integrates term by term since k - n + 1 < 0 throughout.
  const HighPrecision log_u_lo = log(HighPrecision(1) + exp(HighPrecision(lo)));
  const HighPrecision log_u_hi = log(HighPrecision(1) + exp(HighPrecision(hi)));
  const std::int64_t top = s - 1;
  const auto nn = static_cast<std::int64_t>(n);

  HighPrecision sum = 0;
  HighPrecision binom = 1;  // C(s-1, k)
  for (std::int64_t k = 0; k <= top; ++k) {
    const std::int64_t power = k - nn + 1;
    const HighPrecision bracket = exp(log_u_hi * power) - exp(log_u_lo * power);
    HighPrecision term = binom * bracket / power;
    if ((top - k) % 2 != 0) term = -term;
    sum += term;
    binom = binom * (top - k) / (k + 1);
  }
  if (sum <= 0) throw Error("alternating sum lost all precision");
  return static_cast<double>(log(sum));
}

double marginal_m0_quadrature(std::int64_t s0, std::size_t n) {
  check_range(s0, static_cast<std::int64_t>(n), "model 0");
  return std::exp(log_integral_quadrature(s0, n, kTheta0Low, kTheta0High)) / (kTheta0High - kTheta0Low);
}

double marginal_m0_alternating(std::int64_t s0, std::size_t n) {
  check_range(s0, static_cast<std::int64_t>(n), "model 0");
  return std::exp(log_integral_alternating(s0, n, kTheta0Low, kTheta0High)) / (kTheta0High - kTheta0Low);
}

double marginal_m1_quadrature(std::int64_t s1, std::size_t n) {
  if (n == 0) throw InvalidInput("model 1 needs at least one site");
  check_range(s1, static_cast<std::int64_t>(n) - 1, "model 1");
  return 0.5 * std::exp(log_integral_quadrature(s1, n - 1, kTheta1Low, kTheta1High)) / (kTheta1High - kTheta1Low);
}

double marginal_m1_alternating(std::int64_t s1, std::size_t n) {
  if (n == 0) throw InvalidInput("model 1 needs at least one site");
  check_range(s1, static_cast<std::int64_t>(n) - 1, "model 1");
  return 0.5 * std::exp(log_integral_alternating(s1, n - 1, kTheta1Low, kTheta1High)) / (kTheta1High - kTheta1Low);
}

double log_exact_marginal_m0(std::int64_t s0, std::size_t n) {
  check_range(s0, static_cast<std::int64_t>(n), "model 0");
  return cache().get(0, s0, n, [&] {
    return reconcile(s0, n, kTheta0Low, kTheta0High, -std::log(kTheta0High - kTheta0Low));
  });
}

double exact_marginal_m0(std::int64_t s0, std::size_t n) { return std::exp(log_exact_marginal_m0(s0, n)); }

double log_exact_marginal_m1(std::int64_t s1, std::size_t n) {
  if (n == 0) throw InvalidInput("model 1 needs at least one site");
  check_range(s1, static_cast<std::int64_t>(n) - 1, "model 1");
  return cache().get(1, s1, n, [&] {
    return log_integral_quadrature(s1, n - 1, kTheta1Low, kTheta1High) + std::log(0.5) -
           std::log(kTheta1High - kTheta1Low);
  });
}

double exact_marginal_m1(std::int64_t s1, std::size_t n) { return std::exp(log_exact_marginal_m1(s1, n)); }

ExactPosterior posterior_from_evidence(double log_e0, double log_e1, const ModelPrior& prior) {
  if (prior.size() != 2) throw InvalidInput("toy comparison has exactly two models");
  ExactPosterior out;
  out.log_bf = log_e0 - log_e1;
  out.bf = std::exp(out.log_bf);
  // P(M=1|x) = 1 / (1 + BF * pi0/pi1), computed in log space.
  if (prior[0] == 0.0 || prior[1] == 0.0) {
    out.p0 = prior[0] == 0.0 ? 0.0 : 1.0;
  } else {
    const double log_odds = out.log_bf + std::log(prior[0]) - std::log(prior[1]);
    out.p0 = log_odds >= 0 ? 1.0 / (1.0 + std::exp(-log_odds)) : std::exp(log_odds) / (1.0 + std::exp(log_odds));
  }
  out.p1 = 1.0 - out.p0;
  return out;
}

ExactPosterior exact_posterior_and_bf(const Configuration& x0, const ModelPrior& prior) {
  if (x0.empty()) throw InvalidInput("observed sequence is empty");
  const std::size_t n = x0.size();
  const std::int64_t s0 = suff_stat_bernoulli(x0);
  const std::int64_t s1 = suff_stat_markov(x0);
  auto out = posterior_from_evidence(log_exact_marginal_m0(s0, n), log_exact_marginal_m1(s1, n), prior);
  out.constant_data = (s0 == 0 || s0 == static_cast<std::int64_t>(n));
  return out;
}

}  // namespace grfabc::toy
