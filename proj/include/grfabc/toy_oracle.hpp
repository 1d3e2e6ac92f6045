#pragma once

// Exact evidence for the iid Bernoulli model (model 0, theta0 ~ U(-5, 5))
// against the symmetric two-state Markov chain (model 1, theta1 ~ U(0, 6)).
// Both likelihoods depend on the data only through their statistic, so the
// marginal of a sequence is a one-dimensional integral over theta.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "grfabc/grf.hpp"
#include "grfabc/samplers.hpp"

namespace grfabc::toy {

inline constexpr double kTheta0Low = -5.0;
inline constexpr double kTheta0High = 5.0;
inline constexpr double kTheta1Low = 0.0;
inline constexpr double kTheta1High = 6.0;

/// {Bernoulli on U(-5,5), Markov on U(0,6)} over n sites.
std::vector<ModelSpec> models(std::size_t n);

/// log of the integral of exp(theta*s) / (1 + e^theta)^n over [lo, hi] by
/// adaptive Gauss-Kronrod quadrature of the peak-normalised integrand.
double log_integral_quadrature(std::int64_t s, std::size_t n, double lo, double hi);

/// Same integral via the substitution u = 1 + e^theta and binomial
/// expansion of (u - 1)^(s-1), evaluated with 200 significant digits.
/// Requires 1 <= s <= n - 1.
double log_integral_alternating(std::int64_t s, std::size_t n, double lo, double hi);

/// m0(x) for any sequence with S_0(x) = s0, by quadrature.
double marginal_m0_quadrature(std::int64_t s0, std::size_t n);
/// m0(x) by the alternating binomial sum; 1 <= s0 <= n - 1.
double marginal_m0_alternating(std::int64_t s0, std::size_t n);
/// m1(x) for any sequence with S_1(x) = s1, by quadrature.
double marginal_m1_quadrature(std::int64_t s1, std::size_t n);
/// m1(x) by the alternating binomial sum; 1 <= s1 <= n - 2.
double marginal_m1_alternating(std::int64_t s1, std::size_t n);

/// Evidence of one sequence with S_0 = s0 under model 0. Interior values use
/// the alternating sum, s0 in {0, n} use quadrature, and quadrature wins when
/// the two routes disagree beyond 1e-6 relative. Memoised; safe to call
/// concurrently.
double log_exact_marginal_m0(std::int64_t s0, std::size_t n);
double exact_marginal_m0(std::int64_t s0, std::size_t n);

/// Evidence of one sequence with S_1 = s1 under model 1 (quadrature, checked
/// against the alternating sum where it is defined). Memoised.
double log_exact_marginal_m1(std::int64_t s1, std::size_t n);
double exact_marginal_m1(std::int64_t s1, std::size_t n);

struct ExactPosterior {
  double p0 = 0.5;
  double p1 = 0.5;
  double bf = 1.0;      // m0 / m1
  double log_bf = 0.0;  // natural log
  bool constant_data = false;
};

/// Combines log evidences with a two-model prior.
ExactPosterior posterior_from_evidence(double log_e0, double log_e1, const ModelPrior& prior);

/// Exact P(M = j | x0) and BF_{0/1}. Constant sequences are allowed and
/// flagged through `constant_data`.
ExactPosterior exact_posterior_and_bf(const Configuration& x0, const ModelPrior& prior);

}  // namespace grfabc::toy
