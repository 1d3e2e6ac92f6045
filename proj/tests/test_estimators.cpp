#include <doctest.h>

#include <cmath>
#include <vector>

#include "grfabc/error.hpp"
#include "grfabc/estimators.hpp"
#include "grfabc/rng.hpp"

using namespace grfabc;

namespace {

using C = JeffreysCategory;

ModelCounts counts(std::uint64_t a, std::uint64_t b) { return ModelCounts({a, b}); }

// E[(N0 + 1)/(N1 + 1)] - (1 - p)/p with N1 ~ Binomial(N, p), by direct summation.
long double enumerated_bias(long double p, unsigned n) {
  long double total = 0, coef = 1;
  for (unsigned k = 0; k <= n; ++k) {
    if (k > 0) coef = coef * (n - k + 1) / k;
    const long double pmf = coef * std::pow(p, (long double)k) * std::pow(1 - p, (long double)(n - k));
    total += pmf * (n - k + 1) / (k + 1);
  }
  return total - (1 - p) / p;
}

}  // namespace

TEST_CASE("posterior probability estimates") {
  CHECK(posterior_prob_hat(counts(30, 70), 0) == doctest::Approx(0.3));
  CHECK(posterior_prob_hat(counts(0, 5), 0) == 0.0);
  CHECK_THROWS_AS(posterior_prob_hat(counts(0, 0), 0), NoEstimate);
  CHECK_THROWS_AS(posterior_prob_hat(counts(1, 0), 2), InvalidInput);
}

TEST_CASE("plug-in bayes factor") {
  const auto equal = ModelPrior::uniform(2);
  CHECK(bf_plugin(counts(60, 30), equal).value == doctest::Approx(2.0));
  CHECK_THROWS_AS(bf_plugin(counts(10, 0), equal), NoEstimate);
  const auto est = bf_plugin(counts(50, 50), ModelPrior({0.25, 0.75}));
  CHECK(est.value == doctest::Approx(3.0));
  CHECK(est.prior_odds_used == doctest::Approx(3.0));
  CHECK(est.kind == BfKind::plugin);
}

TEST_CASE("smoothed bayes factor") {
  const auto equal = ModelPrior::uniform(2);
  CHECK(bf_smoothed(counts(9, 4), equal).value == doctest::Approx(2.0));
  const auto empty = bf_smoothed(counts(0, 0), equal);
  CHECK(empty.value == 1.0);
  CHECK(empty.jeffreys == C::m0_weak);
  CHECK(bf_smoothed(counts(9, 4), ModelPrior({1.0 / 3, 2.0 / 3})).value == doctest::Approx(4.0));
  const ModelCounts three({4, 0, 9});
  CHECK(bf_smoothed(three, ModelPrior::uniform(3), 2, 1).value == doctest::Approx(10.0));
}

TEST_CASE("bias formula") {
  CHECK(bf_bias(1.0, 9) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(std::abs(bf_bias(0.5, 20) - static_cast<double>(enumerated_bias(0.5L, 20))) < 1e-12);
  CHECK(bf_bias(0.5, 10000) < 1e-3);
  CHECK(bf_bias(0.5, 10000) > 0.0);
  CHECK_THROWS_AS(bf_bias(0.0, 5), InvalidInput);
  CHECK_THROWS_AS(bf_bias(1.5, 5), InvalidInput);
}

TEST_CASE("property: bias formula matches binomial enumeration") {
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (unsigned n = 0; n <= 25; ++n) {
      CAPTURE(p);
      CAPTURE(n);
      CHECK(std::abs(bf_bias(p, n) - static_cast<double>(enumerated_bias(p, n))) < 1e-12);
    }
  }
}

TEST_CASE("property: smoothed ratio equals the ratio of dirichlet posterior means") {
  for (std::uint64_t a = 0; a < 40; ++a) {
    for (std::uint64_t b = 0; b < 40; ++b) {
      const double n = static_cast<double>(a + b);
      const double mean0 = (a + 1.0) / (n + 2.0);
      const double mean1 = (b + 1.0) / (n + 2.0);
      CHECK(bf_smoothed(counts(a, b), ModelPrior::uniform(2)).value == doctest::Approx(mean0 / mean1).epsilon(1e-15));
    }
  }
}

TEST_CASE("reweighted bayes factor") {
  CHECK(bf_reweighted(counts(50, 50), 0.9).value == doctest::Approx(9.0));
  CHECK(bf_reweighted(counts(0, 99), 0.99).value == doctest::Approx(0.99));
  const auto c = counts(17, 4);
  CHECK(bf_reweighted(c, 0.5).value == bf_smoothed(c, ModelPrior::uniform(2)).value);
  CHECK(bf_reweighted(c, 0.5).kind == BfKind::reweighted);
  CHECK_THROWS_AS(bf_reweighted(c, 1.0), InvalidInput);
  CHECK_THROWS_AS(bf_reweighted(c, 0.0), InvalidInput);
  CHECK_THROWS_AS(bf_reweighted(ModelCounts({1, 2, 3}), 0.5), InvalidInput);
}

TEST_CASE("property: reweighting converges to the smoothed estimate") {
  // Accepted model indices under sampling weight rho on m1 are Bernoulli with
  // P(M = 1) = rho p1 / (rho p1 + (1 - rho) p0), p being the posterior under
  // equal weights.
  const double p0 = 0.8;
  const std::uint64_t n = 100000;
  Rng rng(31, 0);
  auto draw = [&](double rho) {
    const double q1 = rho * (1 - p0) / (rho * (1 - p0) + (1 - rho) * p0);
    std::uint64_t n1 = 0;
    for (std::uint64_t i = 0; i < n; ++i) n1 += rng.bernoulli(q1);
    return counts(n - n1, n1);
  };
  auto log_se = [](const ModelCounts& c) { return std::sqrt(1.0 / (c[0] + 1.0) + 1.0 / (c[1] + 1.0)); };
  const auto c_half = draw(0.5);
  const auto c_again = draw(0.5);
  const auto c_tilt = draw(0.9);
  const double base = std::log(bf_smoothed(c_half, ModelPrior::uniform(2)).value);
  const double l_again = std::log(bf_reweighted(c_again, 0.5).value);
  const double l_tilt = std::log(bf_reweighted(c_tilt, 0.9).value);
  CHECK(std::abs(l_again - base) < 3 * std::hypot(log_se(c_half), log_se(c_again)));
  CHECK(std::abs(l_tilt - base) < 3 * std::hypot(log_se(c_half), log_se(c_tilt)));
  CHECK(std::abs(base - std::log(p0 / (1 - p0))) < 3 * log_se(c_half));
}

TEST_CASE("two-step rho") {
  CHECK(two_step_rho(counts(10, 10)) == doctest::Approx(0.5));
  CHECK(two_step_rho(counts(97, 1)) == doctest::Approx(0.98));
  CHECK(two_step_rho(counts(100000, 0)) == kRhoMax);
  CHECK(two_step_rho(counts(0, 100000)) == kRhoMin);
  CHECK(two_step_rho(counts(0, 0)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(two_step_rho(ModelCounts({1, 2, 3})), InvalidInput);
}

TEST_CASE("jeffreys scale") {
  CHECK(jeffreys_category(2.5) == C::m0_decisive);
  CHECK(jeffreys_category(-0.3) == C::m1_weak);
  CHECK(jeffreys_category(0.7) == C::m0_substantial);
  CHECK(jeffreys_category(1.5) == C::m0_strong);
  CHECK(jeffreys_category(-2.5) == C::m1_decisive);
  CHECK(jeffreys_category(0.0) == C::m0_weak);

  // Boundaries belong to the weaker category.
  CHECK(jeffreys_category(0.5) == C::m0_weak);
  CHECK(jeffreys_category(1.0) == C::m0_substantial);
  CHECK(jeffreys_category(2.0) == C::m0_strong);
  CHECK(jeffreys_category(-0.5) == C::m1_weak);
  CHECK(jeffreys_category(-1.0) == C::m1_substantial);
  CHECK(jeffreys_category(-2.0) == C::m1_strong);

  CHECK(jeffreys_category_of(std::pow(10.0, 0.7), LogBase::ten) == C::m0_substantial);
  CHECK(jeffreys_category_of(std::exp(0.7), LogBase::e) == C::m0_substantial);
  CHECK(jeffreys_category_of(std::exp(0.7), LogBase::ten) == C::m0_weak);
  CHECK(jeffreys_category(INFINITY) == C::m0_decisive);
  CHECK(jeffreys_category(-INFINITY) == C::m1_decisive);
}

TEST_CASE("property: jeffreys categories mirror under sign change") {
  Rng rng(2, 2);
  for (int i = 0; i < 10000; ++i) {
    const double z = rng.uniform(-4, 4);
    if (z == 0.0) continue;
    const auto a = static_cast<std::size_t>(jeffreys_category(z));
    const auto b = static_cast<std::size_t>(jeffreys_category(-z));
    CHECK(a + b == kJeffreysCategories - 1);
  }
  for (double z : {0.5, 1.0, 2.0}) {
    CHECK(static_cast<std::size_t>(jeffreys_category(z)) + static_cast<std::size_t>(jeffreys_category(-z)) ==
          kJeffreysCategories - 1);
  }
}

TEST_CASE("category names round trip") {
  for (std::size_t i = 0; i < kJeffreysCategories; ++i) {
    const auto c = static_cast<C>(i);
    CHECK(parse_jeffreys_category(to_string(c)) == c);
  }
  CHECK_FALSE(parse_jeffreys_category("strong").has_value());
  CHECK(to_string(C::m1_decisive) == "m1-decisive");
}
