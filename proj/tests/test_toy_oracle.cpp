#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "grfabc/error.hpp"
#include "grfabc/toy_oracle.hpp"

using namespace grfabc;

namespace {

// Composite Simpson rule, used as an oracle independent of the library's
// quadrature.
template <class F>
double simpson(F f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

double binom(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("m0 symmetry under s0 -> n - s0") {
  for (std::size_t n : {5u, 20u, 60u}) {
    for (std::int64_t s = 0; s <= static_cast<std::int64_t>(n); ++s) {
      CHECK(rel_err(toy::exact_marginal_m0(s, n), toy::exact_marginal_m0(static_cast<std::int64_t>(n) - s, n)) < 1e-9);
    }
  }
}

TEST_CASE("m0 at n = 5, s0 = 3") {
  const double alt = toy::marginal_m0_alternating(3, 5);
  CHECK(rel_err(alt, toy::marginal_m0_quadrature(3, 5)) < 1e-9);
  const double simp = simpson([](double t) { return std::exp(3 * t) / std::pow(1 + std::exp(t), 5); }, -5, 5) / 10;
  CHECK(rel_err(alt, simp) < 1e-9);
  CHECK(alt > 0.0);
}

TEST_CASE("m0 at n = 3, s0 = 1 from the mass of all sequences with one 1") {
  // P(S_0 = 1) under model 0, divided by the 3 sequences that share it.
  const double mass = simpson([](double t) { return 3 * std::exp(t) / std::pow(1 + std::exp(t), 3); }, -5, 5) / 10;
  CHECK(rel_err(toy::exact_marginal_m0(1, 3), mass / 3) < 1e-9);
}

TEST_CASE("m1 at n = 2, s1 = 0") {
  const double exact = (6.0 - std::log1p(std::exp(6.0)) + std::log(2.0)) / 12.0;
  CHECK(rel_err(toy::exact_marginal_m1(0, 2), exact) < 1e-9);
  CHECK(rel_err(toy::marginal_m1_quadrature(0, 2), exact) < 1e-9);
}

TEST_CASE("m1 with a single site") { CHECK(toy::exact_marginal_m1(0, 1) == doctest::Approx(0.5).epsilon(1e-12)); }

TEST_CASE("m1 increases with persistence") {
  double previous = 0.0;
  for (std::int64_t s = 0; s <= 19; ++s) {
    const double v = toy::exact_marginal_m1(s, 20);
    CHECK(v > previous);
    previous = v;
  }
}

TEST_CASE("m1 alternating sum agrees with quadrature") {
  for (std::size_t n : {5u, 20u, 60u}) {
    for (std::int64_t s = 1; s <= static_cast<std::int64_t>(n) - 2; ++s) {
      CAPTURE(n);
      CAPTURE(s);
      CHECK(rel_err(toy::marginal_m1_alternating(s, n), toy::marginal_m1_quadrature(s, n)) < 1e-6);
    }
  }
}

TEST_CASE("m0 alternating sum agrees with quadrature") {
  for (std::size_t n : {5u, 20u, 100u}) {
    for (std::int64_t s = 1; s <= static_cast<std::int64_t>(n) - 1; ++s) {
      CAPTURE(n);
      CAPTURE(s);
      CHECK(rel_err(toy::marginal_m0_alternating(s, n), toy::marginal_m0_quadrature(s, n)) < 1e-6);
    }
  }
}

TEST_CASE("alternating sum domain") {
  CHECK_THROWS_AS(toy::marginal_m0_alternating(0, 5), InvalidInput);
  CHECK_THROWS_AS(toy::marginal_m0_alternating(5, 5), InvalidInput);
}

TEST_CASE("marginals are probability mass functions") {
  for (int n = 1; n <= 12; ++n) {
    double total0 = 0, total1 = 0;
    for (int s = 0; s <= n; ++s) total0 += binom(n, s) * toy::exact_marginal_m0(s, n);
    // 2 C(n-1, s) sequences have s persistences.
    for (int s = 0; s <= n - 1; ++s) total1 += 2 * binom(n - 1, s) * toy::exact_marginal_m1(s, n);
    CAPTURE(n);
    CHECK(std::abs(total0 - 1) < 1e-8);
    CHECK(std::abs(total1 - 1) < 1e-8);
  }
}

TEST_CASE("alternating data favours the bernoulli model") {
  const auto x = Configuration::from_string("01010101010101010101");
  CHECK(concat_stats(x, toy::models(20)) == StatVector{10, 0});
  const auto post = toy::exact_posterior_and_bf(x, ModelPrior::uniform(2));
  CHECK(post.bf > 1.0);
  CHECK_FALSE(post.constant_data);
}

TEST_CASE("posterior from evidence") {
  const auto eq = toy::posterior_from_evidence(-3.0, -3.0, ModelPrior::uniform(2));
  CHECK(eq.p0 == doctest::Approx(0.5));
  CHECK(eq.bf == doctest::Approx(1.0));
  const auto skew = toy::posterior_from_evidence(-3.0, -3.0, ModelPrior({0.75, 0.25}));
  CHECK(skew.p0 == doctest::Approx(0.75));
  CHECK(skew.p1 == doctest::Approx(0.25));
  CHECK(skew.bf == doctest::Approx(1.0));
  // Far apart evidences do not underflow.
  const auto far = toy::posterior_from_evidence(-10.0, -1000.0, ModelPrior::uniform(2));
  CHECK(far.p0 == 1.0);
  CHECK(far.log_bf == doctest::Approx(990.0));
}

TEST_CASE("property: exact bayes factor ignores the model prior") {
  const auto x = Configuration::from_string("0011101100010111");
  const auto a = toy::exact_posterior_and_bf(x, ModelPrior::uniform(2));
  for (double w : {0.1, 0.3, 0.9}) {
    const auto b = toy::exact_posterior_and_bf(x, ModelPrior({w, 1 - w}));
    CHECK(b.bf == doctest::Approx(a.bf).epsilon(1e-12));
  }
}

TEST_CASE("constant sequences are flagged") {
  const auto post = toy::exact_posterior_and_bf(Configuration::from_string("1111111"), ModelPrior::uniform(2));
  CHECK(post.constant_data);
  CHECK(post.bf < 1.0);
}

TEST_CASE("cached evaluation is thread safe") {
  std::vector<double> seen(8);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < seen.size(); ++t) {
      pool.emplace_back([&, t] {
        double acc = 0;
        for (std::int64_t s = 0; s <= 70; ++s) acc += toy::log_exact_marginal_m0(s, 70) + toy::log_exact_marginal_m1(s % 70, 70);
        seen[t] = acc;
      });
    }
  }
  for (double v : seen) CHECK(v == seen.front());
}
