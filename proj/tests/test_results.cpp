#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "grfabc/error.hpp"
#include "grfabc/results.hpp"
#include "grfabc/rng.hpp"

using namespace grfabc;
using namespace grfabc::results;

namespace {

ToyRow random_row(Rng& rng, std::uint64_t id) {
  ToyRow r;
  r.dataset = id;
  r.true_model = static_cast<int>(rng() & 1u);
  r.theta = rng.uniform(-5, 5);
  r.s0 = static_cast<std::int64_t>(rng() % 100);
  r.s1 = static_cast<std::int64_t>(rng() % 99);
  r.constant_data = rng.bernoulli(0.1);
  r.exact_p0 = rng.uniform();
  r.exact_log10_bf = rng.uniform(-40, 40);
  r.exact_category = static_cast<JeffreysCategory>(rng() % kJeffreysCategories);
  r.eps0_n0 = rng() % 1000;
  r.eps0_n1 = rng() % 1000;
  if (rng.bernoulli(0.8)) r.eps0_p0 = rng.uniform();
  r.eps0_bf = std::exp(rng.uniform(-20, 20));
  r.eps0_category = static_cast<JeffreysCategory>(rng() % kJeffreysCategories);
  r.tol_epsilon = rng.bernoulli(0.1) ? std::numeric_limits<double>::infinity() : rng.uniform(0, 5);
  r.tol_n0 = rng() % 100000;
  r.tol_n1 = rng() % 100000;
  if (rng.bernoulli(0.8)) r.tol_p0 = rng.uniform();
  r.tol_bf = 1 / rng.uniform(0.001, 1);
  r.tol_category = static_cast<JeffreysCategory>(rng() % kJeffreysCategories);
  return r;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(NAN) == "nan");
  CHECK(parse_double("inf") == std::numeric_limits<double>::infinity());
  CHECK(std::isnan(parse_double("nan")));
  CHECK_THROWS_AS(parse_double("1.5x"), InvalidInput);
  CHECK_THROWS_AS(parse_double(""), InvalidInput);
}

TEST_CASE("csv splitting") {
  CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(split_csv_line("") == std::vector<std::string>{""});
}

TEST_CASE("property: toy rows round trip") {
  Rng rng(77, 0);
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const auto row = random_row(rng, i);
    const auto line = to_csv(row);
    const auto back = parse_toy_row(line);
    CHECK(back == row);
    CHECK(to_csv(back) == line);
  }
  CHECK(split_csv_line(toy_header()).size() == toy_columns().size());
}

TEST_CASE("malformed toy rows are rejected") {
  Rng rng(1, 1);
  const auto line = to_csv(random_row(rng, 0));
  CHECK_THROWS_AS(parse_toy_row(line + ",extra"), InvalidInput);
  CHECK_THROWS_AS(parse_toy_row(line.substr(0, line.rfind(','))), InvalidInput);
  auto bad = line;
  bad.replace(bad.rfind(','), std::string::npos, ",m0-great");
  CHECK_THROWS_AS(parse_toy_row(bad), InvalidInput);
}

TEST_CASE("property: protein rows round trip") {
  Rng rng(78, 0);
  for (std::uint64_t i = 0; i < 500; ++i) {
    ProteinRow r{i + 1,
                 "NS",
                 "ST" + std::to_string(i),
                 std::exp(rng.uniform(-10, 10)),
                 rng.uniform(-4, 4),
                 static_cast<JeffreysCategory>(rng() % kJeffreysCategories),
                 rng() % 100000,
                 rng() % 100000,
                 rng.uniform(0, 3),
                 1200000};
    const auto line = to_csv(r);
    CHECK(parse_protein_row(line) == r);
    CHECK(to_csv(parse_protein_row(line)) == line);
  }
  ProteinRow comma;
  comma.candidate = "a,b";
  CHECK_THROWS_AS(to_csv(comma), InvalidInput);
}

TEST_CASE("schema listing") {
  const auto schema = schema_csv(protein_columns());
  CHECK(schema.rfind("column,type,description\n", 0) == 0);
  CHECK(std::count(schema.begin(), schema.end(), '\n') == static_cast<long>(protein_columns().size() + 1));
}

TEST_CASE("confusion matrix summaries") {
  ConfusionMatrix m{};
  m[0][0] = 5;
  m[3][4] = 3;
  m[7][5] = 2;
  CHECK(diagonal(m) == 5);
  CHECK(within_one_fraction(m) == doctest::Approx(0.8));
  CHECK(within_one_fraction(ConfusionMatrix{}) == 0.0);
  const auto csv = to_csv(m);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("sample quantiles") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(sample_quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK(sample_quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK(sample_quantile(v, 0.0) == 1.0);
  CHECK(sample_quantile(v, 1.0) == 4.0);
  CHECK(sample_quantile(std::vector<double>{7}, 0.3) == 7.0);
  CHECK_THROWS_AS(sample_quantile(std::vector<double>{}, 0.5), InvalidInput);
}
