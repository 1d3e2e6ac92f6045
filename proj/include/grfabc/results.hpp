#pragma once

// CSV result rows and summary helpers shared by the CLI commands.
//
// Numbers are written in shortest round-trip form and missing values as
// "NA", so parse(emit(row)) == row and emit(parse(line)) == line.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grfabc/estimators.hpp"

namespace grfabc::results {

struct Column {
  std::string_view name;
  std::string_view type;
  std::string_view description;
};

std::string format_double(double v);
double parse_double(std::string_view s);
std::vector<std::string> split_csv_line(std::string_view line);

/// One simulated dataset of the toy study.
struct ToyRow {
  std::uint64_t dataset = 0;
  int true_model = 0;
  double theta = 0.0;
  std::int64_t s0 = 0;
  std::int64_t s1 = 0;
  bool constant_data = false;
  double exact_p0 = 0.0;
  double exact_log10_bf = 0.0;
  JeffreysCategory exact_category = JeffreysCategory::m0_weak;
  std::uint64_t eps0_n0 = 0;
  std::uint64_t eps0_n1 = 0;
  std::optional<double> eps0_p0;
  double eps0_bf = 1.0;
  JeffreysCategory eps0_category = JeffreysCategory::m0_weak;
  double tol_epsilon = 0.0;
  std::uint64_t tol_n0 = 0;
  std::uint64_t tol_n1 = 0;
  std::optional<double> tol_p0;
  double tol_bf = 1.0;
  JeffreysCategory tol_category = JeffreysCategory::m0_weak;

  friend bool operator==(const ToyRow&, const ToyRow&) = default;
};

std::span<const Column> toy_columns() noexcept;
std::string toy_header();
std::string to_csv(const ToyRow& row);
/// Throws InvalidInput on a malformed line.
ToyRow parse_toy_row(std::string_view line);

/// One reference/candidate comparison of the structure-selection command.
struct ProteinRow {
  std::uint64_t rank = 0;
  std::string reference;
  std::string candidate;
  double bf = 1.0;
  double log_bf = 0.0;
  JeffreysCategory category = JeffreysCategory::m0_weak;
  std::uint64_t n_reference = 0;
  std::uint64_t n_candidate = 0;
  double epsilon = 0.0;
  std::uint64_t proposals = 0;

  friend bool operator==(const ProteinRow&, const ProteinRow&) = default;
};

std::span<const Column> protein_columns() noexcept;
std::string protein_header();
std::string to_csv(const ProteinRow& row);
ProteinRow parse_protein_row(std::string_view line);

/// Writes "column,type,description" lines.
std::string schema_csv(std::span<const Column> columns);

/// Rows: category of the exact Bayes factor, columns: category of the
/// estimate, both in JeffreysCategory order.
using ConfusionMatrix = std::array<std::array<std::uint64_t, kJeffreysCategories>, kJeffreysCategories>;

std::uint64_t diagonal(const ConfusionMatrix& m) noexcept;
/// Fraction of mass with |row - column| <= 1.
double within_one_fraction(const ConfusionMatrix& m) noexcept;
std::string to_csv(const ConfusionMatrix& m);

/// Linear-interpolation sample quantile (Hyndman-Fan type 7) of an
/// ascending list.
double sample_quantile(std::span<const double> sorted, double q);

}  // namespace grfabc::results
