#include "grfabc/results.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "grfabc/error.hpp"

namespace grfabc::results {

namespace {

constexpr std::array<Column, 20> kToyColumns = {{
    {"dataset", "integer", "dataset index within its generating model"},
    {"true_model", "integer", "model that generated the dataset (0 Bernoulli, 1 Markov)"},
    {"theta", "real", "parameter drawn from the generating model's prior"},
    {"s0", "integer", "number of ones"},
    {"s1", "integer", "number of equal consecutive pairs"},
    {"constant", "0/1", "1 when every site carries the same label"},
    {"exact_p0", "real", "exact P(M=0|x0) under the equal model prior"},
    {"exact_log10_bf", "real", "log10 of the exact Bayes factor m0/m1"},
    {"exact_category", "category", "Jeffreys category of the exact Bayes factor"},
    {"eps0_n0", "integer", "accepted model-0 proposals at epsilon = 0"},
    {"eps0_n1", "integer", "accepted model-1 proposals at epsilon = 0"},
    {"eps0_p0", "real|NA", "estimated P(M=0|x0) at epsilon = 0; NA without acceptances"},
    {"eps0_bf", "real", "smoothed Bayes factor estimate at epsilon = 0"},
    {"eps0_category", "category", "Jeffreys category of eps0_bf"},
    {"tol_epsilon", "real", "tolerance of the second acceptance rule"},
    {"tol_n0", "integer", "accepted model-0 proposals at tol_epsilon"},
    {"tol_n1", "integer", "accepted model-1 proposals at tol_epsilon"},
    {"tol_p0", "real|NA", "estimated P(M=0|x0) at tol_epsilon; NA without acceptances"},
    {"tol_bf", "real", "smoothed Bayes factor estimate at tol_epsilon"},
    {"tol_category", "category", "Jeffreys category of tol_bf"},
}};

constexpr std::array<Column, 10> kProteinColumns = {{
    {"rank", "integer", "1 = largest Bayes factor"},
    {"reference", "string", "reference structure name"},
    {"candidate", "string", "candidate structure name"},
    {"bf", "real", "smoothed Bayes factor reference/candidate"},
    {"log_bf", "real", "logarithm of bf in the configured base"},
    {"category", "category", "Jeffreys category of bf"},
    {"n_reference", "integer", "accepted proposals from the reference model"},
    {"n_candidate", "integer", "accepted proposals from the candidate model"},
    {"epsilon", "real", "tolerance used"},
    {"proposals", "integer", "simulated proposals"},
}};

std::string header_of(std::span<const Column> columns) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i].name;
  }
  return out;
}

class Writer {
 public:
  Writer& operator<<(std::string_view s) {
    sep();
    out_ += s;
    return *this;
  }
  Writer& operator<<(double v) { return *this << std::string_view(format_double(v)); }
  Writer& operator<<(std::uint64_t v) { return *this << std::string_view(std::to_string(v)); }
  Writer& operator<<(std::int64_t v) { return *this << std::string_view(std::to_string(v)); }
  Writer& operator<<(int v) { return *this << static_cast<std::int64_t>(v); }
  Writer& operator<<(bool v) { return *this << std::string_view(v ? "1" : "0"); }
  Writer& operator<<(const std::optional<double>& v) { return v ? (*this << *v) : (*this << std::string_view("NA")); }
  Writer& operator<<(JeffreysCategory c) { return *this << to_string(c); }
  std::string str() && { return std::move(out_); }

 private:
  void sep() {
    if (started_) out_ += ',';
    started_ = true;
  }
  std::string out_;
  bool started_ = false;
};

class Reader {
 public:
  Reader(std::string_view line, std::size_t expected) : fields_(split_csv_line(line)) {
    if (fields_.size() != expected) {
      throw InvalidInput("expected " + std::to_string(expected) + " fields, got " + std::to_string(fields_.size()));
    }
  }
  std::string_view next() { return fields_.at(pos_++); }
  std::string text() { return std::string(next()); }
  double real() { return parse_double(next()); }
  std::optional<double> optional_real() {
    const auto f = next();
    if (f == "NA") return std::nullopt;
    return parse_double(f);
  }
  template <class Int>
  Int integer() {
    const auto f = next();
    Int v{};
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size()) throw InvalidInput("bad integer field '" + std::string(f) + "'");
    return v;
  }
  bool flag() {
    const auto f = next();
    if (f != "0" && f != "1") throw InvalidInput("bad 0/1 field '" + std::string(f) + "'");
    return f == "1";
  }
  JeffreysCategory category() {
    const auto f = next();
    const auto c = parse_jeffreys_category(f);
    if (!c) throw InvalidInput("unknown category '" + std::string(f) + "'");
    return *c;
  }

 private:
  std::vector<std::string> fields_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  if (s == "nan") return NAN;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidInput("bad numeric field '" + std::string(s) + "'");
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::span<const Column> toy_columns() noexcept { return kToyColumns; }
std::string toy_header() { return header_of(kToyColumns); }

std::string to_csv(const ToyRow& r) {
  Writer w;
  w << r.dataset << r.true_model << r.theta << r.s0 << r.s1 << r.constant_data << r.exact_p0 << r.exact_log10_bf
    << r.exact_category << r.eps0_n0 << r.eps0_n1 << r.eps0_p0 << r.eps0_bf << r.eps0_category << r.tol_epsilon
    << r.tol_n0 << r.tol_n1 << r.tol_p0 << r.tol_bf << r.tol_category;
  return std::move(w).str();
}

ToyRow parse_toy_row(std::string_view line) {
  Reader in(line, kToyColumns.size());
  ToyRow r;
  r.dataset = in.integer<std::uint64_t>();
  r.true_model = in.integer<int>();
  r.theta = in.real();
  r.s0 = in.integer<std::int64_t>();
  r.s1 = in.integer<std::int64_t>();
  r.constant_data = in.flag();
  r.exact_p0 = in.real();
  r.exact_log10_bf = in.real();
  r.exact_category = in.category();
  r.eps0_n0 = in.integer<std::uint64_t>();
  r.eps0_n1 = in.integer<std::uint64_t>();
  r.eps0_p0 = in.optional_real();
  r.eps0_bf = in.real();
  r.eps0_category = in.category();
  r.tol_epsilon = in.real();
  r.tol_n0 = in.integer<std::uint64_t>();
  r.tol_n1 = in.integer<std::uint64_t>();
  r.tol_p0 = in.optional_real();
  r.tol_bf = in.real();
  r.tol_category = in.category();
  return r;
}

std::span<const Column> protein_columns() noexcept { return kProteinColumns; }
std::string protein_header() { return header_of(kProteinColumns); }

std::string to_csv(const ProteinRow& r) {
  for (const auto* name : {&r.reference, &r.candidate}) {
    if (name->find_first_of(",\n\r") != std::string::npos) throw InvalidInput("structure names may not contain commas");
  }
  Writer w;
  w << r.rank << std::string_view(r.reference) << std::string_view(r.candidate) << r.bf << r.log_bf << r.category
    << r.n_reference << r.n_candidate << r.epsilon << r.proposals;
  return std::move(w).str();
}

ProteinRow parse_protein_row(std::string_view line) {
  Reader in(line, kProteinColumns.size());
  ProteinRow r;
  r.rank = in.integer<std::uint64_t>();
  r.reference = in.text();
  r.candidate = in.text();
  r.bf = in.real();
  r.log_bf = in.real();
  r.category = in.category();
  r.n_reference = in.integer<std::uint64_t>();
  r.n_candidate = in.integer<std::uint64_t>();
  r.epsilon = in.real();
  r.proposals = in.integer<std::uint64_t>();
  return r;
}

std::string schema_csv(std::span<const Column> columns) {
  std::string out = "column,type,description\n";
  for (const auto& c : columns) {
    out += std::string(c.name) + "," + std::string(c.type) + "," + std::string(c.description) + "\n";
  }
  return out;
}

std::uint64_t diagonal(const ConfusionMatrix& m) noexcept {
  std::uint64_t d = 0;
  for (std::size_t i = 0; i < m.size(); ++i) d += m[i][i];
  return d;
}

double within_one_fraction(const ConfusionMatrix& m) noexcept {
  std::uint64_t near = 0;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      total += m[i][j];
      if ((i > j ? i - j : j - i) <= 1) near += m[i][j];
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(near) / static_cast<double>(total);
}

std::string to_csv(const ConfusionMatrix& m) {
  std::string out = "exact\\estimate";
  for (std::size_t j = 0; j < m.size(); ++j) out += "," + std::string(to_string(static_cast<JeffreysCategory>(j)));
  out += '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += to_string(static_cast<JeffreysCategory>(i));
    for (std::size_t j = 0; j < m.size(); ++j) out += "," + std::to_string(m[i][j]);
    out += '\n';
  }
  return out;
}

double sample_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidInput("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("quantile level must lie in [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace grfabc::results
