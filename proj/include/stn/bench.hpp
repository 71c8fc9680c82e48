#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stn/circuit.hpp"
#include "stn/mast.hpp"

namespace stn {

enum class Family { TDoped, UUdagger, HiddenShift };
enum class Method { Mast, Stn };

std::string to_string(Family f);
std::string to_string(Method m);
std::optional<Family> family_from_string(std::string_view s);
std::optional<Method> method_from_string(std::string_view s);

inline constexpr std::string_view kCsvSchemaLine = "# stnbench-csv v1";
inline constexpr std::string_view kCsvHeader = "instance,family,method,n,t,peak_chi,wall_ms,seed,outcome";

struct ExperimentConfig {
  Family family = Family::TDoped;
  Method method = Method::Mast;
  std::size_t n = 8;
  std::size_t t = 0;          // T count for tdoped and uudagger
  std::size_t ccz_count = 0;  // hiddenshift only; reported in the t column
  CczDecomposition decomposition = CczDecomposition::FourT;
  std::size_t instances = 200;
  std::size_t shots = 1;  // repeated simulations of each hiddenshift instance
  std::uint64_t seed = 0;
  ProjectionSchedule schedule;
  TruncationPolicy policy;
  std::string out_path;     // empty: no file written
  std::size_t threads = 0;  // 0: hardware concurrency

  // Throws Error(kInvalidArgument) describing the first bad field.
  void validate() const;
};

struct ResultRow {
  std::size_t instance = 0;
  Family family = Family::TDoped;
  Method method = Method::Mast;
  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t peak_chi = 1;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  std::string outcome;  // hiddenshift: measured bits, qubit 0 first

  // Not serialized.
  std::size_t trace_steps = 0;
  std::size_t final_chi = 1;
  std::string expected;  // hiddenshift: the planted shift
  bool shots_agree = true;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t instance_seed(std::uint64_t config_seed, std::size_t instance);

// One instance, independent of every other; what run_experiment fans out.
ResultRow run_instance(const ExperimentConfig& cfg, std::size_t instance);

struct SummaryRow {
  Family family = Family::TDoped;
  Method method = Method::Mast;
  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t count = 0;
  double mean = 0.0;
  std::size_t p50 = 0;
  std::size_t p90 = 0;
  std::size_t max = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;  // instance-id order
  std::vector<SummaryRow> summary;
  std::size_t shift_matches = 0;  // hiddenshift rows whose outcome equals the shift
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);
// Rejects files whose schema line or header differs from the current one.
std::vector<ResultRow> read_csv(std::istream& is, const std::string& name = "<stream>");
std::vector<ResultRow> read_csv(const std::string& path);

// Grouped by (family, method, n, t) in that sort order.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
std::vector<SummaryRow> summarize_files(const std::vector<std::string>& paths);
std::string format_summary(const std::vector<SummaryRow>& rows);
// Whitespace-separated numeric columns: n t method(0 mast, 1 stn) mean p50 p90 max.
std::string format_plot_data(const std::vector<SummaryRow>& rows);

// Projection w in [0, t) fails with probability min(1, 2^-(n-w)); the peak is
// 2 with no failure and 4 otherwise, 1 when t = 0.
double expected_chi_model(std::size_t n, std::size_t t);
double expected_chi_model_mc(std::size_t n, std::size_t t, std::size_t samples, std::uint64_t seed);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
  bool operator==(const Rational&) const = default;
};

// Probability that a fixed tableau entry of a uniformly random Clifford has
// an X component, 2^(n-1) / (2^n - 1). n must be in [1, 63].
Rational x_probability(std::size_t n);

}  // namespace stn
