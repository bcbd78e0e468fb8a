#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dirsup/montecarlo.hpp"

namespace dirsup {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { json, csv };

struct ExperimentConfig {
  std::vector<Int> n_grid;
  TauRule tau_rule;
  std::vector<double> sigmas;
  Method method = Method::z_exact;
  std::size_t replicates = 100;
  std::uint64_t seed = 0;
  std::string output;
  OutputFormat format = OutputFormat::json;
  /// Optional long-form CSV for plotting.
  std::string plot_output;
  EstimateOptions options;

  static ExperimentConfig parse(std::string_view json_text);
  static ExperimentConfig load(const std::string& path);
  void validate() const;
};

struct ResultRow {
  Int N = 0;
  std::size_t tau = 0;
  double sigma = 0.0;
  Method method = Method::z_exact;
  std::size_t R = 0;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double gap = 0.0;
  double lower_z = 0.0;
  double l1 = 0.0;
  double thm11_upper = 0.0;
  double thm11_lower = 0.0;
  double ratio_to_rate = 0.0;
  std::size_t violations = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

class SandwichViolation : public std::runtime_error {
 public:
  SandwichViolation(const std::string& what, ResultRow row) : std::runtime_error(what), row_(row) {}
  const ResultRow& row() const { return row_; }

 private:
  ResultRow row_;
};

ResultRow make_row(const RatioRow& r);

/// Rows in grid order: N outer, sigma inner.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, unsigned threads);

/// lower_z <= estimate + gap <= l1 and no per-draw violations.
bool sandwich_holds(const ResultRow& row);

/// %.17g, with ".0" appended to integral values.
std::string format_double(double v);

std::string to_json_line(const ResultRow& row);
ResultRow row_from_json(std::string_view line);
std::string csv_header();
std::string to_csv_line(const ResultRow& row);
std::string to_json_line(const EstimateRecord& rec);

/// Writes every row; throws SandwichViolation before writing an offending row.
void write_rows(std::ostream& out, const std::vector<ResultRow>& rows, OutputFormat format);
/// Long-form CSV: N,tau,sigma,series,value.
void write_plot_data(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace dirsup
