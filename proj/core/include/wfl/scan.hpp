#pragma once

// Experiment driver: deterministic parameter scans written as CSV (header row,
// comma-separated, numbers formatted with %.17g) plus a JSON run manifest.
// Row content is byte-identical for identical inputs regardless of the worker
// count; rows are ordered by grid index.

#include <map>
#include <string>
#include <vector>

namespace wfl {

// Parses a real number; a "pi" suffix multiplies the leading factor by pi
// ("1.1pi", "pi", "-pi", "0.5 pi").  Throws std::invalid_argument on garbage.
double parse_number(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);

// Flat key = value configuration ('#' starts a comment; keys are
// lower_snake_case by convention).  Values stay strings until queried.
class ExperimentConfig {
 public:
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  // "key=value" as accepted on the command line.
  void apply_override(const std::string& key_equals_value);

  bool has(const std::string& key) const;
  std::string get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer(const std::string& key, long long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> number_list(const std::string& key) const;
  std::vector<long long> integer_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

// Least squares in log-log space; requires >= 3 strictly positive points.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// requested <= 0 picks the hardware concurrency; the WFL_MAX_WORKERS
// environment variable caps the result; always >= 1.
int resolve_workers(int requested);

struct RunResult {
  std::vector<std::string> outputs;  // data files, in write order
  std::string manifest;              // JSON manifest path
  int rows = 0;
};

// Experiments: spectrum | error_map | entropy_map | mode_profile |
// alias_demo | n_scaling | omega_scaling | hfe_check.  The experiment name
// comes from config key "experiment".  Throws std::invalid_argument on a bad
// config; per-point solver failures are flagged in-row and the run continues.
RunResult run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                         int workers);

// Round-trip reader for the CSV schema written above.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // throws if absent
  double value(std::size_t row, int col) const;
};
CsvTable read_csv(const std::string& path);

std::string format_number(double x);  // %.17g

}  // namespace wfl
