#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qrem::cli {

/// Process exit codes. Library status codes map onto these by family.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,        // bad flags, config or model spec
  kExitDomain = 3,       // argument outside the domain (also invalid arguments)
  kExitBudget = 4,       // q^n beyond the evaluation budget
  kExitTolerance = 5,    // quadrature tolerance not met
  kExitUnsupported = 6,  // model lacks metadata or shape for the operation
  kExitIo = 7,
  kExitNumerical = 8,    // convergence, precision or rejection budget exhausted
  kExitDepth = 9,        // depth beyond the ladder
  kExitZeroDensity = 10,
};

/// Maps a qrem_status value to an exit code.
int exit_code_for_status(int status);

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Settings of one CLI run. Every field is optional so that a config file
/// and command-line flags can be layered; unset fields take command defaults.
struct RunConfig {
  std::string command;
  std::optional<std::string> model;
  std::optional<int> q;
  std::optional<std::string> n;  // "5", "0..10" or "1,2,5"
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<double> tolerance;
  std::optional<int> threads;
  std::optional<bool> full;
  std::optional<int> reps;
  std::optional<int> samples;
  std::optional<double> alpha;
  std::optional<int> k;
  std::optional<int> grid;
  std::optional<std::string> xi;
  std::optional<std::string> proxy;
  std::optional<bool> tail;
  std::optional<int> envelope;
  std::optional<int> cond;
  std::optional<int> count;
  std::optional<std::string> method;
  std::optional<std::string> which;
  std::optional<std::string> outdir;

  nlohmann::json to_json() const;
  /// Throws UsageError on unknown keys or mistyped values.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  /// Fills every unset field from `other`.
  void fill_from(const RunConfig& other);
};

/// Rectangular numeric table with metadata. NaN cells are written empty.
struct DataSeries {
  std::string name;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& key, const std::string& value);
  void add_row(std::vector<double> row);
  std::optional<std::string> meta(const std::string& key) const;
  std::size_t column_index(const std::string& label) const;

  /// `# key=value` lines (series name first), a header line, then rows; LF endings.
  std::string to_csv() const;
  std::string to_json() const;
  static DataSeries parse_csv(const std::string& text);
  static DataSeries parse_json(const std::string& text);
};

/// Shortest round-trip decimal; empty for NaN.
std::string format_value(double v);

/// "5" -> {5}; "0..10" -> {0,...,10}; "1,2,5" -> {1,2,5}.
std::vector<int> parse_int_list(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace qrem::cli
