#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cubelab/dynamics.hpp"

namespace cubelab {

inline constexpr const char* kConfigSchema = "cubelab.config/1";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Task { Orbit, Avg, WW, Seminorm, Verify, Trace };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

using ParamValue = std::variant<std::int64_t, double, std::string>;

struct NamedObservable {
  std::string name;
  Observable observable;
  bool operator==(const NamedObservable&) const = default;
};

/// One experiment. Parameters are task specific:
///
///   orbit     L, x0, y0
///   avg       k (2..4), N, method (naive|fast|both), horizons (turns it into a trace)
///   trace     k, horizons
///   ww        N or horizons, oversample
///   seminorm  order (2|3), N, H, H_inner (order 3, defaults to H)
///   verify    check (vdc|lemma2|lemma3|lemma4|eq1|eq10) plus
///               vdc: trials, N, H      lemma2: N, H
///               lemma3: N or horizons, oversample
///               lemma4: k (3|4), N or horizons, oversample
///               eq1, eq10: N or horizons
///
/// `seed` is the master seed for randomized trials; x0/y0 default to a
/// start point drawn from the system seed. Horizons use "2^(6..12)" or a
/// comma list "64,128,256".
struct ExperimentConfig {
  SystemSpec system;
  std::vector<NamedObservable> observables;
  Task task = Task::Avg;
  std::map<std::string, ParamValue> parameters;
  std::string output;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig default_config();

/// Throws ErrorCode::Validation naming the offending key.
void validate(const ExperimentConfig& config);

/// JSON text with the versioned "schema" key.
std::string to_json(const ExperimentConfig& config);

/// Throws ErrorCode::Parse (with line number) on malformed JSON and
/// ErrorCode::Validation on schema or range problems.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

std::vector<std::size_t> parse_horizons(std::string_view spec);

struct Column {
  std::string name;
  bool integer = false;
};

struct Report {
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  /// Written as "# key: value" lines ahead of the CSV header.
  std::vector<std::pair<std::string, std::string>> metadata;
  /// Named scalar results echoed on the summary line (e.g. decreasing_trend).
  std::vector<std::pair<std::string, double>> summary;
  /// Set when a numeric check failed (exit status 2).
  std::optional<std::string> failure;
};

/// Dispatches to the module operation named by the config. Rows are
/// produced in a deterministic order regardless of the thread count.
Report run(const ExperimentConfig& config);

void write_report(std::ostream& out, const Report& report);

/// One line: task, row count, summary values and failure state.
std::string summary_line(const ExperimentConfig& config, const Report& report);

/// Exit statuses of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;

/// run() plus output handling: writes the CSV to config.output (or `out`
/// when it is empty or "-"), the summary line to `log`, and maps errors to
/// exit statuses.
int execute(const ExperimentConfig& config, std::ostream& out, std::ostream& log);

}  // namespace cubelab
