#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oscsat/cnf.hpp"
#include "oscsat/solver.hpp"

namespace oscsat {

struct InstanceRecord {
  std::string path;
  /// File name, used as the row id.
  std::string id;
  CnfFormula formula;
  std::optional<std::size_t> best_known;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loads every `.cnf` file in `directory`, sorted by file name. Best-known
/// values come from the sidecar (lines "filename count") when given, else from
/// the exhaustive oracle when N <= oracle_cap, else stay empty.
[[nodiscard]] std::vector<InstanceRecord> load_dataset(
    const std::string& directory, const std::optional<std::string>& sidecar = std::nullopt,
    std::uint32_t oracle_cap = kDefaultOracleCap);

struct BenchRow {
  std::string id;
  std::uint32_t n = 0;
  std::size_t m = 0;
  std::optional<std::size_t> best_count;
  std::optional<std::size_t> best_known;
  std::optional<double> accuracy;
  std::optional<double> cycles_to_best;
  int restarts = 0;
  bool postprocessed = false;
  /// accuracy > 1: the best-known value is not an optimum.
  bool stale_best_known = false;
  std::optional<std::string> error;
  /// cycles_to_best / frequency for each report frequency, in seconds.
  std::vector<double> projected_seconds;
  std::vector<TracePoint> trace;
};

struct BenchAggregates {
  std::size_t instances = 0;
  std::size_t failed = 0;
  std::optional<double> mean_accuracy;
  std::optional<double> max_accuracy;
  std::optional<double> mean_cycles_to_best;
  std::vector<double> mean_projected_seconds;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  BenchAggregates aggregates;
  std::vector<double> frequencies_hz;
  SolverConfig config;
  /// Wall-clock data kept apart so that reruns compare equal elsewhere.
  std::string generated_at;
  double wall_seconds = 0.0;
};

/// cycles / frequency, in seconds.
[[nodiscard]] double projected_seconds(double cycles, double frequency_hz);

/// Recomputes the aggregate block from rows. Failed rows are excluded.
[[nodiscard]] BenchAggregates aggregate_rows(const std::vector<BenchRow>& rows,
                                             std::size_t frequency_count);

/// Solves each record with `config` and assembles the report. Up to `jobs`
/// instances run concurrently; row order always follows `records`.
[[nodiscard]] BenchReport run_benchmark(const std::vector<InstanceRecord>& records,
                                        const SolverConfig& config,
                                        const std::vector<double>& frequencies_hz,
                                        unsigned jobs = 1);

enum class ReportFormat { csv, json };

void emit_report(const BenchReport& report, ReportFormat format, std::ostream& out);
void emit_report(const BenchReport& report, ReportFormat format, const std::string& path);

/// CSV header, in column order.
[[nodiscard]] std::vector<std::string> csv_columns(const std::vector<double>& frequencies_hz);

[[nodiscard]] std::string report_to_json(const BenchReport& report);
[[nodiscard]] BenchReport report_from_json(const std::string& text);

/// Writes `<dir>/<id>.trace.csv` with "cycle,best_so_far" rows for every
/// instance that solved.
void write_trace_files(const BenchReport& report, const std::string& directory);

/// Human-readable duration, e.g. "1.6 ms", "32 ms", "8 us".
[[nodiscard]] std::string format_duration(double seconds);
/// "1MHz", "50kHz", "850kHz", ...
[[nodiscard]] std::string format_frequency(double hz);

/// One-line summary in the column order of a dataset results table:
/// instances, mean accuracy, max accuracy, mean cycles, projected times.
[[nodiscard]] std::string summary_line(const BenchReport& report);

}  // namespace oscsat
