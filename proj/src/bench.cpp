#include "oscsat/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace oscsat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::map<std::string, std::size_t> read_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open sidecar '" + path + "'");
  std::map<std::string, std::size_t> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    std::istringstream fields(line);
    std::string name;
    long long count = -1;
    std::string extra;
    if (!(fields >> name >> count) || (fields >> extra) || count < 0) {
      throw DatasetError(path + ":" + std::to_string(line_no) +
                         ": expected '<filename> <best_known>'");
    }
    values[name] = static_cast<std::size_t>(count);
  }
  return values;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

json config_to_json(const SolverConfig& c) {
  return json{{"coupling", c.dynamics.coupling_g},
              {"beta", c.dynamics.steepness_beta},
              {"sigma", c.dynamics.noise_sigma},
              {"dt", c.dynamics.dt},
              {"sign", c.dynamics.sign_convention},
              {"max_cycles", c.max_cycles},
              {"samples_per_cycle", c.readout_samples_per_cycle},
              {"restarts", c.restarts},
              {"seed", c.seed},
              {"postprocess", c.postprocess},
              {"postprocess_max_iters", c.postprocess_max_iters},
              {"postprocess_subbudget_fraction", c.postprocess_subbudget_fraction},
              {"anneal", c.anneal}};
}

SolverConfig config_from_json(const json& j) {
  SolverConfig c;
  c.dynamics.coupling_g = j.at("coupling").get<double>();
  c.dynamics.steepness_beta = j.at("beta").get<double>();
  c.dynamics.noise_sigma = j.at("sigma").get<double>();
  c.dynamics.dt = j.at("dt").get<double>();
  c.dynamics.sign_convention = j.at("sign").get<int>();
  c.max_cycles = j.at("max_cycles").get<double>();
  c.readout_samples_per_cycle = j.at("samples_per_cycle").get<int>();
  c.restarts = j.at("restarts").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.postprocess = j.at("postprocess").get<bool>();
  c.postprocess_max_iters = j.at("postprocess_max_iters").get<int>();
  c.postprocess_subbudget_fraction = j.at("postprocess_subbudget_fraction").get<double>();
  c.anneal = j.at("anneal").get<bool>();
  return c;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<InstanceRecord> load_dataset(const std::string& directory,
                                         const std::optional<std::string>& sidecar,
                                         std::uint32_t oracle_cap) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw DatasetError("'" + directory + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cnf") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw DatasetError("no .cnf files in '" + directory + "'");
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  std::map<std::string, std::size_t> known;
  if (sidecar) known = read_sidecar(*sidecar);

  std::vector<InstanceRecord> records;
  records.reserve(files.size());
  for (const fs::path& file : files) {
    InstanceRecord rec;
    rec.path = file.string();
    rec.id = file.filename().string();
    try {
      rec.formula = read_dimacs_file(rec.path);
    } catch (const CnfError& e) {
      throw DatasetError(rec.path + ": " + e.what());
    }
    if (auto it = known.find(rec.id); it != known.end()) {
      if (it->second > rec.formula.num_clauses()) {
        throw DatasetError("best-known value " + std::to_string(it->second) + " for " + rec.id +
                           " exceeds its clause count " +
                           std::to_string(rec.formula.num_clauses()));
      }
      rec.best_known = it->second;
    } else if (rec.formula.num_variables() <= oracle_cap) {
      rec.best_known = brute_force_maxsat(rec.formula, oracle_cap).best_count;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

double projected_seconds(double cycles, double frequency_hz) {
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
  return cycles / frequency_hz;
}

BenchAggregates aggregate_rows(const std::vector<BenchRow>& rows, std::size_t frequency_count) {
  BenchAggregates agg;
  agg.instances = rows.size();
  double acc_sum = 0.0;
  std::size_t acc_n = 0;
  double cyc_sum = 0.0;
  std::size_t cyc_n = 0;
  std::vector<double> proj_sum(frequency_count, 0.0);
  for (const BenchRow& row : rows) {
    if (row.error) {
      ++agg.failed;
      continue;
    }
    if (row.accuracy) {
      acc_sum += *row.accuracy;
      ++acc_n;
      agg.max_accuracy = std::max(agg.max_accuracy.value_or(*row.accuracy), *row.accuracy);
    }
    if (row.cycles_to_best) {
      cyc_sum += *row.cycles_to_best;
      ++cyc_n;
      for (std::size_t f = 0; f < frequency_count; ++f) proj_sum[f] += row.projected_seconds[f];
    }
  }
  if (acc_n > 0) agg.mean_accuracy = acc_sum / static_cast<double>(acc_n);
  if (cyc_n > 0) {
    agg.mean_cycles_to_best = cyc_sum / static_cast<double>(cyc_n);
    for (double& s : proj_sum) s /= static_cast<double>(cyc_n);
    agg.mean_projected_seconds = std::move(proj_sum);
  }
  return agg;
}

BenchReport run_benchmark(const std::vector<InstanceRecord>& records, const SolverConfig& config,
                          const std::vector<double>& frequencies_hz, unsigned jobs) {
  if (records.empty()) throw DatasetError("benchmark needs at least one instance");
  config.validate();
  for (double f : frequencies_hz) {
    if (!(f > 0.0)) throw std::invalid_argument("frequencies must be positive");
  }
  const auto start = std::chrono::steady_clock::now();

  BenchReport report;
  report.frequencies_hz = frequencies_hz;
  report.config = config;
  report.rows.resize(records.size());

  auto solve_one = [&](std::size_t i) {
    const InstanceRecord& rec = records[i];
    BenchRow& row = report.rows[i];
    row.id = rec.id;
    row.n = rec.formula.num_variables();
    row.m = rec.formula.num_clauses();
    row.best_known = rec.best_known;
    try {
      const SolveResult result = solve(rec.formula, config);
      row.best_count = result.best_count;
      row.cycles_to_best = result.best_found_at_cycles;
      row.restarts = result.restarts_used;
      row.postprocessed = result.postprocess_iterations > 0;
      row.trace = result.trace;
      if (rec.best_known) {
        row.accuracy = *rec.best_known == 0
                           ? 1.0
                           : static_cast<double>(result.best_count) /
                                 static_cast<double>(*rec.best_known);
        row.stale_best_known = result.best_count > *rec.best_known;
      }
      for (double f : frequencies_hz) {
        row.projected_seconds.push_back(projected_seconds(result.best_found_at_cycles, f));
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, records.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < records.size(); ++i) solve_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < records.size(); i = next++) solve_one(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  report.aggregates = aggregate_rows(report.rows, frequencies_hz.size());
  report.generated_at = utc_timestamp();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<std::string> csv_columns(const std::vector<double>& frequencies_hz) {
  std::vector<std::string> cols = {"instance",       "n",        "m",
                                   "best_count",     "best_known", "accuracy",
                                   "cycles_to_best", "restarts", "postprocessed",
                                   "stale_best_known", "error"};
  for (double f : frequencies_hz) cols.push_back("projected_s_at_" + format_real(f) + "Hz");
  return cols;
}

std::string report_to_json(const BenchReport& report) {
  json rows = json::array();
  for (const BenchRow& row : report.rows) {
    rows.push_back(json{{"instance", row.id},
                        {"n", row.n},
                        {"m", row.m},
                        {"best_count", opt_json(row.best_count)},
                        {"best_known", opt_json(row.best_known)},
                        {"accuracy", opt_json(row.accuracy)},
                        {"cycles_to_best", opt_json(row.cycles_to_best)},
                        {"restarts", row.restarts},
                        {"postprocessed", row.postprocessed},
                        {"stale_best_known", row.stale_best_known},
                        {"error", opt_json(row.error)},
                        {"projected_seconds", row.projected_seconds}});
  }
  const BenchAggregates& a = report.aggregates;
  json doc{{"schema", "oscsat-bench/1"},
           {"config", config_to_json(report.config)},
           {"frequencies_hz", report.frequencies_hz},
           {"rows", rows},
           {"aggregates",
            {{"instances", a.instances},
             {"failed", a.failed},
             {"mean_accuracy", opt_json(a.mean_accuracy)},
             {"max_accuracy", opt_json(a.max_accuracy)},
             {"mean_cycles_to_best", opt_json(a.mean_cycles_to_best)},
             {"mean_projected_seconds", a.mean_projected_seconds}}},
           {"metadata", {{"generated_at", report.generated_at}, {"wall_seconds", report.wall_seconds}}}};
  return doc.dump(2) + "\n";
}

BenchReport report_from_json(const std::string& text) {
  const json doc = json::parse(text);
  if (doc.value("schema", "") != "oscsat-bench/1") {
    throw std::runtime_error("not an oscsat-bench/1 report");
  }
  BenchReport report;
  report.config = config_from_json(doc.at("config"));
  report.frequencies_hz = doc.at("frequencies_hz").get<std::vector<double>>();
  for (const json& r : doc.at("rows")) {
    BenchRow row;
    row.id = r.at("instance").get<std::string>();
    row.n = r.at("n").get<std::uint32_t>();
    row.m = r.at("m").get<std::size_t>();
    row.best_count = opt_from<std::size_t>(r.at("best_count"));
    row.best_known = opt_from<std::size_t>(r.at("best_known"));
    row.accuracy = opt_from<double>(r.at("accuracy"));
    row.cycles_to_best = opt_from<double>(r.at("cycles_to_best"));
    row.restarts = r.at("restarts").get<int>();
    row.postprocessed = r.at("postprocessed").get<bool>();
    row.stale_best_known = r.at("stale_best_known").get<bool>();
    row.error = opt_from<std::string>(r.at("error"));
    row.projected_seconds = r.at("projected_seconds").get<std::vector<double>>();
    report.rows.push_back(std::move(row));
  }
  const json& a = doc.at("aggregates");
  report.aggregates.instances = a.at("instances").get<std::size_t>();
  report.aggregates.failed = a.at("failed").get<std::size_t>();
  report.aggregates.mean_accuracy = opt_from<double>(a.at("mean_accuracy"));
  report.aggregates.max_accuracy = opt_from<double>(a.at("max_accuracy"));
  report.aggregates.mean_cycles_to_best = opt_from<double>(a.at("mean_cycles_to_best"));
  report.aggregates.mean_projected_seconds =
      a.at("mean_projected_seconds").get<std::vector<double>>();
  report.generated_at = doc.at("metadata").at("generated_at").get<std::string>();
  report.wall_seconds = doc.at("metadata").at("wall_seconds").get<double>();
  return report;
}

void emit_report(const BenchReport& report, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::json) {
    out << report_to_json(report);
    return;
  }
  const auto cols = csv_columns(report.frequencies_hz);
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << "\n";
  auto cell = [](const auto& opt) -> std::string {
    if (!opt) return "";
    if constexpr (std::is_same_v<std::decay_t<decltype(*opt)>, double>) {
      return format_real(*opt);
    } else {
      return std::to_string(*opt);
    }
  };
  for (const BenchRow& row : report.rows) {
    out << csv_escape(row.id) << ',' << row.n << ',' << row.m << ',' << cell(row.best_count) << ','
        << cell(row.best_known) << ',' << cell(row.accuracy) << ',' << cell(row.cycles_to_best)
        << ',' << row.restarts << ',' << (row.postprocessed ? 1 : 0) << ','
        << (row.stale_best_known ? 1 : 0) << ',' << csv_escape(row.error.value_or(""));
    for (std::size_t f = 0; f < report.frequencies_hz.size(); ++f) {
      out << ',';
      if (f < row.projected_seconds.size()) out << format_real(row.projected_seconds[f]);
    }
    out << "\n";
  }
}

void emit_report(const BenchReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report to '" + path + "'");
  emit_report(report, format, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_trace_files(const BenchReport& report, const std::string& directory) {
  fs::create_directories(directory);
  for (const BenchRow& row : report.rows) {
    if (row.error) continue;
    const fs::path path = fs::path(directory) / (row.id + ".trace.csv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write trace '" + path.string() + "'");
    out << "cycle,best_so_far\n";
    for (const TracePoint& p : row.trace) out << format_real(p.cycle) << ',' << p.best_so_far << "\n";
  }
}

std::string format_duration(double seconds) {
  struct Unit {
    double scale;
    const char* name;
  };
  static constexpr Unit units[] = {{1.0, "s"}, {1e-3, "ms"}, {1e-6, "us"}, {1e-9, "ns"}};
  for (const Unit& u : units) {
    if (std::fabs(seconds) >= u.scale || u.scale == 1e-9) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%.4g %s", seconds / u.scale, u.name);
      return buf;
    }
  }
  return "0 s";
}

std::string format_frequency(double hz) {
  char buf[48];
  if (hz >= 1e6) {
    std::snprintf(buf, sizeof buf, "%gMHz", hz / 1e6);
  } else if (hz >= 1e3) {
    std::snprintf(buf, sizeof buf, "%gkHz", hz / 1e3);
  } else {
    std::snprintf(buf, sizeof buf, "%gHz", hz);
  }
  return buf;
}

std::string summary_line(const BenchReport& report) {
  const BenchAggregates& a = report.aggregates;
  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", *v * 100.0);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "instances " << a.instances;
  if (a.failed) out << " (failed " << a.failed << ")";
  out << " | mean accuracy " << pct(a.mean_accuracy) << " | max accuracy " << pct(a.max_accuracy)
      << " | T ";
  if (a.mean_cycles_to_best) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *a.mean_cycles_to_best);
    out << buf;
  } else {
    out << "n/a";
  }
  for (std::size_t f = 0; f < report.frequencies_hz.size(); ++f) {
    out << " | @" << format_frequency(report.frequencies_hz[f]) << ' ';
    if (f < a.mean_projected_seconds.size()) {
      out << format_duration(a.mean_projected_seconds[f]);
    } else {
      out << "n/a";
    }
  }
  return out.str();
}

}  // namespace oscsat
