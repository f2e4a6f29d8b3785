#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "colony.hpp"
#include "instance.hpp"
#include "manifest.hpp"

namespace jssp {

struct ExperimentConfig {
  std::filesystem::path instance_path;
  AcoParams params;
  std::size_t executions{30};
  std::string label;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename T>
T parse_number(const std::string& key, const std::string& value, std::size_t line_no) {
  if constexpr (std::is_unsigned_v<T>) {
    if (!value.empty() && value.front() == '-')
      throw ConfigError("line " + std::to_string(line_no) + ": " + key + " must not be negative");
  }
  std::istringstream in(value);
  T v{};
  in >> v;
  if (in.fail() || !(in >> std::ws).eof())
    throw ConfigError("line " + std::to_string(line_no) + ": bad value '" + value + "' for " + key);
  return v;
}

inline bool parse_flag(const std::string& key, const std::string& value, std::size_t line_no) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw ConfigError("line " + std::to_string(line_no) + ": " + key + " must be 0 or 1");
}

}  // namespace detail

/// Parses a flat key=value experiment file. Keys follow the parameter
/// table column names: ite, ants, elit, alpha, beta, evap, q, init, exec,
/// inc; plus instance, seed, label, pheromone_init, pheromone_floor.
/// Unset keys keep the baseline defaults. A relative instance path is
/// resolved against `base_dir`.
inline ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {}) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = std::string(detail::trim(raw));
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    auto key = std::string(detail::trim(std::string_view(line).substr(0, eq)));
    auto value = std::string(detail::trim(std::string_view(line).substr(eq + 1)));
    auto& p = cfg.params;
    if (key == "ite") {
      p.iterations = detail::parse_number<std::size_t>(key, value, line_no);
    } else if (key == "ants") {
      p.n_ants = detail::parse_number<std::size_t>(key, value, line_no);
    } else if (key == "elit") {
      p.elitism = detail::parse_flag(key, value, line_no);
    } else if (key == "alpha") {
      p.alpha = detail::parse_number<double>(key, value, line_no);
    } else if (key == "beta") {
      p.beta = detail::parse_number<double>(key, value, line_no);
    } else if (key == "evap") {
      p.evaporation = detail::parse_number<double>(key, value, line_no);
    } else if (key == "q") {
      p.q = detail::parse_number<double>(key, value, line_no);
    } else if (key == "init") {
      p.init_mode = static_cast<InitMode>(detail::parse_number<int>(key, value, line_no));
    } else if (key == "inc") {
      p.inc_mode = static_cast<DepositPolicy>(detail::parse_number<int>(key, value, line_no));
    } else if (key == "exec") {
      cfg.executions = detail::parse_number<std::size_t>(key, value, line_no);
    } else if (key == "seed") {
      p.seed = detail::parse_number<std::uint64_t>(key, value, line_no);
    } else if (key == "pheromone_init") {
      p.pheromone_init = detail::parse_number<double>(key, value, line_no);
    } else if (key == "pheromone_floor") {
      p.pheromone_floor = detail::parse_number<double>(key, value, line_no);
    } else if (key == "instance") {
      std::filesystem::path path(value);
      cfg.instance_path = path.is_relative() && !base_dir.empty() ? (base_dir / path).lexically_normal() : path;
    } else if (key == "label") {
      cfg.label = value;
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (cfg.executions == 0) throw ConfigError("exec must be at least 1");
  try {
    cfg.params.validate();
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    auto cfg = parse_config(buf.str(), path.parent_path());
    if (cfg.label.empty()) cfg.label = path.stem().string();
    return cfg;
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

struct RunStats {
  Time minimum{0};
  Time maximum{0};
  double average{0};
  double std{0};
  double sup_std{0};
  double inf_std{0};
  std::vector<Time> per_execution;
};

/// Mean, population standard deviation, and the two population
/// semideviations: sup_std over samples >= mean, inf_std over samples <= mean,
/// each normalized by its own subsample size.
inline RunStats compute_stats(std::span<const Time> values) {
  if (values.empty()) throw std::invalid_argument("compute_stats: empty sample");
  RunStats s;
  s.per_execution.assign(values.begin(), values.end());
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.minimum = *lo;
  s.maximum = *hi;
  const double n = static_cast<double>(values.size());
  s.average = std::accumulate(values.begin(), values.end(), 0.0) / n;

  double sq = 0, sq_up = 0, sq_down = 0;
  std::size_t n_up = 0, n_down = 0;
  for (Time v : values) {
    double d = static_cast<double>(v) - s.average;
    sq += d * d;
    if (d >= 0) sq_up += d * d, ++n_up;
    if (d <= 0) sq_down += d * d, ++n_down;
  }
  s.std = std::sqrt(sq / n);
  s.sup_std = n_up ? std::sqrt(sq_up / static_cast<double>(n_up)) : 0.0;
  s.inf_std = n_down ? std::sqrt(sq_down / static_cast<double>(n_down)) : 0.0;
  return s;
}

inline RunStats compute_stats(const std::vector<Time>& values) { return compute_stats(std::span<const Time>(values)); }

/// Runs f(0) .. f(count - 1) on at most `workers` threads.
template <typename F>
void parallel_for(std::size_t count, std::size_t workers, F&& f) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
          try {
            f(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline std::size_t default_workers() {
  if (const char* env = std::getenv("JSSP_ACO_WORKERS")) {
    try {
      auto v = std::stoul(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct ExperimentOutcome {
  RunStats stats;
  std::vector<ColonyResult> runs;  // indexed by execution
};

/// Execution e runs with seed params.seed + e; results do not depend on
/// the number of workers.
inline ExperimentOutcome run_experiment(const Instance& inst, const ExperimentConfig& config,
                                        std::size_t workers = default_workers()) {
  if (config.executions == 0) throw std::invalid_argument("executions must be at least 1");
  config.params.validate();
  std::vector<ColonyResult> runs(config.executions);
  parallel_for(config.executions, workers, [&](std::size_t e) {
    AcoParams p = config.params;
    p.seed = config.params.seed + e;
    runs[e] = run_colony(inst, p);
  });
  std::vector<Time> best;
  best.reserve(runs.size());
  for (const auto& r : runs) best.push_back(r.best_path.makespan);
  return ExperimentOutcome{compute_stats(best), std::move(runs)};
}

inline RunStats run_experiment(const ExperimentConfig& config, std::size_t workers = default_workers()) {
  return run_experiment(load_instance(config.instance_path), config, workers).stats;
}

inline void write_trace_csv(std::ostream& out, const ColonyResult& run) {
  out << "iteration,best_makespan\n";
  for (std::size_t i = 0; i < run.best_makespan_per_iteration.size(); ++i)
    out << i << ',' << run.best_makespan_per_iteration[i] << '\n';
}

struct ReportRow {
  std::string label;
  std::string instance;
  std::optional<Time> optimum;
  std::optional<RunStats> stats;
  double wall_time_seconds{0};
  std::optional<ExperimentConfig> config;
  std::string error;
};

struct SweepOptions {
  std::size_t workers{default_workers()};
  const Manifest* manifest{nullptr};
  // when set, one trace CSV per execution is written here
  std::optional<std::filesystem::path> trace_dir;
};

inline ReportRow run_row(const ExperimentConfig& cfg, const SweepOptions& opts) {
  ReportRow row;
  row.label = cfg.label;
  row.instance = cfg.instance_path.stem().string();
  row.config = cfg;
  if (opts.manifest) row.optimum = opts.manifest->optimum(row.instance);
  auto t0 = std::chrono::steady_clock::now();
  try {
    Instance inst = load_instance(cfg.instance_path);
    auto outcome = run_experiment(inst, cfg, opts.workers);
    row.stats = std::move(outcome.stats);
    if (opts.trace_dir) {
      std::filesystem::create_directories(*opts.trace_dir);
      std::string stem = cfg.label.empty() ? row.instance : cfg.label;
      std::replace_if(stem.begin(), stem.end(), [](char c) { return !std::isalnum(static_cast<unsigned char>(c)); }, '_');
      for (std::size_t e = 0; e < outcome.runs.size(); ++e) {
        std::ofstream trace(*opts.trace_dir / (stem + "_exec" + std::to_string(e) + ".csv"));
        write_trace_csv(trace, outcome.runs[e]);
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

/// Runs every config in order. A failing config yields a row with the
/// error column set; the remaining configs still run.
inline std::vector<ReportRow> sweep(const std::vector<ExperimentConfig>& configs, const SweepOptions& opts = {}) {
  std::vector<ReportRow> rows;
  rows.reserve(configs.size());
  for (const auto& cfg : configs) rows.push_back(run_row(cfg, opts));
  return rows;
}

inline constexpr const char* kReportHeader =
    "label,instance,optimum,minimum,maximum,average,std,sup_std,inf_std,wall_time_seconds,"
    "ite,ants,elit,alpha,beta,evap,q,init,inc,exec,seed,error";

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

inline std::string format_row(const ReportRow& r) {
  std::ostringstream out;
  out << detail::csv_field(r.label) << ',' << detail::csv_field(r.instance) << ','
      << (r.optimum ? std::to_string(*r.optimum) : std::string()) << ',';
  if (r.stats) {
    const auto& s = *r.stats;
    out << s.minimum << ',' << s.maximum << ',' << detail::fixed(s.average, 4) << ',' << detail::fixed(s.std, 4) << ','
        << detail::fixed(s.sup_std, 4) << ',' << detail::fixed(s.inf_std, 4) << ',';
  } else {
    out << ",,,,,,";
  }
  out << detail::fixed(r.wall_time_seconds, 3) << ',';
  if (r.config) {
    const auto& p = r.config->params;
    out << p.iterations << ',' << p.n_ants << ',' << (p.elitism ? 1 : 0) << ',' << detail::real(p.alpha) << ','
        << detail::real(p.beta) << ',' << detail::real(p.evaporation) << ',' << detail::real(p.q) << ','
        << static_cast<int>(p.init_mode) << ',' << static_cast<int>(p.inc_mode) << ',' << r.config->executions << ','
        << p.seed << ',';
  } else {
    out << ",,,,,,,,,,,";
  }
  out << detail::csv_field(r.error);
  return out.str();
}

inline void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kReportHeader << '\n';
  for (const auto& r : rows) out << format_row(r) << '\n';
}

}  // namespace jssp
