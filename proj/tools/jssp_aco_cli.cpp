// jssp-aco: solve, validate, oracle and bench front end.
//
// Exit codes: 0 success, 1 user error (bad flags, unreadable or malformed
// input, infeasible schedule), 2 internal error.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <jssp_aco/jssp_aco.hpp>

#ifndef JSSP_ACO_DEFAULT_MANIFEST
#define JSSP_ACO_DEFAULT_MANIFEST "data/manifest.csv"
#endif

namespace {

constexpr int kOk = 0;
constexpr int kUserError = 1;
constexpr int kInternalError = 2;

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<jssp::Manifest> try_manifest(const std::string& path) {
  if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
  return jssp::Manifest::load(path);
}

jssp::Instance load(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw UserError("cannot read instance file " + path);
  return jssp::load_instance(path);
}

std::string describe(const jssp::AcoParams& p) {
  std::ostringstream out;
  out << "ite=" << p.iterations << " ants=" << p.n_ants << " elit=" << (p.elitism ? 1 : 0) << " alpha=" << p.alpha
      << " beta=" << p.beta << " evap=" << p.evaporation << " q=" << p.q << " init=" << static_cast<int>(p.init_mode)
      << " inc=" << static_cast<int>(p.inc_mode) << " tau0=" << p.pheromone_init << " tau_min=" << p.pheromone_floor
      << " seed=" << p.seed;
  return out.str();
}

void add_param_flags(CLI::App& cmd, jssp::AcoParams& p, int& init, int& inc) {
  cmd.add_option("--iterations,--ite", p.iterations, "Colony iterations")->capture_default_str();
  cmd.add_option("--ants", p.n_ants, "Ants per iteration (ignored with --init 2)")->capture_default_str();
  cmd.add_flag("--elitism,--elit", p.elitism, "Reinforce the global-best path every iteration");
  cmd.add_option("--alpha", p.alpha, "Pheromone exponent")->capture_default_str();
  cmd.add_option("--beta", p.beta, "Heuristic exponent")->capture_default_str();
  cmd.add_option("--evap", p.evaporation, "Evaporation rate in [0,1]")->capture_default_str();
  cmd.add_option("--q", p.q, "Deposit constant Q")->capture_default_str();
  cmd.add_option("--init", init, "Start vertex mode: 0 random, 1 random then fixed, 2 one ant per job")
      ->capture_default_str();
  cmd.add_option("--inc", inc, "Deposit policy: 0 uniform, 1 positional")->capture_default_str();
  cmd.add_option("--pheromone-init", p.pheromone_init, "Initial pheromone")->capture_default_str();
  cmd.add_option("--pheromone-floor", p.pheromone_floor, "Minimum pheromone")->capture_default_str();
  cmd.add_option("--seed", p.seed, "RNG seed")->capture_default_str();
}

int run_solve(const std::string& instance_path, jssp::AcoParams p, int init, int inc, const std::string& manifest_path,
              bool gantt, const std::string& json_path, const std::string& trace_path) {
  p.init_mode = static_cast<jssp::InitMode>(init);
  p.inc_mode = static_cast<jssp::DepositPolicy>(inc);
  try {
    p.validate();
  } catch (const jssp::InvalidParams& e) {
    throw UserError(std::string("invalid parameters: ") + e.what());
  }
  auto inst = load(instance_path);
  auto result = jssp::run_colony(inst, p);
  auto schedule = jssp::decode(inst, result.best_path.sequence);
  if (auto v = jssp::validate(schedule)) throw std::logic_error("decoder produced an infeasible schedule: " + v->message);

  std::cout << "instance: " << inst.name() << " (" << inst.n_jobs() << " jobs x " << inst.n_machines() << " machines, "
            << inst.total_ops() << " operations)\n";
  std::cout << "params: " << describe(p) << '\n';
  std::cout << "elitism: " << (p.elitism ? "global-best reinforcement, weight 1" : "off") << '\n';
  std::cout << "best makespan: " << schedule.makespan << '\n';
  auto manifest = try_manifest(manifest_path);
  auto optimum = manifest ? manifest->optimum(inst.name()) : std::nullopt;
  if (optimum) {
    double gap = *optimum > 0 ? 100.0 * static_cast<double>(schedule.makespan - *optimum) / static_cast<double>(*optimum) : 0.0;
    std::cout << "optimum: " << *optimum << " (gap " << std::fixed << std::setprecision(2) << gap << "%)\n";
  } else {
    std::cout << "optimum: unknown\n";
  }
  if (gantt) std::cout << jssp::render_gantt(schedule) << '\n';

  if (!json_path.empty()) {
    auto doc = jssp::schedule_to_json(schedule).dump(2);
    if (json_path == "-") {
      std::cout << doc << '\n';
    } else {
      std::ofstream out(json_path);
      if (!out) throw UserError("cannot write " + json_path);
      out << doc << '\n';
    }
  }
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw UserError("cannot write " + trace_path);
    jssp::write_trace_csv(out, result);
  }
  return kOk;
}

int run_validate(const std::string& instance_path, const std::string& schedule_path) {
  auto inst = load(instance_path);
  std::ifstream in(schedule_path);
  if (!in) throw UserError("cannot open schedule " + schedule_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("malformed schedule JSON: ") + e.what());
  }
  auto schedule = jssp::schedule_from_json(inst, doc);
  if (auto v = jssp::validate(schedule)) {
    std::cout << "invalid: " << v->message << '\n';
    return kUserError;
  }
  std::cout << "valid, makespan=" << schedule.makespan << '\n';
  return kOk;
}

int run_oracle(const std::string& instance_path, std::uint64_t cap, bool prune) {
  auto inst = load(instance_path);
  auto r = jssp::exhaustive_optimum(inst, cap, prune);
  std::cout << "optimum: " << r.optimum << '\n';
  std::cout << "sequences: " << r.n_sequences << '\n';
  std::cout << "witness:";
  for (const auto& op : r.optimal_sequence) std::cout << " J" << op.job << '.' << op.step;
  std::cout << '\n';
  return kOk;
}

int run_bench(const std::vector<std::string>& config_paths, const std::string& out_path, std::size_t workers,
              const std::string& instance_override, const std::string& trace_dir, const std::string& manifest_path) {
  if (config_paths.empty()) throw UserError("bench needs at least one config file");
  std::vector<jssp::ReportRow> rows;
  auto manifest = try_manifest(manifest_path);
  jssp::SweepOptions opts;
  opts.workers = workers;
  opts.manifest = manifest ? &*manifest : nullptr;
  if (!trace_dir.empty()) opts.trace_dir = trace_dir;

  for (const auto& path : config_paths) {
    try {
      auto cfg = jssp::load_config(path);
      if (!instance_override.empty()) cfg.instance_path = instance_override;
      rows.push_back(jssp::run_row(cfg, opts));
    } catch (const std::exception& e) {
      jssp::ReportRow row;
      row.label = std::filesystem::path(path).stem().string();
      row.error = e.what();
      rows.push_back(std::move(row));
    }
    const auto& r = rows.back();
    if (r.stats)
      std::cerr << "[" << r.label << "] " << r.instance << " min=" << r.stats->minimum << " avg=" << r.stats->average
                << '\n';
    else
      std::cerr << "[" << r.label << "] error: " << r.error << '\n';
  }

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw UserError("cannot write " + out_path);
    jssp::write_report_csv(out, rows);
  }

  int label_w = 12, inst_w = 10;
  for (const auto& r : rows) {
    label_w = std::max(label_w, static_cast<int>(r.label.size()) + 2);
    inst_w = std::max(inst_w, static_cast<int>(r.instance.size()) + 2);
  }
  std::cout << std::left << std::setw(label_w) << "label" << std::setw(inst_w) << "instance" << std::right << std::setw(8)
            << "optimum" << std::setw(8) << "min" << std::setw(8) << "max" << std::setw(10) << "average"
            << std::setw(9) << "std" << '\n';
  std::size_t failures = 0;
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(label_w) << r.label << std::setw(inst_w) << r.instance << std::right << std::setw(8)
              << (r.optimum ? std::to_string(*r.optimum) : "-");
    if (r.stats) {
      std::cout << std::setw(8) << r.stats->minimum << std::setw(8) << r.stats->maximum << std::setw(10) << std::fixed
                << std::setprecision(2) << r.stats->average << std::setw(9) << r.stats->std << '\n';
    } else {
      ++failures;
      std::cout << "  error: " << r.error << '\n';
    }
  }
  return failures == rows.size() ? kUserError : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Job-shop scheduling with an elitist ant colony"};
  app.require_subcommand(1, 1);

  std::string manifest_path = JSSP_ACO_DEFAULT_MANIFEST;
  app.add_option("--manifest", manifest_path, "Known-optimum manifest CSV")->capture_default_str();

  // solve
  auto* solve = app.add_subcommand("solve", "Run the colony on one instance");
  std::string solve_instance, json_path, trace_path;
  jssp::AcoParams params;
  int init = 0, inc = 0;
  bool gantt = false;
  solve->add_option("instance", solve_instance, "Instance file")->required();
  add_param_flags(*solve, params, init, inc);
  solve->add_flag("--gantt", gantt, "Print the best schedule as Gantt text");
  solve->add_option("--json", json_path, "Write the best schedule as JSON ('-' for stdout)");
  solve->add_option("--trace", trace_path, "Write the best-per-iteration trace CSV");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a JSON schedule against an instance");
  std::string validate_instance, schedule_path;
  validate->add_option("instance", validate_instance, "Instance file")->required();
  validate->add_option("schedule", schedule_path, "Schedule JSON")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum for tiny instances");
  std::string oracle_instance;
  std::uint64_t cap = jssp::kDefaultOracleCap;
  bool prune = false;
  oracle->add_option("instance", oracle_instance, "Instance file")->required();
  oracle->add_option("--cap", cap, "Maximum number of interleavings")->capture_default_str();
  oracle->add_flag("--prune", prune, "Skip subtrees that cannot beat the incumbent");

  // bench
  auto* bench = app.add_subcommand("bench", "Run experiment config files and report statistics");
  std::vector<std::string> configs;
  std::string out_path, instance_override, trace_dir;
  std::size_t workers = jssp::default_workers();
  bench->add_option("configs", configs, "Experiment config files");
  bench->add_option("--out", out_path, "CSV report path");
  bench->add_option("--workers", workers, "Concurrent executions (default: $JSSP_ACO_WORKERS or core count)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--instance", instance_override, "Run every config on this instance instead");
  bench->add_option("--trace-dir", trace_dir, "Write per-execution convergence traces here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUserError;
  }

  try {
    if (solve->parsed())
      return run_solve(solve_instance, params, init, inc, manifest_path, gantt, json_path, trace_path);
    if (validate->parsed()) return run_validate(validate_instance, schedule_path);
    if (oracle->parsed()) return run_oracle(oracle_instance, cap, prune);
    if (bench->parsed())
      return run_bench(configs, out_path, workers, instance_override, trace_dir, manifest_path);
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (bench->parsed() && configs.empty()) std::cerr << bench->help();
    return kUserError;
  } catch (const jssp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const jssp::ScheduleFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const jssp::OracleCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const jssp::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}
