#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "instance.hpp"
#include "search_graph.hpp"

namespace jssp {

// A Gantt schedule: start time per operation (indexed by OpId::flat).
// A start of SearchState::kUnscheduled marks an operation with no placement.
struct Schedule {
  const Instance* inst{nullptr};
  std::vector<Time> start;
  Time makespan{0};

  Time end(const OpId& op) const { return start[op.flat] + inst->operation(op).duration; }
};

// The sequence handed to decode() is not a feasible interleaving.
class SequenceError : public std::invalid_argument {
 public:
  SequenceError(std::size_t position, const std::string& what)
      : std::invalid_argument("sequence position " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Semi-active decoding: places each operation at max(job ready, machine
/// ready) in sequence order. Shares the arithmetic of SearchState::advance.
inline Schedule decode(const Instance& inst, const std::vector<OpId>& sequence) {
  SearchState state(inst);
  for (std::size_t pos = 0; pos < sequence.size(); ++pos) {
    const auto& op = sequence[pos];
    if (op.job >= inst.n_jobs() || op.step >= inst.jobs()[op.job].size())
      throw SequenceError(pos, "operation does not exist in the instance");
    if (op.flat != inst.op_id(op.job, op.step).flat) throw SequenceError(pos, "inconsistent flat index");
    if (state.op_start()[op.flat] != SearchState::kUnscheduled)
      throw SequenceError(pos, "duplicate operation J" + std::to_string(op.job) + "." + std::to_string(op.step));
    if (!state.is_candidate(op))
      throw SequenceError(pos, "J" + std::to_string(op.job) + "." + std::to_string(op.step) +
                                   " appears before its job predecessor");
    state.advance(op);
  }
  if (!state.complete())
    throw SequenceError(sequence.size(), "sequence covers " + std::to_string(sequence.size()) + " of " +
                                             std::to_string(inst.total_ops()) + " operations");
  return Schedule{&inst, state.op_start(), state.partial_makespan()};
}

enum class ViolationKind { Coverage, Precedence, MachineOverlap, Makespan };

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Coverage: return "coverage";
    case ViolationKind::Precedence: return "job precedence";
    case ViolationKind::MachineOverlap: return "machine exclusivity";
    case ViolationKind::Makespan: return "makespan";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  OpId first;
  OpId second;
  std::string message;
};

namespace detail {
inline std::string op_label(const OpId& op) { return "J" + std::to_string(op.job) + "." + std::to_string(op.step); }
}  // namespace detail

/// Checks coverage, job precedence, machine exclusivity, and that the
/// recorded makespan equals the latest completion. Returns the first
/// violation found, or nullopt when the schedule is feasible.
inline std::optional<Violation> validate(const Schedule& s) {
  const Instance& inst = *s.inst;
  if (s.start.size() != inst.total_ops())
    return Violation{ViolationKind::Coverage, {}, {},
                     "coverage violation: schedule has " + std::to_string(s.start.size()) + " entries, instance has " +
                         std::to_string(inst.total_ops()) + " operations"};

  for (std::size_t f = 0; f < s.start.size(); ++f) {
    if (s.start[f] < 0) {
      auto op = inst.op_id(f);
      return Violation{ViolationKind::Coverage, op, op,
                       "coverage violation: operation " + detail::op_label(op) + " is not scheduled"};
    }
  }

  for (std::size_t j = 0; j < inst.n_jobs(); ++j) {
    for (std::size_t k = 1; k < inst.jobs()[j].size(); ++k) {
      auto a = inst.op_id(j, k - 1), b = inst.op_id(j, k);
      if (s.start[b.flat] < s.end(a))
        return Violation{ViolationKind::Precedence, a, b,
                         "job precedence violation: " + detail::op_label(b) + " starts at " +
                             std::to_string(s.start[b.flat]) + " before " + detail::op_label(a) + " ends at " +
                             std::to_string(s.end(a))};
    }
  }

  std::vector<std::vector<OpId>> by_machine(inst.n_machines());
  for (std::size_t f = 0; f < inst.total_ops(); ++f) {
    auto op = inst.op_id(f);
    by_machine[inst.operation(op).machine].push_back(op);
  }
  for (std::size_t m = 0; m < by_machine.size(); ++m) {
    auto& ops = by_machine[m];
    std::sort(ops.begin(), ops.end(), [&](const OpId& a, const OpId& b) {
      return std::tuple(s.start[a.flat], s.end(a), a.flat) < std::tuple(s.start[b.flat], s.end(b), b.flat);
    });
    // Sorted by start, an overlap always shows up against the latest-ending
    // earlier interval. Zero-length operations occupy no time.
    std::optional<OpId> busiest;
    for (const auto& op : ops) {
      if (inst.operation(op).duration == 0) continue;
      if (busiest && s.start[op.flat] < s.end(*busiest))
        return Violation{ViolationKind::MachineOverlap, *busiest, op,
                         "machine exclusivity violation on M" + std::to_string(m) + ": " + detail::op_label(*busiest) +
                             " [" + std::to_string(s.start[busiest->flat]) + "," + std::to_string(s.end(*busiest)) +
                             ") overlaps " + detail::op_label(op) + " [" + std::to_string(s.start[op.flat]) + "," +
                             std::to_string(s.end(op)) + ")"};
      if (!busiest || s.end(op) > s.end(*busiest)) busiest = op;
    }
  }

  Time latest = 0;
  for (std::size_t f = 0; f < inst.total_ops(); ++f) latest = std::max(latest, s.end(inst.op_id(f)));
  if (latest != s.makespan)
    return Violation{ViolationKind::Makespan, {}, {},
                     "makespan violation: recorded " + std::to_string(s.makespan) + ", latest completion " +
                         std::to_string(latest)};
  return std::nullopt;
}

/// One line per machine: "M<m>: J<job>.<step>[start,end) ..." in start order.
inline std::string render_gantt(const Schedule& s) {
  const Instance& inst = *s.inst;
  if (inst.total_ops() == 0) return {};
  std::vector<std::vector<OpId>> by_machine(inst.n_machines());
  for (std::size_t f = 0; f < inst.total_ops(); ++f) {
    auto op = inst.op_id(f);
    by_machine[inst.operation(op).machine].push_back(op);
  }
  std::ostringstream out;
  for (std::size_t m = 0; m < by_machine.size(); ++m) {
    auto& ops = by_machine[m];
    std::sort(ops.begin(), ops.end(), [&](const OpId& a, const OpId& b) {
      return std::tuple(s.start[a.flat], a.job, a.step) < std::tuple(s.start[b.flat], b.job, b.step);
    });
    if (m) out << '\n';
    out << 'M' << m << ':';
    for (const auto& op : ops)
      out << ' ' << detail::op_label(op) << '[' << s.start[op.flat] << ',' << s.end(op) << ')';
  }
  return out.str();
}

// JSON export: {"instance", "makespan", "operations": [{job, step, machine, start, duration}]}
inline nlohmann::json schedule_to_json(const Schedule& s) {
  nlohmann::json ops = nlohmann::json::array();
  for (std::size_t f = 0; f < s.start.size(); ++f) {
    auto op = s.inst->op_id(f);
    const auto& o = s.inst->operation(op);
    ops.push_back({{"job", op.job}, {"step", op.step}, {"machine", o.machine}, {"start", s.start[f]},
                   {"duration", o.duration}});
  }
  return {{"instance", s.inst->name()}, {"makespan", s.makespan}, {"operations", std::move(ops)}};
}

// Malformed schedule JSON, or JSON that does not describe the given instance.
class ScheduleFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a schedule written by schedule_to_json. Operations missing from the
/// file stay unscheduled so that validate() reports them. The makespan
/// defaults to the latest completion when the file omits it.
inline Schedule schedule_from_json(const Instance& inst, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("operations") || !j["operations"].is_array())
    throw ScheduleFormatError("schedule JSON must be an object with an 'operations' array");
  Schedule s{&inst, std::vector<Time>(inst.total_ops(), SearchState::kUnscheduled), 0};
  for (const auto& e : j["operations"]) {
    std::size_t job = 0, step = 0;
    Time start = 0;
    try {
      job = e.at("job").get<std::size_t>();
      step = e.at("step").get<std::size_t>();
      start = e.at("start").get<Time>();
    } catch (const nlohmann::json::exception& ex) {
      throw ScheduleFormatError(std::string("bad operation entry: ") + ex.what());
    }
    if (job >= inst.n_jobs() || step >= inst.jobs()[job].size())
      throw ScheduleFormatError("operation J" + std::to_string(job) + "." + std::to_string(step) +
                                " does not exist in instance");
    auto op = inst.op_id(job, step);
    const auto& o = inst.operation(op);
    if (e.contains("machine") && e["machine"].get<std::size_t>() != o.machine)
      throw ScheduleFormatError("operation " + detail::op_label(op) + " machine does not match instance");
    if (e.contains("duration") && e["duration"].get<Time>() != o.duration)
      throw ScheduleFormatError("operation " + detail::op_label(op) + " duration does not match instance");
    if (start < 0) throw ScheduleFormatError("operation " + detail::op_label(op) + " has negative start");
    if (s.start[op.flat] != SearchState::kUnscheduled)
      throw ScheduleFormatError("operation " + detail::op_label(op) + " listed twice");
    s.start[op.flat] = start;
  }
  if (j.contains("makespan")) {
    s.makespan = j["makespan"].get<Time>();
  } else {
    for (std::size_t f = 0; f < s.start.size(); ++f)
      if (s.start[f] >= 0) s.makespan = std::max(s.makespan, s.end(inst.op_id(f)));
  }
  return s;
}

}  // namespace jssp
