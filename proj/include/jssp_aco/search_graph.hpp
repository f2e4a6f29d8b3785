#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "instance.hpp"

namespace jssp {

// An ant's partial path through the complete task graph. The graph's edges
// are never stored: any job's next unscheduled operation is reachable from
// any vertex, so the frontier of each job is the whole candidate set.
//
// Operations are placed semi-actively as they are appended: each one starts
// at max(job ready, machine ready).
class SearchState {
 public:
  static constexpr Time kUnscheduled = -1;

  explicit SearchState(const Instance& inst)
      : inst_(&inst),
        next_step_(inst.n_jobs(), 0),
        job_ready_(inst.n_jobs(), 0),
        machine_ready_(inst.n_machines(), 0),
        op_start_(inst.total_ops(), kUnscheduled) {
    path_.reserve(inst.total_ops());
  }

  const Instance& instance() const noexcept { return *inst_; }
  const std::vector<OpId>& path() const noexcept { return path_; }
  const std::vector<std::size_t>& next_step() const noexcept { return next_step_; }
  const std::vector<Time>& job_ready() const noexcept { return job_ready_; }
  const std::vector<Time>& machine_ready() const noexcept { return machine_ready_; }
  const std::vector<Time>& op_start() const noexcept { return op_start_; }
  Time partial_makespan() const noexcept { return partial_makespan_; }

  bool complete() const noexcept { return path_.size() == inst_->total_ops(); }

  bool is_candidate(const OpId& op) const noexcept {
    return op.job < next_step_.size() && op.step == next_step_[op.job] &&
           op.step < inst_->jobs()[op.job].size();
  }

  /// Frontier operations, one per unfinished job, in job order.
  std::vector<OpId> candidates() const {
    std::vector<OpId> out;
    candidates(out);
    return out;
  }

  void candidates(std::vector<OpId>& out) const {
    out.clear();
    for (std::size_t j = 0; j < next_step_.size(); ++j)
      if (next_step_[j] < inst_->jobs()[j].size()) out.push_back(inst_->op_id(j, next_step_[j]));
  }

  Time start_if_chosen(const OpId& op) const noexcept {
    const auto& o = inst_->operation(op);
    return std::max(job_ready_[op.job], machine_ready_[o.machine]);
  }

  /// Increase of the partial makespan if `op` were appended next.
  Time delta_makespan(const OpId& op) const {
    if (!is_candidate(op)) throw std::logic_error("delta_makespan: operation is not a candidate");
    Time end = start_if_chosen(op) + inst_->operation(op).duration;
    return std::max<Time>(0, end - partial_makespan_);
  }

  // Precondition violations are programming errors, not recoverable input.
  void advance(const OpId& op) {
    if (!is_candidate(op)) throw std::logic_error("advance: operation violates job order or was already chosen");
    const auto& o = inst_->operation(op);
    Time start = start_if_chosen(op);
    Time end = start + o.duration;
    op_start_[op.flat] = start;
    job_ready_[op.job] = end;
    machine_ready_[o.machine] = end;
    partial_makespan_ = std::max(partial_makespan_, end);
    ++next_step_[op.job];
    path_.push_back(op);
  }

 private:
  const Instance* inst_;
  std::vector<OpId> path_;
  std::vector<std::size_t> next_step_;
  std::vector<Time> job_ready_;
  std::vector<Time> machine_ready_;
  std::vector<Time> op_start_;
  Time partial_makespan_{0};
};

inline std::vector<OpId> candidates(const SearchState& state) { return state.candidates(); }

inline SearchState advance(SearchState state, const OpId& op) {
  state.advance(op);
  return state;
}

inline Time delta_makespan(const SearchState& state, const OpId& op) { return state.delta_makespan(op); }

/// Heuristic desirability of appending `op`: 1 / (1 + delta makespan).
/// Moves that do not extend the makespan score 1; the value falls toward 0
/// as the increase grows.
inline double heuristic_value(Time delta) noexcept { return 1.0 / (1.0 + static_cast<double>(delta)); }

inline double heuristic_value(const SearchState& state, const OpId& op) {
  return heuristic_value(state.delta_makespan(op));
}

}  // namespace jssp
