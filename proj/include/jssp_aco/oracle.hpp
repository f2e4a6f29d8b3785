#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "instance.hpp"
#include "search_graph.hpp"

namespace jssp {

struct OracleResult {
  Time optimum{0};
  std::vector<OpId> optimal_sequence;
  std::uint64_t n_sequences{0};
};

class OracleCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultOracleCap = 10'000'000;

/// Number of interleavings of the jobs' chains: |V|! / prod |job_i|!.
/// Returns nullopt once the count exceeds `limit`.
inline std::optional<std::uint64_t> interleaving_count(const Instance& inst,
                                                       std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()) {
  // Build the multinomial as a product of binomials C(placed + len, len),
  // each computed incrementally so intermediate values stay exact.
  std::uint64_t count = 1;
  std::uint64_t placed = 0;
  for (const auto& job : inst.jobs()) {
    std::uint64_t binom = 1;
    for (std::uint64_t k = 1; k <= job.size(); ++k) {
      // binom = C(placed + k, k) = C(placed + k - 1, k - 1) * (placed + k) / k
      unsigned __int128 next = static_cast<unsigned __int128>(binom) * (placed + k) / k;
      if (next > limit) return std::nullopt;
      binom = static_cast<std::uint64_t>(next);
    }
    unsigned __int128 prod = static_cast<unsigned __int128>(count) * binom;
    if (prod > limit) return std::nullopt;
    count = static_cast<std::uint64_t>(prod);
    placed += job.size();
  }
  return count;
}

namespace detail {

struct OracleSearch {
  const Instance& inst;
  bool prune;
  OracleResult best;

  void dfs(const SearchState& state) {
    if (state.complete()) {
      ++best.n_sequences;
      if (state.partial_makespan() < best.optimum) {
        best.optimum = state.partial_makespan();
        best.optimal_sequence = state.path();
      }
      return;
    }
    // makespan never decreases along a path
    if (prune && state.partial_makespan() >= best.optimum) return;
    for (const auto& op : state.candidates()) dfs(advance(state, op));
  }
};

}  // namespace detail

/// Exhaustive search over every feasible interleaving, branching on job
/// frontiers exactly as the ants do. With `prune` set, subtrees whose
/// partial makespan already reaches the incumbent are skipped and
/// n_sequences counts only the complete sequences actually decoded.
inline OracleResult exhaustive_optimum(const Instance& inst, std::uint64_t cap = kDefaultOracleCap,
                                       bool prune = false) {
  if (!interleaving_count(inst, cap))
    throw OracleCapExceeded("instance " + (inst.name().empty() ? std::string("<unnamed>") : inst.name()) + " has more than " +
                            std::to_string(cap) + " interleavings; shrink the instance or raise the cap");
  detail::OracleSearch search{inst, prune, {}};
  search.best.optimum = std::numeric_limits<Time>::max();
  search.dfs(SearchState(inst));
  if (inst.total_ops() == 0) search.best.optimum = 0;
  return search.best;
}

}  // namespace jssp
