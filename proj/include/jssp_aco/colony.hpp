#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "instance.hpp"
#include "search_graph.hpp"

namespace jssp {

// How each ant picks its first vertex.
enum class InitMode : int {
  Random = 0,           // uniform over job heads, redrawn every iteration
  RandomThenFixed = 1,  // drawn once at iteration 0, reused afterwards
  OnePerJob = 2,        // one ant per job, starting at that job's head; n_ants ignored
};

enum class DepositPolicy : int {
  Uniform = 0,     // every arc of ant k gets Q / L_k
  Positional = 1,  // arc i of a |P|-vertex path gets (Q / L_k)^(|P| - 1 - i)
};

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AcoParams {
  std::size_t iterations{1000};
  std::size_t n_ants{100};
  bool elitism{false};
  double alpha{1.0};
  double beta{1.0};
  double evaporation{0.1};
  double q{1.0};
  InitMode init_mode{InitMode::Random};
  DepositPolicy inc_mode{DepositPolicy::Uniform};
  double pheromone_init{1.0};
  double pheromone_floor{1.0};
  std::uint64_t seed{0};

  friend bool operator==(const AcoParams&, const AcoParams&) = default;

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (iterations == 0) throw InvalidParams("iterations must be positive");
    if (n_ants == 0 && init_mode != InitMode::OnePerJob) throw InvalidParams("n_ants must be positive");
    if (!finite(alpha) || alpha < 0) throw InvalidParams("alpha must be a non-negative number");
    if (!finite(beta) || beta < 0) throw InvalidParams("beta must be a non-negative number");
    if (!finite(evaporation) || evaporation < 0 || evaporation > 1)
      throw InvalidParams("evaporation must lie in [0, 1]");
    if (!finite(q) || q <= 0) throw InvalidParams("q must be positive");
    if (!finite(pheromone_floor) || pheromone_floor <= 0) throw InvalidParams("pheromone floor must be positive");
    if (!finite(pheromone_init) || pheromone_init < pheromone_floor)
      throw InvalidParams("initial pheromone must be at least the floor");
    auto init = static_cast<int>(init_mode), inc = static_cast<int>(inc_mode);
    if (init < 0 || init > 2) throw InvalidParams("init mode must be 0, 1 or 2");
    if (inc < 0 || inc > 1) throw InvalidParams("inc mode must be 0 or 1");
  }
};

/// Dense |V| x |V| trail matrix; entry (i, j) is the pheromone on arc i -> j.
/// Entries never drop below the floor.
class PheromoneMatrix {
 public:
  PheromoneMatrix() = default;
  PheromoneMatrix(std::size_t n, double init, double floor)
      : n_(n), floor_(floor), tau_(n * n, std::max(init, floor)) {}

  std::size_t size() const noexcept { return n_; }
  double floor() const noexcept { return floor_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return tau_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept { return {tau_.data() + i * n_, n_}; }

  void add(std::size_t i, std::size_t j, double amount) noexcept { tau_[i * n_ + j] += amount; }

  void set(std::size_t i, std::size_t j, double value) noexcept { tau_[i * n_ + j] = std::max(floor_, value); }

  void scale(double factor) noexcept {
    for (auto& t : tau_) t = std::max(floor_, factor * t);
  }

  double min() const noexcept {
    return tau_.empty() ? floor_ : *std::min_element(tau_.begin(), tau_.end());
  }

 private:
  std::size_t n_{0};
  double floor_{1.0};
  std::vector<double> tau_;
};

struct AntPath {
  std::vector<OpId> sequence;
  Time makespan{0};
};

struct ColonyResult {
  AntPath best_path;
  std::vector<Time> best_makespan_per_iteration;
};

namespace detail {

// std::pow, with the exponents the presets actually use short-circuited.
inline double power(double base, double exponent) noexcept {
  if (exponent == 0.0) return 1.0;
  if (exponent == 1.0) return base;
  if (exponent == 2.0) return base * base;
  return std::pow(base, exponent);
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) built from the top 53 bits; identical on every
// standard library, unlike std::uniform_real_distribution.
inline double unit_draw(std::mt19937_64& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t index_draw(std::mt19937_64& rng, std::size_t n) noexcept {
  auto k = static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(n));
  return std::min(k, n - 1);
}

}  // namespace detail

/// Independent engine for ant `ant` of the run seeded with `seed`.
inline std::mt19937_64 ant_rng(std::uint64_t seed, std::size_t ant) {
  std::uint64_t s = detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(ant) + 1));
  return std::mt19937_64(s);
}

/// p_j = tau_j^alpha * eta_j^beta / sum_l tau_l^alpha * eta_l^beta, written into `out`.
inline void transition_probabilities(std::span<const double> tau, std::span<const double> eta, double alpha,
                                     double beta, std::vector<double>& out) {
  if (tau.size() != eta.size()) throw std::invalid_argument("transition_probabilities: length mismatch");
  if (tau.empty()) throw std::invalid_argument("transition_probabilities: no candidates");
  out.resize(tau.size());
  double total = 0.0;
  for (std::size_t j = 0; j < tau.size(); ++j) {
    out[j] = detail::power(tau[j], alpha) * detail::power(eta[j], beta);
    total += out[j];
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::domain_error("transition_probabilities: degenerate normalizer");
  for (auto& p : out) p /= total;
}

inline std::vector<double> transition_probabilities(std::span<const double> tau, std::span<const double> eta,
                                                    double alpha, double beta) {
  std::vector<double> out;
  transition_probabilities(tau, eta, alpha, beta, out);
  return out;
}

/// Roulette wheel: smallest j with u < p_0 + ... + p_j. The last bucket
/// absorbs any rounding residue in the cumulative sum.
inline std::size_t select_next(std::span<const double> probabilities, double u) noexcept {
  double cumulative = 0.0;
  for (std::size_t j = 0; j + 1 < probabilities.size(); ++j) {
    cumulative += probabilities[j];
    if (u < cumulative) return j;
  }
  return probabilities.empty() ? 0 : probabilities.size() - 1;
}

inline std::size_t select_next(std::span<const double> probabilities, std::mt19937_64& rng) noexcept {
  return select_next(probabilities, detail::unit_draw(rng));
}

// tau <- max(floor, (1 - d) tau)
inline void evaporate(PheromoneMatrix& matrix, double d) {
  if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("evaporation rate must lie in [0, 1]");
  if (d == 0.0) return;
  matrix.scale(1.0 - d);
}

namespace detail {
inline double reward(double q, const AntPath& path) {
  if (path.makespan <= 0) throw std::domain_error("pheromone deposit needs a positive makespan");
  return q / static_cast<double>(path.makespan);
}
}  // namespace detail

inline void deposit_uniform(PheromoneMatrix& matrix, std::span<const AntPath> paths, double q) {
  for (const auto& path : paths) {
    double amount = detail::reward(q, path);
    for (std::size_t k = 0; k + 1 < path.sequence.size(); ++k)
      matrix.add(path.sequence[k].flat, path.sequence[k + 1].flat, amount);
  }
}

// Arc i (0-based) of a path with |P| vertices receives (Q/L)^(|P|-1-i): the
// final arc gets exponent 1. When Q/L < 1 the late arcs dominate.
inline void deposit_positional(PheromoneMatrix& matrix, std::span<const AntPath> paths, double q) {
  for (const auto& path : paths) {
    double base = detail::reward(q, path);
    const std::size_t vertices = path.sequence.size();
    if (vertices < 2) continue;
    // walk backwards so the exponent grows by one per arc
    double amount = base;
    for (std::size_t k = vertices - 1; k-- > 0;) {
      matrix.add(path.sequence[k].flat, path.sequence[k + 1].flat, amount);
      amount *= base;
    }
  }
}

inline void deposit(PheromoneMatrix& matrix, std::span<const AntPath> paths, double q, DepositPolicy policy) {
  if (policy == DepositPolicy::Positional)
    deposit_positional(matrix, paths, q);
  else
    deposit_uniform(matrix, paths, q);
}

/// Builds one complete path starting at `first`, reading (never writing)
/// the pheromone matrix.
inline AntPath construct_path(const Instance& inst, const PheromoneMatrix& tau, const OpId& first,
                              const AcoParams& params, std::mt19937_64& rng) {
  SearchState state(inst);
  state.advance(first);
  std::size_t current = first.flat;

  std::vector<OpId> cands;
  std::vector<double> trail, eta, probs;
  cands.reserve(inst.n_jobs());
  trail.reserve(inst.n_jobs());
  eta.reserve(inst.n_jobs());

  while (!state.complete()) {
    state.candidates(cands);
    trail.clear();
    eta.clear();
    for (const auto& c : cands) {
      trail.push_back(tau(current, c.flat));
      eta.push_back(heuristic_value(state.delta_makespan(c)));
    }
    transition_probabilities(trail, eta, params.alpha, params.beta, probs);
    const OpId& next = cands[select_next(probs, rng)];
    state.advance(next);
    current = next.flat;
  }
  return AntPath{state.path(), state.partial_makespan()};
}

// Called once per iteration with that iteration's ant paths, before any
// pheromone update.
using IterationObserver = std::function<void(std::size_t iteration, std::span<const AntPath> paths)>;

/// Elitist ant colony over the complete task graph.
///
/// Each iteration: place ants per the init mode, let every ant build a
/// full interleaving against the pheromone matrix as it stood at the start
/// of the iteration, evaporate, deposit for all ants of the iteration, and
/// with elitism add one more deposit along the incumbent best path. The
/// returned trace holds the global best after each iteration.
inline ColonyResult run_colony(const Instance& inst, const AcoParams& params, const IterationObserver& observer = {}) {
  params.validate();
  const std::size_t n = inst.total_ops();
  if (n == 0) throw std::invalid_argument("instance has no operations");
  bool any_positive = false;
  for (const auto& job : inst.jobs())
    for (const auto& op : job) any_positive = any_positive || op.duration > 0;
  if (!any_positive) throw std::invalid_argument("instance has no positive duration");

  // job heads: the candidates of an empty path
  std::vector<OpId> heads = SearchState(inst).candidates();

  const std::size_t n_ants = params.init_mode == InitMode::OnePerJob ? heads.size() : params.n_ants;

  PheromoneMatrix tau(n, params.pheromone_init, params.pheromone_floor);
  std::vector<std::mt19937_64> rngs;
  rngs.reserve(n_ants);
  for (std::size_t k = 0; k < n_ants; ++k) rngs.push_back(ant_rng(params.seed, k));

  std::vector<OpId> fixed_start;
  if (params.init_mode == InitMode::RandomThenFixed)
    for (std::size_t k = 0; k < n_ants; ++k) fixed_start.push_back(heads[detail::index_draw(rngs[k], heads.size())]);

  ColonyResult result;
  result.best_makespan_per_iteration.reserve(params.iterations);
  result.best_path.makespan = std::numeric_limits<Time>::max();
  std::vector<AntPath> paths(n_ants);

  for (std::size_t it = 0; it < params.iterations; ++it) {
    for (std::size_t k = 0; k < n_ants; ++k) {
      OpId first;
      switch (params.init_mode) {
        case InitMode::Random: first = heads[detail::index_draw(rngs[k], heads.size())]; break;
        case InitMode::RandomThenFixed: first = fixed_start[k]; break;
        case InitMode::OnePerJob: first = heads[k]; break;
      }
      paths[k] = construct_path(inst, tau, first, params, rngs[k]);
    }

    if (observer) observer(it, paths);
    for (const auto& p : paths)
      if (p.makespan < result.best_path.makespan) result.best_path = p;

    evaporate(tau, params.evaporation);
    deposit(tau, paths, params.q, params.inc_mode);
    if (params.elitism) deposit(tau, std::span<const AntPath>(&result.best_path, 1), params.q, params.inc_mode);

    result.best_makespan_per_iteration.push_back(result.best_path.makespan);
  }
  return result;
}

}  // namespace jssp
