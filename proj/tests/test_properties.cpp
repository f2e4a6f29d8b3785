#include <gtest/gtest.h>

#include "properties.hpp"

namespace jssp::testing {
namespace {

constexpr std::size_t kCases = 1000;

void expect_ok(const PropertyResult& r) {
  EXPECT_EQ(r.cases, kCases);
  EXPECT_TRUE(r.ok()) << r.failures << " failures; " << r.first_failure;
}

TEST(Properties, ProbabilityNormalization) { expect_ok(check_probability_normalization(kCases)); }
TEST(Properties, PheromoneFloor) { expect_ok(check_pheromone_floor(kCases)); }
TEST(Properties, ColonyPathsFeasible) { expect_ok(check_colony_paths_feasible(kCases)); }
TEST(Properties, DecodeMatchesAdvance) { expect_ok(check_decode_matches_advance(kCases)); }
TEST(Properties, ValidateDecode) { expect_ok(check_validate_decode(kCases)); }
TEST(Properties, RunStatsConsistency) { expect_ok(check_run_stats(kCases)); }
TEST(Properties, SeedDeterminism) { expect_ok(check_seed_determinism(kCases)); }

}  // namespace
}  // namespace jssp::testing
