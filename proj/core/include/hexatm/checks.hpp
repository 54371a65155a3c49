#pragma once

// Verification helpers that deliberately avoid the production code paths
// they check: the replay checker and the brute-force oracle work from raw
// coordinates with their own neighbor and distance logic.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hexatm/harness.hpp"
#include "hexatm/lattice.hpp"
#include "hexatm/simulation.hpp"
#include "hexatm/strategic_resolver.hpp"

namespace hexatm::checks {

struct ReplayVerdict {
    std::size_t vertex_conflicts = 0;  // (time, vertex) pairs with two or more aircraft
    std::size_t edge_conflicts = 0;    // (interval, undirected edge) pairs with two or more aircraft

    bool clean() const { return vertex_conflicts == 0 && edge_conflicts == 0; }
};

/// trajectories[i][t] is aircraft i's vertex at time t; an aircraft exists
/// only for the length of its sequence.
ReplayVerdict replay_check(std::span<const std::vector<AxialCoord>> trajectories);

struct OracleResult {
    std::optional<int> objective;  // minimal sum of arrival times
    bool budget_exhausted = false;
    std::uint64_t nodes = 0;
};

/// Depth-first enumeration of joint move sequences (every aircraft moves to a
/// neighbor each step, landing on arrival) under increasing cost bounds.
/// Exact; gives up after `node_budget` visited nodes.
OracleResult brute_force_optimum(const TrafficConfiguration& cfg, int horizon,
                                 std::uint64_t node_budget = 50'000'000);

/// Checks a strategic plan against the configuration with independent logic:
/// endpoints, adjacency, no early visit of the destination, objective, and
/// separation. Returns the first problem found.
std::optional<std::string> plan_defect(const TrafficConfiguration& cfg, const JointPlan& plan, int horizon);

struct SuiteReport {
    bool passed = false;
    std::string summary;
};

/// Exhaustive 2-aircraft implicit sweep.
SuiteReport verify_pairwise(int radius = 3, int min_plan_length = 4, int fuel = kDefaultFuelCapacity,
                            unsigned parallelism = 1);

/// Strategic optimum against the brute-force oracle on every 2-aircraft
/// configuration at `radius` plus `sampled_triples` seeded 3-aircraft ones,
/// with each plan replayed through the simulator.
SuiteReport verify_oracle(int radius = 2, int min_plan_length = 4, std::size_t sampled_triples = 100,
                          std::uint64_t seed = 11, int fuel = kDefaultFuelCapacity);

/// Results and summary CSVs must be byte-identical for every parallelism
/// degree listed. Timing is zeroed for the comparison.
SuiteReport verify_determinism(std::span<const TrafficConfiguration> configs, Algorithm algorithm,
                               std::span<const unsigned> parallelism_degrees, int fuel = kDefaultFuelCapacity);

}  // namespace hexatm::checks
