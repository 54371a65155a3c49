#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hexatm/lattice.hpp"
#include "hexatm/simulation.hpp"

namespace hexatm {

inline constexpr int kDefaultMinPlanLength = 4;

/// Exhaustive enumeration switches to sampling above this many configurations.
inline constexpr std::uint64_t kExhaustiveLimit = 200'000;

struct FlightPlan {
    AxialCoord start;
    AxialCoord destination;
};

/// Every (start, destination) pair at graph distance >= min_plan_length,
/// in (start index, destination index) order.
std::vector<FlightPlan> feasible_plans(const HexLattice& lat, int min_plan_length);

/// Number of configurations enumerate would yield.
std::uint64_t count_configs(const HexLattice& lat, int n_aircraft, int min_plan_length);

/// Streams every configuration of `n_aircraft` ordered aircraft with
/// pairwise-distinct starts and plans of at least `min_plan_length` edges.
/// Aircraft k gets id k and priority k. Ids of the yielded configurations
/// count up from 0; the first aircraft varies slowest.
class ConfigEnumerator {
public:
    /// Throws std::invalid_argument when n_aircraft < 1, n_aircraft exceeds
    /// the vertex count, or min_plan_length < 1.
    ConfigEnumerator(const HexLattice& lat, int n_aircraft, int min_plan_length = kDefaultMinPlanLength);

    std::optional<TrafficConfiguration> next();

private:
    bool advance();
    bool starts_distinct() const;

    int radius_;
    std::vector<FlightPlan> plans_;
    std::vector<std::size_t> cursor_;
    std::int64_t next_id_ = 0;
    bool done_ = false;
};

std::vector<TrafficConfiguration> enumerate_configs(const HexLattice& lat, int n_aircraft,
                                                    int min_plan_length = kDefaultMinPlanLength);

/// Uniform i.i.d. draws from the enumerable set. Each aircraft draws a plan
/// uniformly from feasible_plans() with std::mt19937_64 seeded by `seed`;
/// tuples with a shared start are rejected and redrawn whole. Throws
/// std::invalid_argument when count < 1 or the feasible set is empty.
std::vector<TrafficConfiguration> sample_configs(const HexLattice& lat, int n_aircraft, std::size_t count,
                                                 int min_plan_length, std::uint64_t seed);

/// Exhaustive enumeration when at most kExhaustiveLimit configurations exist,
/// otherwise `sample_count` seeded samples.
std::vector<TrafficConfiguration> default_experiment(const HexLattice& lat, int n_aircraft, int min_plan_length,
                                                     std::size_t sample_count, std::uint64_t seed);

/// One JSONL line (no trailing newline), field order fixed:
/// {"config_id":..,"lattice_radius":..,"aircraft":[{"id":..,"start":[q,r],"dest":[q,r],"priority":..},..]}
std::string config_to_json(const TrafficConfiguration& cfg);

/// Throws std::invalid_argument on malformed input.
TrafficConfiguration config_from_json(std::string_view line);

void write_configs(std::ostream& os, std::span<const TrafficConfiguration> configs);

/// Reads non-empty lines; errors carry the 1-based line number.
std::vector<TrafficConfiguration> read_configs(std::istream& is);

}  // namespace hexatm
