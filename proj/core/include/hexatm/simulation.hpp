#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hexatm/lattice.hpp"

namespace hexatm {

inline constexpr int kDefaultFuelCapacity = 20;

enum class AircraftStatus { airborne, landed, fuel_emergency, collided };

std::string_view to_string(AircraftStatus s);

struct AircraftState {
    int id = 0;
    int priority = 0;  // smaller is higher priority
    AxialCoord position;
    Heading heading;  // direction of the last traversed edge
    AxialCoord destination;
    int fuel = 0;
    int distance_flown = 0;
    AircraftStatus status = AircraftStatus::airborne;

    bool airborne() const { return status == AircraftStatus::airborne; }
};

struct AircraftPlan {
    int id = 0;
    AxialCoord start;
    AxialCoord destination;
    int priority = 0;

    friend bool operator==(const AircraftPlan&, const AircraftPlan&) = default;
};

struct TrafficConfiguration {
    std::int64_t config_id = 0;
    int lattice_radius = 0;
    std::vector<AircraftPlan> aircraft;

    friend bool operator==(const TrafficConfiguration&, const TrafficConfiguration&) = default;
};

/// Thrown for configurations that violate the structural invariants:
/// vertices inside the lattice, distinct starts, destination != start,
/// unique ids, priorities a permutation of 1..N, and a plan length of at
/// least `min_plan_length`.
class InvalidConfiguration : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

void validate_configuration(const HexLattice& lat, const TrafficConfiguration& cfg, int min_plan_length = 1);

struct MoveCommand {
    int aircraft_id = 0;
    AxialCoord next_vertex;
};

enum class ResourceKind { vertex, edge };

struct SeparationEvent {
    int time = 0;  // vertex events: arrival time; edge events: interval start
    ResourceKind kind = ResourceKind::vertex;
    std::variant<AxialCoord, EdgeId> resource;
    std::vector<int> aircraft_ids;  // sorted, at least two
};

enum class Termination { all_landed, loss_of_separation, fuel_emergency, allocation_failure, step_limit };

std::string_view to_string(Termination t);
std::optional<Termination> termination_from_string(std::string_view s);

/// Per-step output of a resolver. A non-empty `failure` means the resolver
/// could not produce a separation-preserving allocation.
struct ResolverDecision {
    std::vector<MoveCommand> moves;
    std::string failure;

    static ResolverDecision failed(std::string why) { return {{}, std::move(why)}; }
    bool ok() const { return failure.empty(); }
};

/// Pluggable conflict-resolution logic. One instance drives one simulation.
class Resolver {
public:
    virtual ~Resolver() = default;

    virtual std::string_view name() const = 0;

    /// Called once before the first step. Returns a failure description when
    /// the resolver cannot handle the configuration.
    virtual std::optional<std::string> prepare(const HexLattice& lat, const TrafficConfiguration& cfg,
                                               int fuel_capacity) {
        (void)lat;
        (void)cfg;
        (void)fuel_capacity;
        return std::nullopt;
    }

    /// One command per airborne aircraft in `aircraft`.
    virtual ResolverDecision decide(const HexLattice& lat, std::span<const AircraftState> aircraft, int time) = 0;
};

/// Raised when a resolver returns a missing, duplicate or non-adjacent command.
class SimulationFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioOutcome {
    std::int64_t config_id = 0;
    std::string algorithm_name;
    Termination termination = Termination::step_limit;
    std::vector<int> aircraft_ids;                       // parallel to trajectories
    std::vector<std::vector<AxialCoord>> trajectories;  // one vertex per elapsed step, start included
    std::vector<AircraftState> final_states;
    std::vector<SeparationEvent> separation_events;
    int steps_elapsed = 0;
    double resolver_compute_seconds = 0.0;
    std::string failure_reason;
};

/// Positions and headings of every aircraft (landed ones included) at one time.
struct CollectiveState {
    std::vector<AxialCoord> positions;
    std::vector<int> headings;
    std::vector<AircraftStatus> statuses;

    friend bool operator==(const CollectiveState&, const CollectiveState&) = default;
};

/// True iff some collective state occurs twice in the sequence.
bool detect_livelock(std::span<const CollectiveState> history);

/// Discrete-time engine. Every airborne aircraft traverses exactly one edge
/// per step; all moves of a step are committed simultaneously.
class Simulation {
public:
    /// Validates the configuration (distinct starts etc.) and places every
    /// aircraft at its start with full fuel, heading along its first
    /// shortest-path edge. Calls resolver.prepare(). Throws
    /// InvalidConfiguration or std::invalid_argument (fuel_capacity < 1).
    Simulation(const HexLattice& lat, TrafficConfiguration cfg, Resolver& resolver,
               int fuel_capacity = kDefaultFuelCapacity);

    /// Advance one time step and return the separation events it produced.
    /// Throws SimulationFault on malformed resolver output and std::logic_error
    /// when called on a finished simulation.
    std::vector<SeparationEvent> step();

    /// Step until every aircraft lands, a separation event occurs, any
    /// aircraft runs out of fuel, the resolver fails, or `step_limit`
    /// steps have elapsed. step_limit <= 0 means "use fuel capacity".
    ScenarioOutcome run_to_completion(int step_limit = 0);

    int time() const { return time_; }
    int fuel_capacity() const { return fuel_capacity_; }
    bool finished() const { return termination_.has_value(); }
    std::optional<Termination> termination() const { return termination_; }
    std::span<const AircraftState> aircraft() const { return aircraft_; }
    std::span<const CollectiveState> history() const { return history_; }
    double resolver_compute_seconds() const { return compute_seconds_; }
    const TrafficConfiguration& configuration() const { return cfg_; }

private:
    CollectiveState snapshot() const;
    ScenarioOutcome make_outcome() const;

    const HexLattice& lat_;
    TrafficConfiguration cfg_;
    Resolver& resolver_;
    int fuel_capacity_;
    int time_ = 0;
    std::vector<AircraftState> aircraft_;
    std::vector<std::vector<AxialCoord>> trajectories_;
    std::vector<SeparationEvent> events_;
    std::vector<CollectiveState> history_;
    double compute_seconds_ = 0.0;
    std::optional<Termination> termination_;
    std::string failure_reason_;
};

/// Convenience wrapper: build, run and return the outcome.
ScenarioOutcome simulate(const HexLattice& lat, const TrafficConfiguration& cfg, Resolver& resolver,
                         int fuel_capacity = kDefaultFuelCapacity, int step_limit = 0);

}  // namespace hexatm
