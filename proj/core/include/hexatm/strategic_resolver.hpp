#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hexatm/lattice.hpp"
#include "hexatm/simulation.hpp"

namespace hexatm {

/// Time-expanded formulation of the joint routing problem over [0, horizon].
///
/// Decision structure:
///   x[i,v,t]   aircraft i at vertex v at time t (arrival at the destination
///              is absorbing: the aircraft leaves the airspace afterwards)
///   y[i,u,w,t] aircraft i traverses u -> w during [t, t+1)
/// Constraints: start at t = 0; flow conservation with no holding; exactly
/// one arrival; at most one aircraft per vertex per time; at most one
/// aircraft per undirected edge per interval. Objective: sum of arrival times.
///
/// Only variables that can lie on a feasible path are materialized: v is in
/// window(i, t) iff dist(start, v) <= t and t + dist(v, dest) <= horizon, with
/// the destination appearing only as an arrival.
class TimeExpandedModel {
public:
    using Index = HexLattice::Index;

    const HexLattice& lattice() const { return lattice_; }
    int horizon() const { return horizon_; }
    std::size_t aircraft_count() const { return ids_.size(); }
    int aircraft_id(std::size_t i) const { return ids_[i]; }
    Index start(std::size_t i) const { return starts_[i]; }
    Index destination(std::size_t i) const { return dests_[i]; }

    /// Vertices aircraft i may occupy at time t, ascending index order.
    std::span<const Index> window(std::size_t i, int t) const;
    bool in_window(std::size_t i, int t, Index v) const;

    std::size_t occupancy_variable_count() const;
    std::size_t arc_variable_count() const;

    /// Plain-text listing, one constraint per line (format in docs/model_dump.md).
    void write_constraints(std::ostream& os) const;

private:
    friend TimeExpandedModel build_model(const HexLattice& lat, const TrafficConfiguration& cfg, int horizon);
    explicit TimeExpandedModel(const HexLattice& lat) : lattice_(lat) {}

    HexLattice lattice_;
    int horizon_ = 0;
    std::vector<int> ids_;
    std::vector<Index> starts_;
    std::vector<Index> dests_;
    std::vector<std::vector<std::vector<Index>>> windows_;  // [i][t]
    std::vector<std::vector<std::vector<char>>> member_;    // [i][t][v]
};

/// Throws InvalidConfiguration for a bad configuration and
/// std::invalid_argument when the horizon is below the longest shortest path
/// or the fleet exceeds kMaxStrategicAircraft.
TimeExpandedModel build_model(const HexLattice& lat, const TrafficConfiguration& cfg, int horizon);

inline constexpr std::size_t kMaxStrategicAircraft = 8;

struct JointPlan {
    std::vector<int> aircraft_ids;
    std::vector<std::vector<AxialCoord>> paths;  // start .. destination
    std::vector<int> arrival_times;
    int objective = 0;  // sum of arrival times
};

struct SolveResult {
    std::optional<JointPlan> plan;  // empty: no feasible plan within the horizon
    std::size_t expanded_nodes = 0;
};

/// Certified-optimal best-first search over joint time-expanded states with
/// operator decomposition (one aircraft's move per search level) and the
/// admissible, consistent heuristic sum of remaining graph distances. Ties
/// are broken by smaller heuristic, then first generation, with successors
/// generated in aircraft order and canonical neighbor order.
SolveResult solve_exact(const TimeExpandedModel& model);

/// Solves the full horizon once in prepare() and replays the plan verbatim.
/// The horizon is max(fuel capacity, configured minimum).
class StrategicResolver final : public Resolver {
public:
    explicit StrategicResolver(int min_horizon = 0) : min_horizon_(min_horizon) {}

    std::string_view name() const override { return "strategic"; }
    std::optional<std::string> prepare(const HexLattice& lat, const TrafficConfiguration& cfg,
                                       int fuel_capacity) override;
    ResolverDecision decide(const HexLattice& lat, std::span<const AircraftState> aircraft, int time) override;

    const std::optional<JointPlan>& plan() const { return plan_; }

private:
    int min_horizon_;
    std::optional<JointPlan> plan_;
};

}  // namespace hexatm
