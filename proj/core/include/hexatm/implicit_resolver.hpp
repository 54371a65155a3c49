#pragma once

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "hexatm/lattice.hpp"
#include "hexatm/simulation.hpp"

namespace hexatm {

/// Encounter geometry, named by the heading difference at the disputed resource.
enum class ConflictCase {
    c1_60,
    c2_120,
    c3_1_headon_vertex,
    c3_2_headon_edge,
    c4_240,
    c5_300,
};

std::string_view to_string(ConflictCase c);

struct PredictedConflict {
    int intruder_id = 0;
    ConflictCase conflict_case = ConflictCase::c1_60;
    int time_offset = 1;  // 1 or 2
    std::variant<AxialCoord, EdgeId> resource;
    Heading own_heading;  // ownship track into the disputed resource
};

/// Maps a heading difference and resource kind to a case.
/// Throws std::invalid_argument for a zero angle (same track).
ConflictCase classify_conflict(Heading own, Heading intruder, ResourceKind kind);

enum class Maneuver { turn_right, continue_route };

/// Right-of-way table: 60 and 120 turn right, 240 and 300 continue, head-on
/// turns right only when southbound or due west.
Maneuver pairwise_rule(ConflictCase c, Heading own_heading);

/// Up to two future vertices of an aircraft, with the vertex it leaves from.
/// Entries beyond the end of the projection are kNoVertex.
struct Projection {
    HexLattice::Index origin = HexLattice::kNoVertex;
    std::array<HexLattice::Index, 2> ahead{HexLattice::kNoVertex, HexLattice::kNoVertex};
};

/// Next two vertices of the aircraft's shortest path to its destination,
/// stopping at the destination. Used for the ownship and, as broadcast
/// intent, for every intruder.
Projection project_route(const HexLattice& lat, const AircraftState& a);

/// Two-step look-ahead. Reports every vertex shared at equal offsets and every
/// undirected edge shared over equal intervals, classified by the heading
/// difference at the resource. Same-track coincidences are not reported.
std::vector<PredictedConflict> predict_conflicts(const AircraftState& own, std::span<const AircraftState> others,
                                                 const HexLattice& lat);

/// One aircraft's decision: follow the route when clear, apply the pairwise
/// rule against a single intruder, otherwise search a fixed candidate order
/// for a maneuver that clears every predicted conflict and fall back to the
/// rule maneuver against the highest-priority intruder.
///
/// A right turn is taken relative to the current track and escalates
/// clockwise past neighbors that are off the lattice or that another
/// aircraft will occupy (or swap through) on its next step.
MoveCommand resolve_implicit(const AircraftState& own, std::span<const AircraftState> all, const HexLattice& lat);

/// Stateless resolver that runs resolve_implicit independently per aircraft.
class ImplicitResolver final : public Resolver {
public:
    std::string_view name() const override { return "implicit"; }
    ResolverDecision decide(const HexLattice& lat, std::span<const AircraftState> aircraft, int time) override;
};

}  // namespace hexatm
