#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hexatm/lattice.hpp"
#include "hexatm/simulation.hpp"

namespace hexatm {

/// One aircraft's bid for the edge it would traverse during [t, t+1) and the
/// vertex it would occupy at t+1.
struct Claim {
    int aircraft_id = 0;
    EdgeId edge;
    AxialCoord target_vertex;
    int preference_rank = 0;
};

/// Candidate moves of an airborne aircraft, best first. Ordered by remaining
/// graph distance from the target, then turn magnitude from the current
/// heading, then right before left, then canonical neighbor order.
std::vector<Claim> preference_list(const AircraftState& a, const HexLattice& lat);

struct Allocation {
    std::vector<Claim> claims;  // one per aircraft, in input order

    const Claim* find(int aircraft_id) const;
};

struct NegotiationOutcome {
    Allocation allocation;
    int iterations = 0;
    std::optional<int> exhausted_aircraft;  // set when some aircraft ran out of candidates

    bool ok() const { return !exhausted_aircraft.has_value(); }
};

/// All-hands allocation round. Every aircraft proposes its best unexhausted
/// claim; within each group of claims sharing a target vertex or an edge all
/// but the highest-priority claimant give up that claim; repeat until the
/// proposals are conflict-free. Requires unique priorities.
NegotiationOutcome negotiation_round(std::span<const AircraftState> aircraft, const HexLattice& lat);

/// One negotiation round turned into move commands.
ResolverDecision resolve_collaborative(std::span<const AircraftState> aircraft, const HexLattice& lat);

class CollaborativeResolver final : public Resolver {
public:
    std::string_view name() const override { return "collaborative"; }
    ResolverDecision decide(const HexLattice& lat, std::span<const AircraftState> aircraft, int time) override;
};

}  // namespace hexatm
