#include "hexatm/implicit_resolver.hpp"

#include <algorithm>
#include <map>

namespace hexatm {

namespace {

using Index = HexLattice::Index;
constexpr Index kNone = HexLattice::kNoVertex;

// Track into ahead[k]; ahead[k] must exist.
Heading track_into(const HexLattice& lat, const Projection& p, int k) {
    const Index from = k == 0 ? p.origin : p.ahead[0];
    return heading_between(lat.coord(from), lat.coord(p.ahead[static_cast<std::size_t>(k)]));
}

struct Coincidence {
    int offset;
    ResourceKind kind;
};

// Every vertex/edge coincidence between two projections, earliest first.
std::vector<Coincidence> coincidences(const Projection& own, const Projection& other) {
    std::vector<Coincidence> out;
    const auto& a = own.ahead;
    const auto& b = other.ahead;
    if (a[0] != kNone && b[0] != kNone) {
        if (a[0] == b[0]) {
            out.push_back({1, ResourceKind::vertex});
        } else if (a[0] == other.origin && b[0] == own.origin) {
            out.push_back({1, ResourceKind::edge});
        }
    }
    if (a[1] != kNone && b[1] != kNone) {
        if (a[1] == b[1]) {
            out.push_back({2, ResourceKind::vertex});
        } else if (a[1] == b[0] && b[1] == a[0]) {
            out.push_back({2, ResourceKind::edge});
        }
    }
    return out;
}

// Clockwise escalation from the reference heading: the first neighbor that
// exists and is not the next vertex (or a swap partner) of any projection in
// `avoid`; the first existing neighbor when every one is taken.
Index turn_right_from(const HexLattice& lat, Index from, Heading reference, std::span<const Projection> avoid) {
    Index first_existing = kNone;
    for (int k = 1; k <= 5; ++k) {
        const Index n = lat.step(from, rotate(reference, k));
        if (n == kNone) {
            continue;
        }
        if (first_existing == kNone) {
            first_existing = n;
        }
        const bool taken = std::any_of(avoid.begin(), avoid.end(), [&](const Projection& p) {
            return p.ahead[0] == n || (p.origin == n && p.ahead[0] == from);
        });
        if (!taken) {
            return n;
        }
    }
    return first_existing;
}

Projection projection_after(const HexLattice& lat, Index origin, Index first, Index destination) {
    Projection p;
    p.origin = origin;
    p.ahead[0] = first;
    if (first != destination) {
        p.ahead[1] = lat.next_on_shortest_path(first, destination);
    }
    return p;
}

}  // namespace

std::string_view to_string(ConflictCase c) {
    switch (c) {
        case ConflictCase::c1_60: return "C1_60";
        case ConflictCase::c2_120: return "C2_120";
        case ConflictCase::c3_1_headon_vertex: return "C3_1_headon_vertex";
        case ConflictCase::c3_2_headon_edge: return "C3_2_headon_edge";
        case ConflictCase::c4_240: return "C4_240";
        case ConflictCase::c5_300: return "C5_300";
    }
    return "unknown";
}

ConflictCase classify_conflict(Heading own, Heading intruder, ResourceKind kind) {
    switch (conflict_angle(own, intruder)) {
        case 60: return ConflictCase::c1_60;
        case 120: return ConflictCase::c2_120;
        case 180:
            return kind == ResourceKind::edge ? ConflictCase::c3_2_headon_edge : ConflictCase::c3_1_headon_vertex;
        case 240: return ConflictCase::c4_240;
        default: return ConflictCase::c5_300;
    }
}

Maneuver pairwise_rule(ConflictCase c, Heading own_heading) {
    switch (c) {
        case ConflictCase::c1_60:
        case ConflictCase::c2_120:
            return Maneuver::turn_right;
        case ConflictCase::c3_1_headon_vertex:
        case ConflictCase::c3_2_headon_edge:
            return is_south_or_due_west(own_heading) ? Maneuver::turn_right : Maneuver::continue_route;
        case ConflictCase::c4_240:
        case ConflictCase::c5_300:
            return Maneuver::continue_route;
    }
    return Maneuver::continue_route;
}

Projection project_route(const HexLattice& lat, const AircraftState& a) {
    const Index here = lat.index_of(a.position);
    const Index dest = lat.index_of(a.destination);
    Projection p;
    p.origin = here;
    if (here == dest) {
        return p;
    }
    return projection_after(lat, here, lat.next_on_shortest_path(here, dest), dest);
}

std::vector<PredictedConflict> predict_conflicts(const AircraftState& own, std::span<const AircraftState> others,
                                                 const HexLattice& lat) {
    std::vector<PredictedConflict> out;
    const Projection mine = project_route(lat, own);
    if (mine.ahead[0] == kNone) {
        return out;
    }
    for (const auto& other : others) {
        if (other.id == own.id || !other.airborne()) {
            continue;
        }
        const Projection theirs = project_route(lat, other);
        for (const auto& hit : coincidences(mine, theirs)) {
            const int k = hit.offset - 1;
            const Heading own_track = track_into(lat, mine, k);
            Heading their_track = track_into(lat, theirs, k);
            if (hit.kind == ResourceKind::edge) {
                their_track = rotate(own_track, 3);
            }
            if (own_track == their_track) {
                continue;
            }
            PredictedConflict c;
            c.intruder_id = other.id;
            c.conflict_case = classify_conflict(own_track, their_track, hit.kind);
            c.time_offset = hit.offset;
            c.own_heading = own_track;
            const auto idx = static_cast<std::size_t>(k);
            if (hit.kind == ResourceKind::vertex) {
                c.resource = lat.coord(mine.ahead[idx]);
            } else {
                const Index from = k == 0 ? mine.origin : mine.ahead[0];
                c.resource = EdgeId(lat.coord(from), lat.coord(mine.ahead[idx]));
            }
            out.push_back(c);
        }
    }
    return out;
}

MoveCommand resolve_implicit(const AircraftState& own, std::span<const AircraftState> all, const HexLattice& lat) {
    const Index here = lat.index_of(own.position);
    const Index dest = lat.index_of(own.destination);
    const Projection route = project_route(lat, own);
    const auto conflicts = predict_conflicts(own, all, lat);
    if (conflicts.empty()) {
        return {own.id, lat.coord(route.ahead[0])};
    }

    // Earliest conflict per intruder.
    std::map<int, PredictedConflict> earliest;
    for (const auto& c : conflicts) {
        auto [it, inserted] = earliest.emplace(c.intruder_id, c);
        if (!inserted && c.time_offset < it->second.time_offset) {
            it->second = c;
        }
    }

    const Heading reference = own.heading;
    std::vector<Projection> intruders;
    for (const auto& other : all) {
        if (other.id != own.id && other.airborne()) {
            intruders.push_back(project_route(lat, other));
        }
    }

    auto rule_target = [&](const PredictedConflict& c) {
        return pairwise_rule(c.conflict_case, c.own_heading) == Maneuver::continue_route
                   ? route.ahead[0]
                   : turn_right_from(lat, here, reference, intruders);
    };

    if (earliest.size() == 1) {
        return {own.id, lat.coord(rule_target(earliest.begin()->second))};
    }

    const AircraftState* top = nullptr;
    for (const auto& a : all) {
        if (earliest.count(a.id) && (top == nullptr || a.priority < top->priority)) {
            top = &a;
        }
    }
    const Index fallback = rule_target(earliest.at(top->id));

    std::vector<Index> candidates{fallback};
    for (int k : {1, 2, 0, -1, -2, 3}) {
        const Index n = lat.step(here, rotate(reference, k));
        if (n != kNone) {
            candidates.push_back(n);
        }
    }

    for (Index cand : candidates) {
        const Projection trial = projection_after(lat, here, cand, dest);
        const bool clear = std::none_of(intruders.begin(), intruders.end(), [&](const Projection& p) {
            return !coincidences(trial, p).empty();
        });
        if (clear) {
            return {own.id, lat.coord(cand)};
        }
    }
    return {own.id, lat.coord(fallback)};
}

ResolverDecision ImplicitResolver::decide(const HexLattice& lat, std::span<const AircraftState> aircraft, int) {
    ResolverDecision d;
    d.moves.reserve(aircraft.size());
    for (const auto& a : aircraft) {
        if (a.airborne()) {
            d.moves.push_back(resolve_implicit(a, aircraft, lat));
        }
    }
    return d;
}

}  // namespace hexatm
