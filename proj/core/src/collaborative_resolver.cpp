#include "hexatm/collaborative_resolver.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <tuple>

namespace hexatm {

namespace {

using Index = HexLattice::Index;

struct Ranked {
    int distance = 0;
    int turn_magnitude = 0;
    int left = 0;  // 0 for right turns and straight, 1 for left turns
    int canonical = 0;
    Index vertex = 0;
};

using Ranking = std::array<Ranked, 6>;

std::size_t rank_moves(const AircraftState& a, const HexLattice& lat, Ranking& ranked) {
    const auto here = lat.index_of(a.position);
    const auto dest = lat.index_of(a.destination);
    std::size_t count = 0;
    for (const auto n : lat.neighbors(here)) {
        const int turn = (heading_between(a.position, lat.coord(n)).compass() - a.heading.compass() + 360) % 360;
        ranked[count] = {lat.distance(n, dest), std::min(turn, 360 - turn), turn > 180 ? 1 : 0,
                         static_cast<int>(count), n};
        ++count;
    }
    std::sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count),
              [](const Ranked& x, const Ranked& y) {
                  return std::tie(x.distance, x.turn_magnitude, x.left, x.canonical) <
                         std::tie(y.distance, y.turn_magnitude, y.left, y.canonical);
              });
    return count;
}

Claim make_claim(const AircraftState& a, const HexLattice& lat, Index vertex, std::size_t rank) {
    const AxialCoord target = lat.coord(vertex);
    return {a.id, EdgeId(a.position, target), target, static_cast<int>(rank)};
}

}  // namespace

const Claim* Allocation::find(int aircraft_id) const {
    for (const auto& c : claims) {
        if (c.aircraft_id == aircraft_id) return &c;
    }
    return nullptr;
}

std::vector<Claim> preference_list(const AircraftState& a, const HexLattice& lat) {
    Ranking ranked;
    const std::size_t n = rank_moves(a, lat, ranked);
    std::vector<Claim> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(make_claim(a, lat, ranked[k].vertex, k));
    return out;
}

NegotiationOutcome negotiation_round(std::span<const AircraftState> aircraft, const HexLattice& lat) {
    const std::size_t n = aircraft.size();
    struct Bidder {
        Index here = 0;
        Ranking prefs;
        std::size_t count = 0;
        std::size_t rank = 0;
        bool yields = false;
    };
    std::vector<Bidder> bidders(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!aircraft[i].airborne()) {
            throw std::invalid_argument("negotiation_round: aircraft " + std::to_string(aircraft[i].id) +
                                        " is not airborne");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (aircraft[j].priority == aircraft[i].priority) {
                throw std::invalid_argument("negotiation_round: priorities must be unique");
            }
        }
        bidders[i].here = lat.index_of(aircraft[i].position);
        bidders[i].count = rank_moves(aircraft[i], lat, bidders[i].prefs);
    }

    NegotiationOutcome out;
    while (true) {
        ++out.iterations;
        bool conflict = false;
        for (auto& b : bidders) b.yields = false;
        for (std::size_t i = 0; i < n; ++i) {
            const Index ui = bidders[i].here;
            const Index wi = bidders[i].prefs[bidders[i].rank].vertex;
            for (std::size_t j = i + 1; j < n; ++j) {
                const Index uj = bidders[j].here;
                const Index wj = bidders[j].prefs[bidders[j].rank].vertex;
                // Same target, or the same undirected edge (only a swap is
                // possible since starts are distinct).
                if (wi == wj || (wi == uj && wj == ui)) {
                    conflict = true;
                    // Only the highest-priority member of a group keeps its
                    // claim; pairwise marking of the lower one is equivalent.
                    bidders[aircraft[i].priority < aircraft[j].priority ? j : i].yields = true;
                }
            }
        }
        if (!conflict) {
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (bidders[i].yields && ++bidders[i].rank == bidders[i].count) {
                out.exhausted_aircraft = aircraft[i].id;
                return out;
            }
        }
    }

    out.allocation.claims.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = bidders[i];
        out.allocation.claims.push_back(make_claim(aircraft[i], lat, b.prefs[b.rank].vertex, b.rank));
    }
    return out;
}

ResolverDecision resolve_collaborative(std::span<const AircraftState> aircraft, const HexLattice& lat) {
    const auto round = negotiation_round(aircraft, lat);
    if (!round.ok()) {
        return ResolverDecision::failed("aircraft " + std::to_string(*round.exhausted_aircraft) +
                                        " exhausted every candidate move");
    }
    ResolverDecision d;
    d.moves.reserve(round.allocation.claims.size());
    for (const auto& claim : round.allocation.claims) {
        d.moves.push_back({claim.aircraft_id, claim.target_vertex});
    }
    return d;
}

ResolverDecision CollaborativeResolver::decide(const HexLattice& lat, std::span<const AircraftState> aircraft, int) {
    return resolve_collaborative(aircraft, lat);
}

}  // namespace hexatm
