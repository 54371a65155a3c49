#pragma once

#include <map>
#include <utility>
#include <vector>

#include "hexatm/lattice.hpp"
#include "hexatm/simulation.hpp"

namespace hexatm::testing {

// Aircraft k (1-based) gets id k and priority k.
inline TrafficConfiguration make_config(int radius, const std::vector<std::pair<AxialCoord, AxialCoord>>& plans,
                                        std::int64_t id = 0) {
    TrafficConfiguration cfg;
    cfg.config_id = id;
    cfg.lattice_radius = radius;
    int k = 1;
    for (const auto& [s, d] : plans) {
        cfg.aircraft.push_back({k, s, d, k});
        ++k;
    }
    return cfg;
}

inline AircraftState airborne(int id, int priority, AxialCoord pos, int heading, AxialCoord dest,
                              int fuel = kDefaultFuelCapacity) {
    AircraftState s;
    s.id = id;
    s.priority = priority;
    s.position = pos;
    s.heading = Heading::from_compass(heading);
    s.destination = dest;
    s.fuel = fuel;
    return s;
}

// Replays fixed per-aircraft vertex sequences: script[id][t] is the vertex
// commanded at step t.
class ScriptedResolver final : public Resolver {
public:
    explicit ScriptedResolver(std::map<int, std::vector<AxialCoord>> script) : script_(std::move(script)) {}
    std::string_view name() const override { return "scripted"; }
    ResolverDecision decide(const HexLattice&, std::span<const AircraftState> aircraft, int time) override {
        ResolverDecision d;
        for (const auto& a : aircraft) {
            d.moves.push_back({a.id, script_.at(a.id).at(static_cast<std::size_t>(time))});
        }
        return d;
    }

private:
    std::map<int, std::vector<AxialCoord>> script_;
};

// Follows the lattice's shortest path, ignoring everyone else.
class GreedyResolver final : public Resolver {
public:
    std::string_view name() const override { return "greedy"; }
    ResolverDecision decide(const HexLattice& lat, std::span<const AircraftState> aircraft, int) override {
        ResolverDecision d;
        for (const auto& a : aircraft) {
            const auto next = lat.next_on_shortest_path(lat.index_of(a.position), lat.index_of(a.destination));
            d.moves.push_back({a.id, lat.coord(next)});
        }
        return d;
    }
};

}  // namespace hexatm::testing
