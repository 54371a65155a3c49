#include "hexatm/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <unordered_set>

namespace hexatm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view to_string(AircraftStatus s) {
    switch (s) {
        case AircraftStatus::airborne: return "airborne";
        case AircraftStatus::landed: return "landed";
        case AircraftStatus::fuel_emergency: return "fuel_emergency";
        case AircraftStatus::collided: return "collided";
    }
    return "unknown";
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::all_landed: return "all_landed";
        case Termination::loss_of_separation: return "loss_of_separation";
        case Termination::fuel_emergency: return "fuel_emergency";
        case Termination::allocation_failure: return "allocation_failure";
        case Termination::step_limit: return "step_limit";
    }
    return "unknown";
}

std::optional<Termination> termination_from_string(std::string_view s) {
    for (auto t : {Termination::all_landed, Termination::loss_of_separation, Termination::fuel_emergency,
                   Termination::allocation_failure, Termination::step_limit}) {
        if (to_string(t) == s) {
            return t;
        }
    }
    return std::nullopt;
}

void validate_configuration(const HexLattice& lat, const TrafficConfiguration& cfg, int min_plan_length) {
    if (cfg.aircraft.empty()) {
        throw InvalidConfiguration("configuration has no aircraft");
    }
    const auto n = cfg.aircraft.size();
    std::set<AxialCoord> starts;
    std::set<int> ids;
    std::vector<bool> seen_priority(n + 1, false);
    for (const auto& a : cfg.aircraft) {
        const std::string tag = "aircraft " + std::to_string(a.id) + ": ";
        if (!lat.contains(a.start) || !lat.contains(a.destination)) {
            throw InvalidConfiguration(tag + "start or destination outside the lattice");
        }
        if (a.start == a.destination) {
            throw InvalidConfiguration(tag + "destination equals start");
        }
        if (lat.distance(a.start, a.destination) < min_plan_length) {
            throw InvalidConfiguration(tag + "plan shorter than " + std::to_string(min_plan_length) + " edges");
        }
        if (!starts.insert(a.start).second) {
            throw InvalidConfiguration(tag + "shares its start vertex with another aircraft");
        }
        if (!ids.insert(a.id).second) {
            throw InvalidConfiguration(tag + "duplicate id");
        }
        if (a.priority < 1 || static_cast<std::size_t>(a.priority) > n || seen_priority[a.priority]) {
            throw InvalidConfiguration(tag + "priorities must be a permutation of 1..N");
        }
        seen_priority[a.priority] = true;
    }
}

bool detect_livelock(std::span<const CollectiveState> history) {
    for (std::size_t i = 0; i < history.size(); ++i) {
        for (std::size_t j = i + 1; j < history.size(); ++j) {
            if (history[i] == history[j]) {
                return true;
            }
        }
    }
    return false;
}

Simulation::Simulation(const HexLattice& lat, TrafficConfiguration cfg, Resolver& resolver, int fuel_capacity)
    : lat_(lat), cfg_(std::move(cfg)), resolver_(resolver), fuel_capacity_(fuel_capacity) {
    if (fuel_capacity < 1) {
        throw std::invalid_argument("fuel capacity must be at least 1");
    }
    validate_configuration(lat_, cfg_);

    aircraft_.reserve(cfg_.aircraft.size());
    for (const auto& plan : cfg_.aircraft) {
        AircraftState s;
        s.id = plan.id;
        s.priority = plan.priority;
        s.position = plan.start;
        s.destination = plan.destination;
        const auto first = lat_.next_on_shortest_path(lat_.index_of(plan.start), lat_.index_of(plan.destination));
        s.heading = heading_between(plan.start, lat_.coord(first));
        s.fuel = fuel_capacity_;
        aircraft_.push_back(s);
        trajectories_.push_back({plan.start});
    }
    history_.push_back(snapshot());

    const auto t0 = Clock::now();
    auto failure = resolver_.prepare(lat_, cfg_, fuel_capacity_);
    compute_seconds_ += seconds_since(t0);
    if (failure) {
        termination_ = Termination::allocation_failure;
        failure_reason_ = std::move(*failure);
    }
}

CollectiveState Simulation::snapshot() const {
    CollectiveState s;
    for (const auto& a : aircraft_) {
        s.positions.push_back(a.position);
        s.headings.push_back(a.heading.compass());
        s.statuses.push_back(a.status);
    }
    return s;
}

std::vector<SeparationEvent> Simulation::step() {
    if (termination_) {
        throw std::logic_error("step() called on a finished simulation");
    }

    std::vector<AircraftState> airborne;
    for (const auto& a : aircraft_) {
        if (a.airborne()) {
            airborne.push_back(a);
        }
    }

    const auto t0 = Clock::now();
    ResolverDecision decision = resolver_.decide(lat_, airborne, time_);
    compute_seconds_ += seconds_since(t0);

    if (!decision.ok()) {
        termination_ = Termination::allocation_failure;
        failure_reason_ = std::move(decision.failure);
        return {};
    }

    // index into aircraft_ -> commanded vertex
    std::map<std::size_t, AxialCoord> targets;
    for (const auto& cmd : decision.moves) {
        auto it = std::find_if(aircraft_.begin(), aircraft_.end(),
                               [&](const AircraftState& a) { return a.id == cmd.aircraft_id; });
        if (it == aircraft_.end() || !it->airborne()) {
            throw SimulationFault("command for unknown or grounded aircraft " + std::to_string(cmd.aircraft_id));
        }
        const auto idx = static_cast<std::size_t>(it - aircraft_.begin());
        if (!targets.emplace(idx, cmd.next_vertex).second) {
            throw SimulationFault("duplicate command for aircraft " + std::to_string(cmd.aircraft_id));
        }
        if (!lat_.contains(cmd.next_vertex) || !are_adjacent(it->position, cmd.next_vertex)) {
            throw SimulationFault("aircraft " + std::to_string(cmd.aircraft_id) +
                                  " commanded to a vertex that is not adjacent");
        }
    }
    if (targets.size() != airborne.size()) {
        throw SimulationFault("resolver left an airborne aircraft without a command");
    }

    std::map<EdgeId, std::vector<int>> edge_users;
    std::map<AxialCoord, std::vector<int>> vertex_users;
    for (const auto& [idx, to] : targets) {
        const auto& a = aircraft_[idx];
        edge_users[EdgeId(a.position, to)].push_back(a.id);
        vertex_users[to].push_back(a.id);
    }

    std::vector<SeparationEvent> events;
    for (auto& [edge, ids] : edge_users) {
        if (ids.size() > 1) {
            std::sort(ids.begin(), ids.end());
            events.push_back({time_, ResourceKind::edge, edge, ids});
        }
    }
    for (auto& [vertex, ids] : vertex_users) {
        if (ids.size() > 1) {
            std::sort(ids.begin(), ids.end());
            events.push_back({time_ + 1, ResourceKind::vertex, vertex, ids});
        }
    }

    for (const auto& [idx, to] : targets) {
        auto& a = aircraft_[idx];
        a.heading = heading_between(a.position, to);
        a.position = to;
        a.fuel -= 1;
        a.distance_flown += 1;
        trajectories_[idx].push_back(to);
        if (a.position == a.destination) {
            a.status = AircraftStatus::landed;
        } else if (a.fuel <= 0) {
            a.status = AircraftStatus::fuel_emergency;
        }
    }
    ++time_;

    if (!events.empty()) {
        std::unordered_set<int> hit;
        for (const auto& e : events) {
            hit.insert(e.aircraft_ids.begin(), e.aircraft_ids.end());
        }
        for (auto& a : aircraft_) {
            if (hit.count(a.id)) {
                a.status = AircraftStatus::collided;
            }
        }
        events_.insert(events_.end(), events.begin(), events.end());
        termination_ = Termination::loss_of_separation;
    } else if (std::any_of(aircraft_.begin(), aircraft_.end(),
                           [](const AircraftState& a) { return a.status == AircraftStatus::fuel_emergency; })) {
        termination_ = Termination::fuel_emergency;
    } else if (std::all_of(aircraft_.begin(), aircraft_.end(),
                           [](const AircraftState& a) { return a.status == AircraftStatus::landed; })) {
        termination_ = Termination::all_landed;
    }

    history_.push_back(snapshot());
    return events;
}

ScenarioOutcome Simulation::run_to_completion(int step_limit) {
    if (step_limit <= 0) {
        step_limit = fuel_capacity_;
    }
    if (step_limit < fuel_capacity_) {
        throw std::invalid_argument("step limit must not be below the fuel capacity");
    }
    while (!termination_) {
        if (time_ >= step_limit) {
            termination_ = Termination::step_limit;
            break;
        }
        step();
    }
    return make_outcome();
}

ScenarioOutcome Simulation::make_outcome() const {
    ScenarioOutcome out;
    out.config_id = cfg_.config_id;
    out.algorithm_name = std::string(resolver_.name());
    out.termination = termination_.value_or(Termination::step_limit);
    for (const auto& a : aircraft_) {
        out.aircraft_ids.push_back(a.id);
    }
    out.trajectories = trajectories_;
    out.final_states = aircraft_;
    out.separation_events = events_;
    out.steps_elapsed = time_;
    out.resolver_compute_seconds = compute_seconds_;
    out.failure_reason = failure_reason_;
    return out;
}

ScenarioOutcome simulate(const HexLattice& lat, const TrafficConfiguration& cfg, Resolver& resolver,
                         int fuel_capacity, int step_limit) {
    Simulation sim(lat, cfg, resolver, fuel_capacity);
    return sim.run_to_completion(step_limit);
}

}  // namespace hexatm
