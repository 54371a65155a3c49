#include <gtest/gtest.h>

#include <algorithm>

#include "hexatm/checks.hpp"
#include "hexatm/implicit_resolver.hpp"
#include "hexatm/scenarios.hpp"
#include "hexatm/simulation.hpp"
#include "hexatm/strategic_resolver.hpp"
#include "support.hpp"

namespace hexatm {
namespace {

using testing::GreedyResolver;
using testing::make_config;
using testing::ScriptedResolver;

TEST(Validation, RejectsBadConfigurations) {
    const HexLattice lat(3);
    EXPECT_THROW(validate_configuration(lat, make_config(3, {{{0, 0}, {3, 0}}, {{0, 0}, {-3, 0}}})),
                 InvalidConfiguration);
    EXPECT_THROW(validate_configuration(lat, make_config(3, {{{0, 0}, {0, 0}}})), InvalidConfiguration);
    EXPECT_THROW(validate_configuration(lat, make_config(3, {{{0, 0}, {4, 0}}})), InvalidConfiguration);
    EXPECT_THROW(validate_configuration(lat, make_config(3, {{{0, 0}, {1, 0}}}), 4), InvalidConfiguration);
    EXPECT_THROW(validate_configuration(lat, TrafficConfiguration{}), InvalidConfiguration);

    auto bad_priority = make_config(3, {{{0, 0}, {3, 0}}, {{1, 1}, {-3, 0}}});
    bad_priority.aircraft[1].priority = 1;
    EXPECT_THROW(validate_configuration(lat, bad_priority), InvalidConfiguration);
    auto dup_id = make_config(3, {{{0, 0}, {3, 0}}, {{1, 1}, {-3, 0}}});
    dup_id.aircraft[1].id = 1;
    EXPECT_THROW(validate_configuration(lat, dup_id), InvalidConfiguration);

    // Coincident destinations are allowed.
    EXPECT_NO_THROW(validate_configuration(lat, make_config(3, {{{-3, 0}, {3, 0}}, {{0, -3}, {3, 0}}}), 4));
}

TEST(Simulation, InitialState) {
    const HexLattice lat(3);
    GreedyResolver r;
    Simulation sim(lat, make_config(3, {{{-2, 0}, {2, 0}}}), r);
    ASSERT_EQ(sim.aircraft().size(), 1u);
    const auto& a = sim.aircraft()[0];
    EXPECT_EQ(a.position, (AxialCoord{-2, 0}));
    EXPECT_EQ(a.fuel, 20);
    EXPECT_TRUE(a.airborne());
    EXPECT_EQ(a.heading.compass(), 90);
    EXPECT_FALSE(sim.finished());
}

TEST(Simulation, RejectsBadInputs) {
    const HexLattice lat(3);
    GreedyResolver r;
    EXPECT_THROW(Simulation(lat, make_config(3, {{{0, 0}, {3, 0}}, {{0, 0}, {-3, 0}}}), r), InvalidConfiguration);
    EXPECT_THROW(Simulation(lat, make_config(3, {{{0, 0}, {3, 0}}}), r, 0), std::invalid_argument);
    Simulation sim(lat, make_config(3, {{{0, 0}, {3, 0}}}), r);
    EXPECT_THROW(sim.run_to_completion(5), std::invalid_argument);
}

TEST(Simulation, VertexConflictIsOneEvent) {
    const HexLattice lat(3);
    ScriptedResolver r({{1, {{0, 0}}}, {2, {{0, 0}}}});
    Simulation sim(lat, make_config(3, {{{-1, 0}, {2, 0}}, {{1, 0}, {-2, 0}}}), r);
    const auto events = sim.step();
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].kind, ResourceKind::vertex);
    EXPECT_EQ(events[0].time, 1);
    EXPECT_EQ(std::get<AxialCoord>(events[0].resource), (AxialCoord{0, 0}));
    EXPECT_EQ(events[0].aircraft_ids, (std::vector<int>{1, 2}));
    EXPECT_EQ(sim.termination(), Termination::loss_of_separation);
    EXPECT_THROW(sim.step(), std::logic_error);
}

TEST(Simulation, EdgeSwapIsOneEvent) {
    const HexLattice lat(3);
    ScriptedResolver r({{1, {{1, 0}}}, {2, {{0, 0}}}});
    Simulation sim(lat, make_config(3, {{{0, 0}, {3, 0}}, {{1, 0}, {-2, 0}}}), r);
    const auto events = sim.step();
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(events[0].kind, ResourceKind::edge);
    EXPECT_EQ(events[0].time, 0);
    EXPECT_EQ(std::get<EdgeId>(events[0].resource), EdgeId({0, 0}, {1, 0}));
    const auto out = sim.run_to_completion();
    EXPECT_EQ(out.termination, Termination::loss_of_separation);
    EXPECT_FALSE(checks::replay_check(out.trajectories).clean());
}

TEST(Simulation, LandingRemovesAircraft) {
    const HexLattice lat(3);
    GreedyResolver r;
    Simulation sim(lat, make_config(3, {{{0, 0}, {1, 0}}}), r);
    EXPECT_TRUE(sim.step().empty());
    EXPECT_EQ(sim.aircraft()[0].status, AircraftStatus::landed);
    EXPECT_EQ(sim.termination(), Termination::all_landed);
}

TEST(Simulation, LandedAircraftFreesItsVertex) {
    // Aircraft 2 passes through aircraft 1's destination one step after it lands.
    const HexLattice lat(3);
    ScriptedResolver r({{1, {{1, 0}}}, {2, {{2, -1}, {1, 0}, {0, 0}, {-1, 0}}}});
    const auto out = simulate(lat, make_config(3, {{{0, 0}, {1, 0}}, {{3, -1}, {-1, 0}}}), r);
    EXPECT_EQ(out.termination, Termination::all_landed);
    EXPECT_TRUE(out.separation_events.empty());
}

TEST(Simulation, UnimpededFlight) {
    const HexLattice lat(3);
    GreedyResolver r;
    const auto out = simulate(lat, make_config(3, {{{-3, 0}, {2, 0}}}), r);
    EXPECT_EQ(out.termination, Termination::all_landed);
    EXPECT_EQ(out.steps_elapsed, 5);
    EXPECT_EQ(out.final_states[0].distance_flown, 5);
    EXPECT_EQ(out.trajectories[0].size(), 6u);
}

TEST(Simulation, MalformedCommandsFault) {
    const HexLattice lat(3);
    const auto cfg = make_config(3, {{{0, 0}, {3, 0}}, {{-1, 0}, {-3, 0}}});
    {
        ScriptedResolver r({{1, {{2, 0}}}, {2, {{-2, 0}}}});
        Simulation sim(lat, cfg, r);
        EXPECT_THROW(sim.step(), SimulationFault);
    }
    {
        class Missing final : public Resolver {
        public:
            std::string_view name() const override { return "missing"; }
            ResolverDecision decide(const HexLattice&, std::span<const AircraftState>, int) override {
                return ResolverDecision{{{1, {1, 0}}}, {}};
            }
        } r;
        Simulation sim(lat, cfg, r);
        EXPECT_THROW(sim.step(), SimulationFault);
    }
    {
        class Duplicate final : public Resolver {
        public:
            std::string_view name() const override { return "dup"; }
            ResolverDecision decide(const HexLattice&, std::span<const AircraftState>, int) override {
                return ResolverDecision{{{1, {1, 0}}, {1, {0, 1}}, {2, {-2, 0}}}, {}};
            }
        } r;
        Simulation sim(lat, cfg, r);
        EXPECT_THROW(sim.step(), SimulationFault);
    }
}

TEST(Simulation, ResolverFailureEndsRun) {
    class Refuse final : public Resolver {
    public:
        std::string_view name() const override { return "refuse"; }
        ResolverDecision decide(const HexLattice&, std::span<const AircraftState>, int) override {
            return ResolverDecision::failed("no");
        }
    } r;
    const HexLattice lat(3);
    const auto out = simulate(lat, make_config(3, {{{0, 0}, {3, 0}}}), r);
    EXPECT_EQ(out.termination, Termination::allocation_failure);
    EXPECT_EQ(out.failure_reason, "no");
}

// Two aircraft circling forever: the back-and-forth script never lands.
TEST(Simulation, CyclingEndsInFuelEmergency) {
    const HexLattice lat(3);
    std::vector<AxialCoord> a, b;
    for (int t = 0; t < 40; ++t) {
        a.push_back(t % 2 == 0 ? AxialCoord{1, 0} : AxialCoord{0, 0});
        b.push_back(t % 2 == 0 ? AxialCoord{-2, 0} : AxialCoord{-3, 0});
    }
    ScriptedResolver r({{1, a}, {2, b}});
    Simulation sim(lat, make_config(3, {{{0, 0}, {0, 3}}, {{-3, 0}, {3, 0}}}), r);
    const auto out = sim.run_to_completion();
    EXPECT_EQ(out.termination, Termination::fuel_emergency);
    EXPECT_EQ(out.steps_elapsed, 20);
    for (const auto& s : out.final_states) {
        EXPECT_EQ(s.distance_flown, 20);
        EXPECT_EQ(s.fuel, 0);
        EXPECT_EQ(s.status, AircraftStatus::fuel_emergency);
    }
    EXPECT_TRUE(detect_livelock(sim.history()));
}

TEST(Livelock, Detector) {
    CollectiveState s1{{{0, 0}}, {90}, {AircraftStatus::airborne}};
    CollectiveState s2{{{1, 0}}, {90}, {AircraftStatus::airborne}};
    const std::vector<CollectiveState> progress{s1, s2};
    EXPECT_FALSE(detect_livelock(progress));
    const std::vector<CollectiveState> loop{s1, s2, s1};
    EXPECT_TRUE(detect_livelock(loop));
}

TEST(Simulation, ShrinkingDistanceIsNotLivelock) {
    const HexLattice lat(3);
    GreedyResolver r;
    Simulation sim(lat, make_config(3, {{{-3, 0}, {3, 0}}}), r);
    sim.run_to_completion();
    EXPECT_FALSE(detect_livelock(sim.history()));
}

TEST(Simulation, EventsIndependentOfAircraftOrder) {
    const HexLattice lat(3);
    const auto configs = sample_configs(lat, 4, 200, kDefaultMinPlanLength, 3);
    for (const auto& cfg : configs) {
        GreedyResolver r1, r2;
        auto reversed = cfg;
        std::reverse(reversed.aircraft.begin(), reversed.aircraft.end());
        const auto a = simulate(lat, cfg, r1);
        const auto b = simulate(lat, reversed, r2);
        ASSERT_EQ(a.separation_events.size(), b.separation_events.size());
        for (std::size_t i = 0; i < a.separation_events.size(); ++i) {
            EXPECT_EQ(a.separation_events[i].time, b.separation_events[i].time);
            EXPECT_EQ(a.separation_events[i].resource, b.separation_events[i].resource);
            EXPECT_EQ(a.separation_events[i].aircraft_ids, b.separation_events[i].aircraft_ids);
        }
        EXPECT_EQ(a.termination, b.termination);
    }
}

// The greedy resolver loses separation often; the independent checker must
// agree with the engine on every run, and fuel must track distance.
TEST(Simulation, MonitorAgreesWithIndependentReplay) {
    const HexLattice lat(3);
    std::size_t conflicted = 0;
    for (const auto& cfg : sample_configs(lat, 4, 2000, kDefaultMinPlanLength, 5)) {
        GreedyResolver r;
        const auto out = simulate(lat, cfg, r);
        const bool clean = checks::replay_check(out.trajectories).clean();
        EXPECT_EQ(clean, out.separation_events.empty()) << cfg.config_id;
        conflicted += clean ? 0 : 1;
        for (const auto& s : out.final_states) {
            EXPECT_EQ(s.distance_flown, 20 - s.fuel);
        }
        if (out.termination == Termination::all_landed) {
            for (std::size_t i = 0; i < cfg.aircraft.size(); ++i) {
                EXPECT_GE(out.final_states[i].distance_flown,
                          lat.distance(cfg.aircraft[i].start, cfg.aircraft[i].destination));
            }
        }
    }
    EXPECT_GT(conflicted, 0u);
}

TEST(Simulation, Deterministic) {
    const HexLattice lat(3);
    for (const auto& cfg : sample_configs(lat, 4, 100, kDefaultMinPlanLength, 9)) {
        ImplicitResolver r1, r2;
        const auto a = simulate(lat, cfg, r1);
        const auto b = simulate(lat, cfg, r2);
        EXPECT_EQ(a.trajectories, b.trajectories);
        EXPECT_EQ(a.termination, b.termination);
        EXPECT_EQ(a.steps_elapsed, b.steps_elapsed);
    }
}

TEST(Simulation, StrategicReplayHasNoEvents) {
    const HexLattice lat(3);
    for (const auto& cfg : sample_configs(lat, 4, 200, kDefaultMinPlanLength, 12)) {
        StrategicResolver r;
        const auto out = simulate(lat, cfg, r);
        EXPECT_EQ(out.termination, Termination::all_landed) << out.failure_reason;
        EXPECT_TRUE(out.separation_events.empty());
    }
}

TEST(TerminationNames, RoundTrip) {
    for (auto t : {Termination::all_landed, Termination::loss_of_separation, Termination::fuel_emergency,
                   Termination::allocation_failure, Termination::step_limit}) {
        EXPECT_EQ(termination_from_string(to_string(t)), t);
    }
    EXPECT_FALSE(termination_from_string("bogus").has_value());
}

}  // namespace
}  // namespace hexatm
