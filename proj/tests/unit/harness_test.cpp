#include <gtest/gtest.h>

#include <chrono>
#include <sstream>
#include <thread>

#include "hexatm/checks.hpp"
#include "hexatm/harness.hpp"
#include "hexatm/scenarios.hpp"
#include "support.hpp"

namespace hexatm {
namespace {

using testing::make_config;

// Found by sampling; the implicit resolver circles until every aircraft is dry.
TrafficConfiguration livelock_config() {
    return config_from_json(
        R"({"config_id":24693,"lattice_radius":3,"aircraft":[{"id":1,"start":[-1,3],"dest":[-2,0],"priority":1},)"
        R"({"id":2,"start":[0,3],"dest":[-1,-1],"priority":2},{"id":3,"start":[-2,3],"dest":[3,-1],"priority":3}]})");
}

std::string results_text(std::span<const MetricsRecord> records) {
    std::ostringstream os;
    write_results_csv(os, records);
    return os.str();
}

std::string summary_text(std::span<const MetricsRecord> records) {
    std::ostringstream os;
    write_summary_csv(os, summarize(records));
    return os.str();
}

TEST(Algorithms, Names) {
    for (auto a : {Algorithm::implicit, Algorithm::collaborative, Algorithm::strategic}) {
        EXPECT_EQ(algorithm_from_string(to_string(a)), a);
        EXPECT_EQ(make_resolver(a)->name(), to_string(a));
    }
    EXPECT_FALSE(algorithm_from_string("Implicit"));
}

TEST(MakeRecord, UnimpededSingleAircraft) {
    const auto cfg = make_config(3, {{{-3, 0}, {3, 0}}});
    for (auto alg : {Algorithm::implicit, Algorithm::collaborative, Algorithm::strategic}) {
        BatchOptions opts;
        opts.algorithm = alg;
        const auto recs = run_batch(std::vector{cfg}, opts);
        ASSERT_EQ(recs.size(), 1u);
        EXPECT_EQ(recs[0].termination, Termination::all_landed);
        EXPECT_DOUBLE_EQ(recs[0].mean_inefficiency, 1.0);
        EXPECT_EQ(recs[0].los_flag, 0);
        EXPECT_EQ(recs[0].fuel_emergency_flag, 0);
        EXPECT_EQ(recs[0].steps, 6);
        EXPECT_EQ(recs[0].per_aircraft_deviation, std::vector<double>{0.0});
    }
}

TEST(MakeRecord, FuelEmergencyChargesFuelSpent) {
    const auto cfg = livelock_config();
    BatchOptions opts;
    const auto recs = run_batch(std::vector{cfg}, opts);
    ASSERT_EQ(recs[0].termination, Termination::fuel_emergency);
    EXPECT_EQ(recs[0].fuel_emergency_flag, 1);
    EXPECT_EQ(recs[0].los_flag, 0);
    EXPECT_EQ(recs[0].steps, 20);
    const HexLattice lat(3);
    double sum = 0;
    for (std::size_t i = 0; i < cfg.aircraft.size(); ++i) {
        const double shortest = lat.distance(cfg.aircraft[i].start, cfg.aircraft[i].destination);
        EXPECT_DOUBLE_EQ(recs[0].per_aircraft_inefficiency[i], 20.0 / shortest);
        sum += 20.0 / shortest;
    }
    EXPECT_DOUBLE_EQ(recs[0].mean_inefficiency, sum / 3.0);
    EXPECT_EQ(format_fixed6(recs[0].mean_inefficiency), "4.333333");
}

TEST(MakeRecord, LossOfSeparationChargesRemainingDistance) {
    const HexLattice lat(3);
    const auto cfg = make_config(3, {{{0, 0}, {3, 0}}, {{1, 0}, {-2, 0}}});
    testing::GreedyResolver r;
    const auto out = simulate(lat, cfg, r);
    ASSERT_EQ(out.termination, Termination::loss_of_separation);
    const auto rec = make_record(lat, cfg, out);
    EXPECT_EQ(rec.los_flag, 1);
    // Each flew one edge toward its destination, so flown + remaining is the
    // shortest distance; without the remaining charge the ratio would be 1/3.
    EXPECT_DOUBLE_EQ(rec.per_aircraft_inefficiency[0], (1.0 + 2.0) / 3.0);
    EXPECT_DOUBLE_EQ(rec.per_aircraft_inefficiency[1], (1.0 + 2.0) / 3.0);
    for (double x : rec.per_aircraft_inefficiency) EXPECT_GE(x, 1.0);
}

MetricsRecord synthetic(std::int64_t id, double ineff, Termination t, int radius = 3) {
    MetricsRecord r;
    r.config_id = id;
    r.algorithm = "implicit";
    r.n_aircraft = 3;
    r.lattice_radius = radius;
    r.termination = t;
    r.los_flag = t == Termination::loss_of_separation;
    r.fuel_emergency_flag = t == Termination::fuel_emergency;
    r.mean_inefficiency = ineff;
    r.per_aircraft_deviation = {0, 1, 2};
    return r;
}

TEST(Summarize, AllUnimpeded) {
    std::vector<MetricsRecord> recs;
    for (int i = 0; i < 10; ++i) recs.push_back(synthetic(i, 1.0, Termination::all_landed));
    const auto rows = summarize(recs);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_DOUBLE_EQ(rows[0].mean_inefficiency, 1.0);
    EXPECT_EQ(rows[0].p_los, 0.0);
    EXPECT_EQ(rows[0].p_fuel_emergency, 0.0);
    EXPECT_EQ(rows[0].deviation_totals, (std::vector<double>{0, 10, 20}));
}

TEST(Summarize, Proportions) {
    std::vector<MetricsRecord> recs;
    for (int i = 0; i < 100; ++i) {
        recs.push_back(synthetic(i, 1.0, i < 2 ? Termination::loss_of_separation : Termination::all_landed));
    }
    recs.push_back(synthetic(100, 1.0, Termination::fuel_emergency));
    recs.push_back(synthetic(101, 1.0, Termination::allocation_failure));
    auto faulted = synthetic(102, 9.0, Termination::all_landed);
    faulted.termination.reset();
    faulted.fault = "boom";
    recs.push_back(faulted);

    const auto rows = summarize(recs);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].config_count, 102u);
    EXPECT_DOUBLE_EQ(rows[0].p_los, 2.0 / 102.0);
    EXPECT_DOUBLE_EQ(rows[0].p_fuel_emergency, 1.0 / 102.0);
    EXPECT_EQ(rows[0].allocation_failures, 1u);
    EXPECT_EQ(rows[0].faults, 1u);
    EXPECT_DOUBLE_EQ(rows[0].mean_inefficiency, 1.0);

    std::vector<MetricsRecord> hundred(recs.begin(), recs.begin() + 100);
    EXPECT_DOUBLE_EQ(summarize(hundred)[0].p_los, 0.02);
}

TEST(Summarize, GroupsAndRejections) {
    std::vector<MetricsRecord> recs{synthetic(0, 1.0, Termination::all_landed)};
    auto other = synthetic(1, 2.0, Termination::all_landed);
    other.algorithm = "collaborative";
    recs.push_back(other);
    auto four = synthetic(2, 3.0, Termination::all_landed);
    four.n_aircraft = 4;
    recs.push_back(four);
    const auto rows = summarize(recs);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].algorithm, "collaborative");
    EXPECT_EQ(rows[1].algorithm, "implicit");
    EXPECT_EQ(rows[1].n_aircraft, 3);
    EXPECT_EQ(rows[2].n_aircraft, 4);

    EXPECT_THROW(summarize(std::vector<MetricsRecord>{}), std::invalid_argument);
    std::vector<MetricsRecord> mixed{synthetic(0, 1.0, Termination::all_landed),
                                     synthetic(1, 1.0, Termination::all_landed, 2)};
    EXPECT_THROW(summarize(mixed), std::invalid_argument);
}

TEST(Csv, ExactHeaders) {
    EXPECT_EQ(results_text({}),
              "config_id,algorithm,n_aircraft,termination,mean_inefficiency,los_flag,fuel_emergency_flag,steps,"
              "compute_seconds\n");
    std::ostringstream os;
    write_summary_csv(os, {});
    EXPECT_EQ(os.str(), "algorithm,n_aircraft,config_count,mean_inefficiency,p_fuel_emergency,p_los,mean_compute_seconds\n");
}

TEST(Csv, RowFormatAndReadBack) {
    auto rec = synthetic(7, 1.25, Termination::loss_of_separation);
    rec.steps = 3;
    rec.compute_seconds = 0.0000125;
    const std::vector<MetricsRecord> recs{rec};
    const auto text = results_text(recs);
    EXPECT_NE(text.find("\n7,implicit,3,loss_of_separation,1.250000,1,0,3,0.000013\n"), std::string::npos) << text;

    std::istringstream in(text);
    const auto back = read_results_csv(in);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].config_id, 7);
    EXPECT_EQ(back[0].termination, Termination::loss_of_separation);
    EXPECT_DOUBLE_EQ(back[0].mean_inefficiency, 1.25);
    EXPECT_EQ(back[0].lattice_radius, -1);
    EXPECT_EQ(results_text(back), text);
}

TEST(Csv, ReadErrorsNameTheLine) {
    const std::string header(kResultsHeader);
    auto error_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_results_csv(in);
        } catch (const std::runtime_error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(error_of("").find("empty"), std::string::npos);
    EXPECT_NE(error_of("a,b\n").find("line 1"), std::string::npos);
    EXPECT_NE(error_of(header + "\n1,implicit,3,all_landed,1.0,0,0,4\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of(header + "\n1,implicit,3,all_landed,1.0,0,0,4,0\n1,bogus,3,all_landed,1,0,0,4,0\n").find("line 3"),
              std::string::npos);
    EXPECT_NE(error_of(header + "\n1,implicit,3,landed,1.0,0,0,4,0\n").find("termination"), std::string::npos);
    EXPECT_NE(error_of(header + "\nx,implicit,3,all_landed,1.0,0,0,4,0\n").find("line 2"), std::string::npos);
}

TEST(Equity, LedgerRows) {
    std::vector<MetricsRecord> recs{synthetic(0, 1.0, Termination::all_landed), synthetic(1, 1.0, Termination::all_landed)};
    std::ostringstream os;
    write_equity_csv(os, summarize(recs));
    EXPECT_EQ(os.str(),
              "algorithm,n_aircraft,aircraft_index,total_deviation\n"
              "implicit,3,1,0.000000\nimplicit,3,2,2.000000\nimplicit,3,3,4.000000\n");
}

TEST(RunBatch, OrderedByConfigIdAndParallelismInvariant) {
    const HexLattice lat(3);
    auto configs = sample_configs(lat, 4, 400, kDefaultMinPlanLength, 77);
    std::reverse(configs.begin(), configs.end());
    for (auto alg : {Algorithm::implicit, Algorithm::collaborative, Algorithm::strategic}) {
        BatchOptions opts;
        opts.algorithm = alg;
        opts.record_timing = false;
        const auto one = run_batch(configs, opts);
        opts.parallelism = 8;
        const auto eight = run_batch(configs, opts);
        for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].config_id, static_cast<std::int64_t>(i));
        EXPECT_EQ(results_text(one), results_text(eight));
        EXPECT_EQ(summary_text(one), summary_text(eight));
    }
}

TEST(RunBatch, FaultsAreRecorded) {
    auto bad = make_config(3, {{{0, 0}, {3, 0}}, {{0, 0}, {-3, 0}}}, 1);
    const auto good = make_config(3, {{{-3, 0}, {3, 0}}}, 0);
    BatchOptions opts;
    const auto recs = run_batch(std::vector{bad, good}, opts);
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_FALSE(recs[0].faulted());
    EXPECT_TRUE(recs[1].faulted());
    EXPECT_FALSE(recs[1].fault.empty());
    EXPECT_NE(results_text(recs).find("\n1,implicit,2,fault,"), std::string::npos);
    opts.fuel_capacity = 0;
    EXPECT_THROW(run_batch(std::vector{good}, opts), std::invalid_argument);
}

TEST(RunBatch, DetailTrajectoriesReplayConsistently) {
    const HexLattice lat(3);
    const auto configs = sample_configs(lat, 4, 1000, kDefaultMinPlanLength, 3);
    BatchOptions opts;
    std::vector<ScenarioOutcome> outcomes;
    const auto recs = run_batch(configs, opts, &outcomes);
    ASSERT_EQ(outcomes.size(), recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const bool clean = checks::replay_check(outcomes[i].trajectories).clean();
        EXPECT_EQ(clean, recs[i].los_flag == 0) << recs[i].config_id;
    }
    std::ostringstream os;
    write_detail_jsonl(os, recs, outcomes);
    std::size_t lines = 0;
    for (char c : os.str()) lines += c == '\n';
    EXPECT_EQ(lines, recs.size());
}

// Time outside decide() must not be charged to the resolver.
TEST(Timing, CountsResolverTimeOnly) {
    class Slow final : public Resolver {
    public:
        std::string_view name() const override { return "slow"; }
        ResolverDecision decide(const HexLattice& lat, std::span<const AircraftState> aircraft, int t) override {
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
            return inner.decide(lat, aircraft, t);
        }
        testing::GreedyResolver inner;
    };
    const HexLattice lat(3);
    const auto cfg = make_config(3, {{{-3, 0}, {3, 0}}});
    Slow slow;
    const auto a = simulate(lat, cfg, slow);
    EXPECT_GE(a.resolver_compute_seconds, 6 * 0.002);
    testing::GreedyResolver fast;
    const auto b = simulate(lat, cfg, fast);
    EXPECT_LT(b.resolver_compute_seconds, 0.002);
}

}  // namespace
}  // namespace hexatm
