#include "hexatm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "hexatm/collaborative_resolver.hpp"
#include "hexatm/implicit_resolver.hpp"
#include "hexatm/strategic_resolver.hpp"

namespace hexatm {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::implicit: return "implicit";
        case Algorithm::collaborative: return "collaborative";
        case Algorithm::strategic: return "strategic";
    }
    return "?";
}

std::optional<Algorithm> algorithm_from_string(std::string_view s) {
    for (auto a : {Algorithm::implicit, Algorithm::collaborative, Algorithm::strategic}) {
        if (to_string(a) == s) return a;
    }
    return std::nullopt;
}

std::unique_ptr<Resolver> make_resolver(Algorithm a) {
    switch (a) {
        case Algorithm::implicit: return std::make_unique<ImplicitResolver>();
        case Algorithm::collaborative: return std::make_unique<CollaborativeResolver>();
        case Algorithm::strategic: return std::make_unique<StrategicResolver>();
    }
    throw std::invalid_argument("unknown algorithm");
}

std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

MetricsRecord make_record(const HexLattice& lat, const TrafficConfiguration& cfg, const ScenarioOutcome& outcome) {
    MetricsRecord rec;
    rec.config_id = cfg.config_id;
    rec.algorithm = outcome.algorithm_name;
    rec.n_aircraft = static_cast<int>(cfg.aircraft.size());
    rec.lattice_radius = cfg.lattice_radius;
    rec.termination = outcome.termination;
    rec.los_flag = outcome.termination == Termination::loss_of_separation ? 1 : 0;
    rec.fuel_emergency_flag = outcome.termination == Termination::fuel_emergency ? 1 : 0;
    rec.steps = outcome.steps_elapsed;
    rec.compute_seconds = outcome.resolver_compute_seconds;

    const bool charge_remaining =
        outcome.termination != Termination::all_landed && outcome.termination != Termination::fuel_emergency;
    double sum = 0.0;
    for (const auto& plan : cfg.aircraft) {
        const auto it = std::find_if(outcome.final_states.begin(), outcome.final_states.end(),
                                     [&](const AircraftState& s) { return s.id == plan.id; });
        if (it == outcome.final_states.end()) {
            throw std::logic_error("outcome lacks aircraft " + std::to_string(plan.id));
        }
        const int shortest = lat.distance(plan.start, plan.destination);
        int flown = it->distance_flown;
        if (charge_remaining && it->status != AircraftStatus::landed) {
            flown += lat.distance(it->position, it->destination);
        }
        const double ratio = static_cast<double>(flown) / shortest;
        rec.per_aircraft_inefficiency.push_back(ratio);
        rec.per_aircraft_deviation.push_back(flown - shortest);
        sum += ratio;
    }
    rec.mean_inefficiency = cfg.aircraft.empty() ? 0.0 : sum / static_cast<double>(cfg.aircraft.size());
    return rec;
}

namespace {

MetricsRecord faulted_record(const TrafficConfiguration& cfg, Algorithm algorithm, std::string what) {
    MetricsRecord rec;
    rec.config_id = cfg.config_id;
    rec.algorithm = std::string(to_string(algorithm));
    rec.n_aircraft = static_cast<int>(cfg.aircraft.size());
    rec.lattice_radius = cfg.lattice_radius;
    rec.fault = std::move(what);
    return rec;
}

}  // namespace

std::vector<MetricsRecord> run_batch(std::span<const TrafficConfiguration> configs, const BatchOptions& options,
                                     std::vector<ScenarioOutcome>* outcomes) {
    if (options.fuel_capacity < 1) {
        throw std::invalid_argument("fuel capacity must be positive");
    }
    // Lattices are built up front and shared read-only between workers.
    std::map<int, HexLattice> lattices;
    for (const auto& cfg : configs) {
        if (cfg.lattice_radius >= 0 && !lattices.count(cfg.lattice_radius)) {
            lattices.emplace(cfg.lattice_radius, HexLattice(cfg.lattice_radius));
        }
    }

    std::vector<MetricsRecord> records(configs.size());
    std::vector<ScenarioOutcome> raw(outcomes ? configs.size() : 0);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            const auto& cfg = configs[i];
            try {
                const auto it = lattices.find(cfg.lattice_radius);
                if (it == lattices.end()) {
                    throw InvalidConfiguration("negative lattice radius");
                }
                auto resolver = make_resolver(options.algorithm);
                auto outcome = simulate(it->second, cfg, *resolver, options.fuel_capacity);
                if (!options.record_timing) outcome.resolver_compute_seconds = 0.0;
                records[i] = make_record(it->second, cfg, outcome);
                if (outcomes) raw[i] = std::move(outcome);
            } catch (const std::exception& e) {
                records[i] = faulted_record(cfg, options.algorithm, e.what());
            }
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(options.parallelism, static_cast<unsigned>(configs.size())));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }

    std::vector<std::size_t> order(configs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return records[a].config_id < records[b].config_id; });

    std::vector<MetricsRecord> sorted;
    sorted.reserve(order.size());
    for (auto i : order) sorted.push_back(std::move(records[i]));
    if (outcomes) {
        outcomes->clear();
        outcomes->reserve(order.size());
        for (auto i : order) outcomes->push_back(std::move(raw[i]));
    }
    return sorted;
}

std::vector<SummaryRow> summarize(std::span<const MetricsRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("summarize: no records");
    }
    struct Acc {
        SummaryRow row;
        int radius = -1;
        double ineff = 0.0;
        double secs = 0.0;
        std::size_t fuel = 0;
        std::size_t los = 0;
    };
    std::map<std::pair<std::string, int>, Acc> groups;
    for (const auto& r : records) {
        auto& g = groups[{r.algorithm, r.n_aircraft}];
        g.row.algorithm = r.algorithm;
        g.row.n_aircraft = r.n_aircraft;
        if (r.lattice_radius >= 0) {
            if (g.radius >= 0 && g.radius != r.lattice_radius) {
                throw std::invalid_argument("summarize: group " + r.algorithm + "/" + std::to_string(r.n_aircraft) +
                                            " mixes lattice radii " + std::to_string(g.radius) + " and " +
                                            std::to_string(r.lattice_radius));
            }
            g.radius = r.lattice_radius;
        }
        if (r.faulted()) {
            ++g.row.faults;
            continue;
        }
        ++g.row.config_count;
        g.ineff += r.mean_inefficiency;
        g.secs += r.compute_seconds;
        g.fuel += static_cast<std::size_t>(r.fuel_emergency_flag);
        g.los += static_cast<std::size_t>(r.los_flag);
        if (r.termination == Termination::allocation_failure) ++g.row.allocation_failures;
        if (g.row.deviation_totals.size() < r.per_aircraft_deviation.size()) {
            g.row.deviation_totals.resize(r.per_aircraft_deviation.size(), 0.0);
        }
        for (std::size_t i = 0; i < r.per_aircraft_deviation.size(); ++i) {
            g.row.deviation_totals[i] += r.per_aircraft_deviation[i];
        }
    }

    std::vector<SummaryRow> rows;
    for (auto& [key, g] : groups) {
        if (g.row.config_count > 0) {
            const auto n = static_cast<double>(g.row.config_count);
            g.row.mean_inefficiency = g.ineff / n;
            g.row.mean_compute_seconds = g.secs / n;
            g.row.p_fuel_emergency = static_cast<double>(g.fuel) / n;
            g.row.p_los = static_cast<double>(g.los) / n;
        }
        rows.push_back(std::move(g.row));
    }
    return rows;
}

void write_results_csv(std::ostream& os, std::span<const MetricsRecord> records) {
    os << kResultsHeader << '\n';
    for (const auto& r : records) {
        os << r.config_id << ',' << r.algorithm << ',' << r.n_aircraft << ','
           << (r.termination ? to_string(*r.termination) : std::string_view("fault")) << ','
           << format_fixed6(r.mean_inefficiency) << ',' << r.los_flag << ',' << r.fuel_emergency_flag << ','
           << r.steps << ',' << format_fixed6(r.compute_seconds) << '\n';
    }
}

void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows) {
    os << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        os << r.algorithm << ',' << r.n_aircraft << ',' << r.config_count << ',' << format_fixed6(r.mean_inefficiency)
           << ',' << format_fixed6(r.p_fuel_emergency) << ',' << format_fixed6(r.p_los) << ','
           << format_fixed6(r.mean_compute_seconds) << '\n';
    }
}

void write_equity_csv(std::ostream& os, std::span<const SummaryRow> rows) {
    os << kEquityHeader << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.deviation_totals.size(); ++i) {
            os << r.algorithm << ',' << r.n_aircraft << ',' << i + 1 << ',' << format_fixed6(r.deviation_totals[i])
               << '\n';
        }
    }
}

namespace {

nlohmann::ordered_json coord_json(AxialCoord c) { return nlohmann::ordered_json::array({c.q, c.r}); }

}  // namespace

void write_detail_jsonl(std::ostream& os, std::span<const MetricsRecord> records,
                        std::span<const ScenarioOutcome> outcomes) {
    if (records.size() != outcomes.size()) {
        throw std::invalid_argument("detail: records and outcomes differ in length");
    }
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& rec = records[k];
        const auto& out = outcomes[k];
        nlohmann::ordered_json j;
        j["config_id"] = rec.config_id;
        j["algorithm"] = rec.algorithm;
        j["termination"] = rec.termination ? std::string(to_string(*rec.termination)) : std::string("fault");
        j["steps"] = rec.steps;
        auto aircraft = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < out.aircraft_ids.size(); ++i) {
            nlohmann::ordered_json a;
            a["id"] = out.aircraft_ids[i];
            auto traj = nlohmann::ordered_json::array();
            for (const auto& c : out.trajectories[i]) traj.push_back(coord_json(c));
            a["trajectory"] = std::move(traj);
            const auto st = std::find_if(out.final_states.begin(), out.final_states.end(),
                                         [&](const AircraftState& s) { return s.id == out.aircraft_ids[i]; });
            if (st != out.final_states.end()) {
                a["status"] = std::string(to_string(st->status));
                a["distance_flown"] = st->distance_flown;
            }
            if (i < rec.per_aircraft_inefficiency.size()) {
                a["inefficiency"] = rec.per_aircraft_inefficiency[i];
            }
            aircraft.push_back(std::move(a));
        }
        j["aircraft"] = std::move(aircraft);
        auto events = nlohmann::ordered_json::array();
        for (const auto& e : out.separation_events) {
            nlohmann::ordered_json ev;
            ev["time"] = e.time;
            ev["kind"] = e.kind == ResourceKind::vertex ? "vertex" : "edge";
            if (const auto* v = std::get_if<AxialCoord>(&e.resource)) {
                ev["resource"] = nlohmann::ordered_json::array({coord_json(*v)});
            } else {
                const auto& edge = std::get<EdgeId>(e.resource);
                ev["resource"] = nlohmann::ordered_json::array({coord_json(edge.first()), coord_json(edge.second())});
            }
            ev["aircraft"] = e.aircraft_ids;
            events.push_back(std::move(ev));
        }
        j["events"] = std::move(events);
        if (!rec.fault.empty()) {
            j["fault"] = rec.fault;
        } else if (!out.failure_reason.empty()) {
            j["failure"] = out.failure_reason;
        }
        os << j.dump() << '\n';
    }
}

std::vector<MetricsRecord> read_results_csv(std::istream& is) {
    std::vector<MetricsRecord> out;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) {
        throw std::runtime_error("results line " + std::to_string(lineno) + ": " + why);
    };
    if (!std::getline(is, line)) {
        throw std::runtime_error("results: empty input");
    }
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kResultsHeader) fail("unexpected header");

    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 9) fail("expected 9 fields, got " + std::to_string(f.size()));
        MetricsRecord r;
        try {
            std::size_t used = 0;
            r.config_id = std::stoll(f[0], &used);
            r.algorithm = f[1];
            r.n_aircraft = std::stoi(f[2]);
            if (f[3] != "fault") {
                r.termination = termination_from_string(f[3]);
                if (!r.termination) fail("unknown termination '" + f[3] + "'");
            }
            r.mean_inefficiency = std::stod(f[4]);
            r.los_flag = std::stoi(f[5]);
            r.fuel_emergency_flag = std::stoi(f[6]);
            r.steps = std::stoi(f[7]);
            r.compute_seconds = std::stod(f[8]);
        } catch (const std::logic_error&) {
            fail("malformed number");
        }
        if (!algorithm_from_string(r.algorithm)) fail("unknown algorithm '" + r.algorithm + "'");
        if (r.los_flag < 0 || r.los_flag > 1 || r.fuel_emergency_flag < 0 || r.fuel_emergency_flag > 1) {
            fail("flags must be 0 or 1");
        }
        if (!r.termination) r.fault = "faulted run";
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace hexatm
