#include "hexatm/checks.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "hexatm/scenarios.hpp"

namespace hexatm::checks {

namespace {

int axial_distance(AxialCoord a, AxialCoord b) {
    const int dq = a.q - b.q;
    const int dr = a.r - b.r;
    return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2;
}

// Plain square-array view of a hexagon of the given radius.
class Grid {
public:
    static constexpr std::array<std::array<int, 2>, 6> kSteps{{{0, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}}};

    explicit Grid(int radius) : radius_(radius), side_(2 * radius + 1) {}

    bool inside(AxialCoord c) const {
        return std::abs(c.q) <= radius_ && std::abs(c.r) <= radius_ && std::abs(c.q + c.r) <= radius_;
    }
    int cell(AxialCoord c) const { return (c.q + radius_) * side_ + (c.r + radius_); }
    AxialCoord coord(int cell) const { return {cell / side_ - radius_, cell % side_ - radius_}; }
    int cells() const { return side_ * side_; }

    std::vector<int> around(int cell) const {
        std::vector<int> out;
        const AxialCoord c = coord(cell);
        for (const auto& s : kSteps) {
            const AxialCoord n{c.q + s[0], c.r + s[1]};
            if (inside(n)) out.push_back(this->cell(n));
        }
        return out;
    }

    std::vector<int> bfs_from(int src) const {
        std::vector<int> d(static_cast<std::size_t>(cells()), -1);
        std::queue<int> q;
        d[static_cast<std::size_t>(src)] = 0;
        q.push(src);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int w : around(u)) {
                if (d[static_cast<std::size_t>(w)] < 0) {
                    d[static_cast<std::size_t>(w)] = d[static_cast<std::size_t>(u)] + 1;
                    q.push(w);
                }
            }
        }
        return d;
    }

private:
    int radius_;
    int side_;
};

class JointEnumeration {
public:
    JointEnumeration(const TrafficConfiguration& cfg, int horizon, std::uint64_t budget)
        : grid_(cfg.lattice_radius), horizon_(horizon), budget_(budget) {
        for (const auto& a : cfg.aircraft) {
            start_.push_back(grid_.cell(a.start));
            dest_.push_back(grid_.cell(a.destination));
            togo_.push_back(grid_.bfs_from(grid_.cell(a.destination)));
        }
        nbrs_.resize(static_cast<std::size_t>(grid_.cells()));
        for (int c = 0; c < grid_.cells(); ++c) {
            if (grid_.inside(grid_.coord(c))) nbrs_[static_cast<std::size_t>(c)] = grid_.around(c);
        }
    }

    OracleResult run() {
        OracleResult res;
        const std::size_t n = start_.size();
        int lower = 0;
        for (std::size_t i = 0; i < n; ++i) lower += togo(i, start_[i]);
        const int upper = static_cast<int>(n) * horizon_;
        for (int bound = lower; bound <= upper && !exhausted_; ++bound) {
            bound_ = bound;
            std::vector<int> pos = start_;
            if (step(pos, 0, 0)) {
                res.objective = found_;
                break;
            }
        }
        res.budget_exhausted = exhausted_;
        res.nodes = nodes_;
        return res;
    }

private:
    int togo(std::size_t i, int cell) const { return togo_[i][static_cast<std::size_t>(cell)]; }

    bool step(const std::vector<int>& pos, int t, int g) {
        if (std::all_of(pos.begin(), pos.end(), [](int p) { return p < 0; })) {
            found_ = g;
            return true;
        }
        if (t >= horizon_) return false;
        std::vector<int> next(pos.size(), -1);
        int h = 0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (pos[i] >= 0) h += togo(i, pos[i]);
        }
        return assign(pos, next, 0, t, g, h);
    }

    // h: remaining distance with aircraft < j counted at their next cell.
    bool assign(const std::vector<int>& pos, std::vector<int>& next, std::size_t j, int t, int g, int h) {
        if (exhausted_) return false;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return false;
        }
        if (j == pos.size()) {
            std::vector<int> after = next;
            for (std::size_t i = 0; i < after.size(); ++i) {
                if (after[i] == dest_[i]) after[i] = -1;
            }
            return step(after, t + 1, g);
        }
        if (pos[j] < 0) {
            next[j] = -1;
            return assign(pos, next, j + 1, t, g, h);
        }
        for (int w : nbrs_[static_cast<std::size_t>(pos[j])]) {
            if (t + 1 + togo(j, w) > horizon_) continue;
            const int h2 = h - togo(j, pos[j]) + togo(j, w);
            if (g + 1 + h2 > bound_) continue;
            bool clash = false;
            for (std::size_t i = 0; i < j && !clash; ++i) {
                if (pos[i] < 0) continue;
                clash = next[i] == w || (next[i] == pos[j] && pos[i] == w);
            }
            if (clash) continue;
            next[j] = w;
            if (assign(pos, next, j + 1, t, g + 1, h2)) return true;
        }
        next[j] = -1;
        return false;
    }

    Grid grid_;
    int horizon_;
    std::uint64_t budget_;
    std::vector<int> start_;
    std::vector<int> dest_;
    std::vector<std::vector<int>> togo_;
    std::vector<std::vector<int>> nbrs_;
    int bound_ = 0;
    int found_ = 0;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
};

std::string describe(const TrafficConfiguration& cfg) {
    std::ostringstream os;
    os << "config " << cfg.config_id << " [";
    for (const auto& a : cfg.aircraft) os << ' ' << a.id << ':' << a.start << "->" << a.destination;
    os << " ]";
    return os.str();
}

}  // namespace

ReplayVerdict replay_check(std::span<const std::vector<AxialCoord>> trajectories) {
    std::size_t horizon = 0;
    for (const auto& t : trajectories) horizon = std::max(horizon, t.size());
    ReplayVerdict v;
    for (std::size_t t = 0; t < horizon; ++t) {
        std::map<AxialCoord, int> at;
        std::map<std::pair<AxialCoord, AxialCoord>, int> on;
        for (const auto& traj : trajectories) {
            if (t < traj.size()) ++at[traj[t]];
            if (t + 1 < traj.size()) ++on[std::minmax(traj[t], traj[t + 1])];
        }
        for (const auto& [c, k] : at) v.vertex_conflicts += k > 1 ? 1 : 0;
        for (const auto& [e, k] : on) v.edge_conflicts += k > 1 ? 1 : 0;
    }
    return v;
}

OracleResult brute_force_optimum(const TrafficConfiguration& cfg, int horizon, std::uint64_t node_budget) {
    return JointEnumeration(cfg, horizon, node_budget).run();
}

std::optional<std::string> plan_defect(const TrafficConfiguration& cfg, const JointPlan& plan, int horizon) {
    const std::size_t n = cfg.aircraft.size();
    if (plan.paths.size() != n || plan.aircraft_ids.size() != n || plan.arrival_times.size() != n) {
        return "plan covers the wrong number of aircraft";
    }
    const Grid grid(cfg.lattice_radius);
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = cfg.aircraft[i];
        const auto& path = plan.paths[i];
        const std::string who = "aircraft " + std::to_string(a.id);
        if (plan.aircraft_ids[i] != a.id) return "plan aircraft order differs at " + who;
        if (path.empty() || path.front() != a.start || path.back() != a.destination) return who + " endpoints wrong";
        if (static_cast<int>(path.size()) - 1 != plan.arrival_times[i]) return who + " arrival time mismatch";
        if (plan.arrival_times[i] > horizon) return who + " arrives after the horizon";
        for (std::size_t t = 0; t + 1 < path.size(); ++t) {
            if (!grid.inside(path[t + 1]) || axial_distance(path[t], path[t + 1]) != 1) {
                return who + " makes an illegal move at t=" + std::to_string(t);
            }
            if (path[t] == a.destination) return who + " passes its destination without landing";
        }
        total += plan.arrival_times[i];
    }
    if (total != plan.objective) return "objective is not the sum of arrival times";
    const auto verdict = replay_check(plan.paths);
    if (!verdict.clean()) {
        return "plan loses separation (" + std::to_string(verdict.vertex_conflicts) + " vertex, " +
               std::to_string(verdict.edge_conflicts) + " edge)";
    }
    return std::nullopt;
}

SuiteReport verify_pairwise(int radius, int min_plan_length, int fuel, unsigned parallelism) {
    const HexLattice lat(radius);
    const auto configs = enumerate_configs(lat, 2, min_plan_length);
    BatchOptions opts;
    opts.algorithm = Algorithm::implicit;
    opts.fuel_capacity = fuel;
    opts.parallelism = parallelism;
    std::vector<ScenarioOutcome> outcomes;
    const auto records = run_batch(configs, opts, &outcomes);

    std::size_t landed = 0, los = 0, fuel_em = 0, other = 0, replay_mismatch = 0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        if (r.termination == Termination::all_landed) {
            ++landed;
        } else if (r.termination == Termination::loss_of_separation) {
            ++los;
        } else if (r.termination == Termination::fuel_emergency) {
            ++fuel_em;
        } else {
            ++other;
        }
        const bool replay_clean = replay_check(outcomes[k].trajectories).clean();
        if (replay_clean == (r.los_flag == 1)) ++replay_mismatch;
    }
    SuiteReport rep;
    rep.passed = !records.empty() && landed == records.size() && replay_mismatch == 0;
    std::ostringstream os;
    os << "pairwise radius " << radius << ": " << records.size() << " configs, all_landed " << landed << ", los "
       << los << ", fuel_emergency " << fuel_em << ", other " << other << ", replay mismatches " << replay_mismatch;
    rep.summary = os.str();
    return rep;
}

SuiteReport verify_oracle(int radius, int min_plan_length, std::size_t sampled_triples, std::uint64_t seed,
                          int fuel) {
    const HexLattice lat(radius);
    auto configs = enumerate_configs(lat, 2, min_plan_length);
    const std::size_t pairs = configs.size();
    if (sampled_triples > 0) {
        auto triples = sample_configs(lat, 3, sampled_triples, min_plan_length, seed);
        configs.insert(configs.end(), triples.begin(), triples.end());
    }

    std::size_t agree = 0, infeasible_both = 0;
    std::vector<std::string> problems;
    for (const auto& cfg : configs) {
        const auto model = build_model(lat, cfg, fuel);
        const auto solved = solve_exact(model);
        const auto oracle = brute_force_optimum(cfg, fuel);
        std::optional<std::string> defect;
        if (oracle.budget_exhausted) {
            defect = "oracle budget exhausted";
        } else if (solved.plan.has_value() != oracle.objective.has_value()) {
            defect = "feasibility disagrees with the oracle";
        } else if (!solved.plan) {
            ++infeasible_both;
        } else if (solved.plan->objective != *oracle.objective) {
            defect = "objective " + std::to_string(solved.plan->objective) + " vs oracle " +
                     std::to_string(*oracle.objective);
        } else if (auto d = plan_defect(cfg, *solved.plan, fuel)) {
            defect = d;
        } else {
            StrategicResolver resolver;
            const auto out = simulate(lat, cfg, resolver, fuel);
            if (out.termination != Termination::all_landed || !out.separation_events.empty()) {
                defect = "replay ended with " + std::string(to_string(out.termination));
            } else if (out.trajectories != solved.plan->paths) {
                defect = "replayed trajectories differ from the plan";
            } else {
                ++agree;
            }
        }
        if (defect && problems.size() < 5) problems.push_back(describe(cfg) + ": " + *defect);
        if (defect && problems.size() >= 5) break;
    }

    SuiteReport rep;
    rep.passed = problems.empty() && agree + infeasible_both == configs.size();
    std::ostringstream os;
    os << "oracle radius " << radius << ": " << pairs << " pairs + " << configs.size() - pairs << " triples, "
       << agree << " optimal and replayed clean, " << infeasible_both << " infeasible for both";
    for (const auto& p : problems) os << "; " << p;
    rep.summary = os.str();
    return rep;
}

SuiteReport verify_determinism(std::span<const TrafficConfiguration> configs, Algorithm algorithm,
                               std::span<const unsigned> parallelism_degrees, int fuel) {
    SuiteReport rep;
    if (configs.empty() || parallelism_degrees.empty()) {
        rep.summary = "determinism: nothing to compare";
        return rep;
    }
    std::vector<std::string> results, summaries;
    for (const unsigned p : parallelism_degrees) {
        BatchOptions opts;
        opts.algorithm = algorithm;
        opts.fuel_capacity = fuel;
        opts.parallelism = p;
        opts.record_timing = false;
        const auto records = run_batch(configs, opts);
        std::ostringstream r, s;
        write_results_csv(r, records);
        write_summary_csv(s, summarize(records));
        results.push_back(r.str());
        summaries.push_back(s.str());
    }
    rep.passed = std::all_of(results.begin(), results.end(), [&](const auto& x) { return x == results.front(); }) &&
                 std::all_of(summaries.begin(), summaries.end(), [&](const auto& x) { return x == summaries.front(); });
    std::ostringstream os;
    os << "determinism " << to_string(algorithm) << ": " << configs.size() << " configs at parallelism";
    for (const unsigned p : parallelism_degrees) os << ' ' << p;
    os << (rep.passed ? ", identical output" : ", OUTPUT DIFFERS");
    rep.summary = os.str();
    return rep;
}

}  // namespace hexatm::checks
