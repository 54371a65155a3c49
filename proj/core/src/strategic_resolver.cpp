#include "hexatm/strategic_resolver.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace hexatm {

namespace {

using Index = HexLattice::Index;
constexpr std::int16_t kLanded = -1;
constexpr std::size_t kMax = kMaxStrategicAircraft;

std::string label(AxialCoord c) { return std::to_string(c.q) + ":" + std::to_string(c.r); }

// Joint search state. Aircraft with index < k have already moved in the
// current step: pos holds their vertex at t+1 and from their vertex at t.
// The rest still sit at their time-t vertex. kLanded marks aircraft that
// arrived in an earlier step.
struct SearchKey {
    std::array<std::int16_t, kMax> pos{};
    std::array<std::int16_t, kMax> from{};
    std::int16_t t = 0;
    std::int16_t k = 0;

    friend bool operator==(const SearchKey&, const SearchKey&) = default;
};

struct SearchKeyHash {
    std::size_t operator()(const SearchKey& key) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ULL;
        };
        for (std::size_t i = 0; i < kMax; ++i) {
            mix(static_cast<std::uint16_t>(key.pos[i]));
            mix(static_cast<std::uint16_t>(key.from[i]));
        }
        mix(static_cast<std::uint16_t>(key.t));
        mix(static_cast<std::uint16_t>(key.k));
        return static_cast<std::size_t>(h);
    }
};

struct SearchNode {
    SearchKey key;
    int g = 0;
    int h = 0;
    int parent = -1;
};

struct OpenEntry {
    int f;
    int h;
    std::uint64_t seq;
    int node;

    bool operator>(const OpenEntry& o) const {
        if (f != o.f) return f > o.f;
        if (h != o.h) return h > o.h;
        return seq > o.seq;
    }
};

class JointSearch {
public:
    explicit JointSearch(const TimeExpandedModel& model) : model_(model), n_(model.aircraft_count()) {}

    SolveResult run() {
        SolveResult result;
        SearchNode root;
        root.key.pos.fill(kLanded);
        root.key.from.fill(kLanded);
        for (std::size_t i = 0; i < n_; ++i) {
            root.key.pos[i] = static_cast<std::int16_t>(model_.start(i));
            root.h += distance_to_go(i, model_.start(i));
        }
        push(root);

        while (!open_.empty()) {
            const OpenEntry top = open_.top();
            open_.pop();
            const SearchNode node = nodes_[static_cast<std::size_t>(top.node)];
            if (best_g_.at(node.key) < node.g) {
                continue;  // stale entry
            }
            ++result.expanded_nodes;
            if (is_goal(node.key)) {
                result.plan = reconstruct(top.node);
                return result;
            }
            expand(top.node);
        }
        return result;
    }

private:
    int distance_to_go(std::size_t i, Index v) const {
        return model_.lattice().distance(v, model_.destination(i));
    }

    bool is_goal(const SearchKey& key) const {
        for (std::size_t i = 0; i < n_; ++i) {
            if (key.pos[i] != kLanded) return false;
        }
        return true;
    }

    // Skip grounded aircraft; close the time step once every aircraft moved.
    void normalize(SearchKey& key) const {
        while (true) {
            while (static_cast<std::size_t>(key.k) < n_ && key.from[key.k] == kLanded && key.pos[key.k] == kLanded) {
                ++key.k;
            }
            if (static_cast<std::size_t>(key.k) < n_ || is_goal(key)) {
                return;
            }
            ++key.t;
            key.k = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                key.from[i] = kLanded;
                if (key.pos[i] != kLanded && key.pos[i] == model_.destination(i)) {
                    key.pos[i] = kLanded;
                }
            }
            if (is_goal(key)) {
                return;
            }
        }
    }

    void push(SearchNode node) {
        normalize(node.key);
        auto [it, inserted] = best_g_.try_emplace(node.key, node.g);
        if (!inserted) {
            if (it->second <= node.g) return;
            it->second = node.g;
        }
        nodes_.push_back(node);
        open_.push({node.g + node.h, node.h, seq_++, static_cast<int>(nodes_.size() - 1)});
    }

    void expand(int idx) {
        const SearchNode parent = nodes_[static_cast<std::size_t>(idx)];
        const auto j = static_cast<std::size_t>(parent.key.k);
        const Index u = parent.key.pos[j];
        const int t = parent.key.t;
        const auto& lat = model_.lattice();
        for (const Index w : lat.neighbors(u)) {
            if (!model_.in_window(j, t + 1, w)) continue;
            bool clash = false;
            for (std::size_t i = 0; i < j && !clash; ++i) {
                if (parent.key.from[i] == kLanded) continue;
                clash = parent.key.pos[i] == w || (parent.key.from[i] == w && parent.key.pos[i] == u);
            }
            if (clash) continue;
            SearchNode child = parent;
            child.parent = idx;
            child.key.from[j] = static_cast<std::int16_t>(u);
            child.key.pos[j] = static_cast<std::int16_t>(w);
            child.key.k = static_cast<std::int16_t>(j + 1);
            child.g += 1;
            child.h += distance_to_go(j, w) - distance_to_go(j, u);
            push(child);
        }
    }

    JointPlan reconstruct(int goal) const {
        std::vector<const SearchKey*> steps;  // step boundaries, latest first
        for (int i = goal; i >= 0; i = nodes_[static_cast<std::size_t>(i)].parent) {
            const auto& node = nodes_[static_cast<std::size_t>(i)];
            // The first node of each time step; k may already skip grounded aircraft.
            if (node.parent < 0 || nodes_[static_cast<std::size_t>(node.parent)].key.t != node.key.t) {
                steps.push_back(&node.key);
            }
        }
        std::reverse(steps.begin(), steps.end());

        JointPlan plan;
        plan.objective = nodes_[static_cast<std::size_t>(goal)].g;
        const auto& lat = model_.lattice();
        for (std::size_t i = 0; i < n_; ++i) {
            plan.aircraft_ids.push_back(model_.aircraft_id(i));
            std::vector<AxialCoord> path;
            for (const SearchKey* key : steps) {
                if (key->pos[i] == kLanded) break;
                path.push_back(lat.coord(key->pos[i]));
            }
            path.push_back(lat.coord(model_.destination(i)));
            plan.arrival_times.push_back(static_cast<int>(path.size()) - 1);
            plan.paths.push_back(std::move(path));
        }
        return plan;
    }

    const TimeExpandedModel& model_;
    std::size_t n_;
    std::vector<SearchNode> nodes_;
    std::unordered_map<SearchKey, int, SearchKeyHash> best_g_;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open_;
    std::uint64_t seq_ = 0;
};

}  // namespace

std::span<const Index> TimeExpandedModel::window(std::size_t i, int t) const {
    if (t < 0 || t > horizon_) return {};
    return windows_[i][static_cast<std::size_t>(t)];
}

bool TimeExpandedModel::in_window(std::size_t i, int t, Index v) const {
    if (t < 0 || t > horizon_) return false;
    return member_[i][static_cast<std::size_t>(t)][static_cast<std::size_t>(v)] != 0;
}

std::size_t TimeExpandedModel::occupancy_variable_count() const {
    std::size_t total = 0;
    for (const auto& per_aircraft : windows_) {
        for (const auto& w : per_aircraft) total += w.size();
    }
    return total;
}

std::size_t TimeExpandedModel::arc_variable_count() const {
    std::size_t total = 0;
    for (std::size_t i = 0; i < aircraft_count(); ++i) {
        for (int t = 0; t < horizon_; ++t) {
            for (const Index u : window(i, t)) {
                if (u == dests_[i]) continue;
                for (const Index w : lattice_.neighbors(u)) {
                    if (in_window(i, t + 1, w)) ++total;
                }
            }
        }
    }
    return total;
}

void TimeExpandedModel::write_constraints(std::ostream& os) const {
    const auto& lat = lattice_;
    auto x = [&](std::size_t i, Index v, int t) {
        return "x[" + std::to_string(ids_[i]) + "," + label(lat.coord(v)) + "," + std::to_string(t) + "]";
    };
    auto y = [&](std::size_t i, Index u, Index w, int t) {
        return "y[" + std::to_string(ids_[i]) + "," + label(lat.coord(u)) + ">" + label(lat.coord(w)) + "," +
               std::to_string(t) + "]";
    };
    auto join = [](const std::vector<std::string>& terms) {
        std::string s;
        for (const auto& term : terms) {
            if (!s.empty()) s += " + ";
            s += term;
        }
        return s;
    };

    os << "# aircraft " << aircraft_count() << " horizon " << horizon_ << " vertices " << lat.vertex_count()
       << " x_vars " << occupancy_variable_count() << " y_vars " << arc_variable_count() << '\n';

    std::vector<std::string> objective;
    for (std::size_t i = 0; i < aircraft_count(); ++i) {
        for (int t = 1; t <= horizon_; ++t) {
            if (in_window(i, t, dests_[i])) objective.push_back(std::to_string(t) + " " + x(i, dests_[i], t));
        }
    }
    os << "minimize: " << join(objective) << '\n';

    for (std::size_t i = 0; i < aircraft_count(); ++i) {
        const auto id = std::to_string(ids_[i]);
        os << "init[" << id << "]: " << x(i, starts_[i], 0) << " = 1\n";
        std::vector<std::string> arrivals;
        for (int t = 1; t <= horizon_; ++t) {
            if (in_window(i, t, dests_[i])) arrivals.push_back(x(i, dests_[i], t));
        }
        os << "arrive[" << id << "]: " << join(arrivals) << " = 1\n";
        for (int t = 0; t <= horizon_; ++t) {
            for (const Index v : window(i, t)) {
                const std::string tag = id + "," + label(lat.coord(v)) + "," + std::to_string(t);
                if (v != dests_[i] && t < horizon_) {
                    std::vector<std::string> out;
                    for (const Index w : lat.neighbors(v)) {
                        if (in_window(i, t + 1, w)) out.push_back(y(i, v, w, t));
                    }
                    os << "out[" << tag << "]: " << (out.empty() ? "0" : join(out)) << " - " << x(i, v, t)
                       << " = 0\n";
                }
                if (t > 0) {
                    std::vector<std::string> in;
                    for (const Index u : lat.neighbors(v)) {
                        if (u != dests_[i] && in_window(i, t - 1, u)) in.push_back(y(i, u, v, t - 1));
                    }
                    os << "in[" << tag << "]: " << (in.empty() ? "0" : join(in)) << " - " << x(i, v, t) << " = 0\n";
                }
            }
        }
    }

    for (int t = 0; t <= horizon_; ++t) {
        for (Index v = 0; v < static_cast<Index>(lat.vertex_count()); ++v) {
            std::vector<std::string> terms;
            for (std::size_t i = 0; i < aircraft_count(); ++i) {
                if (in_window(i, t, v)) terms.push_back(x(i, v, t));
            }
            if (terms.size() > 1) {
                os << "vcap[" << label(lat.coord(v)) << "," << t << "]: " << join(terms) << " <= 1\n";
            }
        }
    }
    for (int t = 0; t < horizon_; ++t) {
        for (Index u = 0; u < static_cast<Index>(lat.vertex_count()); ++u) {
            for (const Index w : lat.neighbors(u)) {
                if (w < u) continue;
                std::vector<std::string> terms;
                for (std::size_t i = 0; i < aircraft_count(); ++i) {
                    if (u != dests_[i] && in_window(i, t, u) && in_window(i, t + 1, w)) terms.push_back(y(i, u, w, t));
                    if (w != dests_[i] && in_window(i, t, w) && in_window(i, t + 1, u)) terms.push_back(y(i, w, u, t));
                }
                if (terms.size() > 1) {
                    os << "ecap[" << label(lat.coord(u)) << "|" << label(lat.coord(w)) << "," << t
                       << "]: " << join(terms) << " <= 1\n";
                }
            }
        }
    }
}

TimeExpandedModel build_model(const HexLattice& lat, const TrafficConfiguration& cfg, int horizon) {
    validate_configuration(lat, cfg);
    if (cfg.aircraft.size() > kMaxStrategicAircraft) {
        throw std::invalid_argument("strategic model supports at most " + std::to_string(kMaxStrategicAircraft) +
                                    " aircraft");
    }
    TimeExpandedModel model(lat);
    model.horizon_ = horizon;
    for (const auto& a : cfg.aircraft) {
        const Index s = lat.index_of(a.start);
        const Index d = lat.index_of(a.destination);
        if (lat.distance(s, d) > horizon) {
            throw std::invalid_argument("horizon " + std::to_string(horizon) + " is shorter than the plan of aircraft " +
                                        std::to_string(a.id));
        }
        model.ids_.push_back(a.id);
        model.starts_.push_back(s);
        model.dests_.push_back(d);
    }

    const auto n_vertices = static_cast<Index>(lat.vertex_count());
    for (std::size_t i = 0; i < model.ids_.size(); ++i) {
        std::vector<std::vector<Index>> per_time(static_cast<std::size_t>(horizon) + 1);
        std::vector<std::vector<char>> member(static_cast<std::size_t>(horizon) + 1,
                                              std::vector<char>(static_cast<std::size_t>(n_vertices), 0));
        for (int t = 0; t <= horizon; ++t) {
            for (Index v = 0; v < n_vertices; ++v) {
                const bool reachable = lat.distance(model.starts_[i], v) <= t;
                const bool can_finish = t + lat.distance(v, model.dests_[i]) <= horizon;
                if (reachable && can_finish) {
                    per_time[static_cast<std::size_t>(t)].push_back(v);
                    member[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)] = 1;
                }
            }
        }
        model.windows_.push_back(std::move(per_time));
        model.member_.push_back(std::move(member));
    }
    return model;
}

SolveResult solve_exact(const TimeExpandedModel& model) { return JointSearch(model).run(); }

std::optional<std::string> StrategicResolver::prepare(const HexLattice& lat, const TrafficConfiguration& cfg,
                                                      int fuel_capacity) {
    plan_.reset();
    try {
        const auto model = build_model(lat, cfg, std::max(fuel_capacity, min_horizon_));
        auto result = solve_exact(model);
        if (!result.plan) {
            return "no separation-preserving plan within horizon " + std::to_string(model.horizon());
        }
        plan_ = std::move(result.plan);
    } catch (const std::invalid_argument& e) {
        return std::string(e.what());
    }
    return std::nullopt;
}

ResolverDecision StrategicResolver::decide(const HexLattice&, std::span<const AircraftState> aircraft, int time) {
    if (!plan_) {
        return ResolverDecision::failed("strategic plan unavailable");
    }
    ResolverDecision d;
    for (const auto& a : aircraft) {
        const auto it = std::find(plan_->aircraft_ids.begin(), plan_->aircraft_ids.end(), a.id);
        if (it == plan_->aircraft_ids.end()) {
            return ResolverDecision::failed("aircraft " + std::to_string(a.id) + " is not in the plan");
        }
        const auto& path = plan_->paths[static_cast<std::size_t>(it - plan_->aircraft_ids.begin())];
        const auto t = static_cast<std::size_t>(time);
        if (t + 1 >= path.size() || path[t] != a.position) {
            return ResolverDecision::failed("aircraft " + std::to_string(a.id) + " deviated from the plan");
        }
        d.moves.push_back({a.id, path[t + 1]});
    }
    return d;
}

}  // namespace hexatm
