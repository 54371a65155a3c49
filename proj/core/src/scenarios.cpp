#include "hexatm/scenarios.hpp"

#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace hexatm {

namespace {

using nlohmann::ordered_json;

ordered_json coord_json(AxialCoord c) { return ordered_json::array({c.q, c.r}); }

AxialCoord coord_from_json(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        throw std::invalid_argument("vertex must be a two-integer array [q, r]");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

int int_field(const ordered_json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw std::invalid_argument(std::string("missing or non-integer field '") + key + "'");
    }
    return j.at(key).get<int>();
}

TrafficConfiguration make_config(std::int64_t id, int radius, std::span<const FlightPlan> plans,
                                 std::span<const std::size_t> picks) {
    TrafficConfiguration cfg;
    cfg.config_id = id;
    cfg.lattice_radius = radius;
    for (std::size_t k = 0; k < picks.size(); ++k) {
        const auto& p = plans[picks[k]];
        const int label = static_cast<int>(k) + 1;
        cfg.aircraft.push_back({label, p.start, p.destination, label});
    }
    return cfg;
}

}  // namespace

std::vector<FlightPlan> feasible_plans(const HexLattice& lat, int min_plan_length) {
    std::vector<FlightPlan> out;
    const auto n = static_cast<HexLattice::Index>(lat.vertex_count());
    for (HexLattice::Index s = 0; s < n; ++s) {
        for (HexLattice::Index d = 0; d < n; ++d) {
            if (s != d && lat.distance(s, d) >= min_plan_length) {
                out.push_back({lat.coord(s), lat.coord(d)});
            }
        }
    }
    return out;
}

std::uint64_t count_configs(const HexLattice& lat, int n_aircraft, int min_plan_length) {
    // Ordered tuples with distinct starts: n! * e_n(c), where c_s is the
    // number of destinations available from start s.
    const auto n = static_cast<HexLattice::Index>(lat.vertex_count());
    std::vector<std::uint64_t> elementary(static_cast<std::size_t>(n_aircraft) + 1, 0);
    elementary[0] = 1;
    for (HexLattice::Index s = 0; s < n; ++s) {
        std::uint64_t c = 0;
        for (HexLattice::Index d = 0; d < n; ++d) {
            if (s != d && lat.distance(s, d) >= min_plan_length) {
                ++c;
            }
        }
        for (int k = n_aircraft; k >= 1; --k) {
            elementary[static_cast<std::size_t>(k)] += elementary[static_cast<std::size_t>(k) - 1] * c;
        }
    }
    std::uint64_t total = elementary[static_cast<std::size_t>(n_aircraft)];
    for (int k = 2; k <= n_aircraft; ++k) {
        total *= static_cast<std::uint64_t>(k);
    }
    return total;
}

ConfigEnumerator::ConfigEnumerator(const HexLattice& lat, int n_aircraft, int min_plan_length)
    : radius_(lat.radius()) {
    if (n_aircraft < 1) {
        throw std::invalid_argument("need at least one aircraft");
    }
    if (static_cast<std::size_t>(n_aircraft) > lat.vertex_count()) {
        throw std::invalid_argument("more aircraft than lattice vertices");
    }
    if (min_plan_length < 1) {
        throw std::invalid_argument("minimum plan length must be at least 1");
    }
    plans_ = feasible_plans(lat, min_plan_length);
    cursor_.assign(static_cast<std::size_t>(n_aircraft), 0);
    done_ = plans_.empty();
    if (!done_ && !starts_distinct()) {
        done_ = !advance();
    }
}

bool ConfigEnumerator::starts_distinct() const {
    for (std::size_t i = 0; i < cursor_.size(); ++i) {
        for (std::size_t j = i + 1; j < cursor_.size(); ++j) {
            if (plans_[cursor_[i]].start == plans_[cursor_[j]].start) {
                return false;
            }
        }
    }
    return true;
}

// Moves the odometer to the next tuple with distinct starts.
bool ConfigEnumerator::advance() {
    do {
        std::size_t k = cursor_.size();
        while (k > 0) {
            --k;
            if (++cursor_[k] < plans_.size()) {
                break;
            }
            cursor_[k] = 0;
            if (k == 0) {
                return false;
            }
        }
    } while (!starts_distinct());
    return true;
}

std::optional<TrafficConfiguration> ConfigEnumerator::next() {
    if (done_) {
        return std::nullopt;
    }
    auto cfg = make_config(next_id_++, radius_, plans_, cursor_);
    done_ = !advance();
    return cfg;
}

std::vector<TrafficConfiguration> enumerate_configs(const HexLattice& lat, int n_aircraft, int min_plan_length) {
    std::vector<TrafficConfiguration> out;
    ConfigEnumerator gen(lat, n_aircraft, min_plan_length);
    while (auto cfg = gen.next()) {
        out.push_back(std::move(*cfg));
    }
    return out;
}

std::vector<TrafficConfiguration> sample_configs(const HexLattice& lat, int n_aircraft, std::size_t count,
                                                 int min_plan_length, std::uint64_t seed) {
    if (count < 1) {
        throw std::invalid_argument("sample count must be at least 1");
    }
    if (n_aircraft < 1 || static_cast<std::size_t>(n_aircraft) > lat.vertex_count()) {
        throw std::invalid_argument("aircraft count out of range");
    }
    const auto plans = feasible_plans(lat, min_plan_length);
    if (plans.empty() || count_configs(lat, n_aircraft, min_plan_length) == 0) {
        throw std::invalid_argument("no configuration satisfies the constraints");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, plans.size() - 1);
    std::vector<TrafficConfiguration> out;
    out.reserve(count);
    std::vector<std::size_t> picks(static_cast<std::size_t>(n_aircraft));
    std::set<AxialCoord> starts;
    while (out.size() < count) {
        starts.clear();
        bool distinct = true;
        for (auto& p : picks) {
            p = pick(rng);
            distinct = starts.insert(plans[p].start).second && distinct;
        }
        if (distinct) {
            out.push_back(make_config(static_cast<std::int64_t>(out.size()), lat.radius(), plans, picks));
        }
    }
    return out;
}

std::vector<TrafficConfiguration> default_experiment(const HexLattice& lat, int n_aircraft, int min_plan_length,
                                                     std::size_t sample_count, std::uint64_t seed) {
    if (count_configs(lat, n_aircraft, min_plan_length) <= kExhaustiveLimit) {
        return enumerate_configs(lat, n_aircraft, min_plan_length);
    }
    return sample_configs(lat, n_aircraft, sample_count, min_plan_length, seed);
}

std::string config_to_json(const TrafficConfiguration& cfg) {
    ordered_json j;
    j["config_id"] = cfg.config_id;
    j["lattice_radius"] = cfg.lattice_radius;
    auto aircraft = ordered_json::array();
    for (const auto& a : cfg.aircraft) {
        ordered_json e;
        e["id"] = a.id;
        e["start"] = coord_json(a.start);
        e["dest"] = coord_json(a.destination);
        e["priority"] = a.priority;
        aircraft.push_back(std::move(e));
    }
    j["aircraft"] = std::move(aircraft);
    return j.dump();
}

TrafficConfiguration config_from_json(std::string_view line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("configuration must be a JSON object");
    }
    TrafficConfiguration cfg;
    if (!j.contains("config_id") || !j.at("config_id").is_number_integer()) {
        throw std::invalid_argument("missing or non-integer field 'config_id'");
    }
    cfg.config_id = j.at("config_id").get<std::int64_t>();
    cfg.lattice_radius = int_field(j, "lattice_radius");
    if (!j.contains("aircraft") || !j.at("aircraft").is_array()) {
        throw std::invalid_argument("missing array field 'aircraft'");
    }
    for (const auto& e : j.at("aircraft")) {
        if (!e.is_object() || !e.contains("start") || !e.contains("dest")) {
            throw std::invalid_argument("aircraft entries need id, start, dest and priority");
        }
        cfg.aircraft.push_back(
            {int_field(e, "id"), coord_from_json(e.at("start")), coord_from_json(e.at("dest")), int_field(e, "priority")});
    }
    return cfg;
}

void write_configs(std::ostream& os, std::span<const TrafficConfiguration> configs) {
    for (const auto& c : configs) {
        os << config_to_json(c) << '\n';
    }
}

std::vector<TrafficConfiguration> read_configs(std::istream& is) {
    std::vector<TrafficConfiguration> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(config_from_json(line));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace hexatm
