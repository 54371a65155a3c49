#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hexatm/simulation.hpp"

namespace hexatm {

enum class Algorithm { implicit, collaborative, strategic };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(std::string_view s);
std::unique_ptr<Resolver> make_resolver(Algorithm a);

inline constexpr std::string_view kResultsHeader =
    "config_id,algorithm,n_aircraft,termination,mean_inefficiency,los_flag,fuel_emergency_flag,steps,compute_seconds";
inline constexpr std::string_view kSummaryHeader =
    "algorithm,n_aircraft,config_count,mean_inefficiency,p_fuel_emergency,p_los,mean_compute_seconds";
inline constexpr std::string_view kEquityHeader = "algorithm,n_aircraft,aircraft_index,total_deviation";

struct MetricsRecord {
    std::int64_t config_id = 0;
    std::string algorithm;
    int n_aircraft = 0;
    int lattice_radius = -1;  // -1 when read back from a results CSV
    std::optional<Termination> termination;  // empty: the run faulted, see `fault`
    std::vector<double> per_aircraft_inefficiency;  // aircraft order of the configuration
    std::vector<double> per_aircraft_deviation;     // edges beyond the shortest distance
    double mean_inefficiency = 0.0;
    int los_flag = 0;
    int fuel_emergency_flag = 0;
    int steps = 0;
    double compute_seconds = 0.0;
    std::string fault;

    bool faulted() const { return !termination.has_value(); }
};

// Aircraft that land use distance flown. After a fuel emergency the stranded
// aircraft use distance flown too (the fuel spent). Runs cut short by loss of
// separation, allocation failure or the step limit charge the remaining
// shortest distance on top, so the ratio never drops below 1.
MetricsRecord make_record(const HexLattice& lat, const TrafficConfiguration& cfg, const ScenarioOutcome& outcome);

struct BatchOptions {
    Algorithm algorithm = Algorithm::implicit;
    int fuel_capacity = kDefaultFuelCapacity;
    unsigned parallelism = 1;
    bool record_timing = true;  // false zeroes compute_seconds for reproducible output
};

/// One record per configuration, ordered by config_id. Faults inside a run
/// are captured in the record. When `outcomes` is non-null it receives the
/// raw outcomes in the same order (faulted runs get an empty outcome).
std::vector<MetricsRecord> run_batch(std::span<const TrafficConfiguration> configs, const BatchOptions& options,
                                     std::vector<ScenarioOutcome>* outcomes = nullptr);

struct SummaryRow {
    std::string algorithm;
    int n_aircraft = 0;
    std::size_t config_count = 0;
    double mean_inefficiency = 0.0;
    double p_fuel_emergency = 0.0;
    double p_los = 0.0;
    double mean_compute_seconds = 0.0;
    std::size_t allocation_failures = 0;
    std::size_t faults = 0;
    std::vector<double> deviation_totals;  // equity ledger, by aircraft index
};

/// Groups by (algorithm, n_aircraft) in lexicographic order. Faulted records
/// are counted in `faults` and otherwise ignored. Throws std::invalid_argument
/// for an empty input or a group mixing lattice radii.
std::vector<SummaryRow> summarize(std::span<const MetricsRecord> records);

void write_results_csv(std::ostream& os, std::span<const MetricsRecord> records);
void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows);
void write_equity_csv(std::ostream& os, std::span<const SummaryRow> rows);
void write_detail_jsonl(std::ostream& os, std::span<const MetricsRecord> records,
                        std::span<const ScenarioOutcome> outcomes);

/// Reads a results CSV back. Throws std::runtime_error naming the line on
/// malformed input.
std::vector<MetricsRecord> read_results_csv(std::istream& is);

std::string format_fixed6(double v);

}  // namespace hexatm
