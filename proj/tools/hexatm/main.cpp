// hexatm: generate traffic configurations, run resolvers over them, and
// summarize the results.

#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hexatm/checks.hpp"
#include "hexatm/harness.hpp"
#include "hexatm/scenarios.hpp"

namespace {

using namespace hexatm;

// "-" means stdout / stdin.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void close(const std::string& path) {
        stream().flush();
        if (!stream()) throw std::runtime_error("write to " + path + " failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<TrafficConfiguration> load_configs(const std::string& path) {
    if (path == "-") return read_configs(std::cin);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return read_configs(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

struct GenArgs {
    int radius = 3;
    int aircraft = 3;
    int min_dist = kDefaultMinPlanLength;
    std::string mode = "sample";
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::string out = "-";
};

int cmd_gen(const GenArgs& a) {
    const HexLattice lat(a.radius);
    Output out(a.out);
    if (a.mode == "enumerate") {
        ConfigEnumerator gen(lat, a.aircraft, a.min_dist);
        while (auto cfg = gen.next()) out.stream() << config_to_json(*cfg) << '\n';
    } else {
        if (a.count == 0) throw std::invalid_argument("--count is required with --mode sample");
        const auto configs = sample_configs(lat, a.aircraft, a.count, a.min_dist, a.seed);
        write_configs(out.stream(), configs);
    }
    out.close(a.out);
    return 0;
}

struct RunArgs {
    std::string configs;
    std::string algorithm;
    int fuel = kDefaultFuelCapacity;
    unsigned parallelism = 1;
    std::string out = "-";
    std::string detail;
    std::string summary;
    std::string equity;
    bool no_timing = false;
};

int cmd_run(const RunArgs& a) {
    const auto configs = load_configs(a.configs);
    BatchOptions opts;
    opts.algorithm = *algorithm_from_string(a.algorithm);
    opts.fuel_capacity = a.fuel;
    opts.parallelism = a.parallelism;
    opts.record_timing = !a.no_timing;
    std::vector<ScenarioOutcome> outcomes;
    const auto records = run_batch(configs, opts, a.detail.empty() ? nullptr : &outcomes);

    Output out(a.out);
    write_results_csv(out.stream(), records);
    out.close(a.out);
    if (!a.detail.empty()) {
        Output d(a.detail);
        write_detail_jsonl(d.stream(), records, outcomes);
        d.close(a.detail);
    }
    if (!a.summary.empty() || !a.equity.empty()) {
        const auto rows = records.empty() ? std::vector<SummaryRow>{} : summarize(records);
        if (!a.summary.empty()) {
            Output s(a.summary);
            write_summary_csv(s.stream(), rows);
            s.close(a.summary);
        }
        if (!a.equity.empty()) {
            Output e(a.equity);
            write_equity_csv(e.stream(), rows);
            e.close(a.equity);
        }
    }

    std::size_t faults = 0;
    for (const auto& r : records) {
        if (r.faulted()) {
            ++faults;
            std::cerr << "hexatm: config " << r.config_id << " faulted: " << r.fault << '\n';
        }
    }
    return faults == 0 ? 0 : 3;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_path) {
    std::vector<MetricsRecord> all;
    for (const auto& path : inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path);
        try {
            auto recs = read_results_csv(in);
            all.insert(all.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ": " + e.what());
        }
    }
    Output out(out_path);
    write_summary_csv(out.stream(), summarize(all));
    out.close(out_path);
    return 0;
}

struct VerifyArgs {
    std::string suite;
    int radius = 0;  // 0: suite default
    unsigned parallelism = 1;
    std::string configs;
};

int cmd_verify(const VerifyArgs& a) {
    checks::SuiteReport rep;
    if (a.suite == "pairwise") {
        rep = checks::verify_pairwise(a.radius > 0 ? a.radius : 3, kDefaultMinPlanLength, kDefaultFuelCapacity,
                                      a.parallelism);
    } else if (a.suite == "oracle") {
        rep = checks::verify_oracle(a.radius > 0 ? a.radius : 2);
    } else {
        std::vector<TrafficConfiguration> configs;
        if (!a.configs.empty()) {
            configs = load_configs(a.configs);
        } else {
            configs = sample_configs(HexLattice(a.radius > 0 ? a.radius : 3), 4, 2000, kDefaultMinPlanLength, 7);
        }
        const std::vector<unsigned> degrees{1, 2, std::max(4u, a.parallelism)};
        rep.passed = true;
        for (auto alg : {Algorithm::implicit, Algorithm::collaborative, Algorithm::strategic}) {
            const auto r = checks::verify_determinism(configs, alg, degrees);
            rep.passed = rep.passed && r.passed;
            rep.summary += (rep.summary.empty() ? "" : "\n") + r.summary;
        }
    }
    std::cout << rep.summary << '\n' << (rep.passed ? "PASS" : "FAIL") << '\n';
    return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hexagonal-lattice traffic deconfliction experiments"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Write traffic configurations as JSONL");
    g->add_option("--radius", gen.radius, "Lattice radius")->check(CLI::NonNegativeNumber)->capture_default_str();
    g->add_option("--aircraft", gen.aircraft, "Aircraft per configuration")->check(CLI::PositiveNumber)->capture_default_str();
    g->add_option("--min-dist", gen.min_dist, "Minimum plan length in edges")->check(CLI::PositiveNumber)->capture_default_str();
    g->add_option("--mode", gen.mode, "enumerate or sample")->check(CLI::IsMember({"enumerate", "sample"}))->capture_default_str();
    g->add_option("--count", gen.count, "Number of samples");
    g->add_option("--seed", gen.seed, "Sampling seed")->capture_default_str();
    g->add_option("--out", gen.out, "Output path, - for stdout")->capture_default_str();

    RunArgs run;
    auto* r = app.add_subcommand("run", "Run one resolver over a configuration file");
    r->add_option("--configs", run.configs, "Configuration JSONL, - for stdin")->required();
    r->add_option("--algorithm", run.algorithm, "implicit, collaborative or strategic")
        ->required()
        ->check(CLI::IsMember({"implicit", "collaborative", "strategic"}));
    r->add_option("--fuel", run.fuel, "Fuel capacity in edges")->check(CLI::PositiveNumber)->capture_default_str();
    r->add_option("--parallelism", run.parallelism, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    r->add_option("--out", run.out, "Results CSV path, - for stdout")->capture_default_str();
    r->add_option("--detail", run.detail, "Also write per-run trajectories and events as JSONL");
    r->add_option("--summary", run.summary, "Also write the summary CSV");
    r->add_option("--equity", run.equity, "Also write per-aircraft deviation totals");
    r->add_flag("--no-timing", run.no_timing, "Report zero compute time so output is reproducible");

    std::vector<std::string> report_inputs;
    std::string report_out = "-";
    auto* rep = app.add_subcommand("report", "Summarize one or more results CSVs");
    rep->add_option("--results", report_inputs, "Results CSV files")->required()->expected(1, -1);
    rep->add_option("--out", report_out, "Summary CSV path, - for stdout")->capture_default_str();

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "Run a built-in verification suite");
    v->add_option("--suite", verify.suite, "pairwise, oracle or determinism")
        ->required()
        ->check(CLI::IsMember({"pairwise", "oracle", "determinism"}));
    v->add_option("--radius", verify.radius, "Lattice radius (suite default when omitted)");
    v->add_option("--parallelism", verify.parallelism, "Worker threads")->check(CLI::PositiveNumber);
    v->add_option("--configs", verify.configs, "Configuration JSONL for the determinism suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "hexatm: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*g) return cmd_gen(gen);
        if (*r) return cmd_run(run);
        if (*rep) return cmd_report(report_inputs, report_out);
        if (*v) return cmd_verify(verify);
    } catch (const std::exception& e) {
        std::cerr << "hexatm: error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
