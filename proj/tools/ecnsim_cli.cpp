// ecnsim: run scenario files, sweeps and the scenario self-test.
//
// Exit status: 0 success, 1 an invariant failed (or a sweep row failed),
// 2 usage or configuration error.

#include "ecnsim/csv.hpp"
#include "ecnsim/scenario.hpp"
#include "ecnsim/scenario_file.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace ecnsim;

namespace {

constexpr int kOk = 0;
constexpr int kInvariant = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& dir, const char* name)
{
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
        throw UsageError("cannot write " + (dir / name).string());
    }
    return out;
}

void print_summary(const RunResult& r)
{
    const auto& s = r.summary;
    std::cout << r.name << " seed=" << r.seed << " utilization=" << format_number(s.utilization)
              << " jain=" << (s.jain ? format_number(*s.jain) : "-")
              << " geo_ratio=" << (s.geo_ratio ? format_number(*s.geo_ratio) : "-")
              << " mean_queue_us=" << format_number(s.mean_queue_us)
              << " p99_queue_us=" << format_number(s.p99_queue_us) << '\n';
    for (const FlowSummary& f : r.flows) {
        std::cout << "  flow " << f.id << ' ' << f.code << " rate_bps=" << format_number(f.mean_rate_bps)
                  << " mean_cwnd=" << format_number(f.mean_cwnd) << " cwr=" << f.cwr_entries
                  << " marks=" << f.marks_received << " dropped=" << f.dropped << '\n';
    }
}

int report_invariants(const ScenarioConfig& cfg, const RunResult& r)
{
    const auto bad = check_invariants(cfg, r);
    for (const auto& b : bad) {
        std::cerr << "invariant failed: " << b << '\n';
    }
    return bad.empty() ? kOk : kInvariant;
}

std::vector<double> parse_axis_values(SweepAxis axis, const std::string& list)
{
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (axis == SweepAxis::Capacity) {
            out.push_back(static_cast<double>(parse_rate(item)));
        } else {
            out.push_back(parse_duration(item).ms());
        }
    }
    return out;
}

int cmd_run(const std::string& scenario, const std::string& out_dir, std::optional<std::uint64_t> seed)
{
    ScenarioConfig cfg = load_scenario(scenario);
    if (seed) {
        cfg.seed = *seed;
    }
    const RunResult r = run_scenario(cfg);
    auto ts = open_out(out_dir, "timeseries.csv");
    write_timeseries_csv(ts, r);
    auto sum = open_out(out_dir, "summary.csv");
    write_summary_csv(sum, r);
    print_summary(r);
    return report_invariants(cfg, r);
}

int cmd_sweep(const std::string& scenario, const std::string& out_dir, std::optional<std::uint64_t> seed,
              const std::string& axis_text, const std::string& values_text, int reps, int parallel)
{
    ScenarioConfig cfg = load_scenario(scenario);
    if (seed) {
        cfg.seed = *seed;
    }
    const SweepAxis axis = parse_sweep_axis(axis_text);
    const auto values = parse_axis_values(axis, values_text);
    SweepOptions opts;
    opts.reps = reps;
    opts.parallel = parallel;
    opts.on_row = [](const SweepRow& row) {
        std::cerr << "  axis=" << format_number(row.axis_value) << " seed=" << row.seed.value_or(0)
                  << (row.error ? " FAILED: " + *row.error : std::string(" done")) << '\n';
    };
    const SweepTable t = sweep(cfg, axis, values, opts);
    auto sum = open_out(out_dir, "summary.csv");
    write_summary_csv(sum, t);
    sum.flush();
    const bool failed = std::any_of(t.rows.begin(), t.rows.end(), [](const SweepRow& r) { return r.error.has_value(); });
    std::cout << t.rows.size() << " rows + " << t.means.size() << " mean rows written to "
              << (fs::path(out_dir) / "summary.csv").string() << '\n';
    return failed ? kInvariant : kOk;
}

int cmd_selftest(std::vector<std::string> files, const std::string& dir)
{
    if (files.empty()) {
        if (!fs::is_directory(dir)) {
            throw UsageError("scenario directory '" + dir + "' not found");
        }
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.path().extension() == ".cfg") {
                files.push_back(e.path().string());
            }
        }
        std::sort(files.begin(), files.end());
    }
    if (files.empty()) {
        throw UsageError("no scenario files to test");
    }
    int status = kOk;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& f : files) {
        const ScenarioConfig cfg = load_scenario(f);
        const auto start = std::chrono::steady_clock::now();
        const RunResult r = run_scenario(cfg);
        const auto bad = check_invariants(cfg, r);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (bad.empty() ? "ok   " : "FAIL ") << fs::path(f).filename().string() << " ("
                  << format_number(std::round(secs * 10) / 10) << " s, " << r.events << " events)\n";
        for (const auto& b : bad) {
            std::cout << "     " << b << '\n';
        }
        if (!bad.empty()) {
            status = kInvariant;
        }
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << files.size() << " scenarios in " << format_number(std::round(total)) << " s\n";
    return status;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Packet-level single-bottleneck ECN simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "Run one scenario file and write timeseries.csv and summary.csv");
    run->add_option("--scenario", scenario, "Scenario file")->required();
    run->add_option("--out-dir", out_dir, "Output directory");
    run->add_option("--seed", seed, "Override the scenario seed");

    std::string axis = "capacity";
    std::string values;
    int reps = 5;
    int parallel = 1;
    auto* sw = app.add_subcommand("sweep", "Sweep capacity or RTT over a scenario template");
    sw->add_option("--scenario", scenario, "Scenario template file")->required();
    sw->add_option("--out-dir", out_dir, "Output directory");
    sw->add_option("--seed", seed, "First seed (repetition i uses seed + i)");
    sw->add_option("--axis", axis, "capacity or rtt")->check(CLI::IsMember({"capacity", "rtt"}));
    sw->add_option("--values", values, "Comma-separated values with units, e.g. 10ms,20ms,50ms")->required();
    sw->add_option("--reps", reps, "Repetitions per value")->check(CLI::PositiveNumber);
    sw->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> files;
    std::string dir = ECNSIM_SCENARIO_DIR;
    auto* st = app.add_subcommand("selftest", "Run scenario files and check run invariants");
    st->add_option("--scenario", files, "Scenario file(s); default: every .cfg in the scenario directory");
    st->add_option("--dir", dir, "Scenario directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*run) {
            return cmd_run(scenario, out_dir, seed);
        }
        if (*sw) {
            return cmd_sweep(scenario, out_dir, seed, axis, values, reps, parallel);
        }
        return cmd_selftest(files, dir);
    } catch (const ScenarioFileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInvariant;
    }
}
