#pragma once

#include "ecnsim/aqm.hpp"
#include "ecnsim/sender.hpp"
#include "ecnsim/variant.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ecnsim {

struct FlowSpec {
    std::string code;        // variant code as written, e.g. "DCTCP-PS10Tu"
    ParsedVariant variant;
    SimTime start{};
};

/// Builds a FlowSpec from a code, resolving capital P to `prr_on`.
FlowSpec make_flow(std::string_view code, SimTime start = {}, PrrMode prr_on = PrrMode::Patched);

/// A single-bottleneck experiment: senders share one ECN-marking FIFO; the
/// whole base RTT is propagation delay after the bottleneck.
struct ScenarioConfig {
    std::string name = "scenario";
    std::int64_t capacity_bps = 200'000'000;
    SimTime base_rtt = SimTime::from_ms(50);
    AqmConfig aqm;
    std::vector<FlowSpec> flows;
    SimTime warmup = SimTime::from_sec(20);
    SimTime measure = SimTime::from_sec(40);
    /// Optional explicit run length; defaults to warmup + measure.
    std::optional<SimTime> duration;
    int sample_window = 2;  // in base RTTs
    std::uint64_t seed = 1;

    /// Each flow's start is delayed by a uniform draw in [0, start_jitter).
    SimTime start_jitter = SimTime::from_ms(1);
    /// Each send opportunity is delayed by a uniform draw in [0, send_jitter)
    /// of host processing time. Breaks the phase locking a noiseless model
    /// otherwise falls into. Segment order is preserved. Unset means one
    /// bottleneck frame time; zero turns it off.
    std::optional<SimTime> send_jitter;
    /// Sender NIC rate as a multiple of the bottleneck rate.
    double nic_rate_factor = 10.0;
    std::int64_t burst_cap_segments = 44;
    SimTime max_burst = SimTime::from_ms(1);
    double initial_alpha = 1.0;

    SimTime run_length() const { return duration.value_or(warmup + measure); }
    SimTime sample_period() const { return base_rtt * sample_window; }
    SimTime effective_send_jitter() const;

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;
};

struct TimeseriesRow {
    SimTime time;
    FlowId flow;
    std::int64_t cwnd;
    double alpha;
    double throughput_bps;
    std::int64_t marks;
    double queue_delay_us;
};

struct QueueRow {
    SimTime time;
    double mean_delay_us;
    std::int64_t backlog_bytes;
};

struct FlowSummary {
    FlowId id = 0;
    std::string code;
    std::int64_t sent = 0;
    std::int64_t received = 0;
    std::int64_t marks_received = 0;
    std::int64_t dropped = 0;
    std::int64_t in_nic = 0;
    std::int64_t in_queue = 0;
    std::int64_t in_service = 0;
    std::int64_t on_wire = 0;
    std::int64_t cwr_entries = 0;
    std::int64_t floor_hits = 0;
    double mean_rate_bps = 0.0;     // payload rate over the measurement period
    double mean_cwnd = 0.0;
    double cwnd_cov = 0.0;
    double mean_alpha = 0.0;
    double mark_fraction = 0.0;     // CE-marked share of packets received while measuring
    std::vector<CwrEpisode> episodes;
};

struct RunSummary {
    std::optional<double> jain;
    std::optional<double> geo_ratio;
    std::int64_t jain_samples = 0;
    std::int64_t jain_missing = 0;
    std::int64_t geo_excluded = 0;
    double utilization = 0.0;
    double mean_queue_us = 0.0;
    double p99_queue_us = 0.0;
};

struct RunResult {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<TimeseriesRow> timeseries;
    std::vector<QueueRow> queue;
    std::vector<FlowSummary> flows;
    RunSummary summary;
    std::uint64_t events = 0;
    std::uint64_t queue_drops = 0;
    std::uint64_t order_violations = 0;  // events seen out of (time, sequence) order
};

/// Optional observers for a run; all may be left empty.
struct RunHooks {
    std::function<void(const DequeueSample&)> on_dequeue;
    SenderHooks sender;
};

/// Runs the scenario to completion. Deterministic for a given config.
RunResult run_scenario(const ScenarioConfig& cfg, const RunHooks* hooks = nullptr);

/// Post-run consistency checks; returns human-readable failures (empty if all hold).
std::vector<std::string> check_invariants(const ScenarioConfig& cfg, const RunResult& r);

enum class SweepAxis { Capacity, Rtt };

const char* to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepRow {
    double axis_value = 0.0;    // bits/s for capacity, ms for rtt
    std::optional<std::uint64_t> seed;  // empty on per-value mean rows
    RunSummary summary;
    std::optional<std::string> error;
};

struct SweepTable {
    SweepAxis axis = SweepAxis::Capacity;
    std::vector<SweepRow> rows;   // one per (value, repetition), in value order
    std::vector<SweepRow> means;  // one per value
};

struct SweepOptions {
    int reps = 5;
    int parallel = 1;
    /// Called as each row finishes (in completion order).
    std::function<void(const SweepRow&)> on_row;
};

/// Axis values are bits/s (capacity) or milliseconds (rtt). Repetition i uses
/// seed template.seed + i, so the seed set is shared across values.
SweepTable sweep(const ScenarioConfig& tmpl, SweepAxis axis, const std::vector<double>& values,
                 const SweepOptions& opts = {});

} // namespace ecnsim
