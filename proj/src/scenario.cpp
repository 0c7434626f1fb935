#include "ecnsim/scenario.hpp"

#include "ecnsim/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ecnsim {

FlowSpec make_flow(std::string_view code, SimTime start, PrrMode prr_on)
{
    return FlowSpec{std::string(code), parse_variant(code, prr_on), start};
}

SimTime ScenarioConfig::effective_send_jitter() const
{
    if (send_jitter) {
        return *send_jitter;
    }
    return capacity_bps > 0 ? serialization_time(kFrameBytes, capacity_bps) : SimTime{};
}

void ScenarioConfig::validate() const
{
    auto fail = [this](const std::string& why) {
        throw std::invalid_argument("scenario '" + name + "': " + why);
    };
    if (capacity_bps <= 0) {
        fail("capacity must be positive");
    }
    if (base_rtt <= SimTime{}) {
        fail("base_rtt must be positive");
    }
    if (flows.empty()) {
        fail("at least one flow is required");
    }
    for (std::size_t i = 0; i < flows.size(); ++i) {
        if (flows[i].start < SimTime{}) {
            fail("flow start times must be non-negative");
        }
        if (i > 0 && flows[i].start < flows[i - 1].start) {
            fail("flow start times must be non-decreasing");
        }
        ecnsim::validate(flows[i].variant.cca);
    }
    if (warmup < SimTime{} || measure <= SimTime{}) {
        fail("warmup must be >= 0 and measure > 0");
    }
    if (warmup + measure > run_length()) {
        fail("warmup + measure exceeds the run length");
    }
    if (sample_window < 1) {
        fail("sample_window must be at least one RTT");
    }
    if (start_jitter < SimTime{} || effective_send_jitter() < SimTime{}) {
        fail("jitter must be non-negative");
    }
    if (!(nic_rate_factor >= 1.0)) {
        fail("nic_rate_factor must be >= 1");
    }
    if (burst_cap_segments < 1 || max_burst <= SimTime{}) {
        fail("burst limits must be positive");
    }
    if (!(initial_alpha >= 0.0 && initial_alpha <= 1.0)) {
        fail("initial_alpha must lie in [0, 1]");
    }
    try {
        aqm.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

namespace {

struct FlowCounters {
    std::int64_t to_queue = 0;     // left the NIC
    std::int64_t accepted = 0;
    std::int64_t dropped = 0;
    std::int64_t dequeued = 0;
    std::int64_t departed = 0;
    std::int64_t received = 0;
    std::int64_t marks_received = 0;

    std::int64_t window_bytes = 0;
    std::int64_t window_marks = 0;
    std::int64_t measure_bytes = 0;
    std::int64_t measure_pkts = 0;
    std::int64_t measure_marks = 0;

    RunningStats cwnd;
    RunningStats alpha;
};

class Runner {
public:
    Runner(const ScenarioConfig& cfg, const RunHooks* hooks)
        : cfg_(cfg), hooks_(hooks), rng_(cfg.seed),
          link_(sim_, rng_, cfg.aqm, cfg.capacity_bps),
          nic_ser_(serialization_time(kFrameBytes, nic_rate())),
          send_jitter_(cfg.effective_send_jitter()),
          half_rtt_(SimTime{cfg.base_rtt.ns() / 2}),
          measure_end_(cfg.warmup + cfg.measure),
          hist_(10.0)
    {
        for (std::size_t i = 0; i < cfg_.flows.size(); ++i) {
            const FlowSpec& f = cfg_.flows[i];
            SenderConfig sc;
            sc.flow_id = static_cast<FlowId>(i);
            sc.cca = f.variant.cca;
            sc.prr = f.variant.prr;
            sc.tso = f.variant.tso;
            sc.burst = BurstPolicy{cfg_.max_burst, cfg_.burst_cap_segments};
            sc.nic_rate_bps = nic_rate();
            sc.initial_alpha = cfg_.initial_alpha;
            senders_.push_back(std::make_unique<TcpSender>(sc));
            if (hooks_) {
                senders_.back()->set_hooks(hooks_->sender);
            }
        }
        counters_.resize(cfg_.flows.size());
        nic_free_.assign(cfg_.flows.size(), SimTime{});

        link_.on_deliver([this](const PacketRecord& p) { on_departure(p); });
        link_.on_drop([this](const PacketRecord& p) {
            ++counters_[p.flow_id].dropped;
            senders_[p.flow_id]->on_drop(p.seq);
        });
        link_.on_dequeue([this](const DequeueSample& s) { on_dequeue(s); });

        sim_.set_fire_hook([this](const Event& e) {
            if (e.fire_at < last_fire_ || (e.fire_at == last_fire_ && e.sequence < last_seq_ && fired_any_)) {
                ++order_violations_;
            }
            last_fire_ = e.fire_at;
            last_seq_ = e.sequence;
            fired_any_ = true;
        });
    }

    RunResult run()
    {
        for (std::size_t i = 0; i < senders_.size(); ++i) {
            const auto jitter = SimTime{static_cast<std::int64_t>(rng_.uniform01() * static_cast<double>(cfg_.start_jitter.ns()))};
            sim_.schedule(cfg_.flows[i].start + jitter, EventKind::Timer, [this, i] {
                emit(i, senders_[i]->start(sim_.now()));
            });
        }
        schedule_sample(cfg_.sample_period());
        sim_.run_until(cfg_.run_length());
        return finish();
    }

private:
    std::int64_t nic_rate() const
    {
        return static_cast<std::int64_t>(std::llround(static_cast<double>(cfg_.capacity_bps) * cfg_.nic_rate_factor));
    }

    void emit(std::size_t flow, const std::vector<PacketRecord>& pkts)
    {
        if (pkts.empty()) {
            return;
        }
        SimTime ready = sim_.now();
        if (send_jitter_ > SimTime{}) {
            ready += SimTime{static_cast<std::int64_t>(rng_.uniform01() * static_cast<double>(send_jitter_.ns()))};
        }
        for (const PacketRecord& p : pkts) {
            nic_free_[flow] = std::max(nic_free_[flow], ready) + nic_ser_;
            sim_.schedule(nic_free_[flow], EventKind::PacketArrival, [this, p] {
                FlowCounters& c = counters_[p.flow_id];
                ++c.to_queue;
                const auto drops_before = link_.queue().drops();
                link_.arrive(p);
                if (link_.queue().drops() == drops_before) {
                    ++c.accepted;
                }
            });
        }
    }

    void on_dequeue(const DequeueSample& s)
    {
        ++counters_[s.flow_id].dequeued;
        const double us = s.sojourn.us();
        window_delay_.add(us);
        if (s.time >= cfg_.warmup && s.time < measure_end_) {
            queue_delay_.add(us);
            hist_.add(us);
        }
        if (hooks_ && hooks_->on_dequeue) {
            hooks_->on_dequeue(s);
        }
    }

    void on_departure(const PacketRecord& p)
    {
        ++counters_[p.flow_id].departed;
        sim_.schedule_in(half_rtt_, EventKind::PacketArrival, [this, p] { on_receive(p); });
    }

    void on_receive(const PacketRecord& p)
    {
        FlowCounters& c = counters_[p.flow_id];
        ++c.received;
        c.window_bytes += kPayloadBytes;
        if (p.ce) {
            ++c.marks_received;
            ++c.window_marks;
        }
        const SimTime now = sim_.now();
        if (now >= cfg_.warmup && now < measure_end_) {
            c.measure_bytes += kPayloadBytes;
            ++c.measure_pkts;
            if (p.ce) {
                ++c.measure_marks;
            }
        }
        const AckRecord ack{p.seq, p.ce, p.sent_time};
        sim_.schedule_in(cfg_.base_rtt - half_rtt_, EventKind::AckArrival, [this, ack, flow = p.flow_id] {
            emit(flow, senders_[flow]->on_ack(ack, sim_.now()));
        });
    }

    void schedule_sample(SimTime at)
    {
        if (at > cfg_.run_length()) {
            return;
        }
        sim_.schedule(at, EventKind::Timer, [this] { take_sample(); });
    }

    void take_sample()
    {
        const SimTime now = sim_.now();
        const SimTime period = cfg_.sample_period();
        const SimTime window_start = now - period;
        const bool measured = window_start >= cfg_.warmup && now <= measure_end_;
        const double qdelay = window_delay_.count() > 0 ? window_delay_.mean() : 0.0;

        std::vector<double> rates;
        for (std::size_t i = 0; i < senders_.size(); ++i) {
            FlowCounters& c = counters_[i];
            const TcpSender& snd = *senders_[i];
            const double rate = static_cast<double>(c.window_bytes) * 8.0 / period.sec();
            const double alpha = snd.cca().alpha_fraction();
            timeseries_.push_back(TimeseriesRow{now, static_cast<FlowId>(i), snd.state().cwnd, alpha, rate,
                                                c.window_marks, qdelay});
            if (measured) {
                c.cwnd.add(static_cast<double>(snd.state().cwnd));
                c.alpha.add(alpha);
                rates.push_back(rate);
            }
            c.window_bytes = 0;
            c.window_marks = 0;
        }
        queue_.push_back(QueueRow{now, qdelay, link_.queue().backlog_bytes()});
        window_delay_ = RunningStats{};

        if (measured) {
            if (const auto j = jain_index(rates)) {
                jain_.add(*j);
            } else {
                ++jain_missing_;
            }
            if (rates.size() >= 2) {
                ratio_samples_.emplace_back(rates[0], rates[1]);
            }
        }
        schedule_sample(now + period);
    }

    RunResult finish()
    {
        RunResult r;
        r.name = cfg_.name;
        r.seed = cfg_.seed;
        r.timeseries = std::move(timeseries_);
        r.queue = std::move(queue_);
        r.events = sim_.fired();
        r.queue_drops = link_.queue().drops();
        r.order_violations = order_violations_;

        std::int64_t measure_bytes = 0;
        for (std::size_t i = 0; i < senders_.size(); ++i) {
            const FlowCounters& c = counters_[i];
            const TcpSender& snd = *senders_[i];
            FlowSummary f;
            f.id = static_cast<FlowId>(i);
            f.code = cfg_.flows[i].code;
            f.sent = snd.sent();
            f.received = c.received;
            f.marks_received = c.marks_received;
            f.dropped = c.dropped;
            f.in_nic = f.sent - c.to_queue;
            f.in_queue = c.accepted - c.dequeued;
            f.in_service = c.dequeued - c.departed;
            f.on_wire = c.departed - c.received;
            f.cwr_entries = snd.cwr_entries();
            f.floor_hits = snd.floor_hits();
            f.mean_rate_bps = static_cast<double>(c.measure_bytes) * 8.0 / cfg_.measure.sec();
            f.mean_cwnd = c.cwnd.mean();
            f.cwnd_cov = c.cwnd.cov();
            f.mean_alpha = c.alpha.mean();
            f.mark_fraction = c.measure_pkts > 0 ? static_cast<double>(c.measure_marks) / static_cast<double>(c.measure_pkts) : 0.0;
            f.episodes = snd.episodes();
            r.flows.push_back(std::move(f));
            measure_bytes += c.measure_bytes;
        }

        RunSummary& s = r.summary;
        if (jain_.count() > 0) {
            s.jain = jain_.mean();
        }
        s.jain_samples = jain_.count();
        s.jain_missing = jain_missing_;
        if (!ratio_samples_.empty()) {
            const GeoRatio g = geo_mean_ratio(ratio_samples_);
            s.geo_ratio = g.value;
            s.geo_excluded = g.excluded;
        }
        // Payload goodput against the payload share of capacity, so a saturated
        // link reads 1. Window edges can admit one extra segment; clamp that.
        const double payload_capacity = static_cast<double>(cfg_.capacity_bps) * kPayloadBytes / kFrameBytes;
        s.utilization = std::min(1.0, static_cast<double>(measure_bytes) * 8.0 / (payload_capacity * cfg_.measure.sec()));
        s.mean_queue_us = queue_delay_.mean();
        s.p99_queue_us = hist_.quantile(0.99);
        return r;
    }

    const ScenarioConfig& cfg_;
    const RunHooks* hooks_;
    Simulator sim_;
    RandomSource rng_;
    BottleneckLink link_;
    SimTime nic_ser_;
    SimTime send_jitter_;
    SimTime half_rtt_;
    SimTime measure_end_;

    std::vector<std::unique_ptr<TcpSender>> senders_;
    std::vector<FlowCounters> counters_;
    std::vector<SimTime> nic_free_;

    std::vector<TimeseriesRow> timeseries_;
    std::vector<QueueRow> queue_;
    RunningStats window_delay_;
    RunningStats queue_delay_;
    DelayHistogram hist_;
    RunningStats jain_;
    std::int64_t jain_missing_ = 0;
    std::vector<std::pair<double, double>> ratio_samples_;

    SimTime last_fire_{};
    std::uint64_t last_seq_ = 0;
    bool fired_any_ = false;
    std::uint64_t order_violations_ = 0;
};

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const RunHooks* hooks)
{
    cfg.validate();
    Runner runner(cfg, hooks);
    return runner.run();
}

std::vector<std::string> check_invariants(const ScenarioConfig& cfg, const RunResult& r)
{
    std::vector<std::string> bad;
    for (const FlowSummary& f : r.flows) {
        const std::string who = "flow " + std::to_string(f.id) + ": ";
        if (f.in_nic < 0 || f.in_queue < 0 || f.in_service < 0 || f.on_wire < 0 || f.dropped < 0) {
            bad.push_back(who + "negative packet count in some stage");
        }
        if (f.received != f.sent - f.in_nic - f.in_queue - f.in_service - f.on_wire - f.dropped) {
            bad.push_back(who + "packet conservation violated");
        }
        if (f.marks_received > f.received) {
            bad.push_back(who + "more marks than packets received");
        }
    }
    const auto& s = r.summary;
    if (s.utilization < 0.0 || s.utilization > 1.0) {
        bad.push_back("utilization outside [0, 1]");
    }
    if (s.jain) {
        const double lo = 1.0 / static_cast<double>(cfg.flows.size());
        if (*s.jain < lo - 1e-12 || *s.jain > 1.0 + 1e-12) {
            bad.push_back("jain index outside [1/n, 1]");
        }
    }
    if (r.order_violations != 0) {
        bad.push_back("events fired out of (time, sequence) order");
    }
    for (std::size_t i = 1; i < r.queue.size(); ++i) {
        if (r.queue[i].time <= r.queue[i - 1].time) {
            bad.push_back("sample times not increasing");
            break;
        }
    }
    return bad;
}

const char* to_string(SweepAxis axis)
{
    return axis == SweepAxis::Capacity ? "capacity" : "rtt";
}

SweepAxis parse_sweep_axis(std::string_view text)
{
    if (text == "capacity") {
        return SweepAxis::Capacity;
    }
    if (text == "rtt") {
        return SweepAxis::Rtt;
    }
    throw std::invalid_argument("unknown sweep axis '" + std::string(text) + "' (expected capacity or rtt)");
}

namespace {

ScenarioConfig apply_axis(const ScenarioConfig& tmpl, SweepAxis axis, double value, std::uint64_t seed)
{
    ScenarioConfig c = tmpl;
    c.seed = seed;
    if (axis == SweepAxis::Capacity) {
        c.capacity_bps = static_cast<std::int64_t>(std::llround(value));
    } else {
        c.base_rtt = SimTime::from_sec(value / 1e3);
    }
    return c;
}

SweepRow mean_row(double value, const std::vector<SweepRow>& rows)
{
    SweepRow m;
    m.axis_value = value;
    RunningStats jain, geo, util, mq, p99;
    int ok = 0;
    for (const SweepRow& r : rows) {
        if (r.error) {
            continue;
        }
        ++ok;
        if (r.summary.jain) {
            jain.add(*r.summary.jain);
        }
        if (r.summary.geo_ratio) {
            geo.add(std::log(*r.summary.geo_ratio));
        }
        util.add(r.summary.utilization);
        mq.add(r.summary.mean_queue_us);
        p99.add(r.summary.p99_queue_us);
    }
    if (ok == 0) {
        m.error = "every repetition failed";
        return m;
    }
    if (jain.count() > 0) {
        m.summary.jain = jain.mean();
    }
    if (geo.count() > 0) {
        m.summary.geo_ratio = std::exp(geo.mean());
    }
    m.summary.utilization = util.mean();
    m.summary.mean_queue_us = mq.mean();
    m.summary.p99_queue_us = p99.mean();
    return m;
}

} // namespace

SweepTable sweep(const ScenarioConfig& tmpl, SweepAxis axis, const std::vector<double>& values,
                 const SweepOptions& opts)
{
    if (values.size() < 2) {
        throw std::invalid_argument("sweep needs at least two axis values");
    }
    if (opts.reps < 1) {
        throw std::invalid_argument("sweep needs at least one repetition");
    }
    const std::size_t reps = static_cast<std::size_t>(opts.reps);
    const std::size_t total = values.size() * reps;

    SweepTable table;
    table.axis = axis;
    table.rows.resize(total);

    std::atomic<std::size_t> next{0};
    std::mutex report;
    auto worker = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            const double value = values[k / reps];
            const std::uint64_t seed = tmpl.seed + k % reps;
            SweepRow row;
            row.axis_value = value;
            row.seed = seed;
            try {
                row.summary = run_scenario(apply_axis(tmpl, axis, value, seed)).summary;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            table.rows[k] = row;
            if (opts.on_row) {
                std::lock_guard lock(report);
                opts.on_row(row);
            }
        }
    };
    const int threads = std::clamp<int>(opts.parallel, 1, static_cast<int>(total));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }

    for (std::size_t v = 0; v < values.size(); ++v) {
        const std::vector<SweepRow> group(table.rows.begin() + static_cast<std::ptrdiff_t>(v * reps),
                                          table.rows.begin() + static_cast<std::ptrdiff_t>((v + 1) * reps));
        table.means.push_back(mean_row(values[v], group));
    }
    return table;
}

} // namespace ecnsim
