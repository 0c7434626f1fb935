#pragma once

#include "ecnsim/engine.hpp"
#include "ecnsim/sim_time.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <variant>

namespace ecnsim {

using FlowId = std::uint32_t;

inline constexpr std::int32_t kFrameBytes = 1500;
inline constexpr std::int32_t kPayloadBytes = 1448;

/// One segment travelling through the bottleneck.
struct PacketRecord {
    FlowId flow_id = 0;
    std::int64_t seq = 0;
    std::int32_t size_bytes = kFrameBytes;
    SimTime sent_time{};      // left the sender's stack (for RTT samples)
    SimTime enqueue_time{};
    bool ce = false;
};

enum class DelayMetric : std::uint8_t { Sojourn, Est };

struct StepShape {
    SimTime threshold;
};

struct RampShape {
    SimTime min;
    SimTime max;
};

using MarkingShape = std::variant<StepShape, RampShape>;

struct AqmConfig {
    DelayMetric metric = DelayMetric::Sojourn;
    MarkingShape shape = StepShape{SimTime::from_ms(2)};
    std::int64_t drop_cap_pkts = 10000;

    /// Throws std::invalid_argument on a non-positive threshold or an inverted ramp.
    void validate() const;
};

const char* to_string(DelayMetric metric);

/// Marking probability for a measured delay. Step compares strictly (delay > threshold).
double marking_probability(SimTime delay, const MarkingShape& shape);

/// Per-dequeue observation, fed to trace hooks and queue statistics.
struct DequeueSample {
    SimTime time;
    FlowId flow_id;
    SimTime sojourn;
    SimTime est;
    bool marked;
};

/// FIFO with a fixed drain rate that ECN-marks on dequeue.
class BottleneckQueue {
public:
    BottleneckQueue(AqmConfig cfg, std::int64_t drain_rate_bps);

    /// Appends the packet unless the queue holds drop_cap_pkts already.
    bool enqueue(PacketRecord pkt, SimTime now);

    /// Removes the head and decides its CE mark. Throws std::logic_error when empty.
    PacketRecord dequeue(SimTime now, RandomSource& rng);

    /// Delay of `head` under the configured metric. Expects head already removed
    /// from the FIFO, so backlog_bytes() is the queue behind it.
    SimTime delay_metric(const PacketRecord& head, SimTime now) const;

    SimTime sojourn(const PacketRecord& head, SimTime now) const { return now - head.enqueue_time; }
    SimTime expected_service_time() const;

    bool empty() const { return fifo_.empty(); }
    std::size_t length() const { return fifo_.size(); }
    std::int64_t backlog_bytes() const { return backlog_bytes_; }
    std::int64_t drain_rate_bps() const { return drain_rate_bps_; }
    std::uint64_t drops() const { return drops_; }
    std::uint64_t marks() const { return marks_; }
    const AqmConfig& config() const { return cfg_; }

    /// Sample describing the most recent dequeue.
    const DequeueSample& last_sample() const { return last_; }

private:
    AqmConfig cfg_;
    std::int64_t drain_rate_bps_;
    std::deque<PacketRecord> fifo_;
    std::int64_t backlog_bytes_ = 0;
    std::uint64_t drops_ = 0;
    std::uint64_t marks_ = 0;
    DequeueSample last_{};
};

/// Drives a BottleneckQueue from the event loop: serves the head whenever the
/// link is free and hands each packet on once its serialization completes.
class BottleneckLink {
public:
    using DeliverFn = std::function<void(const PacketRecord&)>;
    using DropFn = std::function<void(const PacketRecord&)>;
    using TraceFn = std::function<void(const DequeueSample&)>;

    BottleneckLink(Simulator& sim, RandomSource& rng, AqmConfig cfg, std::int64_t rate_bps);

    void on_deliver(DeliverFn fn) { deliver_ = std::move(fn); }
    void on_drop(DropFn fn) { drop_ = std::move(fn); }
    void on_dequeue(TraceFn fn) { trace_ = std::move(fn); }

    /// Packet arrives at the queue now.
    void arrive(PacketRecord pkt);

    const BottleneckQueue& queue() const { return queue_; }
    bool busy() const { return busy_; }
    std::uint64_t in_service() const { return busy_ ? 1 : 0; }

private:
    void start_service();

    Simulator& sim_;
    RandomSource& rng_;
    BottleneckQueue queue_;
    bool busy_ = false;
    DeliverFn deliver_;
    DropFn drop_;
    TraceFn trace_;
};

} // namespace ecnsim
