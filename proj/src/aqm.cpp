#include "ecnsim/aqm.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecnsim {

const char* to_string(DelayMetric metric)
{
    return metric == DelayMetric::Sojourn ? "sojourn" : "est";
}

void AqmConfig::validate() const
{
    if (drop_cap_pkts < 1) {
        throw std::invalid_argument("aqm: drop cap must be at least one packet");
    }
    if (const auto* step = std::get_if<StepShape>(&shape)) {
        if (step->threshold <= SimTime{}) {
            throw std::invalid_argument("aqm: step threshold must be positive");
        }
    } else {
        const auto& ramp = std::get<RampShape>(shape);
        if (ramp.min <= SimTime{} || ramp.max <= SimTime{}) {
            throw std::invalid_argument("aqm: ramp bounds must be positive");
        }
        if (!(ramp.min < ramp.max)) {
            throw std::invalid_argument("aqm: ramp requires min < max");
        }
    }
}

double marking_probability(SimTime delay, const MarkingShape& shape)
{
    if (const auto* step = std::get_if<StepShape>(&shape)) {
        return delay > step->threshold ? 1.0 : 0.0;
    }
    const auto& ramp = std::get<RampShape>(shape);
    if (delay <= ramp.min) {
        return 0.0;
    }
    if (delay >= ramp.max) {
        return 1.0;
    }
    return static_cast<double>((delay - ramp.min).ns()) / static_cast<double>((ramp.max - ramp.min).ns());
}

BottleneckQueue::BottleneckQueue(AqmConfig cfg, std::int64_t drain_rate_bps)
    : cfg_(std::move(cfg)), drain_rate_bps_(drain_rate_bps)
{
    cfg_.validate();
    if (drain_rate_bps_ <= 0) {
        throw std::invalid_argument("aqm: drain rate must be positive");
    }
}

bool BottleneckQueue::enqueue(PacketRecord pkt, SimTime now)
{
    if (static_cast<std::int64_t>(fifo_.size()) >= cfg_.drop_cap_pkts) {
        ++drops_;
        return false;
    }
    pkt.enqueue_time = now;
    pkt.ce = false;
    backlog_bytes_ += pkt.size_bytes;
    fifo_.push_back(pkt);
    return true;
}

SimTime BottleneckQueue::expected_service_time() const
{
    return serialization_time(backlog_bytes_, drain_rate_bps_);
}

SimTime BottleneckQueue::delay_metric(const PacketRecord& head, SimTime now) const
{
    return cfg_.metric == DelayMetric::Sojourn ? sojourn(head, now) : expected_service_time();
}

PacketRecord BottleneckQueue::dequeue(SimTime now, RandomSource& rng)
{
    if (fifo_.empty()) {
        throw std::logic_error("BottleneckQueue::dequeue on empty queue");
    }
    PacketRecord head = fifo_.front();
    fifo_.pop_front();
    backlog_bytes_ -= head.size_bytes;

    const SimTime delay = delay_metric(head, now);
    const double p = marking_probability(delay, cfg_.shape);
    bool mark = false;
    if (p >= 1.0) {
        mark = true;
    } else if (p > 0.0) {
        mark = rng.uniform01() < p;
    }
    if (mark) {
        head.ce = true;
        ++marks_;
    }
    last_ = DequeueSample{now, head.flow_id, sojourn(head, now), expected_service_time(), mark};
    return head;
}

BottleneckLink::BottleneckLink(Simulator& sim, RandomSource& rng, AqmConfig cfg, std::int64_t rate_bps)
    : sim_(sim), rng_(rng), queue_(std::move(cfg), rate_bps)
{
}

void BottleneckLink::arrive(PacketRecord pkt)
{
    if (!queue_.enqueue(pkt, sim_.now())) {
        if (drop_) {
            drop_(pkt);
        }
        return;
    }
    if (!busy_) {
        start_service();
    }
}

void BottleneckLink::start_service()
{
    PacketRecord pkt = queue_.dequeue(sim_.now(), rng_);
    busy_ = true;
    if (trace_) {
        trace_(queue_.last_sample());
    }
    const SimTime done = sim_.now() + serialization_time(pkt.size_bytes, queue_.drain_rate_bps());
    sim_.schedule(done, EventKind::PacketDeparture, [this, pkt] {
        busy_ = false;
        if (deliver_) {
            deliver_(pkt);
        }
        if (!queue_.empty()) {
            start_service();
        }
    });
}

} // namespace ecnsim
