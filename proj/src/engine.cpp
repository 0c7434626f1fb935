#include "ecnsim/engine.hpp"

#include <stdexcept>
#include <string>

namespace ecnsim {

const char* to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::PacketArrival: return "packet-arrival";
    case EventKind::PacketDeparture: return "packet-departure";
    case EventKind::AckArrival: return "ack-arrival";
    case EventKind::Timer: return "timer";
    }
    return "unknown";
}

std::uint64_t Simulator::schedule(SimTime at, EventKind kind, std::function<void()> action)
{
    if (at < now_) {
        throw std::logic_error("Simulator::schedule: event at " + std::to_string(at.ns()) +
                               " ns is before the clock (" + std::to_string(now_.ns()) + " ns)");
    }
    const std::uint64_t seq = next_sequence_++;
    queue_.push(Event{at, seq, kind, std::move(action)});
    return seq;
}

void Simulator::run_until(SimTime t)
{
    if (t < now_) {
        throw std::logic_error("Simulator::run_until: target time is before the clock");
    }
    while (!queue_.empty() && queue_.top().fire_at <= t) {
        // priority_queue::top is const; the event is popped before running so
        // the action may schedule more work.
        Event ev = std::move(const_cast<Event&>(queue_.top()));
        queue_.pop();
        now_ = ev.fire_at;
        if (hook_) {
            hook_(ev);
        }
        ++fired_;
        if (ev.action) {
            ev.action();
        }
    }
    now_ = t;
}

} // namespace ecnsim
