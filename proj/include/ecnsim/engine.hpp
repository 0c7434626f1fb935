#pragma once

#include "ecnsim/sim_time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <vector>

namespace ecnsim {

enum class EventKind : std::uint8_t {
    PacketArrival,
    PacketDeparture,
    AckArrival,
    Timer,
};

const char* to_string(EventKind kind);

struct Event {
    SimTime fire_at;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::Timer;
    std::function<void()> action;
};

/// Seeded generator shared by everything in one scenario.
///
/// mt19937_64 output is fixed by the standard, and the conversion to [0,1)
/// below uses only integer ops and one exact multiply, so the draw sequence
/// is identical across platforms and standard libraries.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed = 1) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform draw in [0, 1) with 53 bits of resolution.
    double uniform01()
    {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return gen_(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

/// Single-threaded discrete-event loop with a virtual nanosecond clock.
///
/// Events at equal times fire in the order they were scheduled.
class Simulator {
public:
    using FireHook = std::function<void(const Event&)>;

    SimTime now() const { return now_; }

    /// Queue `action` to fire at `at`. Throws std::logic_error if `at` is in the past.
    std::uint64_t schedule(SimTime at, EventKind kind, std::function<void()> action);

    std::uint64_t schedule_in(SimTime delay, EventKind kind, std::function<void()> action)
    {
        return schedule(now_ + delay, kind, std::move(action));
    }

    /// Fire every event with fire_at <= t, then leave the clock at t.
    void run_until(SimTime t);

    std::size_t pending() const { return queue_.size(); }
    std::uint64_t fired() const { return fired_; }

    /// Called just before each event's action runs.
    void set_fire_hook(FireHook hook) { hook_ = std::move(hook); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            if (a.fire_at != b.fire_at) {
                return a.fire_at > b.fire_at;
            }
            return a.sequence > b.sequence;
        }
    };

    SimTime now_{};
    std::uint64_t next_sequence_ = 0;
    std::uint64_t fired_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    FireHook hook_;
};

} // namespace ecnsim
