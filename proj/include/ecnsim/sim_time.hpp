#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace ecnsim {

/// Virtual time or duration in integer nanoseconds.
///
/// Used both as an absolute point on the simulation clock and as a span;
/// the simulator never needs negative values, but subtraction is allowed to
/// go negative so callers can detect ordering mistakes.
class SimTime {
public:
    constexpr SimTime() = default;
    constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}

    static constexpr SimTime from_ns(std::int64_t ns) { return SimTime{ns}; }
    static constexpr SimTime from_us(std::int64_t us) { return SimTime{us * 1000}; }
    static constexpr SimTime from_ms(std::int64_t ms) { return SimTime{ms * 1000000}; }
    static constexpr SimTime from_sec(double s) { return SimTime{static_cast<std::int64_t>(s * 1e9 + (s >= 0 ? 0.5 : -0.5))}; }
    static constexpr SimTime max() { return SimTime{std::numeric_limits<std::int64_t>::max()}; }

    constexpr std::int64_t ns() const { return ns_; }
    constexpr double us() const { return static_cast<double>(ns_) / 1e3; }
    constexpr double ms() const { return static_cast<double>(ns_) / 1e6; }
    constexpr double sec() const { return static_cast<double>(ns_) / 1e9; }

    constexpr SimTime operator+(SimTime o) const { return SimTime{ns_ + o.ns_}; }
    constexpr SimTime operator-(SimTime o) const { return SimTime{ns_ - o.ns_}; }
    constexpr SimTime& operator+=(SimTime o) { ns_ += o.ns_; return *this; }
    constexpr SimTime& operator-=(SimTime o) { ns_ -= o.ns_; return *this; }
    constexpr SimTime operator*(std::int64_t k) const { return SimTime{ns_ * k}; }

    constexpr auto operator<=>(const SimTime&) const = default;

private:
    std::int64_t ns_ = 0;
};

/// Time to serialize `bytes` onto a link of `rate_bps`, rounded to the nearest ns.
constexpr SimTime serialization_time(std::int64_t bytes, std::int64_t rate_bps)
{
    if (rate_bps <= 0) {
        throw std::invalid_argument("serialization_time: rate must be positive");
    }
    // bytes*8*1e9 overflows int64 only beyond ~1 GB per packet.
    const std::int64_t bits_ns = bytes * 8 * 1000000000LL;
    return SimTime{(bits_ns + rate_bps / 2) / rate_bps};
}

} // namespace ecnsim
