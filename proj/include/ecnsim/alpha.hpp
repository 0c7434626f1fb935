#pragma once

#include <cstdint>

namespace ecnsim {

/// Fixed-point layout of DCTCP's congestion average.
///
/// precision_bits (nn) sets full scale at 2^nn; gain_shift (g) sets the EWMA
/// gain to 2^-g. toggle selects the min_not_zero decay that forces small
/// values to zero. upscaled stores alpha premultiplied by 2^g so the decay
/// shift does not truncate.
struct AlphaConfig {
    int precision_bits = 10;
    int gain_shift = 4;
    bool toggle = true;
    bool upscaled = false;

    void validate() const;

    /// Raw value that represents alpha = 1.
    std::uint64_t full_scale() const
    {
        return std::uint64_t{1} << (upscaled ? precision_bits + gain_shift : precision_bits);
    }

    int scale_bits() const { return upscaled ? precision_bits + gain_shift : precision_bits; }

    bool operator==(const AlphaConfig&) const = default;
};

struct AlphaState {
    std::uint64_t raw = 0;
    AlphaConfig cfg;

    /// State with alpha at `fraction` of full scale (Linux starts DCTCP at 1).
    static AlphaState initial(const AlphaConfig& cfg, double fraction = 1.0);
};

/// Per-round delivery counts, closed when the ack covers next_seq.
struct RoundAccumulator {
    std::int64_t delivered = 0;
    std::int64_t delivered_ce = 0;
    std::int64_t next_seq = 0;

    void record(bool ce)
    {
        ++delivered;
        if (ce) {
            ++delivered_ce;
        }
    }

    void reset(std::int64_t next)
    {
        delivered = 0;
        delivered_ce = 0;
        next_seq = next;
    }
};

/// Smaller nonzero of the two; the other if one is zero; zero if both are.
constexpr std::uint64_t min_not_zero(std::uint64_t a, std::uint64_t b)
{
    if (a == 0) {
        return b;
    }
    if (b == 0) {
        return a;
    }
    return a < b ? a : b;
}

/// One EWMA step at the end of a round, in kernel integer arithmetic.
/// Throws std::invalid_argument when acc.delivered is zero.
AlphaState end_of_round_update(AlphaState state, const RoundAccumulator& acc);

/// Exact decay half of the update, without the CE increment.
std::uint64_t decay_raw(std::uint64_t raw, const AlphaConfig& cfg);

/// Increment added for delivered_ce of delivered; truncating division.
std::uint64_t ce_increment(std::int64_t delivered_ce, std::int64_t delivered, const AlphaConfig& cfg);

double alpha_fraction(const AlphaState& state);

/// cwnd - alpha*cwnd/2 with the kernel's shifts, floored at 2 segments.
std::int64_t apply_reduction(std::int64_t cwnd_pkts, const AlphaState& state);

} // namespace ecnsim
