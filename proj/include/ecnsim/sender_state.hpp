#pragma once

#include "ecnsim/sim_time.hpp"

#include <cstdint>
#include <optional>

namespace ecnsim {

/// TSO burst limit: bursts last at most max_burst at the flow's packet rate.
struct BurstPolicy {
    SimTime max_burst = SimTime::from_ms(1);
    std::int64_t cap_segments = 44;

    void validate() const;
    bool operator==(const BurstPolicy&) const = default;
};

/// CUBIC epoch, reset at each congestion reaction.
struct CubicEpoch {
    double w_max = 0.0;
    double k_sec = 0.0;
    std::optional<SimTime> start;
};

/// Window and round bookkeeping for one flow. Counts are in segments.
struct SenderState {
    std::int64_t cwnd = 10;
    std::int64_t ssthresh = INT64_MAX / 4;  // "infinite" until the first reaction
    SimTime srtt{};
    std::int64_t inflight = 0;
    std::int64_t snd_cwnd_cnt = 0;

    std::int64_t snd_nxt = 0;   // next segment to send
    std::int64_t snd_una = 0;   // lowest unacknowledged segment

    bool in_cwr = false;
    std::int64_t cwr_exit_seq = 0;  // CWR ends once this segment is acked

    bool tso_enabled = true;
    BurstPolicy burst;
    std::int64_t deferred_allowance = 0;
    std::int64_t nic_rate_bps = 0;

    CubicEpoch cubic;

    bool in_slow_start() const { return cwnd < ssthresh; }
};

} // namespace ecnsim
