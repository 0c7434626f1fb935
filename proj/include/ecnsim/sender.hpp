#pragma once

#include "ecnsim/aqm.hpp"
#include "ecnsim/cca.hpp"
#include "ecnsim/prr.hpp"
#include "ecnsim/sender_state.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ecnsim {

/// Segments per TSO burst: max_burst * cwnd / srtt, clamped to [1, cap].
/// Throws std::invalid_argument unless srtt > 0.
std::int64_t burst_size(std::int64_t cwnd, SimTime srtt, const BurstPolicy& policy);

/// Per-segment acknowledgement with an exact CE echo.
struct AckRecord {
    std::int64_t seq = 0;
    bool ce = false;
    SimTime sent_time{};
};

struct SenderConfig {
    FlowId flow_id = 0;
    CcaVariant cca = DctcpParams{};
    PrrMode prr = PrrMode::Patched;
    bool tso = true;
    BurstPolicy burst;
    std::int64_t nic_rate_bps = 2'000'000'000;
    std::int64_t initial_cwnd = 10;
    double initial_alpha = 1.0;
};

/// One CWR episode, from the reacting ack to the ack that ends it.
struct CwrEpisode {
    SimTime start{};
    SimTime end{};
    std::int64_t cwnd_at_entry = 0;
    std::int64_t pipe_at_entry = 0;
    std::int64_t burst_at_entry = 0;  // TSO burst size in force when the episode began
    std::int64_t ssthresh = 0;
    std::int64_t min_cwnd = 0;
    std::int64_t cwnd_at_exit = 0;  // before the window is restored to ssthresh
    bool completed = false;
};

struct SenderSample {
    SimTime time;
    FlowId flow;
    std::int64_t cwnd;
    std::int64_t ssthresh;
    std::int64_t pipe;
    SimTime srtt;
    std::int64_t burst_size;
    std::int64_t deferred;
};

struct AlphaSample {
    SimTime time;
    FlowId flow;
    std::uint64_t raw;
    double alpha_fraction;
    std::int64_t delivered;
    std::int64_t delivered_ce;
};

struct PrrSample {
    SimTime time;
    FlowId flow;
    PrrMode mode;
    std::int64_t pipe;
    std::int64_t ssthresh;
    std::int64_t sndcnt;
    std::int64_t prr_delivered;
    std::int64_t prr_out;
};

struct SenderHooks {
    std::function<void(const SenderSample&)> on_ack;
    std::function<void(const AlphaSample&)> on_round;
    std::function<void(const PrrSample&)> on_prr;
};

/// Ack-clocked bulk sender with TSO deferral, CWR handling and PRR.
///
/// The sender never owns a clock: callers pass `now`, and the segments it
/// returns are handed to the NIC in order.
class TcpSender {
public:
    explicit TcpSender(SenderConfig cfg);

    /// First transmission at flow start.
    std::vector<PacketRecord> start(SimTime now);

    /// Process one ack; returns the segments released by it.
    std::vector<PacketRecord> on_ack(const AckRecord& ack, SimTime now);

    /// Sends whatever cwnd and the TSO rule allow right now.
    std::vector<PacketRecord> try_transmit(SimTime now);

    /// The network dropped a segment (queue cap). No loss recovery is modelled;
    /// the segment simply leaves the pipe.
    void on_drop(std::int64_t seq);

    const SenderState& state() const { return s_; }
    SenderState& mutable_state() { return s_; }
    const SenderConfig& config() const { return cfg_; }
    const CongestionControl& cca() const { return cca_; }
    const PrrState& prr() const { return prr_; }
    const std::vector<CwrEpisode>& episodes() const { return episodes_; }

    std::int64_t sent() const { return sent_; }
    std::int64_t acked() const { return acked_; }
    std::int64_t ce_acked() const { return ce_acked_; }
    std::int64_t dropped() const { return dropped_; }
    std::int64_t cwr_entries() const { return cwr_entries_; }
    std::int64_t floor_hits() const { return floor_hits_; }

    /// Burst size at the current cwnd and srtt (1 before the first RTT sample).
    std::int64_t current_burst_size() const;

    void set_hooks(SenderHooks hooks) { hooks_ = std::move(hooks); }

private:
    void enter_cwr(SimTime now);
    void exit_cwr(SimTime now);
    void update_srtt(SimTime sample);

    SenderConfig cfg_;
    SenderState s_;
    CongestionControl cca_;
    PrrState prr_;
    RoundAccumulator round_;
    std::vector<CwrEpisode> episodes_;
    SenderHooks hooks_;

    std::int64_t sent_ = 0;
    std::int64_t acked_ = 0;
    std::int64_t ce_acked_ = 0;
    std::int64_t dropped_ = 0;
    std::int64_t cwr_entries_ = 0;
    std::int64_t floor_hits_ = 0;
};

} // namespace ecnsim
