#pragma once

#include <cstdint>
#include <string_view>

namespace ecnsim {

/// How the window is walked down to ssthresh during CWR.
///
/// Rfc6937 follows the RFC pseudocode (slow-start reduction bound).
/// LinuxBugged bounds the send count by the segments just delivered, so any
/// allowance the sender did not use on earlier acks is lost. Patched is the
/// fixed Linux form, which reaches the same counts as the RFC. Off bypasses
/// PRR entirely: the sender walks cwnd toward the target by at most one
/// segment per ack.
enum class PrrMode : std::uint8_t { Rfc6937, LinuxBugged, Patched, Off };

const char* to_string(PrrMode mode);
PrrMode parse_prr_mode(std::string_view text);

struct PrrState {
    std::int64_t prr_delivered = 0;
    std::int64_t prr_out = 0;
    std::int64_t recover_fs = 1;
    std::int64_t ssthresh = 2;
    PrrMode mode = PrrMode::Patched;

    std::int64_t surplus() const { return prr_delivered - prr_out; }
};

/// Zeroes the counters and snapshots recover_fs = max(pipe, 1).
PrrState enter_recovery(std::int64_t cwnd, std::int64_t pipe, std::int64_t ssthresh, PrrMode mode);

/// Segments the sender may emit in response to this ack. state.prr_delivered
/// must already include delivered_now. Never negative.
std::int64_t on_ack_sndcnt(const PrrState& state, std::int64_t delivered_now, std::int64_t pipe);

/// Accounts delivered_now and returns the send count; the sender sets cwnd = pipe + sndcnt.
std::int64_t prr_on_ack(PrrState& state, std::int64_t delivered_now, std::int64_t pipe);

PrrState record_sent(PrrState state, std::int64_t sent);

} // namespace ecnsim
