#include "ecnsim/prr.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ecnsim {

const char* to_string(PrrMode mode)
{
    switch (mode) {
    case PrrMode::Rfc6937: return "rfc6937";
    case PrrMode::LinuxBugged: return "bugged";
    case PrrMode::Patched: return "patched";
    case PrrMode::Off: return "off";
    }
    return "?";
}

PrrMode parse_prr_mode(std::string_view text)
{
    if (text == "rfc6937" || text == "rfc") {
        return PrrMode::Rfc6937;
    }
    if (text == "bugged" || text == "linux-bugged" || text == "linux_bugged") {
        return PrrMode::LinuxBugged;
    }
    if (text == "patched" || text == "fixed") {
        return PrrMode::Patched;
    }
    if (text == "off" || text == "none") {
        return PrrMode::Off;
    }
    throw std::invalid_argument("unknown PRR mode '" + std::string(text) +
                                "' (expected rfc6937, bugged, patched or off)");
}

PrrState enter_recovery(std::int64_t /*cwnd*/, std::int64_t pipe, std::int64_t ssthresh, PrrMode mode)
{
    if (ssthresh < 2) {
        throw std::invalid_argument("enter_recovery: ssthresh must be >= 2");
    }
    PrrState s;
    s.prr_delivered = 0;
    s.prr_out = 0;
    s.recover_fs = std::max<std::int64_t>(pipe, 1);
    s.ssthresh = ssthresh;
    s.mode = mode;
    return s;
}

std::int64_t on_ack_sndcnt(const PrrState& state, std::int64_t delivered_now, std::int64_t pipe)
{
    if (state.mode == PrrMode::Off) {
        throw std::logic_error("on_ack_sndcnt: PRR is off for this flow");
    }
    std::int64_t sndcnt = 0;
    if (pipe > state.ssthresh) {
        // Proportional part: ceil(prr_delivered * ssthresh / RecoverFS) - prr_out.
        const std::int64_t num = state.prr_delivered * state.ssthresh + state.recover_fs - 1;
        sndcnt = num / state.recover_fs - state.prr_out;
    } else {
        const std::int64_t delta = state.ssthresh - pipe;
        switch (state.mode) {
        case PrrMode::Rfc6937:
        case PrrMode::Patched:
            sndcnt = std::min(delta, std::max(state.surplus(), delivered_now) + 1);
            break;
        case PrrMode::LinuxBugged:
            sndcnt = std::min(delta, delivered_now + 1);
            break;
        case PrrMode::Off:
            break;
        }
    }
    return std::max<std::int64_t>(sndcnt, 0);
}

std::int64_t prr_on_ack(PrrState& state, std::int64_t delivered_now, std::int64_t pipe)
{
    state.prr_delivered += delivered_now;
    return on_ack_sndcnt(state, delivered_now, pipe);
}

PrrState record_sent(PrrState state, std::int64_t sent)
{
    if (sent < 0) {
        throw std::invalid_argument("record_sent: negative count");
    }
    state.prr_out += sent;
    return state;
}

} // namespace ecnsim
