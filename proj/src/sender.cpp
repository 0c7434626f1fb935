#include "ecnsim/sender.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecnsim {

std::int64_t burst_size(std::int64_t cwnd, SimTime srtt, const BurstPolicy& policy)
{
    if (srtt <= SimTime{}) {
        throw std::invalid_argument("burst_size: srtt must be positive");
    }
    // max_burst * cwnd / srtt; both times in ns so the ratio is exact.
    const __int128 num = static_cast<__int128>(policy.max_burst.ns()) * std::max<std::int64_t>(cwnd, 0);
    const auto segs = static_cast<std::int64_t>(num / srtt.ns());
    return std::max<std::int64_t>(1, std::min(policy.cap_segments, segs));
}

TcpSender::TcpSender(SenderConfig cfg)
    : cfg_(std::move(cfg)), cca_(cfg_.cca, cfg_.initial_alpha)
{
    if (cfg_.initial_cwnd < 2) {
        throw std::invalid_argument("sender: initial cwnd must be >= 2");
    }
    if (cfg_.nic_rate_bps <= 0) {
        throw std::invalid_argument("sender: NIC rate must be positive");
    }
    if (const auto* p = std::get_if<PragueParams>(&cfg_.cca)) {
        cfg_.burst = p->burst;
    }
    cfg_.burst.validate();
    s_.cwnd = cfg_.initial_cwnd;
    s_.tso_enabled = cfg_.tso;
    s_.burst = cfg_.burst;
    s_.nic_rate_bps = cfg_.nic_rate_bps;
    prr_.mode = cfg_.prr;
    round_.reset(0);
}

std::int64_t TcpSender::current_burst_size() const
{
    if (s_.srtt <= SimTime{}) {
        return 1;
    }
    return burst_size(s_.cwnd, s_.srtt, s_.burst);
}

std::vector<PacketRecord> TcpSender::start(SimTime now)
{
    return try_transmit(now);
}

void TcpSender::update_srtt(SimTime sample)
{
    if (sample <= SimTime{}) {
        return;
    }
    if (s_.srtt <= SimTime{}) {
        s_.srtt = sample;
    } else {
        // srtt = 7/8 srtt + 1/8 sample
        s_.srtt = SimTime{s_.srtt.ns() - s_.srtt.ns() / 8 + sample.ns() / 8};
    }
}

void TcpSender::enter_cwr(SimTime now)
{
    const CongestionReaction r = cca_.on_congestion(s_);
    if (r.new_ssthresh <= 2 && s_.cwnd > 2) {
        ++floor_hits_;
    }
    s_.ssthresh = std::max<std::int64_t>(2, r.new_ssthresh);
    s_.in_cwr = true;
    s_.cwr_exit_seq = s_.snd_nxt;
    prr_ = enter_recovery(s_.cwnd, s_.inflight, s_.ssthresh, cfg_.prr);
    ++cwr_entries_;

    CwrEpisode ep;
    ep.start = now;
    ep.cwnd_at_entry = s_.cwnd;
    ep.pipe_at_entry = s_.inflight;
    ep.burst_at_entry = s_.tso_enabled ? std::min(current_burst_size(), s_.cwnd) : 1;
    ep.ssthresh = s_.ssthresh;
    ep.min_cwnd = s_.cwnd;
    episodes_.push_back(ep);
}

void TcpSender::exit_cwr(SimTime now)
{
    s_.in_cwr = false;
    if (!episodes_.empty() && !episodes_.back().completed) {
        CwrEpisode& ep = episodes_.back();
        ep.end = now;
        ep.cwnd_at_exit = s_.cwnd;
        ep.ssthresh = s_.ssthresh;
        ep.completed = true;
    }
    if (cfg_.prr != PrrMode::Off) {
        // tcp_end_cwnd_reduction: the window snaps back to ssthresh.
        s_.cwnd = s_.ssthresh;
    } else {
        s_.cwnd = std::max(s_.cwnd, s_.ssthresh);
    }
}

std::vector<PacketRecord> TcpSender::on_ack(const AckRecord& ack, SimTime now)
{
    if (ack.seq < s_.snd_una || ack.seq >= s_.snd_nxt) {
        throw std::logic_error("TcpSender::on_ack: ack outside the window");
    }
    s_.snd_una = ack.seq + 1;
    s_.inflight = std::max<std::int64_t>(0, s_.inflight - 1);
    ++acked_;
    if (ack.ce) {
        ++ce_acked_;
    }
    update_srtt(now - ack.sent_time);

    round_.record(ack.ce);
    if (s_.snd_una >= round_.next_seq) {
        cca_.on_round_end(round_);
        if (hooks_.on_round) {
            const auto& a = cca_.alpha();
            hooks_.on_round(AlphaSample{now, cfg_.flow_id, a ? a->raw : 0, cca_.alpha_fraction(),
                                        round_.delivered, round_.delivered_ce});
        }
        round_.reset(s_.snd_nxt);
    }

    if (s_.in_cwr && s_.snd_una > s_.cwr_exit_seq) {
        exit_cwr(now);
    }
    if (ack.ce && !s_.in_cwr) {
        enter_cwr(now);
    }

    if (s_.in_cwr) {
        if (cfg_.prr != PrrMode::Off) {
            const std::int64_t sndcnt = prr_on_ack(prr_, 1, s_.inflight);
            s_.cwnd = std::max<std::int64_t>(2, s_.inflight + sndcnt);
            if (hooks_.on_prr) {
                hooks_.on_prr(PrrSample{now, cfg_.flow_id, prr_.mode, s_.inflight, s_.ssthresh, sndcnt,
                                        prr_.prr_delivered, prr_.prr_out});
            }
        } else {
            if (cca_.increases_during_cwr()) {
                cca_.on_ack_increase(s_, ack.ce, now);
            }
            if (s_.cwnd > s_.ssthresh) {
                --s_.cwnd;
            }
        }
        CwrEpisode& ep = episodes_.back();
        ep.min_cwnd = std::min(ep.min_cwnd, s_.cwnd);
    } else {
        cca_.on_ack_increase(s_, ack.ce, now);
    }

    auto out = try_transmit(now);
    if (hooks_.on_ack) {
        hooks_.on_ack(SenderSample{now, cfg_.flow_id, s_.cwnd, s_.ssthresh, s_.inflight, s_.srtt,
                                   current_burst_size(), s_.deferred_allowance});
    }
    return out;
}

std::vector<PacketRecord> TcpSender::try_transmit(SimTime now)
{
    std::vector<PacketRecord> out;
    const std::int64_t allowed = s_.cwnd - s_.inflight;
    if (allowed <= 0) {
        s_.deferred_allowance = 0;
        return out;
    }
    std::int64_t n = allowed;
    if (s_.tso_enabled) {
        // Capped at cwnd so an idle flow can always send.
        const std::int64_t burst = std::min(current_burst_size(), s_.cwnd);
        if (allowed < burst) {
            s_.deferred_allowance = allowed;
            return out;
        }
        n = (allowed / burst) * burst;
    }
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        PacketRecord p;
        p.flow_id = cfg_.flow_id;
        p.seq = s_.snd_nxt++;
        p.sent_time = now;
        out.push_back(p);
    }
    s_.inflight += n;
    sent_ += n;
    if (s_.in_cwr) {
        prr_ = record_sent(prr_, n);
    }
    s_.deferred_allowance = allowed - n;
    return out;
}

void TcpSender::on_drop(std::int64_t /*seq*/)
{
    ++dropped_;
    s_.inflight = std::max<std::int64_t>(0, s_.inflight - 1);
}

} // namespace ecnsim
