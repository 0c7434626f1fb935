#include "ecnsim/cca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecnsim {

void BurstPolicy::validate() const
{
    if (max_burst <= SimTime{}) {
        throw std::invalid_argument("burst policy: max burst must be positive");
    }
    if (cap_segments < 1) {
        throw std::invalid_argument("burst policy: cap must be at least one segment");
    }
}

void validate(const CcaVariant& v)
{
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, DctcpParams>) {
                p.alpha.validate();
            } else if constexpr (std::is_same_v<T, PragueParams>) {
                p.burst.validate();
            } else {
                if (p.beta_1024 < 1 || p.beta_1024 > 1024) {
                    throw std::invalid_argument("cubic: beta must be in [1, 1024]");
                }
            }
        },
        v);
}

CongestionReaction dctcp_on_ce_round_start(SenderState& s, const AlphaState& alpha)
{
    s.snd_cwnd_cnt = 0;
    return CongestionReaction{apply_reduction(s.cwnd, alpha), true};
}

void additive_increase(SenderState& s, std::int64_t acked)
{
    // tcp_cong_avoid_ai with w = cwnd
    const std::int64_t w = std::max<std::int64_t>(s.cwnd, 1);
    if (s.snd_cwnd_cnt >= w) {
        s.snd_cwnd_cnt = 0;
        ++s.cwnd;
    }
    s.snd_cwnd_cnt += acked;
    if (s.snd_cwnd_cnt >= w) {
        const std::int64_t delta = s.snd_cwnd_cnt / w;
        s.snd_cwnd_cnt -= delta * w;
        s.cwnd += delta;
    }
}

std::int64_t slow_start(SenderState& s, std::int64_t acked)
{
    const std::int64_t grown = std::min(s.cwnd + acked, s.ssthresh);
    acked -= grown - s.cwnd;
    s.cwnd = grown;
    return acked;
}

void prague_on_ack(SenderState& s, bool ce)
{
    if (ce) {
        return;
    }
    const std::int64_t before = s.cwnd;
    additive_increase(s, 1);
    if (s.in_cwr && s.cwnd > before) {
        s.ssthresh += s.cwnd - before;
    }
}

CongestionReaction cubic_on_ce(SenderState& s, int beta_1024)
{
    if (beta_1024 < 1 || beta_1024 > 1024) {
        throw std::invalid_argument("cubic_on_ce: beta out of range");
    }
    const std::int64_t ssthresh = std::max<std::int64_t>(2, (s.cwnd * beta_1024) >> 10);
    const double beta = static_cast<double>(beta_1024) / 1024.0;
    s.cubic.w_max = static_cast<double>(s.cwnd);
    s.cubic.k_sec = std::cbrt(s.cubic.w_max * (1.0 - beta) / kCubicC);
    s.cubic.start.reset();
    s.snd_cwnd_cnt = 0;
    return CongestionReaction{ssthresh, true};
}

std::int64_t cubic_growth(const SenderState& s, SimTime t_since_epoch)
{
    const double dt = t_since_epoch.sec() - s.cubic.k_sec;
    const double target = kCubicC * dt * dt * dt + s.cubic.w_max;
    // Small epsilon so exact integers computed through cbrt do not floor one below.
    return std::max<std::int64_t>(2, static_cast<std::int64_t>(std::floor(target + 1e-9)));
}

namespace {

void cubic_increase(SenderState& s, SimTime now)
{
    if (!s.cubic.start) {
        s.cubic.start = now;
        if (s.cubic.w_max <= static_cast<double>(s.cwnd)) {
            s.cubic.w_max = static_cast<double>(s.cwnd);
            s.cubic.k_sec = 0.0;
        }
    }
    const std::int64_t target = cubic_growth(s, now - *s.cubic.start);
    std::int64_t needed = 100 * s.cwnd;
    if (target > s.cwnd) {
        needed = std::max<std::int64_t>(1, s.cwnd / (target - s.cwnd));
    }
    if (++s.snd_cwnd_cnt >= needed) {
        s.snd_cwnd_cnt = 0;
        ++s.cwnd;
    }
}

} // namespace

CongestionControl::CongestionControl(CcaVariant variant, double initial_alpha)
    : variant_(std::move(variant))
{
    validate(variant_);
    if (const auto* d = std::get_if<DctcpParams>(&variant_)) {
        alpha_ = AlphaState::initial(d->alpha, initial_alpha);
    } else if (is_prague()) {
        alpha_ = AlphaState::initial(PragueParams::alpha_config(), initial_alpha);
    }
}

void CongestionControl::on_round_end(const RoundAccumulator& acc)
{
    if (alpha_ && acc.delivered > 0) {
        *alpha_ = end_of_round_update(*alpha_, acc);
    }
}

CongestionReaction CongestionControl::on_congestion(SenderState& s)
{
    if (const auto* c = std::get_if<CubicParams>(&variant_)) {
        return cubic_on_ce(s, c->beta_1024);
    }
    if (is_prague()) {
        // Same reduction as DCTCP, but the AI counter carries over.
        const std::int64_t carried = s.snd_cwnd_cnt;
        CongestionReaction r = dctcp_on_ce_round_start(s, *alpha_);
        s.snd_cwnd_cnt = carried;
        return r;
    }
    return dctcp_on_ce_round_start(s, *alpha_);
}

void CongestionControl::on_ack_increase(SenderState& s, bool ce, SimTime now)
{
    if (s.in_slow_start() && !s.in_cwr) {
        const std::int64_t left = slow_start(s, 1);
        if (left == 0) {
            return;
        }
    }
    if (is_prague()) {
        prague_on_ack(s, ce);
    } else if (is_cubic()) {
        cubic_increase(s, now);
    } else {
        additive_increase(s, 1);
    }
}

double CongestionControl::alpha_fraction() const
{
    return alpha_ ? ecnsim::alpha_fraction(*alpha_) : 0.0;
}

} // namespace ecnsim
