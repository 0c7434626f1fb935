#pragma once

// Congestion controls: DCTCP in every EWMA variant, a Prague-like scalable
// control (DCTCP with 20-bit upscaled alpha, additive increase during CWR and
// its own burst limit), and ECN-CUBIC.
//
// CUBIC uses W(t) = C*(t-K)^3 + W_max with C = 0.4 and t in seconds,
// K = cbrt(W_max*(1-beta)/C). No HyStart, no TCP-friendly region, no fast
// convergence.

#include "ecnsim/alpha.hpp"
#include "ecnsim/sender_state.hpp"

#include <cstdint>
#include <optional>
#include <variant>

namespace ecnsim {

inline constexpr double kCubicC = 0.4;

struct DctcpParams {
    AlphaConfig alpha;
    bool operator==(const DctcpParams&) const = default;
};

struct PragueParams {
    BurstPolicy burst;
    bool operator==(const PragueParams&) const = default;

    static AlphaConfig alpha_config() { return AlphaConfig{20, 4, false, true}; }
};

struct CubicParams {
    int beta_1024 = 717;
    bool operator==(const CubicParams&) const = default;
};

using CcaVariant = std::variant<DctcpParams, PragueParams, CubicParams>;

void validate(const CcaVariant& v);

struct CongestionReaction {
    std::int64_t new_ssthresh = 2;
    bool enter_cwr = false;
};

/// DCTCP reaction to the first CE echo of a round.
CongestionReaction dctcp_on_ce_round_start(SenderState& s, const AlphaState& alpha);

/// Prague additive increase: one segment per cwnd acks, skipping CE acks,
/// also during CWR. While in CWR the reduction target rises with cwnd.
void prague_on_ack(SenderState& s, bool ce);

/// ECN-CUBIC reaction: ssthresh = cwnd*beta/1024 and a fresh epoch.
CongestionReaction cubic_on_ce(SenderState& s, int beta_1024);

/// CUBIC target window `t_since_epoch` after the epoch began.
std::int64_t cubic_growth(const SenderState& s, SimTime t_since_epoch);

/// Reno-style increase: count acks, grow by one segment per cwnd acks.
void additive_increase(SenderState& s, std::int64_t acked);

/// Exponential growth toward ssthresh; returns acks left over for AI.
std::int64_t slow_start(SenderState& s, std::int64_t acked);

/// Per-flow congestion control, owning the alpha average where there is one.
class CongestionControl {
public:
    explicit CongestionControl(CcaVariant variant, double initial_alpha = 1.0);

    const CcaVariant& variant() const { return variant_; }

    bool is_prague() const { return std::holds_alternative<PragueParams>(variant_); }
    bool is_cubic() const { return std::holds_alternative<CubicParams>(variant_); }

    /// Prague keeps increasing during CWR; DCTCP and CUBIC do not.
    bool increases_during_cwr() const { return is_prague(); }

    /// End-of-round alpha update; no-op for CUBIC.
    void on_round_end(const RoundAccumulator& acc);

    /// Reaction to a CE echo while not in CWR.
    CongestionReaction on_congestion(SenderState& s);

    /// Window growth on a non-CWR ack (or any ack for Prague).
    void on_ack_increase(SenderState& s, bool ce, SimTime now);

    const std::optional<AlphaState>& alpha() const { return alpha_; }
    double alpha_fraction() const;

private:
    CcaVariant variant_;
    std::optional<AlphaState> alpha_;
};

} // namespace ecnsim
