#include "ecnsim/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecnsim {

void AlphaConfig::validate() const
{
    if (gain_shift < 1) {
        throw std::invalid_argument("alpha: gain shift must be >= 1");
    }
    if (precision_bits <= gain_shift) {
        throw std::invalid_argument("alpha: precision bits must exceed the gain shift");
    }
    if (precision_bits + gain_shift > 40) {
        throw std::invalid_argument("alpha: precision too large for 64-bit arithmetic");
    }
    if (upscaled && toggle) {
        throw std::invalid_argument("alpha: upscaled storage cannot be combined with toggle-to-zero");
    }
}

AlphaState AlphaState::initial(const AlphaConfig& cfg, double fraction)
{
    cfg.validate();
    fraction = std::clamp(fraction, 0.0, 1.0);
    const auto full = static_cast<double>(cfg.full_scale());
    return AlphaState{static_cast<std::uint64_t>(std::floor(full * fraction)), cfg};
}

std::uint64_t decay_raw(std::uint64_t raw, const AlphaConfig& cfg)
{
    const std::uint64_t step = raw >> cfg.gain_shift;
    if (cfg.toggle && !cfg.upscaled) {
        return raw - min_not_zero(raw, step);
    }
    return raw - step;
}

std::uint64_t ce_increment(std::int64_t delivered_ce, std::int64_t delivered, const AlphaConfig& cfg)
{
    if (delivered <= 0) {
        throw std::invalid_argument("alpha: delivered must be positive");
    }
    if (delivered_ce <= 0) {
        return 0;
    }
    // Upscaled: alpha*2^(nn+g) gains F*2^(nn+g)*2^-g = F*2^nn.
    const int shift = cfg.upscaled ? cfg.precision_bits : cfg.precision_bits - cfg.gain_shift;
    const auto scaled = static_cast<std::uint64_t>(delivered_ce) << shift;
    return scaled / static_cast<std::uint64_t>(delivered);
}

AlphaState end_of_round_update(AlphaState state, const RoundAccumulator& acc)
{
    if (acc.delivered <= 0) {
        throw std::invalid_argument("end_of_round_update: no segments delivered this round");
    }
    if (acc.delivered_ce < 0 || acc.delivered_ce > acc.delivered) {
        throw std::invalid_argument("end_of_round_update: delivered_ce out of range");
    }
    state.raw = decay_raw(state.raw, state.cfg);
    if (acc.delivered_ce > 0) {
        const std::uint64_t inc = ce_increment(acc.delivered_ce, acc.delivered, state.cfg);
        state.raw = std::min(state.cfg.full_scale(), state.raw + inc);
    }
    return state;
}

double alpha_fraction(const AlphaState& state)
{
    return static_cast<double>(state.raw) / static_cast<double>(state.cfg.full_scale());
}

std::int64_t apply_reduction(std::int64_t cwnd_pkts, const AlphaState& state)
{
    const auto cwnd = static_cast<std::uint64_t>(std::max<std::int64_t>(cwnd_pkts, 0));
    const std::uint64_t reduction = ((cwnd * state.raw) >> state.cfg.scale_bits()) >> 1;
    const auto reduced = static_cast<std::int64_t>(cwnd - std::min(cwnd, reduction));
    return std::max<std::int64_t>(2, reduced);
}

} // namespace ecnsim
