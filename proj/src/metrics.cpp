#include "ecnsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecnsim {

std::optional<double> jain_index(std::span<const double> rates)
{
    if (rates.empty()) {
        return std::nullopt;
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double x : rates) {
        if (x < 0.0 || !std::isfinite(x)) {
            throw std::invalid_argument("jain_index: rates must be finite and non-negative");
        }
        sum += x;
        sum_sq += x * x;
    }
    if (sum_sq <= 0.0) {
        return std::nullopt;
    }
    return (sum * sum) / (static_cast<double>(rates.size()) * sum_sq);
}

GeoRatio geo_mean_ratio(std::span<const std::pair<double, double>> samples)
{
    GeoRatio out;
    double log_sum = 0.0;
    for (const auto& [r1, r2] : samples) {
        if (!(r1 > 0.0) || !(r2 > 0.0)) {
            ++out.excluded;
            continue;
        }
        log_sum += std::log(r1 / r2);
        ++out.used;
    }
    if (out.used > 0) {
        out.value = std::exp(log_sum / static_cast<double>(out.used));
    }
    return out;
}

double RunningStats::stddev() const
{
    return std::sqrt(variance());
}

double RunningStats::cov() const
{
    return mean_ != 0.0 ? stddev() / mean_ : 0.0;
}

void DelayHistogram::add(double us)
{
    const auto bin = static_cast<std::size_t>(std::max(0.0, us) / bin_us_);
    if (bin >= bins_.size()) {
        bins_.resize(bin + 1, 0);
    }
    ++bins_[bin];
    ++total_;
}

double DelayHistogram::quantile(double q) const
{
    if (total_ == 0) {
        return 0.0;
    }
    const auto rank = static_cast<std::int64_t>(std::ceil(std::clamp(q, 0.0, 1.0) * static_cast<double>(total_)));
    std::int64_t seen = 0;
    for (std::size_t i = 0; i < bins_.size(); ++i) {
        seen += bins_[i];
        if (seen >= std::max<std::int64_t>(rank, 1)) {
            return static_cast<double>(i + 1) * bin_us_;
        }
    }
    return static_cast<double>(bins_.size()) * bin_us_;
}

} // namespace ecnsim
