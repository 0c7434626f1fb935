#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ecnsim {

/// Jain's fairness index (sum x)^2 / (n * sum x^2). Empty when every rate is zero.
std::optional<double> jain_index(std::span<const double> rates);

struct GeoRatio {
    std::optional<double> value;  // empty when no window had two positive rates
    std::int64_t used = 0;
    std::int64_t excluded = 0;    // windows with a zero rate on either side
};

/// exp(mean(ln(r1/r2))) over windows; r1 is the established flow.
GeoRatio geo_mean_ratio(std::span<const std::pair<double, double>> samples);

/// Running mean/variance (Welford).
class RunningStats {
public:
    void add(double x)
    {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::int64_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_) : 0.0; }
    double stddev() const;
    /// Coefficient of variation (population stddev / mean); 0 for an empty or zero-mean series.
    double cov() const;

private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Fixed-resolution histogram for delay percentiles.
class DelayHistogram {
public:
    explicit DelayHistogram(double bin_us = 1.0) : bin_us_(bin_us) {}
    void add(double us);
    std::int64_t count() const { return total_; }
    /// Upper edge of the bin holding quantile q, in microseconds.
    double quantile(double q) const;

private:
    double bin_us_;
    std::vector<std::int64_t> bins_;
    std::int64_t total_ = 0;
};

} // namespace ecnsim
