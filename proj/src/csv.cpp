#include "ecnsim/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace ecnsim {

std::string format_number(double v)
{
    if (!std::isfinite(v)) {
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

namespace {

std::string opt(const std::optional<double>& v)
{
    return v ? format_number(*v) : std::string();
}

const char* const kSummaryHeader = "axis_value,seed,jain,geo_ratio,utilization,mean_queue_us,p99_queue_us\n";

void summary_row(std::ostream& out, const std::string& axis, const std::optional<std::uint64_t>& seed,
                 const RunSummary& s, bool failed)
{
    out << axis << ',' << (seed ? std::to_string(*seed) : std::string()) << ',';
    if (failed) {
        out << ",,,,\n";
        return;
    }
    out << opt(s.jain) << ',' << opt(s.geo_ratio) << ',' << format_number(s.utilization) << ','
        << format_number(s.mean_queue_us) << ',' << format_number(s.p99_queue_us) << '\n';
}

} // namespace

void write_timeseries_csv(std::ostream& out, const RunResult& r)
{
    out << "time_ns,flow,cwnd,alpha,throughput_bps,marks,queue_delay_us\n";
    for (const TimeseriesRow& row : r.timeseries) {
        out << row.time.ns() << ',' << row.flow << ',' << row.cwnd << ',' << format_number(row.alpha) << ','
            << format_number(row.throughput_bps) << ',' << row.marks << ',' << format_number(row.queue_delay_us)
            << '\n';
    }
}

void write_summary_csv(std::ostream& out, const RunResult& r)
{
    out << kUtilizationNote << '\n' << kSummaryHeader;
    summary_row(out, "", r.seed, r.summary, false);
}

void write_summary_csv(std::ostream& out, const SweepTable& t)
{
    out << kUtilizationNote << '\n';
    for (const SweepRow& row : t.rows) {
        if (row.error) {
            out << "# failed: axis_value=" << format_number(row.axis_value) << " seed="
                << (row.seed ? std::to_string(*row.seed) : std::string()) << ": " << *row.error << '\n';
        }
    }
    out << kSummaryHeader;
    for (const SweepRow& row : t.rows) {
        summary_row(out, format_number(row.axis_value), row.seed, row.summary, row.error.has_value());
    }
    for (const SweepRow& row : t.means) {
        summary_row(out, format_number(row.axis_value), std::nullopt, row.summary, row.error.has_value());
    }
}

} // namespace ecnsim
