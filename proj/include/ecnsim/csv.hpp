#pragma once

#include "ecnsim/scenario.hpp"

#include <ostream>
#include <vector>

namespace ecnsim {

// CSV layouts (header row first, comma separated, '\n' line ends):
//
// timeseries.csv  time_ns,flow,cwnd,alpha,throughput_bps,marks,queue_delay_us
//   one row per flow per sample window; throughput is receiver payload over
//   the window, marks are CE packets received in it, queue delay is the mean
//   sojourn of packets dequeued in it.
//
// summary.csv     axis_value,seed,jain,geo_ratio,utilization,mean_queue_us,p99_queue_us
//   preceded by one '#' line stating the utilization normalization. Empty
//   fields mean "not defined" (no seed on mean rows, no ratio for one flow,
//   errors on failed rows).

inline constexpr const char* kUtilizationNote =
    "# utilization = receiver payload bits / (capacity * 1448/1500 * measure)";

void write_timeseries_csv(std::ostream& out, const RunResult& r);

/// Summary for one run; axis_value is left empty.
void write_summary_csv(std::ostream& out, const RunResult& r);

/// Summary for a sweep: every repetition row, then the per-value means.
void write_summary_csv(std::ostream& out, const SweepTable& t);

/// Shortest round-trip decimal form, so output is byte-stable.
std::string format_number(double v);

} // namespace ecnsim
