#pragma once

#include "ecnsim/scenario.hpp"

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ecnsim {

/// Bad or unreadable scenario file. `line` is 0 when the error is not tied to one.
class ScenarioFileError : public std::runtime_error {
public:
    ScenarioFileError(const std::string& what, int line = 0) : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// "50ms", "250us", "1.5s", "1000ns". A bare number is seconds.
SimTime parse_duration(std::string_view text);

/// "200Mbps", "5Gbps", "64kbps", "1000bps". A bare number is bits/s.
std::int64_t parse_rate(std::string_view text);

/// Reads the key = value format:
///
///   name = prr_bug_wan
///   capacity = 200Mbps
///   rtt = 50ms
///   metric = sojourn            # or est
///   marking = step 1ms          # or: ramp 2ms 4ms
///   prr = bugged                # what a capital P means: bugged, patched, rfc6937
///   warmup = 20s
///   measure = 40s
///   flow = DCTCP-PS10Tu start=0s
///   flow = DCTCP-PS10Tu start=5s prr=patched tso=off
///
/// Other keys: duration, sample_window, seed, start_jitter, send_jitter, nic_factor,
/// burst_cap, max_burst, initial_alpha, drop_cap. '#' starts a comment.
ScenarioConfig parse_scenario(std::istream& in, const std::string& source = "<input>");

/// Opens and parses `path`; throws ScenarioFileError if it cannot be read.
ScenarioConfig load_scenario(const std::string& path);

} // namespace ecnsim
