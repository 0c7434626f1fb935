#include "ecnsim/scenario_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace ecnsim {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> words(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

// Splits "12.5ms" into 12.5 and "ms".
std::pair<double, std::string_view> number_and_unit(std::string_view text, const char* what)
{
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(text) + "'");
    }
    return {v, trim(std::string_view(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr)))};
}

std::int64_t parse_int(std::string_view text, const char* what)
{
    text = trim(text);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(text) + "'");
    }
    return v;
}

double parse_real(std::string_view text, const char* what)
{
    const auto [v, unit] = number_and_unit(text, what);
    if (!unit.empty()) {
        throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(text) + "'");
    }
    return v;
}

bool parse_switch(std::string_view text)
{
    if (text == "on" || text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "off" || text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw std::invalid_argument("expected on/off, got '" + std::string(text) + "'");
}

DelayMetric parse_metric(std::string_view text)
{
    if (text == "sojourn" || text == "soj") {
        return DelayMetric::Sojourn;
    }
    if (text == "est") {
        return DelayMetric::Est;
    }
    throw std::invalid_argument("metric must be sojourn or est, got '" + std::string(text) + "'");
}

MarkingShape parse_marking(std::string_view text)
{
    const auto w = words(text);
    if (w.size() == 2 && w[0] == "step") {
        return StepShape{parse_duration(w[1])};
    }
    if (w.size() == 3 && w[0] == "ramp") {
        return RampShape{parse_duration(w[1]), parse_duration(w[2])};
    }
    throw std::invalid_argument("marking must be 'step <delay>' or 'ramp <min> <max>'");
}

struct PendingFlow {
    std::string code;
    SimTime start{};
    std::optional<PrrMode> prr;
    std::optional<bool> tso;
};

PendingFlow parse_flow(std::string_view text)
{
    const auto w = words(text);
    if (w.empty()) {
        throw std::invalid_argument("flow needs a variant code");
    }
    PendingFlow f;
    f.code = std::string(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) {
        const auto eq = w[i].find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("flow option '" + std::string(w[i]) + "' is not key=value");
        }
        const auto key = w[i].substr(0, eq);
        const auto val = w[i].substr(eq + 1);
        if (key == "start") {
            f.start = parse_duration(val);
        } else if (key == "prr") {
            f.prr = parse_prr_mode(val);
        } else if (key == "tso") {
            f.tso = parse_switch(val);
        } else {
            throw std::invalid_argument("unknown flow option '" + std::string(key) + "'");
        }
    }
    return f;
}

} // namespace

SimTime parse_duration(std::string_view text)
{
    const auto [v, unit] = number_and_unit(text, "duration");
    double scale = 0.0;
    if (unit.empty() || unit == "s") {
        scale = 1.0;
    } else if (unit == "ms") {
        scale = 1e-3;
    } else if (unit == "us") {
        scale = 1e-6;
    } else if (unit == "ns") {
        scale = 1e-9;
    } else {
        throw std::invalid_argument("bad duration unit in '" + std::string(text) + "' (use s, ms, us or ns)");
    }
    if (v < 0) {
        throw std::invalid_argument("duration must be non-negative: '" + std::string(text) + "'");
    }
    return SimTime::from_sec(v * scale);
}

std::int64_t parse_rate(std::string_view text)
{
    const auto [v, unit] = number_and_unit(text, "rate");
    double scale = 0.0;
    if (unit.empty() || unit == "bps") {
        scale = 1.0;
    } else if (unit == "kbps") {
        scale = 1e3;
    } else if (unit == "Mbps") {
        scale = 1e6;
    } else if (unit == "Gbps") {
        scale = 1e9;
    } else {
        throw std::invalid_argument("bad rate unit in '" + std::string(text) + "' (use bps, kbps, Mbps or Gbps)");
    }
    if (!(v > 0)) {
        throw std::invalid_argument("rate must be positive: '" + std::string(text) + "'");
    }
    return static_cast<std::int64_t>(std::llround(v * scale));
}

ScenarioConfig parse_scenario(std::istream& in, const std::string& source)
{
    ScenarioConfig cfg;
    PrrMode prr_on = PrrMode::Patched;
    std::vector<std::pair<int, PendingFlow>> flows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) {
            s = s.substr(0, hash);
        }
        s = trim(s);
        if (s.empty()) {
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw ScenarioFileError(source + ":" + std::to_string(lineno) + ": expected 'key = value'", lineno);
        }
        const std::string key(trim(s.substr(0, eq)));
        const std::string_view val = trim(s.substr(eq + 1));
        try {
            if (key == "name") {
                cfg.name = std::string(val);
            } else if (key == "capacity") {
                cfg.capacity_bps = parse_rate(val);
            } else if (key == "rtt" || key == "base_rtt") {
                cfg.base_rtt = parse_duration(val);
            } else if (key == "metric") {
                cfg.aqm.metric = parse_metric(val);
            } else if (key == "marking") {
                cfg.aqm.shape = parse_marking(val);
            } else if (key == "drop_cap") {
                cfg.aqm.drop_cap_pkts = parse_int(val, "drop_cap");
            } else if (key == "prr") {
                prr_on = parse_prr_mode(val);
                if (prr_on == PrrMode::Off) {
                    throw std::invalid_argument("prr names what a capital P means; use a lower-case p for off");
                }
            } else if (key == "warmup") {
                cfg.warmup = parse_duration(val);
            } else if (key == "measure") {
                cfg.measure = parse_duration(val);
            } else if (key == "duration") {
                cfg.duration = parse_duration(val);
            } else if (key == "sample_window") {
                cfg.sample_window = static_cast<int>(parse_int(val, "sample_window"));
            } else if (key == "seed") {
                cfg.seed = static_cast<std::uint64_t>(parse_int(val, "seed"));
            } else if (key == "start_jitter") {
                cfg.start_jitter = parse_duration(val);
            } else if (key == "send_jitter") {
                cfg.send_jitter = parse_duration(val);
            } else if (key == "nic_factor") {
                cfg.nic_rate_factor = parse_real(val, "nic_factor");
            } else if (key == "burst_cap") {
                cfg.burst_cap_segments = parse_int(val, "burst_cap");
            } else if (key == "max_burst") {
                cfg.max_burst = parse_duration(val);
            } else if (key == "initial_alpha") {
                cfg.initial_alpha = parse_real(val, "initial_alpha");
            } else if (key == "flow") {
                flows.emplace_back(lineno, parse_flow(val));
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw ScenarioFileError(source + ":" + std::to_string(lineno) + ": " + e.what(), lineno);
        }
    }
    for (const auto& [at, f] : flows) {
        try {
            FlowSpec spec = make_flow(f.code, f.start, f.prr.value_or(prr_on));
            if (f.prr) {
                spec.variant.prr = *f.prr;
            }
            if (f.tso) {
                spec.variant.tso = *f.tso;
            }
            cfg.flows.push_back(std::move(spec));
        } catch (const std::invalid_argument& e) {
            throw ScenarioFileError(source + ":" + std::to_string(at) + ": " + e.what(), at);
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioFileError(source + ": " + e.what());
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ScenarioFileError("cannot open scenario file '" + path + "'");
    }
    return parse_scenario(in, path);
}

} // namespace ecnsim
