#include "ecnsim/variant.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ecnsim {

namespace {

const char* const kValidForms =
    "valid codes: DCTCP-<P|p><S|s><10|20><T|t><U|u> (e.g. DCTCP-PS10Tu, DCTCP-pS20tU), "
    "prague-1ms, prague-250us, prague-noburst, cubic-<beta 1..1024> (e.g. cubic-717)";

[[noreturn]] void bad_code(std::string_view code, const std::string& why)
{
    throw std::invalid_argument("unknown variant code '" + std::string(code) + "': " + why + "; " + kValidForms);
}

bool flag_letter(char c, char upper, std::string_view code)
{
    if (c == upper) {
        return true;
    }
    if (c == upper - 'A' + 'a') {
        return false;
    }
    bad_code(code, std::string("expected '") + upper + "' or '" + static_cast<char>(upper - 'A' + 'a') + "'");
}

struct PragueBurst {
    std::string_view suffix;
    int exponent;
};

constexpr PragueBurst kPragueBursts[] = {
    {"1ms", 10},
    {"250us", 12},
    {"noburst", 20},
};

SimTime prague_burst_time(int exponent)
{
    return SimTime::from_sec(std::ldexp(1.0, -exponent));
}

} // namespace

ParsedVariant parse_variant(std::string_view code, PrrMode prr_on)
{
    if (code.starts_with("DCTCP-")) {
        const std::string_view body = code.substr(6);
        if (body.size() != 6) {
            bad_code(code, "DCTCP codes carry exactly six characters after the dash");
        }
        ParsedVariant v;
        const bool prr = flag_letter(body[0], 'P', code);
        v.tso = flag_letter(body[1], 'S', code);
        const std::string_view nn = body.substr(2, 2);
        AlphaConfig a;
        if (nn == "10") {
            a.precision_bits = 10;
        } else if (nn == "20") {
            a.precision_bits = 20;
        } else {
            bad_code(code, "precision must be 10 or 20");
        }
        a.toggle = flag_letter(body[4], 'T', code);
        a.upscaled = flag_letter(body[5], 'U', code);
        if (a.toggle && a.upscaled) {
            bad_code(code, "toggle-to-zero and upscaled storage are never combined");
        }
        v.prr = prr ? prr_on : PrrMode::Off;
        v.cca = DctcpParams{a};
        return v;
    }
    if (code.starts_with("prague-")) {
        const std::string_view suffix = code.substr(7);
        for (const auto& b : kPragueBursts) {
            if (suffix == b.suffix) {
                PragueParams p;
                p.burst.max_burst = prague_burst_time(b.exponent);
                return ParsedVariant{p, PrrMode::Off, true};
            }
        }
        bad_code(code, "unknown Prague burst setting");
    }
    if (code.starts_with("cubic-")) {
        const std::string_view digits = code.substr(6);
        int beta = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), beta);
        if (ec != std::errc{} || ptr != digits.data() + digits.size() || beta < 1 || beta > 1024) {
            bad_code(code, "CUBIC beta must be an integer in [1, 1024]");
        }
        return ParsedVariant{CubicParams{beta}, prr_on, true};
    }
    bad_code(code, "unrecognised family");
}

std::string format_variant(const ParsedVariant& v)
{
    if (const auto* d = std::get_if<DctcpParams>(&v.cca)) {
        std::string s = "DCTCP-";
        s += v.prr == PrrMode::Off ? 'p' : 'P';
        s += v.tso ? 'S' : 's';
        s += std::to_string(d->alpha.precision_bits);
        s += d->alpha.toggle ? 'T' : 't';
        s += d->alpha.upscaled ? 'U' : 'u';
        return s;
    }
    if (const auto* p = std::get_if<PragueParams>(&v.cca)) {
        for (const auto& b : kPragueBursts) {
            if (p->burst.max_burst == prague_burst_time(b.exponent)) {
                return "prague-" + std::string(b.suffix);
            }
        }
        throw std::invalid_argument("format_variant: Prague burst has no code");
    }
    return "cubic-" + std::to_string(std::get<CubicParams>(v.cca).beta_1024);
}

const std::vector<std::string>& tested_dctcp_codes()
{
    static const std::vector<std::string> codes = {
        "DCTCP-PS10Tu", "DCTCP-pS10Tu", "DCTCP-Ps10Tu", "DCTCP-PS20tU", "DCTCP-pS20tU",
        "DCTCP-PS10tu", "DCTCP-ps20tU", "DCTCP-Ps10tu", "DCTCP-Ps20tU", "DCTCP-pS10tu",
        "DCTCP-ps10tu", "DCTCP-ps10Tu", "DCTCP-Ps10tU",
    };
    return codes;
}

std::string_view alias_for(std::string_view code)
{
    if (code == "DCTCP-PS10Tu") {
        return "LoRes Toggle EWMA";
    }
    if (code == "DCTCP-PS10tu") {
        return "LoRes EWMA";
    }
    if (code == "DCTCP-PS20tU") {
        return "HiRes EWMA";
    }
    return code;
}

} // namespace ecnsim
