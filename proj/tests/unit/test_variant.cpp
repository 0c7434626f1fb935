#include "doctest.h"

#include "ecnsim/variant.hpp"

#include <stdexcept>
#include <string>

using namespace ecnsim;

TEST_CASE("default Linux DCTCP code")
{
    const ParsedVariant v = parse_variant("DCTCP-PS10Tu");
    CHECK(v.prr == PrrMode::Patched);
    CHECK(v.tso);
    const auto& d = std::get<DctcpParams>(v.cca);
    CHECK(d.alpha.precision_bits == 10);
    CHECK(d.alpha.gain_shift == 4);
    CHECK(d.alpha.toggle);
    CHECK_FALSE(d.alpha.upscaled);
}

TEST_CASE("lower-case p turns PRR off")
{
    const ParsedVariant v = parse_variant("DCTCP-pS10Tu");
    CHECK(v.prr == PrrMode::Off);
    CHECK(v.tso);
    CHECK(std::get<DctcpParams>(v.cca).alpha.toggle);
}

TEST_CASE("capital P means whatever PRR mode the run selects")
{
    CHECK(parse_variant("DCTCP-PS10Tu", PrrMode::LinuxBugged).prr == PrrMode::LinuxBugged);
    CHECK(parse_variant("DCTCP-PS10Tu", PrrMode::Rfc6937).prr == PrrMode::Rfc6937);
    CHECK(parse_variant("DCTCP-pS10Tu", PrrMode::LinuxBugged).prr == PrrMode::Off);
}

TEST_CASE("hi-res upscaled code")
{
    const ParsedVariant v = parse_variant("DCTCP-PS20tU");
    const auto& a = std::get<DctcpParams>(v.cca).alpha;
    CHECK(v.prr == PrrMode::Patched);
    CHECK(v.tso);
    CHECK(a.precision_bits == 20);
    CHECK_FALSE(a.toggle);
    CHECK(a.upscaled);
}

TEST_CASE("TSO letter")
{
    CHECK_FALSE(parse_variant("DCTCP-Ps10Tu").tso);
    CHECK_FALSE(parse_variant("DCTCP-ps20tU").tso);
}

TEST_CASE("bad codes are rejected with the accepted forms listed")
{
    for (const char* bad : {"DCTCP-XY", "DCTCP-PS30Tu", "DCTCP-PS10TU", "DCTCP-QS10Tu", "dctcp-PS10Tu",
                            "prague-2ms", "cubic-0", "cubic-1025", "cubic-7x", "reno", ""}) {
        CAPTURE(bad);
        try {
            parse_variant(bad);
            FAIL("accepted");
        } catch (const std::invalid_argument& e) {
            CHECK(std::string(e.what()).find("valid codes") != std::string::npos);
        }
    }
}

TEST_CASE("Prague and CUBIC codes")
{
    const ParsedVariant p = parse_variant("prague-1ms");
    CHECK(std::get<PragueParams>(p.cca).burst.max_burst == SimTime::from_sec(1.0 / 1024));
    CHECK(p.prr == PrrMode::Off);
    CHECK(std::get<PragueParams>(parse_variant("prague-250us").cca).burst.max_burst ==
          SimTime::from_sec(1.0 / 4096));
    CHECK(std::get<PragueParams>(parse_variant("prague-noburst").cca).burst.max_burst ==
          SimTime::from_sec(1.0 / 1048576));
    const ParsedVariant c = parse_variant("cubic-850");
    CHECK(std::get<CubicParams>(c.cca).beta_1024 == 850);
}

TEST_CASE("every tested code re-serializes to itself")
{
    CHECK(tested_dctcp_codes().size() == 13);
    for (const std::string& code : tested_dctcp_codes()) {
        CAPTURE(code);
        CHECK(format_variant(parse_variant(code)) == code);
        CHECK(format_variant(parse_variant(code, PrrMode::LinuxBugged)) == code);
    }
    for (const char* code : {"prague-1ms", "prague-250us", "prague-noburst", "cubic-717", "cubic-1024"}) {
        CHECK(format_variant(parse_variant(code)) == code);
    }
}

TEST_CASE("tested codes decode letter by letter")
{
    for (const std::string& code : tested_dctcp_codes()) {
        const ParsedVariant v = parse_variant(code);
        const auto& a = std::get<DctcpParams>(v.cca).alpha;
        CHECK((v.prr != PrrMode::Off) == (code[6] == 'P'));
        CHECK(v.tso == (code[7] == 'S'));
        CHECK(a.precision_bits == std::stoi(code.substr(8, 2)));
        CHECK(a.toggle == (code[10] == 'T'));
        CHECK(a.upscaled == (code[11] == 'U'));
    }
}

TEST_CASE("short names")
{
    CHECK(alias_for("DCTCP-PS10Tu") == "LoRes Toggle EWMA");
    CHECK(alias_for("DCTCP-PS10tu") == "LoRes EWMA");
    CHECK(alias_for("DCTCP-PS20tU") == "HiRes EWMA");
    CHECK(alias_for("cubic-717") == "cubic-717");
}
