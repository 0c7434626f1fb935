#pragma once

#include "ecnsim/cca.hpp"
#include "ecnsim/prr.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ecnsim {

/// A variant code resolved to what the sender runs.
///
/// DCTCP codes have the form DCTCP-<P|p><S|s><10|20><T|t><U|u>: an upper-case
/// letter switches the capability on (PRR, TSO, toggle-to-zero, upscaled
/// alpha), lower case switches it off. Prague codes are prague-1ms,
/// prague-250us and prague-noburst (max burst 2^-10, 2^-12 and 2^-20 s).
/// CUBIC codes are cubic-<beta_1024>.
struct ParsedVariant {
    CcaVariant cca;
    PrrMode prr = PrrMode::Patched;
    bool tso = true;
};

/// `prr_on` is the mode a capital P stands for (bugged Linux or patched).
/// Throws std::invalid_argument listing the accepted forms on a bad code.
ParsedVariant parse_variant(std::string_view code, PrrMode prr_on = PrrMode::Patched);

/// Inverse of parse_variant for any value it can produce.
std::string format_variant(const ParsedVariant& v);

/// The thirteen DCTCP variant codes covered by the comparison runs.
const std::vector<std::string>& tested_dctcp_codes();

/// Short names for the three DCTCP variants used in the AQM comparison runs.
std::string_view alias_for(std::string_view code);

} // namespace ecnsim
