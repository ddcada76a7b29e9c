#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace cascade {

using Timestamp = std::chrono::sys_seconds;

// Parses ISO-8601 date-times and normalizes them to UTC at second
// resolution. Accepted forms:
//   YYYY-MM-DD
//   YYYY-MM-DDTHH:MM[:SS[.fff]][Z|+hh:mm|-hh:mm|+hhmm]
// A space is accepted in place of 'T'. A missing offset means UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_iso8601(Timestamp ts);

int utc_year(Timestamp ts);

}  // namespace cascade
