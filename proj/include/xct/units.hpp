#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xct/event_model.hpp"

namespace xct {

class BadValue : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "40TB", "1.5GB", "512", "200000000B". Decimal multipliers: 1 KB = 1000 B.
Bytes parse_bytes(std::string_view text);

/// "1.2d", "28.8h", "30m", "45s"; a bare number is seconds.
Duration parse_duration(std::string_view text);

/// "40TB:60TB:2TB" (inclusive start:stop:step) or a comma-separated list.
std::vector<Bytes> parse_byte_list(std::string_view text);

/// "1d:10d:1d" or a comma-separated list of durations.
std::vector<Duration> parse_duration_list(std::string_view text);

/// "2021-08-01:2021-08-31" or a single day.
DayRange parse_day_range(std::string_view text);

/// Shortest "%.12g" rendering of a real.
std::string format_real(double value);

}  // namespace xct
