#include "xct/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace xct {

namespace {

struct Quantity {
  double number;
  std::string_view suffix;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Quantity split_quantity(std::string_view text) {
  text = trim(text);
  std::size_t i = 0;
  while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.' ||
                             text[i] == 'e' || text[i] == 'E' || text[i] == '+' || text[i] == '-')) {
    // Stop at an exponent marker that is not followed by a digit or sign.
    if ((text[i] == 'e' || text[i] == 'E') &&
        (i + 1 >= text.size() || !(std::isdigit(static_cast<unsigned char>(text[i + 1])) ||
                                   text[i + 1] == '+' || text[i + 1] == '-'))) {
      break;
    }
    ++i;
  }
  const std::string number{text.substr(0, i)};
  if (number.empty()) throw BadValue("expected a number in '" + std::string{text} + "'");
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(number, &used);
  } catch (const std::exception&) {
    throw BadValue("bad number '" + number + "'");
  }
  if (used != number.size() || !std::isfinite(value)) throw BadValue("bad number '" + number + "'");
  return {value, trim(text.substr(i))};
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view text, Parse parse) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) throw BadValue("empty list");
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw BadValue("range needs start:stop:step");
    const T start = parse(text.substr(0, a));
    const T stop = parse(text.substr(a + 1, b - a - 1));
    const T step = parse(text.substr(b + 1));
    if (step <= T{} || stop < start) throw BadValue("range needs step > 0 and stop >= start");
    for (T v = start; v <= stop; v += step) out.push_back(v);
    return out;
  }
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Bytes parse_bytes(std::string_view text) {
  const auto [number, suffix] = split_quantity(text);
  double mult = 1.0;
  std::string unit;
  for (char c : suffix) unit += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (unit.empty() || unit == "B") {
    mult = 1.0;
  } else if (unit == "KB") {
    mult = 1e3;
  } else if (unit == "MB") {
    mult = 1e6;
  } else if (unit == "GB") {
    mult = 1e9;
  } else if (unit == "TB") {
    mult = 1e12;
  } else if (unit == "PB") {
    mult = 1e15;
  } else {
    throw BadValue("unknown size unit '" + std::string{suffix} + "'");
  }
  const double bytes = number * mult;
  if (bytes < 0 || bytes > 1.8e19) throw BadValue("size out of range: " + std::string{text});
  return static_cast<Bytes>(std::llround(bytes));
}

Duration parse_duration(std::string_view text) {
  const auto [number, suffix] = split_quantity(text);
  double secs = 0.0;
  if (suffix.empty() || suffix == "s") {
    secs = number;
  } else if (suffix == "m" || suffix == "min") {
    secs = number * 60.0;
  } else if (suffix == "h") {
    secs = number * 3600.0;
  } else if (suffix == "d") {
    secs = number * 86400.0;
  } else {
    throw BadValue("unknown duration unit '" + std::string{suffix} + "'");
  }
  if (secs < 0) throw BadValue("negative duration");
  return Duration{std::llround(secs)};
}

std::vector<Bytes> parse_byte_list(std::string_view text) {
  return parse_list<Bytes>(text, parse_bytes);
}

std::vector<Duration> parse_duration_list(std::string_view text) {
  return parse_list<Duration>(text, parse_duration);
}

DayRange parse_day_range(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  const auto first = parse_day(text.substr(0, colon));
  const auto last = colon == std::string_view::npos ? first : parse_day(text.substr(colon + 1));
  if (!first || !last) throw BadValue("bad day range '" + std::string{text} + "'");
  if (*last < *first) throw BadValue("day range ends before it starts");
  return {*first, *last};
}

std::string format_real(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace xct
