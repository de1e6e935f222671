#include "xct/event_model.hpp"

#include <charconv>
#include <cstdio>

namespace xct {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::optional<std::string> check_path(const FilePath& p) {
  if (p.value.empty()) return "empty path";
  if (p.value.find('\n') != std::string::npos) return "path contains a newline";
  return std::nullopt;
}

std::optional<std::string> check_session(const SessionKey& s) {
  if (s.thread_id.empty()) return "empty thread id";
  if (s.user_id.empty()) return "empty user id";
  return std::nullopt;
}

bool parse_uint(std::string_view text, unsigned& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::open: return "open";
    case EventKind::close: return "close";
    case EventKind::read: return "read";
    case EventKind::readv: return "readv";
    case EventKind::transfer: return "transfer";
  }
  return "unknown";
}

EventKind kind_of(const TraceEvent& e) { return static_cast<EventKind>(e.index()); }

Timestamp timestamp_of(const TraceEvent& e) {
  return std::visit([](const auto& ev) { return ev.ts; }, e);
}

const FilePath* path_of(const TraceEvent& e) {
  return std::visit(overloaded{
                        [](const ReadVEvent& ev) -> const FilePath* {
                          return ev.path ? &*ev.path : nullptr;
                        },
                        [](const auto& ev) -> const FilePath* { return &ev.path; },
                    },
                    e);
}

std::optional<std::string> validate_event(const TraceEvent& e) {
  return std::visit(
      overloaded{
          [](const OpenEvent& ev) -> std::optional<std::string> {
            if (auto v = check_session(ev.session)) return v;
            return check_path(ev.path);
          },
          [](const CloseEvent& ev) -> std::optional<std::string> {
            if (auto v = check_session(ev.session)) return v;
            return check_path(ev.path);
          },
          [](const ReadEvent& ev) -> std::optional<std::string> {
            if (auto v = check_session(ev.session)) return v;
            return check_path(ev.path);
          },
          [](const ReadVEvent& ev) -> std::optional<std::string> {
            if (ev.chunks.empty()) return "empty chunk sequence";
            if (auto v = check_session(ev.session)) return v;
            if (ev.path) return check_path(*ev.path);
            return std::nullopt;
          },
          [](const TransferEvent& ev) -> std::optional<std::string> {
            if (ev.size == 0) return "zero-byte transfer";
            return check_path(ev.path);
          },
      },
      e);
}

Day day_of(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

Day make_day(int year, unsigned month, unsigned day) {
  return Day{std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day}};
}

Timestamp make_timestamp(int year, unsigned month, unsigned day, unsigned hour, unsigned minute,
                         unsigned second) {
  return Timestamp{make_day(year, month, day)} + std::chrono::hours{hour} +
         std::chrono::minutes{minute} + std::chrono::seconds{second};
}

std::string format_day(Day d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<Day> parse_day(std::string_view text) {
  std::string_view y, m, d;
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    y = text.substr(0, 4);
    m = text.substr(5, 2);
    d = text.substr(8, 2);
  } else if (text.size() == 8) {
    y = text.substr(0, 4);
    m = text.substr(4, 2);
    d = text.substr(6, 2);
  } else {
    return std::nullopt;
  }
  unsigned yy = 0, mm = 0, dd = 0;
  if (!parse_uint(y, yy) || !parse_uint(m, mm) || !parse_uint(d, dd)) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(yy)},
                                        std::chrono::month{mm}, std::chrono::day{dd}};
  if (!ymd.ok()) return std::nullopt;
  return Day{ymd};
}

}  // namespace xct
