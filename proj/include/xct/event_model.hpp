#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xct {

/// Absolute instant at one-second resolution (seconds since the Unix epoch).
using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;
using Day = std::chrono::sys_days;
using Bytes = std::uint64_t;

/// (thread id, user id) pair identifying the server session that issued a request.
struct SessionKey {
  std::string thread_id;
  std::string user_id;

  friend bool operator==(const SessionKey&, const SessionKey&) = default;
  friend auto operator<=>(const SessionKey&, const SessionKey&) = default;
};

/// Path of a file relative to the storage namespace; compared byte-wise.
struct FilePath {
  std::string value;

  friend bool operator==(const FilePath&, const FilePath&) = default;
  friend auto operator<=>(const FilePath&, const FilePath&) = default;
};

/// One size@offset pair.
struct ReadChunk {
  Bytes size = 0;
  Bytes offset = 0;

  friend bool operator==(const ReadChunk&, const ReadChunk&) = default;
};

struct OpenEvent {
  Timestamp ts;
  SessionKey session;
  FilePath path;

  friend bool operator==(const OpenEvent&, const OpenEvent&) = default;
};

struct CloseEvent {
  Timestamp ts;
  SessionKey session;
  FilePath path;

  friend bool operator==(const CloseEvent&, const CloseEvent&) = default;
};

struct ReadEvent {
  Timestamp ts;
  SessionKey session;
  FilePath path;
  ReadChunk chunk;

  friend bool operator==(const ReadEvent&, const ReadEvent&) = default;
};

/// Vector read. The log line carries no filename; `path` stays empty until
/// the session is correlated with an earlier open.
struct ReadVEvent {
  Timestamp ts;
  SessionKey session;
  std::optional<FilePath> path;
  std::vector<ReadChunk> chunks;

  friend bool operator==(const ReadVEvent&, const ReadVEvent&) = default;
};

/// Whole-file fetch into the cache (a cache miss in the source system).
struct TransferEvent {
  Timestamp ts;
  FilePath path;
  Bytes size = 0;

  friend bool operator==(const TransferEvent&, const TransferEvent&) = default;
};

using TraceEvent = std::variant<OpenEvent, CloseEvent, ReadEvent, ReadVEvent, TransferEvent>;

enum class EventKind : std::uint8_t { open = 0, close, read, readv, transfer };

inline constexpr std::size_t kEventKindCount = 5;
inline constexpr std::array<EventKind, kEventKindCount> kAllEventKinds = {
    EventKind::open, EventKind::close, EventKind::read, EventKind::readv, EventKind::transfer};

std::string_view to_string(EventKind kind);

EventKind kind_of(const TraceEvent& e);
Timestamp timestamp_of(const TraceEvent& e);

/// Path the event refers to, or nullptr for an unresolved vector read.
const FilePath* path_of(const TraceEvent& e);

/// Returns std::nullopt when every invariant holds, otherwise a description
/// of the first violation found.
std::optional<std::string> validate_event(const TraceEvent& e);

// Calendar helpers. All times are UTC.

Day day_of(Timestamp ts);
Timestamp make_timestamp(int year, unsigned month, unsigned day, unsigned hour = 0,
                         unsigned minute = 0, unsigned second = 0);
Day make_day(int year, unsigned month, unsigned day);

/// "YYYY-MM-DD"
std::string format_day(Day d);
/// Parses "YYYY-MM-DD" or "YYYYMMDD".
std::optional<Day> parse_day(std::string_view text);

/// Closed range of calendar days.
struct DayRange {
  Day first;
  Day last;

  [[nodiscard]] std::int64_t days() const { return (last - first).count() + 1; }
  [[nodiscard]] Timestamp begin() const { return Timestamp{first}; }
  /// Last second of the last day.
  [[nodiscard]] Timestamp end() const {
    return Timestamp{last} + std::chrono::hours{24} - std::chrono::seconds{1};
  }
};

/// Closed interval of instants.
struct TimeRange {
  Timestamp start = Timestamp::min();
  Timestamp end = Timestamp::max();

  [[nodiscard]] bool contains(Timestamp ts) const { return start <= ts && ts <= end; }
  static TimeRange everything() { return {}; }
};

}  // namespace xct

template <>
struct std::hash<xct::FilePath> {
  std::size_t operator()(const xct::FilePath& p) const noexcept {
    return std::hash<std::string>{}(p.value);
  }
};

template <>
struct std::hash<xct::SessionKey> {
  std::size_t operator()(const xct::SessionKey& k) const noexcept {
    std::size_t h = std::hash<std::string>{}(k.thread_id);
    return h ^ (std::hash<std::string>{}(k.user_id) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};
