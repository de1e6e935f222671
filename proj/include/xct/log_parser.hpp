#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "xct/event_model.hpp"

namespace xct {

/// Keyphrase-anchored line classification. Precedence when several
/// keyphrases co-occur: transfer > readv > read > close > open.
std::optional<EventKind> classify_line(std::string_view line);

struct Malformed {
  std::string reason;
};

template <class Event>
using LineResult = std::variant<Event, Malformed>;

// Field extractors. Each expects a line already classified as its kind.
// `extra_pairs` (read only) receives the number of size@offset pairs beyond
// the first, which are ignored.
LineResult<ReadEvent> parse_read(std::string_view line, unsigned* extra_pairs = nullptr);
LineResult<ReadVEvent> parse_readv(std::string_view line);
LineResult<OpenEvent> parse_open(std::string_view line);
LineResult<CloseEvent> parse_close(std::string_view line);
LineResult<TransferEvent> parse_transfer(std::string_view line);

/// Leading "YYMMDD HH:MM:SS" timestamp, optionally wrapped in brackets.
std::optional<Timestamp> parse_line_timestamp(std::string_view line);

/// Tracks the most recent open per session so vector reads can be attributed
/// to a file. One resolver per log file.
class ReadVResolver {
 public:
  void observe_open(const OpenEvent& open) { latest_[open.session] = open.path; }
  /// Attaches a path if the session has an earlier open; returns false otherwise.
  bool resolve(ReadVEvent& readv) const;
  void reset() { latest_.clear(); }
  [[nodiscard]] std::size_t sessions() const { return latest_.size(); }

 private:
  std::unordered_map<SessionKey, FilePath> latest_;
};

struct ResolvedStream {
  std::vector<TraceEvent> events;
  std::size_t unresolved = 0;
};

/// Attaches to every ReadV the path of the most recent preceding Open with an
/// equal session. Order is preserved; events that cannot be resolved keep an
/// empty path and are counted.
ResolvedStream resolve_readv(std::vector<TraceEvent> stream);

struct ParseReport {
  std::uint64_t lines_total = 0;
  std::array<std::uint64_t, kEventKindCount> lines_matched{};
  std::array<std::uint64_t, kEventKindCount> malformed_by_kind{};
  std::array<std::uint64_t, kEventKindCount> out_of_range_by_kind{};
  std::uint64_t malformed = 0;
  std::uint64_t readv_unresolved = 0;
  std::uint64_t field_warnings = 0;
  std::uint64_t byte_volume_scanned = 0;
  std::uint64_t files_parsed = 0;
  std::vector<std::string> failed_files;

  [[nodiscard]] std::uint64_t matched(EventKind k) const {
    return lines_matched[static_cast<std::size_t>(k)];
  }
  [[nodiscard]] std::uint64_t matched_total() const;
  void merge(const ParseReport& other);
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads LF-terminated lines from a plain or gzip-compressed file (chosen by
/// the ".gz" suffix) without buffering the whole file.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  /// Next line without its terminator; false at end of input.
  bool next(std::string& line);
  /// Raw bytes consumed so far (decompressed for gzip input).
  [[nodiscard]] std::uint64_t bytes_read() const { return bytes_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::uint64_t bytes_ = 0;
};

using EventSink = std::function<void(TraceEvent&&)>;

/// Streams one log file through classification and field extraction,
/// resolving vector reads against opens seen earlier in the same file.
/// Events outside `range` are dropped. Throws IoError if the file cannot be
/// opened.
void stream_log_file(const std::filesystem::path& path, const TimeRange& range,
                     ParseReport& report, const EventSink& sink);

struct ParseOptions {
  /// Skip unreadable files (recording them in the report) instead of throwing.
  bool tolerant = false;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned workers = 0;
};

struct ParsedLogs {
  std::vector<TraceEvent> events;
  ParseReport report;
};

/// Parses every file and merges the per-file streams into one stream ordered
/// by timestamp; ties keep file order, then line order.
ParsedLogs parse_logs(std::span<const std::filesystem::path> files, const TimeRange& range,
                      const ParseOptions& options = {});

/// Daily log files ("xrootd-YYYYMMDD.log" or ".log.gz") in `dir`, sorted by
/// date, optionally restricted to a day range.
std::vector<std::filesystem::path> list_log_files(const std::filesystem::path& dir,
                                                  const std::optional<DayRange>& days = {});

/// Day encoded in a daily log file name, if it follows the convention.
std::optional<Day> log_file_day(const std::filesystem::path& file);

}  // namespace xct
