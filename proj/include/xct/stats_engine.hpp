#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "xct/event_model.hpp"

namespace xct {

/// Per-file read-operation counts and read byte/offset totals. Every field is
/// an integer tally, so two ReadStats over disjoint parts of a stream merge
/// exactly.
struct ReadStats {
  std::map<FilePath, std::uint64_t> per_file_counts;
  /// Vector reads that could not be attributed to a file.
  std::uint64_t unresolved_ops = 0;
  std::uint64_t total_read_ops = 0;
  /// One sample per size@offset pair, including each vector-read chunk.
  std::uint64_t size_samples = 0;
  std::uint64_t total_bytes_read = 0;
  std::uint64_t total_offset = 0;

  void add(const TraceEvent& e);
  void merge(const ReadStats& other);

  [[nodiscard]] std::optional<double> mean_read_size() const;
  [[nodiscard]] std::optional<double> mean_offset() const;
  /// total_read_ops over distinct files with at least one read.
  [[nodiscard]] std::optional<double> mean_reads_per_file() const;

  friend bool operator==(const ReadStats&, const ReadStats&) = default;
};

/// A Read or ReadV is one operation against its path.
ReadStats count_reads_per_file(std::span<const TraceEvent> events);

struct ReadSizeSummary {
  std::uint64_t total_bytes_read = 0;
  std::optional<double> mean_read_size;
  std::optional<double> mean_offset;
};

ReadSizeSummary read_size_stats(std::span<const TraceEvent> events);

Bytes transfer_totals(std::span<const TraceEvent> events);

/// Transferred bytes per calendar day, in day order.
std::vector<std::pair<Day, Bytes>> transfer_totals_by_day(std::span<const TraceEvent> events);

struct LifetimeRecord {
  FilePath path;
  Timestamp start;
  Timestamp end;
  std::uint32_t opens = 1;
  /// False when no close followed the lifetime's opens; `end` is then the
  /// last open.
  bool complete = false;

  [[nodiscard]] Duration length() const { return end - start; }
  [[nodiscard]] double hours() const { return static_cast<double>(length().count()) / 3600.0; }

  friend bool operator==(const LifetimeRecord&, const LifetimeRecord&) = default;
};

struct Segmentation {
  /// Ordered by (start, path).
  std::vector<LifetimeRecord> records;
  /// Closes with no live lifetime for their path.
  std::uint64_t orphan_closes = 0;
};

inline constexpr Duration kDefaultLifetimeThreshold{103'680};  // 1.2 days

/// Groups each path's opens greedily: an open more than `threshold` after the
/// previous open of the same path starts a new lifetime. A lifetime ends at
/// the latest close seen before the next lifetime of that path starts.
Segmentation segment_lifetimes(std::span<const TraceEvent> events,
                               Duration threshold = kDefaultLifetimeThreshold);

std::optional<double> mean_lifetime_hours(std::span<const LifetimeRecord> records);

struct ThresholdPoint {
  Duration threshold;
  std::size_t lifetimes = 0;
  std::optional<double> mean_hours;
};

struct ThresholdSweep {
  std::vector<ThresholdPoint> points;
  /// Mean of the per-threshold means (thresholds with no lifetimes skipped).
  std::optional<double> grand_mean_hours;
};

ThresholdSweep threshold_sweep(std::span<const TraceEvent> events,
                               std::span<const Duration> thresholds);

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fraction of lifetimes strictly shorter than each threshold.
std::vector<double> lifetime_quantile_report(std::span<const LifetimeRecord> records,
                                             std::span<const Duration> thresholds);

class InvalidBins : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Left-closed, right-open bins; the last bin is closed on the right.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  [[nodiscard]] std::uint64_t in_range() const;
  [[nodiscard]] double center(std::size_t bin) const { return 0.5 * (edges[bin] + edges[bin + 1]); }
};

/// `count` equal-width bins over [lo, hi].
std::vector<double> uniform_edges(double lo, double hi, std::size_t count);

Histogram build_histogram(std::span<const double> samples, std::span<const double> edges);

/// 1-hour bins over [0, 240] h.
std::vector<double> default_lifetime_edges();
/// Width-25 bins over [0, 2000] reads.
std::vector<double> default_read_count_edges();

}  // namespace xct
