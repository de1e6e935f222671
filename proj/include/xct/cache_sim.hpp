#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "xct/event_model.hpp"

namespace xct {

struct FileEntry {
  FilePath path;
  Bytes size = 0;
  Timestamp first_access;

  friend bool operator==(const FileEntry&, const FileEntry&) = default;
};

enum class Outcome : std::uint8_t { neutral, hit, miss };

struct ApplyResult {
  Outcome outcome = Outcome::neutral;
  std::vector<FileEntry> evicted;
  /// Transfer larger than the whole cache; it bypassed the cache.
  bool oversize = false;
  /// Size of the entry a re-transfer replaced, if any.
  Bytes replaced = 0;
};

/// Fully associative LRU cache keyed by file path, front = most recently used.
/// Only transfers insert; reads of resident files refresh recency.
class CacheState {
 public:
  explicit CacheState(Bytes capacity);

  ApplyResult apply(const TraceEvent& e);

  [[nodiscard]] Bytes capacity() const { return capacity_; }
  [[nodiscard]] Bytes occupied() const { return occupied_; }
  [[nodiscard]] std::size_t size() const { return order_.size(); }
  [[nodiscard]] bool contains(const FilePath& path) const { return index_.contains(path); }
  /// Resident paths, most recent first.
  [[nodiscard]] std::vector<FilePath> residents() const;

 private:
  Outcome touch(const FilePath* path);
  ApplyResult insert(const TransferEvent& t);

  Bytes capacity_;
  Bytes occupied_ = 0;
  std::list<FileEntry> order_;
  std::unordered_map<FilePath, std::list<FileEntry>::iterator> index_;
};

inline ApplyResult apply_event(CacheState& state, const TraceEvent& e) { return state.apply(e); }

struct SimResult {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t total_reads = 0;
  Bytes bytes_inserted = 0;
  /// Bytes that left the cache: evictions plus entries displaced by a
  /// re-transfer of the same path.
  Bytes bytes_evicted = 0;
  std::uint64_t eviction_events = 0;
  std::uint64_t oversize_bypasses = 0;
  Bytes final_occupied = 0;

  [[nodiscard]] std::optional<double> hit_rate() const {
    if (total_reads == 0) return std::nullopt;
    return static_cast<double>(hits) / static_cast<double>(total_reads);
  }

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

class InvalidCapacity : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Replays the stream through an empty cache of `capacity` bytes.
SimResult simulate_lru(std::span<const TraceEvent> events, Bytes capacity);

/// Same contract as simulate_lru, computed naively: residents live in a flat
/// vector stamped with a use counter, and the victim is found by linear scan.
SimResult oracle_lru(std::span<const TraceEvent> events, Bytes capacity);

struct SweepPoint {
  Bytes capacity = 0;
  SimResult result;
};

/// One independent simulation per capacity, in input order.
std::vector<SweepPoint> hit_rate_sweep(std::span<const TraceEvent> events,
                                       std::span<const Bytes> capacities, unsigned workers = 0);

struct FillPoint {
  Bytes capacity = 0;
  /// Time from the first event to the transfer that filled the cache.
  std::optional<Duration> fill_time;
};

/// For each capacity, replays transfers until the demand on the cache (bytes
/// resident plus the incoming file) first reaches the capacity.
std::vector<FillPoint> fill_time(std::span<const TraceEvent> events,
                                 std::span<const Bytes> capacities);

/// Parameters of the stochastic cache-content model. One step is one day.
struct ContentModelParams {
  double access_rate = 7000.0;
  double file_size = 200'000'000.0;
  double h0 = 0.1;
  double h_cap = 0.6;
  double delta = (0.6 - 0.1) / 30.0;
  std::vector<double> size_params;
  std::vector<double> rate_params;
  std::uint64_t seed = 1;
  std::size_t steps = 60;
  Bytes capacity = 40'000'000'000'000ULL;
  /// Clamp negative per-step increments to zero instead of letting them
  /// shrink the cache.
  bool clamp_negative_increments = false;
};

/// Defaults with `count` size and rate scalars drawn uniformly from [lo, hi]
/// using `seed`.
ContentModelParams default_content_params(std::uint64_t seed = 1, std::size_t count = 64,
                                          double lo = 1.0, double hi = 1.4);

/// Throws std::invalid_argument on violated invariants.
void validate_content_params(const ContentModelParams& p);

struct ContentStep {
  std::size_t step = 0;  // 1-based
  /// Hit rate used for this step's increment.
  double hit_rate = 0.0;
  double size_param = 0.0;
  double rate_param = 0.0;
  std::int64_t increment = 0;
  Bytes cache_bytes = 0;
  Bytes evicted_cumulative = 0;

  friend bool operator==(const ContentStep&, const ContentStep&) = default;
};

std::vector<ContentStep> content_model(const ContentModelParams& params);

/// First step at which the cache content reached capacity.
std::optional<std::size_t> content_fill_step(std::span<const ContentStep> series, Bytes capacity);

}  // namespace xct
