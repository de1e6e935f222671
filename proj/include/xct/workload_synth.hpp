#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "xct/event_model.hpp"
#include "xct/random.hpp"

namespace xct {

/// Lognormal distribution parameterized by its mean.
struct LogNormalByMean {
  double mean = 1.0;
  double sigma = 0.0;

  [[nodiscard]] double mu() const;
  double sample(Rng& rng) const;
};

/// Lognormal component of the per-file read-count mixture.
struct ReadCountComponent {
  double weight = 1.0;
  double mu = 0.0;
  double sigma = 0.0;

  static ReadCountComponent with_mode(double weight, double mode, double sigma);
  [[nodiscard]] double mode() const;
  [[nodiscard]] double mean() const;
};

/// Mixture over read operations per file per 30 days.
struct ReadCountMixture {
  std::vector<ReadCountComponent> components;

  [[nodiscard]] double mean() const;
  double sample(Rng& rng) const;
};

/// Density proportional to a*x^b + eps (x in hours), restricted to
/// [min_hours, max_hours()] where max_hours() is the point at which the curve
/// reaches zero.
struct PowerLawLifetime {
  double a = 15227.387;
  double b = -1.031;
  double eps = -995.488;
  double min_hours = 0.13296590104365631;

  [[nodiscard]] double max_hours() const;
  /// CDF of the truncated density.
  [[nodiscard]] double cdf(double hours) const;
  double sample(Rng& rng) const;
};

/// Gap between the end of one lifetime and the start of the next:
/// min_days + Exponential(mean_excess_days).
struct LifetimeGap {
  double min_days = 1.5;
  double mean_excess_days = 3.0;

  double sample_days(Rng& rng) const { return min_days + rng.exponential(mean_excess_days); }
};

struct WorkloadProfile {
  std::size_t file_population = 500;
  LogNormalByMean file_size{200'000'000.0, 0.5};
  ReadCountMixture read_counts;
  LogNormalByMean read_size{154'632.0, 1.0};
  LogNormalByMean offset{1.52e9, 1.0};
  PowerLawLifetime lifetime;
  LifetimeGap inter_lifetime_gap;
  double readv_fraction = 0.3;
  unsigned max_readv_chunks = 8;
  /// Size of the user-id pool sessions draw from each day.
  std::size_t sessions_per_day = 64;
  /// Mean number of re-opens per lifetime hour beyond the first open.
  double reopens_per_hour = 0.5;
  /// One Transfer at the start of every lifetime (true) or only at the first
  /// lifetime of each file, as if an upstream cache held the whole corpus.
  bool retransfer_each_lifetime = true;
  /// Fault injection: vector reads emitted under a session with no open.
  double unresolved_readv_rate = 0.0;
  /// Non-event noise lines per event line.
  double junk_line_rate = 0.0;
  std::string path_prefix = "/store/data";
};

class InvalidProfile : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Default lifetime-segmentation threshold the generator must stay above.
inline constexpr double kDefaultLifetimeThresholdDays = 1.2;

/// Calibrated defaults.
WorkloadProfile default_profile();

/// Default profile shrunk to `scale` of a 40 TB cache node's month: the file
/// population is scaled while per-file behaviour is kept, and each file is
/// transferred only once. scale = 0.001 stands 40-60 GB in for 40-60 TB.
WorkloadProfile scaled_cache_profile(double scale);

/// Throws InvalidProfile on any violated invariant.
void validate_profile(const WorkloadProfile& profile);

/// Ground-truth events in log order: sorted by timestamp, ties in generation
/// order. Pure function of its arguments.
std::vector<TraceEvent> synthesize(const WorkloadProfile& profile, std::uint64_t seed,
                                   const DayRange& days);

/// Canonical log line for one event. `close_score` only affects Close lines.
std::string format_log_line(const TraceEvent& e, double close_score = 0.0);

/// "xrootd-YYYYMMDD.log"
std::string log_file_name(Day day);

struct GeneratedCorpus {
  std::vector<TraceEvent> events;
  std::vector<std::filesystem::path> files;
};

/// Synthesizes the event list and writes one log file per calendar day of
/// `days` into `out_dir` (created if needed). Identical arguments produce
/// byte-identical files.
GeneratedCorpus generate(const WorkloadProfile& profile, std::uint64_t seed, const DayRange& days,
                         const std::filesystem::path& out_dir);

}  // namespace xct
