#include "xct/stats_engine.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace xct {

void ReadStats::add(const TraceEvent& e) {
  if (const auto* r = std::get_if<ReadEvent>(&e)) {
    ++total_read_ops;
    ++per_file_counts[r->path];
    ++size_samples;
    total_bytes_read += r->chunk.size;
    total_offset += r->chunk.offset;
  } else if (const auto* rv = std::get_if<ReadVEvent>(&e)) {
    ++total_read_ops;
    if (rv->path) {
      ++per_file_counts[*rv->path];
    } else {
      ++unresolved_ops;
    }
    for (const auto& c : rv->chunks) {
      ++size_samples;
      total_bytes_read += c.size;
      total_offset += c.offset;
    }
  }
}

void ReadStats::merge(const ReadStats& o) {
  for (const auto& [path, n] : o.per_file_counts) per_file_counts[path] += n;
  unresolved_ops += o.unresolved_ops;
  total_read_ops += o.total_read_ops;
  size_samples += o.size_samples;
  total_bytes_read += o.total_bytes_read;
  total_offset += o.total_offset;
}

std::optional<double> ReadStats::mean_read_size() const {
  if (size_samples == 0) return std::nullopt;
  return static_cast<double>(total_bytes_read) / static_cast<double>(size_samples);
}

std::optional<double> ReadStats::mean_offset() const {
  if (size_samples == 0) return std::nullopt;
  return static_cast<double>(total_offset) / static_cast<double>(size_samples);
}

std::optional<double> ReadStats::mean_reads_per_file() const {
  if (per_file_counts.empty()) return std::nullopt;
  return static_cast<double>(total_read_ops - unresolved_ops) /
         static_cast<double>(per_file_counts.size());
}

ReadStats count_reads_per_file(std::span<const TraceEvent> events) {
  ReadStats stats;
  for (const auto& e : events) stats.add(e);
  return stats;
}

ReadSizeSummary read_size_stats(std::span<const TraceEvent> events) {
  const ReadStats s = count_reads_per_file(events);
  return {s.total_bytes_read, s.mean_read_size(), s.mean_offset()};
}

Bytes transfer_totals(std::span<const TraceEvent> events) {
  Bytes total = 0;
  for (const auto& e : events) {
    if (const auto* t = std::get_if<TransferEvent>(&e)) total += t->size;
  }
  return total;
}

std::vector<std::pair<Day, Bytes>> transfer_totals_by_day(std::span<const TraceEvent> events) {
  std::map<Day, Bytes> by_day;
  for (const auto& e : events) {
    if (const auto* t = std::get_if<TransferEvent>(&e)) by_day[day_of(t->ts)] += t->size;
  }
  return {by_day.begin(), by_day.end()};
}

Segmentation segment_lifetimes(std::span<const TraceEvent> events, Duration threshold) {
  struct Live {
    Timestamp start;
    Timestamp last_open;
    std::optional<Timestamp> last_close;
    std::uint32_t opens = 0;
  };
  std::unordered_map<FilePath, Live> live;
  Segmentation out;

  auto finish = [&](const FilePath& path, const Live& l) {
    out.records.push_back(
        {path, l.start, l.last_close.value_or(l.last_open), l.opens, l.last_close.has_value()});
  };

  for (const auto& e : events) {
    if (const auto* open = std::get_if<OpenEvent>(&e)) {
      auto it = live.find(open->path);
      if (it != live.end() && open->ts - it->second.last_open <= threshold) {
        it->second.last_open = open->ts;
        ++it->second.opens;
        continue;
      }
      if (it != live.end()) {
        finish(it->first, it->second);
        it->second = Live{open->ts, open->ts, std::nullopt, 1};
      } else {
        live.emplace(open->path, Live{open->ts, open->ts, std::nullopt, 1});
      }
    } else if (const auto* close = std::get_if<CloseEvent>(&e)) {
      auto it = live.find(close->path);
      if (it == live.end()) {
        ++out.orphan_closes;
      } else {
        it->second.last_close = close->ts;
      }
    }
  }
  for (const auto& [path, l] : live) finish(path, l);
  std::sort(out.records.begin(), out.records.end(), [](const auto& a, const auto& b) {
    return a.start != b.start ? a.start < b.start : a.path < b.path;
  });
  return out;
}

std::optional<double> mean_lifetime_hours(std::span<const LifetimeRecord> records) {
  if (records.empty()) return std::nullopt;
  std::int64_t total = 0;
  for (const auto& r : records) total += r.length().count();
  return static_cast<double>(total) / 3600.0 / static_cast<double>(records.size());
}

ThresholdSweep threshold_sweep(std::span<const TraceEvent> events,
                               std::span<const Duration> thresholds) {
  if (thresholds.empty()) throw EmptyInput("threshold list is empty");
  ThresholdSweep sweep;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto tau : thresholds) {
    const auto seg = segment_lifetimes(events, tau);
    ThresholdPoint p{tau, seg.records.size(), mean_lifetime_hours(seg.records)};
    if (p.mean_hours) {
      sum += *p.mean_hours;
      ++n;
    }
    sweep.points.push_back(p);
  }
  if (n > 0) sweep.grand_mean_hours = sum / static_cast<double>(n);
  return sweep;
}

std::vector<double> lifetime_quantile_report(std::span<const LifetimeRecord> records,
                                             std::span<const Duration> thresholds) {
  if (records.empty()) throw EmptyInput("no lifetime records");
  std::vector<double> out;
  out.reserve(thresholds.size());
  for (const auto t : thresholds) {
    const auto below = std::count_if(records.begin(), records.end(),
                                     [&](const LifetimeRecord& r) { return r.length() < t; });
    out.push_back(static_cast<double>(below) / static_cast<double>(records.size()));
  }
  return out;
}

std::uint64_t Histogram::in_range() const {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

std::vector<double> uniform_edges(double lo, double hi, std::size_t count) {
  if (count == 0 || !(hi > lo)) throw InvalidBins("need hi > lo and at least one bin");
  std::vector<double> edges(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count);
  }
  return edges;
}

Histogram build_histogram(std::span<const double> samples, std::span<const double> edges) {
  if (edges.size() < 2) throw InvalidBins("need at least two bin edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) throw InvalidBins("bin edges must be strictly increasing");
  }
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  for (const double x : samples) {
    if (std::isnan(x)) continue;
    if (x < edges.front()) {
      ++h.underflow;
    } else if (x > edges.back()) {
      ++h.overflow;
    } else if (x == edges.back()) {
      ++h.counts.back();
    } else {
      const auto it = std::upper_bound(edges.begin(), edges.end(), x);
      ++h.counts[static_cast<std::size_t>(it - edges.begin()) - 1];
    }
  }
  return h;
}

std::vector<double> default_lifetime_edges() { return uniform_edges(0.0, 240.0, 240); }

std::vector<double> default_read_count_edges() { return uniform_edges(0.0, 2000.0, 80); }

}  // namespace xct
