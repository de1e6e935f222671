#pragma once

// Builders, random traces and brute-force reference implementations shared by
// the unit tests and the acceptance runner.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "xct/event_model.hpp"
#include "xct/random.hpp"
#include "xct/stats_engine.hpp"

namespace xct::test {

inline Timestamp t0() { return make_timestamp(2024, 3, 1); }
inline Timestamp at(double hours) {
  return t0() + Duration{static_cast<std::int64_t>(hours * 3600.0)};
}

inline SessionKey session(const std::string& tid, const std::string& uid = "u1") {
  return {tid, uid};
}

inline TraceEvent open_at(Timestamp ts, const std::string& path, const std::string& tid = "t1") {
  return OpenEvent{ts, session(tid), FilePath{path}};
}
inline TraceEvent close_at(Timestamp ts, const std::string& path, const std::string& tid = "t1") {
  return CloseEvent{ts, session(tid), FilePath{path}};
}
inline TraceEvent read_at(Timestamp ts, const std::string& path, Bytes size = 100,
                          Bytes offset = 0, const std::string& tid = "t1") {
  return ReadEvent{ts, session(tid), FilePath{path}, {size, offset}};
}
inline TraceEvent transfer_at(Timestamp ts, const std::string& path, Bytes size) {
  return TransferEvent{ts, FilePath{path}, size};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("xct-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in{p, std::ios::binary};
  return {std::istreambuf_iterator<char>(in), {}};
}

/// Random cache trace over a small path pool: transfers, reads, resolved and
/// unresolved vector reads, and some open/close noise. With `uniform_size`
/// every transfer has that size.
inline std::vector<TraceEvent> random_cache_trace(Rng& rng, std::size_t n, std::size_t paths,
                                                  Bytes max_size, Bytes uniform_size = 0) {
  std::vector<TraceEvent> out;
  out.reserve(n);
  Timestamp ts = t0();
  auto path = [&] { return "/p/" + std::to_string(rng.below(paths)); };
  for (std::size_t i = 0; i < n; ++i) {
    ts += Duration{static_cast<std::int64_t>(rng.below(30))};
    const double u = rng.uniform();
    if (u < 0.25) {
      const Bytes size = uniform_size ? uniform_size : 1 + rng.below(max_size);
      out.push_back(transfer_at(ts, path(), size));
    } else if (u < 0.75) {
      out.push_back(read_at(ts, path(), 1 + rng.below(1000), rng.below(1'000'000)));
    } else if (u < 0.88) {
      ReadVEvent v{ts, session("t"), std::nullopt, {{10, 0}, {20, 30}}};
      if (rng.uniform() < 0.9) v.path = FilePath{path()};
      out.push_back(v);
    } else if (u < 0.94) {
      out.push_back(open_at(ts, path()));
    } else {
      out.push_back(close_at(ts, path()));
    }
  }
  return out;
}

/// Random open/close schedule over a few paths with distinct timestamps,
/// sorted by time. Gaps are drawn on day scales so every threshold in
/// {0.5, 1.2, 5, 10} days splits some groups and joins others.
inline std::vector<TraceEvent> random_schedule(Rng& rng) {
  const std::size_t paths = 1 + rng.below(6);
  std::vector<TraceEvent> out;
  std::set<std::int64_t> used;
  for (std::size_t p = 0; p < paths; ++p) {
    const std::string name = "/f/" + std::to_string(p);
    std::int64_t t = static_cast<std::int64_t>(rng.below(86'400 * 3));
    const std::size_t opens = 1 + rng.below(12);
    for (std::size_t i = 0; i < opens; ++i) {
      if (rng.uniform() < 0.1) {
        // Stray close shortly before an open; orphaned when no open precedes it.
        std::int64_t c = t - 1 - static_cast<std::int64_t>(rng.below(3600));
        if (used.insert(c).second) out.push_back(close_at(t0() + Duration{c}, name));
      }
      while (!used.insert(t).second) ++t;
      out.push_back(open_at(t0() + Duration{t}, name));
      const std::size_t closes = rng.below(3);
      std::int64_t c = t;
      for (std::size_t k = 0; k < closes; ++k) {
        c += 1 + static_cast<std::int64_t>(rng.exponential(6 * 3600.0));
        while (!used.insert(c).second) ++c;
        out.push_back(close_at(t0() + Duration{c}, name));
      }
      const double gap_days = rng.uniform() < 0.5 ? rng.uniform(0.0, 1.5) : rng.uniform(0.3, 12.0);
      t += 1 + static_cast<std::int64_t>(gap_days * 86'400.0);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const TraceEvent& a, const TraceEvent& b) {
    return timestamp_of(a) < timestamp_of(b);
  });
  return out;
}

/// Quadratic reference segmentation. Opens i and j of one path belong to the
/// same lifetime iff every consecutive gap between them is within tau. A
/// lifetime ends at the latest close of its path in [start, next start).
inline Segmentation brute_force_lifetimes(const std::vector<TraceEvent>& events, Duration tau) {
  std::map<FilePath, std::vector<Timestamp>> opens;
  std::map<FilePath, std::vector<Timestamp>> closes;
  for (const auto& e : events) {
    if (const auto* o = std::get_if<OpenEvent>(&e)) opens[o->path].push_back(o->ts);
    if (const auto* c = std::get_if<CloseEvent>(&e)) closes[c->path].push_back(c->ts);
  }
  Segmentation out;
  for (auto& [path, ts] : closes) {
    const auto& o = opens[path];
    for (const auto c : ts) {
      if (o.empty() || c < *std::min_element(o.begin(), o.end())) ++out.orphan_closes;
    }
  }
  for (auto& [path, ts] : opens) {
    std::sort(ts.begin(), ts.end());
    const std::size_t n = ts.size();
    // start_of[i]: index of the first open of i's group, found by walking back.
    std::vector<std::size_t> start_of(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t s = i;
      for (std::size_t j = i; j > 0; --j) {
        if (ts[j] - ts[j - 1] > tau) break;
        s = j - 1;
      }
      start_of[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (start_of[i] != i) continue;
      std::uint32_t count = 0;
      Timestamp last_open = ts[i];
      std::optional<Timestamp> next_start;
      for (std::size_t j = 0; j < n; ++j) {
        if (start_of[j] == i) {
          ++count;
          last_open = std::max(last_open, ts[j]);
        } else if (ts[j] > ts[i] && start_of[j] == j && (!next_start || ts[j] < *next_start)) {
          next_start = ts[j];
        }
      }
      std::optional<Timestamp> end;
      for (const auto c : closes[path]) {
        if (c >= ts[i] && (!next_start || c < *next_start) && (!end || c > *end)) end = c;
      }
      out.records.push_back({path, ts[i], end.value_or(last_open), count, end.has_value()});
    }
  }
  std::sort(out.records.begin(), out.records.end(), [](const auto& a, const auto& b) {
    return a.start != b.start ? a.start < b.start : a.path < b.path;
  });
  return out;
}

/// Reference ReadV resolution: for each vector read, scan backwards for the
/// nearest open with the same session.
inline std::pair<std::vector<TraceEvent>, std::size_t> backward_scan_resolve(
    std::vector<TraceEvent> events) {
  std::size_t unresolved = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    auto* v = std::get_if<ReadVEvent>(&events[i]);
    if (!v) continue;
    v->path.reset();
    for (std::size_t j = i; j-- > 0;) {
      const auto* o = std::get_if<OpenEvent>(&events[j]);
      if (o && o->session == v->session) {
        v->path = o->path;
        break;
      }
    }
    if (!v->path) ++unresolved;
  }
  return {std::move(events), unresolved};
}

/// Reference read tally: explicit loops over a list of (path, count) pairs.
struct TallyResult {
  std::vector<std::pair<std::string, std::uint64_t>> counts;
  std::uint64_t unresolved = 0, ops = 0, samples = 0, bytes = 0, offsets = 0;
};

inline TallyResult tally_reads(const std::vector<TraceEvent>& events) {
  TallyResult t;
  auto bump = [&](const std::string& p) {
    for (auto& [name, n] : t.counts) {
      if (name == p) {
        ++n;
        return;
      }
    }
    t.counts.emplace_back(p, 1);
  };
  for (const auto& e : events) {
    if (const auto* r = std::get_if<ReadEvent>(&e)) {
      ++t.ops;
      bump(r->path.value);
      ++t.samples;
      t.bytes += r->chunk.size;
      t.offsets += r->chunk.offset;
    } else if (const auto* v = std::get_if<ReadVEvent>(&e)) {
      ++t.ops;
      if (v->path) {
        bump(v->path->value);
      } else {
        ++t.unresolved;
      }
      for (const auto& c : v->chunks) {
        ++t.samples;
        t.bytes += c.size;
        t.offsets += c.offset;
      }
    }
  }
  std::sort(t.counts.begin(), t.counts.end());
  return t;
}

}  // namespace xct::test
