#include "xct/workload_synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace xct {

namespace {

constexpr double kSecondsPerHour = 3600.0;
constexpr double kSecondsPerDay = 86400.0;
// Files in a full-size month of the modelled 40 TB cache node.
constexpr double kFullScalePopulation = 260'000.0;
constexpr double kTargetMonthlyReadMean = 1562.46;

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidProfile(what);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void append_stamp(std::string& out, Timestamp ts) {
  const Day d = day_of(ts);
  const std::chrono::year_month_day ymd{d};
  const auto secs = (ts - Timestamp{d}).count();
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02d%02u%02u %02lld:%02lld:%02lld",
                static_cast<int>(ymd.year()) % 100, static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60), static_cast<long long>(secs % 60));
  out += buf;
}

void append_session(std::string& out, const SessionKey& s) {
  out += " tid=";
  out += s.thread_id;
  out += " uid=";
  out += s.user_id;
}

void append_chunk(std::string& out, const ReadChunk& c) {
  out += std::to_string(c.size);
  out += '@';
  out += std::to_string(c.offset);
}

std::string junk_line(Timestamp ts, std::uint64_t variant) {
  static constexpr std::string_view kJunk[] = {
      " xrootd: heartbeat ok",
      " ofs_open: open failed for lack of credentials",
      " cache purge: scanning directory tree",
      " xrd: accepted connection from client",
  };
  std::string out;
  append_stamp(out, ts);
  out += kJunk[variant % std::size(kJunk)];
  return out;
}

enum class ItemKind : std::uint8_t { transfer = 0, open = 1, read = 2, close = 3 };

struct Item {
  std::int64_t offset_s;
  ItemKind kind;
  std::vector<ReadChunk> chunks;  // empty for non-reads
  bool vector_read = false;
};

// Events of one file, in chronological generation order.
std::vector<TraceEvent> synthesize_file(const WorkloadProfile& profile, std::uint64_t seed,
                                        const DayRange& days, std::size_t index) {
  Rng rng{derive_seed(seed, index)};
  char name[64];
  std::snprintf(name, sizeof name, "/file%06zu.root", index);
  const FilePath path{profile.path_prefix + name};

  const Bytes file_size = std::max<Bytes>(1, std::llround(profile.file_size.sample(rng)));
  const double expected_reads =
      profile.read_counts.sample(rng) * static_cast<double>(days.days()) / 30.0;
  double whole = 0.0;
  const double frac = std::modf(expected_reads, &whole);
  const auto n_reads = static_cast<std::uint64_t>(whole) + (rng.bernoulli(frac) ? 1 : 0);

  // Lifetimes as (start, length) in seconds from the start of the range.
  const std::int64_t span = (days.end() - days.begin()).count();
  std::vector<std::pair<std::int64_t, std::int64_t>> lifetimes;
  {
    std::int64_t len = std::llround(profile.lifetime.sample(rng) * kSecondsPerHour);
    len = std::clamp<std::int64_t>(len, 0, span);
    std::int64_t start = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(span - len + 1)));
    lifetimes.emplace_back(start, len);
    for (;;) {
      const auto gap = std::llround(profile.inter_lifetime_gap.sample_days(rng) * kSecondsPerDay);
      const std::int64_t next = start + len + gap;
      const std::int64_t next_len = std::llround(profile.lifetime.sample(rng) * kSecondsPerHour);
      if (next + next_len > span) break;
      start = next;
      len = next_len;
      lifetimes.emplace_back(start, len);
    }
  }

  std::vector<std::uint64_t> reads_per_lifetime(lifetimes.size(), 0);
  for (std::uint64_t r = 0; r < n_reads; ++r) ++reads_per_lifetime[rng.below(lifetimes.size())];

  std::vector<TraceEvent> out;
  std::uint64_t session_counter = 0;
  auto fresh_session = [&](char tag) {
    SessionKey s;
    s.thread_id = std::string(1, tag) + std::to_string(index) + "." + std::to_string(session_counter++);
    s.user_id = "u" + std::to_string(rng.below(profile.sessions_per_day));
    return s;
  };

  for (std::size_t j = 0; j < lifetimes.size(); ++j) {
    const auto [start, len] = lifetimes[j];
    std::vector<Item> items;
    if (profile.retransfer_each_lifetime || j == 0) items.push_back({start, ItemKind::transfer, {}});
    items.push_back({start, ItemKind::open, {}});
    const auto reopens = rng.poisson(profile.reopens_per_hour * static_cast<double>(len) / kSecondsPerHour);
    for (std::uint64_t k = 0; k < reopens; ++k) {
      items.push_back({start + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(len) + 1)),
                       ItemKind::open, {}});
    }
    for (std::uint64_t r = 0; r < reads_per_lifetime[j]; ++r) {
      Item item{start + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(len) + 1)),
                ItemKind::read, {}};
      item.vector_read = rng.bernoulli(profile.readv_fraction);
      const std::uint64_t n_chunks = item.vector_read ? 1 + rng.below(profile.max_readv_chunks) : 1;
      for (std::uint64_t c = 0; c < n_chunks; ++c) {
        const auto size = static_cast<Bytes>(std::llround(profile.read_size.sample(rng)));
        const auto offset = static_cast<Bytes>(std::llround(profile.offset.sample(rng)));
        item.chunks.push_back({size, offset});
      }
      items.push_back(std::move(item));
    }
    items.push_back({start + len, ItemKind::close, {}});
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      return a.offset_s != b.offset_s ? a.offset_s < b.offset_s : a.kind < b.kind;
    });

    SessionKey session;
    Day session_day{};
    for (auto& item : items) {
      const Timestamp ts = days.begin() + Duration{item.offset_s};
      switch (item.kind) {
        case ItemKind::transfer:
          out.emplace_back(TransferEvent{ts, path, file_size});
          break;
        case ItemKind::open:
          session = fresh_session('t');
          session_day = day_of(ts);
          out.emplace_back(OpenEvent{ts, session, path});
          break;
        case ItemKind::read:
          // Sessions never span calendar days, so every vector read finds its
          // open in the same daily log.
          if (day_of(ts) != session_day) {
            session = fresh_session('t');
            session_day = day_of(ts);
            out.emplace_back(OpenEvent{ts, session, path});
          }
          if (!item.vector_read) {
            out.emplace_back(ReadEvent{ts, session, path, item.chunks.front()});
          } else if (rng.bernoulli(profile.unresolved_readv_rate)) {
            out.emplace_back(ReadVEvent{ts, fresh_session('x'), std::nullopt, std::move(item.chunks)});
          } else {
            out.emplace_back(ReadVEvent{ts, session, path, std::move(item.chunks)});
          }
          break;
        case ItemKind::close:
          out.emplace_back(CloseEvent{ts, session, path});
          break;
      }
    }
  }
  return out;
}

}  // namespace

double LogNormalByMean::mu() const { return std::log(mean) - 0.5 * sigma * sigma; }

double LogNormalByMean::sample(Rng& rng) const { return rng.lognormal(mu(), sigma); }

ReadCountComponent ReadCountComponent::with_mode(double weight, double mode, double sigma) {
  return {weight, std::log(mode) + sigma * sigma, sigma};
}

double ReadCountComponent::mode() const { return std::exp(mu - sigma * sigma); }
double ReadCountComponent::mean() const { return std::exp(mu + 0.5 * sigma * sigma); }

double ReadCountMixture::mean() const {
  double w = 0.0, m = 0.0;
  for (const auto& c : components) {
    w += c.weight;
    m += c.weight * c.mean();
  }
  return m / w;
}

double ReadCountMixture::sample(Rng& rng) const {
  double total = 0.0;
  for (const auto& c : components) total += c.weight;
  double u = rng.uniform() * total;
  const ReadCountComponent* pick = &components.back();
  for (const auto& c : components) {
    if (u < c.weight) {
      pick = &c;
      break;
    }
    u -= c.weight;
  }
  return rng.lognormal(pick->mu, pick->sigma);
}

double PowerLawLifetime::max_hours() const { return std::pow(-eps / a, 1.0 / b); }

double PowerLawLifetime::cdf(double hours) const {
  auto antiderivative = [&](double x) { return a / (b + 1.0) * std::pow(x, b + 1.0) + eps * x; };
  const double lo = min_hours, hi = max_hours();
  if (hours <= lo) return 0.0;
  if (hours >= hi) return 1.0;
  return (antiderivative(hours) - antiderivative(lo)) / (antiderivative(hi) - antiderivative(lo));
}

double PowerLawLifetime::sample(Rng& rng) const {
  const double u = rng.uniform();
  double lo = min_hours, hi = max_hours();
  for (int i = 0; i < 64; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

WorkloadProfile default_profile() {
  WorkloadProfile p;
  auto low = ReadCountComponent::with_mode(0.45, 25.0, 0.5);
  auto mid = ReadCountComponent::with_mode(0.40, 150.0, 0.35);
  ReadCountComponent tail{0.15, 0.0, 1.5};
  const double tail_mean = (kTargetMonthlyReadMean - low.weight * low.mean() - mid.weight * mid.mean()) /
                           tail.weight;
  tail.mu = std::log(tail_mean) - 0.5 * tail.sigma * tail.sigma;
  p.read_counts.components = {low, mid, tail};
  return p;
}

WorkloadProfile scaled_cache_profile(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidProfile("scale must be positive");
  WorkloadProfile p = default_profile();
  p.file_population = static_cast<std::size_t>(std::max(1.0, std::round(kFullScalePopulation * scale)));
  p.retransfer_each_lifetime = false;
  return p;
}

void validate_profile(const WorkloadProfile& p) {
  require(p.file_population >= 1, "file_population must be >= 1");
  require(finite_all({p.file_size.mean, p.file_size.sigma, p.read_size.mean, p.read_size.sigma,
                      p.offset.mean, p.offset.sigma}),
          "size distribution parameters must be finite");
  require(p.file_size.mean > 0 && p.read_size.mean > 0 && p.offset.mean > 0,
          "distribution means must be positive");
  require(p.file_size.sigma >= 0 && p.read_size.sigma >= 0 && p.offset.sigma >= 0,
          "distribution sigmas must be non-negative");
  require(!p.read_counts.components.empty(), "read-count mixture is empty");
  for (const auto& c : p.read_counts.components) {
    require(finite_all({c.weight, c.mu, c.sigma}), "read-count parameters must be finite");
    require(c.weight > 0 && c.sigma >= 0, "read-count weights must be positive");
  }
  const auto& lt = p.lifetime;
  require(finite_all({lt.a, lt.b, lt.eps, lt.min_hours}), "lifetime parameters must be finite");
  require(lt.a > 0 && lt.b < 0 && lt.b != -1.0 && lt.eps < 0,
          "lifetime curve must be a decreasing power law with negative offset");
  require(lt.min_hours > 0 && lt.min_hours < lt.max_hours(), "lifetime support is empty");
  require(finite_all({p.inter_lifetime_gap.min_days, p.inter_lifetime_gap.mean_excess_days}),
          "gap parameters must be finite");
  require(p.inter_lifetime_gap.min_days > kDefaultLifetimeThresholdDays,
          "minimum inter-lifetime gap must exceed the 1.2-day lifetime threshold");
  require(p.inter_lifetime_gap.mean_excess_days >= 0, "gap excess must be non-negative");
  for (double f : {p.readv_fraction, p.unresolved_readv_rate, p.junk_line_rate}) {
    require(std::isfinite(f) && f >= 0.0 && f <= 1.0, "fractions must lie in [0, 1]");
  }
  require(std::isfinite(p.reopens_per_hour) && p.reopens_per_hour >= 0, "reopen rate must be >= 0");
  require(p.max_readv_chunks >= 1, "max_readv_chunks must be >= 1");
  require(p.sessions_per_day >= 1, "sessions_per_day must be >= 1");
  require(!p.path_prefix.empty() && p.path_prefix.front() == '/', "path prefix must start with '/'");
}

std::vector<TraceEvent> synthesize(const WorkloadProfile& profile, std::uint64_t seed,
                                   const DayRange& days) {
  validate_profile(profile);
  if (days.last < days.first) throw InvalidProfile("empty day range");
  std::vector<TraceEvent> all;
  for (std::size_t f = 0; f < profile.file_population; ++f) {
    auto events = synthesize_file(profile, seed, days, f);
    std::move(events.begin(), events.end(), std::back_inserter(all));
  }
  std::stable_sort(all.begin(), all.end(), [](const TraceEvent& a, const TraceEvent& b) {
    return timestamp_of(a) < timestamp_of(b);
  });
  return all;
}

std::string format_log_line(const TraceEvent& e, double close_score) {
  std::string out;
  out.reserve(128);
  append_stamp(out, timestamp_of(e));
  std::visit(
      [&](const auto& ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, OpenEvent>) {
          append_session(out, ev.session);
          out += " ofs open r ";
          out += ev.path.value;
        } else if constexpr (std::is_same_v<T, CloseEvent>) {
          append_session(out, ev.session);
          char buf[32];
          std::snprintf(buf, sizeof buf, " cache prefetch score = %.3f ", close_score);
          out += buf;
          out += ev.path.value;
        } else if constexpr (std::is_same_v<T, ReadEvent>) {
          append_session(out, ev.session);
          out += " req=read ";
          append_chunk(out, ev.chunk);
          out += " fn=";
          out += ev.path.value;
        } else if constexpr (std::is_same_v<T, ReadVEvent>) {
          append_session(out, ev.session);
          out += " fh=0 readV";
          for (const auto& c : ev.chunks) {
            out += ' ';
            append_chunk(out, c);
          }
        } else {
          out += " cache successfuly read size from info file = ";
          out += std::to_string(ev.size);
          out += ' ';
          out += ev.path.value;
        }
      },
      e);
  return out;
}

std::string log_file_name(Day day) {
  const std::chrono::year_month_day ymd{day};
  char buf[40];
  std::snprintf(buf, sizeof buf, "xrootd-%04d%02u%02u.log", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

GeneratedCorpus generate(const WorkloadProfile& profile, std::uint64_t seed, const DayRange& days,
                         const std::filesystem::path& out_dir) {
  GeneratedCorpus corpus;
  corpus.events = synthesize(profile, seed, days);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  auto it = corpus.events.begin();
  for (Day d = days.first; d <= days.last; d += std::chrono::days{1}) {
    const auto file = out_dir / log_file_name(d);
    std::ofstream out{file, std::ios::binary | std::ios::trunc};
    if (!out) throw std::runtime_error("cannot write " + file.string());
    Rng junk{derive_seed(seed, 0x4a554e4bULL + static_cast<std::uint64_t>(d.time_since_epoch().count()))};
    std::string line;
    for (; it != corpus.events.end() && day_of(timestamp_of(*it)) == d; ++it) {
      double score = 0.0;
      if (const auto* close = std::get_if<CloseEvent>(&*it)) {
        const auto h = fnv1a(close->path.value, static_cast<std::uint64_t>(close->ts.time_since_epoch().count()));
        score = static_cast<double>(h % 1000) / 1000.0;
      }
      line = format_log_line(*it, score);
      line += '\n';
      out.write(line.data(), static_cast<std::streamsize>(line.size()));
      if (profile.junk_line_rate > 0.0 && junk.bernoulli(profile.junk_line_rate)) {
        line = junk_line(timestamp_of(*it), junk.bits());
        line += '\n';
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
      }
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + file.string());
    corpus.files.push_back(file);
  }
  return corpus;
}

}  // namespace xct
