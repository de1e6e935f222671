#include "xct/cache_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "xct/random.hpp"

namespace xct {

CacheState::CacheState(Bytes capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidCapacity("cache capacity must be positive");
}

std::vector<FilePath> CacheState::residents() const {
  std::vector<FilePath> out;
  out.reserve(order_.size());
  for (const auto& e : order_) out.push_back(e.path);
  return out;
}

Outcome CacheState::touch(const FilePath* path) {
  if (!path) return Outcome::miss;
  auto it = index_.find(*path);
  if (it == index_.end()) return Outcome::miss;
  order_.splice(order_.begin(), order_, it->second);
  return Outcome::hit;
}

ApplyResult CacheState::insert(const TransferEvent& t) {
  ApplyResult r;
  if (t.size > capacity_) {
    r.oversize = true;
    return r;
  }
  if (auto it = index_.find(t.path); it != index_.end()) {
    r.replaced = it->second->size;
    occupied_ -= it->second->size;
    order_.erase(it->second);
    index_.erase(it);
  }
  order_.push_front(FileEntry{t.path, t.size, t.ts});
  index_.emplace(t.path, order_.begin());
  occupied_ += t.size;
  while (occupied_ > capacity_) {
    FileEntry& victim = order_.back();
    occupied_ -= victim.size;
    index_.erase(victim.path);
    r.evicted.push_back(std::move(victim));
    order_.pop_back();
  }
  return r;
}

ApplyResult CacheState::apply(const TraceEvent& e) {
  switch (kind_of(e)) {
    case EventKind::transfer: return insert(std::get<TransferEvent>(e));
    case EventKind::read:
    case EventKind::readv: return ApplyResult{touch(path_of(e)), {}, false, 0};
    case EventKind::open:
    case EventKind::close: break;
  }
  return {};
}

SimResult simulate_lru(std::span<const TraceEvent> events, Bytes capacity) {
  CacheState cache{capacity};
  SimResult s;
  for (const auto& e : events) {
    const ApplyResult r = cache.apply(e);
    switch (r.outcome) {
      case Outcome::hit:
        ++s.hits;
        ++s.total_reads;
        break;
      case Outcome::miss:
        ++s.misses;
        ++s.total_reads;
        break;
      case Outcome::neutral:
        break;
    }
    if (const auto* t = std::get_if<TransferEvent>(&e)) {
      if (r.oversize) {
        ++s.oversize_bypasses;
      } else {
        s.bytes_inserted += t->size;
      }
    }
    s.bytes_evicted += r.replaced;
    for (const auto& v : r.evicted) s.bytes_evicted += v.size;
    s.eviction_events += r.evicted.size();
    if (cache.occupied() > cache.capacity()) throw std::logic_error("cache over capacity");
  }
  s.final_occupied = cache.occupied();
  return s;
}

std::vector<SweepPoint> hit_rate_sweep(std::span<const TraceEvent> events,
                                       std::span<const Bytes> capacities, unsigned workers) {
  std::vector<SweepPoint> out(capacities.size());
  std::vector<std::exception_ptr> errors(capacities.size());
  auto work = [&](std::size_t i) {
    try {
      out[i] = {capacities[i], simulate_lru(events, capacities[i])};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (workers == 0) workers = std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(capacities.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < capacities.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < capacities.size(); i = next++) work(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<FillPoint> fill_time(std::span<const TraceEvent> events,
                                 std::span<const Bytes> capacities) {
  for (const Bytes c : capacities) {
    if (c == 0) throw InvalidCapacity("cache capacity must be positive");
  }
  // Until a cache first fills nothing is evicted, so every capacity sees the
  // same demand sequence: bytes resident plus the incoming transfer.
  struct Step {
    Bytes peak_demand;
    Timestamp ts;
  };
  std::vector<Step> steps;
  std::unordered_map<FilePath, Bytes> resident;
  Bytes occupied = 0, peak = 0;
  for (const auto& e : events) {
    const auto* t = std::get_if<TransferEvent>(&e);
    if (!t) continue;
    auto [it, fresh] = resident.try_emplace(t->path, 0);
    const Bytes demand = occupied - it->second + t->size;
    peak = std::max(peak, demand);
    steps.push_back({peak, t->ts});
    occupied = demand;
    it->second = t->size;
  }

  std::vector<FillPoint> out;
  out.reserve(capacities.size());
  const Timestamp origin = events.empty() ? Timestamp{} : timestamp_of(events.front());
  for (const Bytes c : capacities) {
    auto it = std::lower_bound(steps.begin(), steps.end(), c,
                               [](const Step& s, Bytes cap) { return s.peak_demand < cap; });
    FillPoint p{c, std::nullopt};
    if (it != steps.end()) p.fill_time = it->ts - origin;
    out.push_back(p);
  }
  return out;
}

ContentModelParams default_content_params(std::uint64_t seed, std::size_t count, double lo,
                                          double hi) {
  ContentModelParams p;
  p.seed = seed;
  Rng rng{derive_seed(seed, 0x5041524dULL)};
  p.size_params.resize(count);
  p.rate_params.resize(count);
  for (auto& v : p.size_params) v = rng.uniform(lo, hi);
  for (auto& v : p.rate_params) v = rng.uniform(lo, hi);
  return p;
}

void validate_content_params(const ContentModelParams& p) {
  auto fail = [](const char* what) { throw std::invalid_argument(what); };
  if (!(std::isfinite(p.access_rate) && std::isfinite(p.file_size))) fail("non-finite rate or size");
  if (!(p.h0 >= 0.0 && p.h0 <= p.h_cap && p.h_cap <= 1.0)) fail("need 0 <= h0 <= h_cap <= 1");
  if (!(p.delta >= 0.0) || !std::isfinite(p.delta)) fail("delta must be >= 0");
  if (p.size_params.empty() || p.rate_params.empty()) fail("parameter arrays must be non-empty");
  auto in_range = [](double v) { return std::isfinite(v) && v >= -2.0 && v <= 2.0; };
  if (!std::all_of(p.size_params.begin(), p.size_params.end(), in_range) ||
      !std::all_of(p.rate_params.begin(), p.rate_params.end(), in_range)) {
    fail("parameter scalars must lie in [-2, 2]");
  }
  if (p.capacity == 0) fail("capacity must be positive");
}

std::vector<ContentStep> content_model(const ContentModelParams& p) {
  validate_content_params(p);
  Rng rng{p.seed};
  std::vector<ContentStep> series;
  series.reserve(p.steps);
  // h is h0 + k*delta, advanced while below the ceiling; the small slack keeps
  // accumulated rounding from adding one extra increment.
  std::uint64_t increments = 0;
  double h = p.h0;
  const double slack = 1e-12 * std::max(1.0, p.h_cap);
  std::int64_t cache = 0;
  Bytes evicted = 0;
  const auto capacity = static_cast<std::int64_t>(p.capacity);
  for (std::size_t i = 1; i <= p.steps; ++i) {
    ContentStep s;
    s.step = i;
    s.hit_rate = h;
    s.size_param = p.size_params[rng.below(p.size_params.size())];
    s.rate_param = p.rate_params[rng.below(p.rate_params.size())];
    s.increment = std::llround((p.access_rate * s.rate_param) * (1.0 - h) * (p.file_size * s.size_param));
    if (h < p.h_cap - slack) {
      ++increments;
      h = std::min(1.0, p.h0 + static_cast<double>(increments) * p.delta);
    }
    if (p.clamp_negative_increments) s.increment = std::max<std::int64_t>(0, s.increment);
    cache = std::max<std::int64_t>(0, cache + s.increment);
    if (cache > capacity) {
      evicted += static_cast<Bytes>(cache - capacity);
      cache = capacity;
    }
    s.cache_bytes = static_cast<Bytes>(cache);
    s.evicted_cumulative = evicted;
    series.push_back(s);
  }
  return series;
}

std::optional<std::size_t> content_fill_step(std::span<const ContentStep> series, Bytes capacity) {
  for (const auto& s : series) {
    if (s.cache_bytes >= capacity) return s.step;
  }
  return std::nullopt;
}

}  // namespace xct
