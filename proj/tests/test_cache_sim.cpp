#include <doctest.h>

#include <map>
#include <set>

#include "support/test_support.hpp"
#include "xct/cache_sim.hpp"

using namespace xct;
using namespace xct::test;

namespace {

std::vector<std::string> names(const std::vector<FilePath>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(p.value);
  return out;
}

}  // namespace

TEST_CASE("apply_event examples") {
  SUBCASE("single-file hit") {
    CacheState c{10};
    apply_event(c, transfer_at(at(0), "A", 6));
    CHECK(apply_event(c, read_at(at(1), "A")).outcome == Outcome::hit);
    CHECK(names(c.residents()) == std::vector<std::string>{"A"});
    CHECK(c.occupied() == 6);
  }
  SUBCASE("capacity eviction") {
    CacheState c{10};
    apply_event(c, transfer_at(at(0), "A", 6));
    const auto r = apply_event(c, transfer_at(at(1), "B", 6));
    REQUIRE(r.evicted.size() == 1);
    CHECK(r.evicted[0].path.value == "A");
    CHECK(apply_event(c, read_at(at(2), "A")).outcome == Outcome::miss);
  }
  SUBCASE("a hit refreshes recency") {
    CacheState c{10};
    apply_event(c, transfer_at(at(0), "A", 4));
    apply_event(c, transfer_at(at(1), "B", 4));
    apply_event(c, read_at(at(2), "A"));
    const auto r = apply_event(c, transfer_at(at(3), "C", 4));
    REQUIRE(r.evicted.size() == 1);
    CHECK(r.evicted[0].path.value == "B");
    CHECK(names(c.residents()) == std::vector<std::string>{"C", "A"});
  }
  SUBCASE("oversize transfers bypass the cache") {
    CacheState c{10};
    apply_event(c, transfer_at(at(0), "A", 4));
    const auto r = apply_event(c, transfer_at(at(1), "A", 11));
    CHECK(r.oversize);
    CHECK(c.occupied() == 4);
  }
  SUBCASE("a re-transfer replaces the resident entry") {
    CacheState c{10};
    apply_event(c, transfer_at(at(0), "A", 4));
    const auto r = apply_event(c, transfer_at(at(1), "A", 7));
    CHECK(r.replaced == 4);
    CHECK(r.evicted.empty());
    CHECK(c.occupied() == 7);
  }
  SUBCASE("opens and closes are neutral; unresolved vector reads miss") {
    CacheState c{10};
    CHECK(apply_event(c, open_at(at(0), "A")).outcome == Outcome::neutral);
    CHECK(apply_event(c, close_at(at(0), "A")).outcome == Outcome::neutral);
    CHECK(apply_event(c, ReadVEvent{at(0), session("t"), std::nullopt, {{1, 0}}}).outcome == Outcome::miss);
  }
  CHECK_THROWS_AS(CacheState{0}, InvalidCapacity);
}

TEST_CASE("the simulator and the naive oracle agree on the examples") {
  const std::vector<TraceEvent> ev{transfer_at(at(0), "A", 4), transfer_at(at(1), "B", 4),
                                   read_at(at(2), "A"), transfer_at(at(3), "C", 4), read_at(at(4), "B")};
  const auto s = simulate_lru(ev, 10);
  CHECK(s == oracle_lru(ev, 10));
  CHECK(s.hits == 1);
  CHECK(s.misses == 1);
  CHECK(s.eviction_events == 1);
  CHECK(s.bytes_evicted == 4);
  CHECK(s.final_occupied == 8);
}

TEST_CASE("empty stream and no capacity pressure") {
  CHECK_FALSE(simulate_lru({}, 10).hit_rate());
  const std::vector<TraceEvent> ev{transfer_at(at(0), "A", 3), read_at(at(1), "A"),
                                   transfer_at(at(2), "B", 3), read_at(at(3), "B"), read_at(at(4), "A")};
  CHECK(simulate_lru(ev, 100).hit_rate() == 1.0);
}

TEST_CASE("simulate_lru matches oracle_lru on random traces") {
  Rng rng{2024};
  for (int round = 0; round < 30; ++round) {
    const auto ev = random_cache_trace(rng, 3000, 60, 1000);
    for (int k = 0; k < 3; ++k) {
      const Bytes cap = 1 + rng.below(20'000);
      CHECK(simulate_lru(ev, cap) == oracle_lru(ev, cap));
    }
  }
}

TEST_CASE("inclusion on uniform-size traces") {
  Rng rng{77};
  for (int round = 0; round < 30; ++round) {
    const auto ev = random_cache_trace(rng, 2000, 80, 0, 100);
    std::uint64_t previous = 0;
    for (Bytes cap = 100; cap <= 8000; cap += 100 + 100 * rng.below(4)) {
      const auto s = simulate_lru(ev, cap);
      CHECK(s.hits >= previous);
      previous = s.hits;
    }
  }
}

TEST_CASE("ample capacity leaves only compulsory misses") {
  Rng rng{5};
  for (int round = 0; round < 20; ++round) {
    const auto ev = random_cache_trace(rng, 2000, 50, 1000);
    std::map<std::string, Bytes> largest;
    for (const auto& e : ev) {
      if (const auto* t = std::get_if<TransferEvent>(&e)) largest[t->path.value] = std::max(largest[t->path.value], t->size);
    }
    Bytes distinct = 1;
    for (const auto& [p, s] : largest) distinct += s;

    std::set<std::string> fetched;
    std::uint64_t reads = 0, first_access = 0;
    for (const auto& e : ev) {
      if (const auto* t = std::get_if<TransferEvent>(&e)) fetched.insert(t->path.value);
      const auto k = kind_of(e);
      if (k != EventKind::read && k != EventKind::readv) continue;
      ++reads;
      const FilePath* p = path_of(e);
      if (!p || !fetched.contains(p->value)) ++first_access;
    }
    const auto s = simulate_lru(ev, distinct);
    CHECK(s.total_reads == reads);
    CHECK(s.misses == first_access);
    CHECK(s.eviction_events == 0);
    REQUIRE(s.hit_rate());
    CHECK(*s.hit_rate() == doctest::Approx(1.0 - static_cast<double>(first_access) / reads));
  }
}

TEST_CASE("hit_rate_sweep runs one simulation per capacity") {
  Rng rng{6};
  const auto ev = random_cache_trace(rng, 2000, 40, 1000);
  const std::vector<Bytes> caps{500, 5000, 50'000, 1000};
  for (unsigned workers : {1u, 3u}) {
    const auto sweep = hit_rate_sweep(ev, caps, workers);
    REQUIRE(sweep.size() == caps.size());
    for (std::size_t i = 0; i < caps.size(); ++i) {
      CHECK(sweep[i].capacity == caps[i]);
      CHECK(sweep[i].result == simulate_lru(ev, caps[i]));
    }
  }
  const std::vector<Bytes> bad{0};
  CHECK_THROWS_AS(hit_rate_sweep(ev, bad), InvalidCapacity);
}

TEST_CASE("fill_time: constant daily rate") {
  // One 10-unit transfer per day, distinct files: capacity C fills on the
  // transfer that brings the total to C, i.e. after ceil(C/10) - 1 days.
  std::vector<TraceEvent> ev;
  for (int d = 0; d < 30; ++d) ev.push_back(transfer_at(at(24.0 * d), "/f" + std::to_string(d), 10));
  const std::vector<Bytes> caps{10, 35, 100, 300, 301};
  const auto fill = fill_time(ev, caps);
  CHECK(fill[0].fill_time == Duration{0});
  CHECK(fill[1].fill_time == Duration{3 * 86'400});
  CHECK(fill[2].fill_time == Duration{9 * 86'400});
  CHECK(fill[3].fill_time == Duration{29 * 86'400});
  CHECK_FALSE(fill[4].fill_time);
}

TEST_CASE("fill_time is monotone in capacity") {
  Rng rng{12};
  for (int round = 0; round < 30; ++round) {
    const auto ev = random_cache_trace(rng, 1500, 100, 1000);
    std::vector<Bytes> caps;
    for (int i = 0; i < 12; ++i) caps.push_back(1 + rng.below(60'000));
    std::sort(caps.begin(), caps.end());
    const auto fill = fill_time(ev, caps);
    for (std::size_t i = 1; i < fill.size(); ++i) {
      if (!fill[i - 1].fill_time) {
        CHECK_FALSE(fill[i].fill_time);
      } else if (fill[i].fill_time) {
        CHECK(*fill[i - 1].fill_time <= *fill[i].fill_time);
      }
    }
  }
}

TEST_CASE("fill_time agrees with replaying an unbounded cache") {
  Rng rng{13};
  for (int round = 0; round < 20; ++round) {
    const auto ev = random_cache_trace(rng, 800, 30, 1000);
    const Bytes cap = 1 + rng.below(20'000);
    // Reference: replay transfers with no eviction and stop at the first
    // transfer whose incoming bytes would reach the capacity.
    std::map<std::string, Bytes> resident;
    Bytes occupied = 0;
    std::optional<Duration> expected;
    for (const auto& e : ev) {
      const auto* t = std::get_if<TransferEvent>(&e);
      if (!t) continue;
      const Bytes demand = occupied - resident[t->path.value] + t->size;
      if (demand >= cap) {
        expected = t->ts - timestamp_of(ev.front());
        break;
      }
      occupied = demand;
      resident[t->path.value] = t->size;
    }
    const std::vector<Bytes> caps{cap};
    CHECK(fill_time(ev, caps)[0].fill_time == expected);
  }
}

TEST_CASE("content model closed forms") {
  ContentModelParams p;
  p.size_params = {1.0};
  p.rate_params = {1.0};
  p.delta = 0.0;
  p.h0 = 0.1;
  p.steps = 20;
  p.capacity = 1'000'000'000'000'000ULL;
  const auto series = content_model(p);
  for (const auto& s : series) {
    CHECK(s.increment == 1'260'000'000'000LL);
    CHECK(s.cache_bytes == 1'260'000'000'000ULL * s.step);
  }

  p.h0 = 1.0;
  p.h_cap = 1.0;
  for (const auto& s : content_model(p)) CHECK(s.increment == 0);
}

TEST_CASE("content model hit-rate ramp and capacity clamp") {
  ContentModelParams p;
  p.size_params = {1.0};
  p.rate_params = {1.0};
  p.steps = 40;
  p.capacity = 30'000'000'000'000ULL;
  const auto series = content_model(p);
  CHECK(series[0].hit_rate == 0.1);
  CHECK(series[30].hit_rate == doctest::Approx(0.6));
  CHECK(series[39].hit_rate == series[30].hit_rate);
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(series[i].cache_bytes <= p.capacity);
    if (i) CHECK(series[i].evicted_cumulative >= series[i - 1].evicted_cumulative);
  }
  const auto fill = content_fill_step(series, p.capacity);
  REQUIRE(fill);
  CHECK(series[*fill - 1].cache_bytes == p.capacity);
}

TEST_CASE("content model with negative parameters") {
  ContentModelParams p;
  p.size_params = {-1.0};
  p.rate_params = {1.0};
  p.steps = 5;
  for (const auto& s : content_model(p)) CHECK(s.cache_bytes == 0);
  p.clamp_negative_increments = true;
  for (const auto& s : content_model(p)) CHECK(s.increment == 0);
  p.size_params = {2.5};
  CHECK_THROWS_AS(content_model(p), std::invalid_argument);
}

TEST_CASE("default content parameters fill 40 TB in about 30 steps") {
  int in_band = 0;
  double total = 0.0;
  constexpr int seeds = 200;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto p = default_content_params(seed);
    const auto series = content_model(p);
    CHECK(series == content_model(p));
    const auto fill = content_fill_step(series, p.capacity);
    REQUIRE(fill);
    total += static_cast<double>(*fill);
    in_band += (*fill >= 27 && *fill <= 33) ? 1 : 0;
  }
  CHECK(total / seeds == doctest::Approx(31.0).epsilon(0.05));
  CHECK(in_band >= seeds * 9 / 10);
}
