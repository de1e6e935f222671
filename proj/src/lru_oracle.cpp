#include <algorithm>
#include <string>
#include <vector>

#include "xct/cache_sim.hpp"

namespace xct {

namespace {

struct Slot {
  std::string path;
  Bytes size;
  std::uint64_t last_use;
};

std::vector<Slot>::iterator find_slot(std::vector<Slot>& slots, const std::string& path) {
  return std::find_if(slots.begin(), slots.end(), [&](const Slot& s) { return s.path == path; });
}

}  // namespace

SimResult oracle_lru(std::span<const TraceEvent> events, Bytes capacity) {
  if (capacity == 0) throw InvalidCapacity("cache capacity must be positive");
  std::vector<Slot> slots;
  std::uint64_t clock = 0;
  SimResult s;

  auto total = [&] {
    Bytes sum = 0;
    for (const auto& slot : slots) sum += slot.size;
    return sum;
  };

  for (const auto& e : events) {
    if (const auto* t = std::get_if<TransferEvent>(&e)) {
      if (t->size > capacity) {
        ++s.oversize_bypasses;
        continue;
      }
      if (auto it = find_slot(slots, t->path.value); it != slots.end()) {
        s.bytes_evicted += it->size;
        slots.erase(it);
      }
      slots.push_back({t->path.value, t->size, ++clock});
      s.bytes_inserted += t->size;
      while (total() > capacity) {
        auto victim = std::min_element(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
          return a.last_use < b.last_use;
        });
        s.bytes_evicted += victim->size;
        ++s.eviction_events;
        slots.erase(victim);
      }
      continue;
    }

    const std::string* path = nullptr;
    if (const auto* r = std::get_if<ReadEvent>(&e)) {
      path = &r->path.value;
    } else if (const auto* rv = std::get_if<ReadVEvent>(&e)) {
      if (rv->path) path = &rv->path->value;
    } else {
      continue;
    }
    ++s.total_reads;
    auto it = path ? find_slot(slots, *path) : slots.end();
    if (it == slots.end()) {
      ++s.misses;
    } else {
      ++s.hits;
      it->last_use = ++clock;
    }
  }
  s.final_occupied = total();
  return s;
}

}  // namespace xct
