#include "warpshare/l1cache.hpp"

namespace warpshare {

L1Cache::L1Cache(const L1Geometry& geom)
    : geom_(geom), ways_(static_cast<std::size_t>(geom.sets) * geom.ways) {}

bool L1Cache::access(std::int64_t address, bool is_store) {
    ++accesses_;
    ++tick_;
    const std::int64_t line = address / geom_.line_bytes;
    const std::int64_t set = line % geom_.sets;
    Way* row = &ways_[static_cast<std::size_t>(set) * geom_.ways];

    for (int w = 0; w < geom_.ways; ++w) {
        if (row[w].tag == line) {
            row[w].last_used = tick_;
            return true;
        }
    }
    ++misses_;
    if (!is_store) {  // no-allocate on store miss
        Way* victim = &row[0];
        for (int w = 1; w < geom_.ways; ++w) {
            if (victim->tag == -1) break;
            if (row[w].tag == -1 || row[w].last_used < victim->last_used) victim = &row[w];
        }
        victim->tag = line;
        victim->last_used = tick_;
    }
    return false;
}

}  // namespace warpshare
