#pragma once

#include <cstdint>
#include <vector>

#include "warpshare/config.hpp"

namespace warpshare {

// Set-associative LRU cache, write-through no-allocate for stores.
class L1Cache {
public:
    explicit L1Cache(const L1Geometry& geom);

    // Returns true on hit. Loads allocate on miss; stores never allocate.
    bool access(std::int64_t address, bool is_store);

    std::int64_t accesses() const { return accesses_; }
    std::int64_t misses() const { return misses_; }

private:
    struct Way {
        std::int64_t tag = -1;
        std::int64_t last_used = 0;
    };

    L1Geometry geom_;
    std::vector<Way> ways_;  // sets * ways, row-major by set
    std::int64_t tick_ = 0;
    std::int64_t accesses_ = 0;
    std::int64_t misses_ = 0;
};

}  // namespace warpshare
