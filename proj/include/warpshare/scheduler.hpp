#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "warpshare/config.hpp"

namespace warpshare::scheduler {

enum class WarpClass { Owner, Unshared, NonOwner };

struct WarpView {
    int dynamic_warp_id = 0;
    bool ready = false;
    WarpClass cls = WarpClass::Unshared;
    std::int64_t last_issued_cycle = -1;
};

// One of the SM's warp schedulers. pick() expects the views of its assigned
// warps sorted by dynamic warp id and returns the chosen dynamic warp id, or
// -1 when nothing is ready.
class SchedulerUnit {
public:
    explicit SchedulerUnit(SchedulerPolicy policy) : policy_(policy) {}

    SchedulerPolicy policy() const { return policy_; }

    int pick(std::span<const WarpView> views);

private:
    int pick_lrr(std::span<const WarpView> views);
    int pick_gto(std::span<const WarpView> views);
    int pick_owf(std::span<const WarpView> views);

    SchedulerPolicy policy_;
    int last_picked_ = -1;  // LRR: scan resumes after this warp id
    int greedy_warp_ = -1;  // GTO: sticky warp
};

}  // namespace warpshare::scheduler
