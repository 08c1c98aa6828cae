#include "warpshare/scheduler.hpp"

namespace warpshare::scheduler {

int SchedulerUnit::pick(std::span<const WarpView> views) {
    int picked = -1;
    switch (policy_) {
        case SchedulerPolicy::LRR: picked = pick_lrr(views); break;
        case SchedulerPolicy::GTO: picked = pick_gto(views); break;
        case SchedulerPolicy::OWF: picked = pick_owf(views); break;
    }
    return picked;
}

int SchedulerUnit::pick_lrr(std::span<const WarpView> views) {
    if (views.empty()) return -1;
    // Resume scanning just past the previously picked warp.
    std::size_t start = 0;
    while (start < views.size() && views[start].dynamic_warp_id <= last_picked_) ++start;
    for (std::size_t k = 0; k < views.size(); ++k) {
        const WarpView& v = views[(start + k) % views.size()];
        if (v.ready) {
            last_picked_ = v.dynamic_warp_id;
            return v.dynamic_warp_id;
        }
    }
    return -1;
}

int SchedulerUnit::pick_gto(std::span<const WarpView> views) {
    for (const WarpView& v : views)
        if (v.dynamic_warp_id == greedy_warp_ && v.ready) return v.dynamic_warp_id;
    for (const WarpView& v : views) {  // views sorted by id: first ready is oldest
        if (v.ready) {
            greedy_warp_ = v.dynamic_warp_id;
            return v.dynamic_warp_id;
        }
    }
    return -1;
}

int SchedulerUnit::pick_owf(std::span<const WarpView> views) {
    auto rank = [](WarpClass cls) {
        switch (cls) {
            case WarpClass::Owner: return 0;
            case WarpClass::Unshared: return 1;
            case WarpClass::NonOwner: return 2;
        }
        return 3;
    };
    int best = -1;
    int best_rank = 4;
    for (const WarpView& v : views) {
        if (!v.ready) continue;
        const int r = rank(v.cls);
        if (r < best_rank) {  // ids ascend, so the first hit per class is oldest
            best_rank = r;
            best = v.dynamic_warp_id;
        }
    }
    return best;
}

}  // namespace warpshare::scheduler
