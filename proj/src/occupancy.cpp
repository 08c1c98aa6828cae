#include "warpshare/occupancy.hpp"

#include <algorithm>

#include "warpshare/errors.hpp"

namespace warpshare::occupancy {

int ceil_log2(std::int64_t x) {
    int bits = 0;
    std::int64_t v = 1;
    while (v < x) {
        v <<= 1;
        ++bits;
    }
    return bits;
}

OccupancyPlan compute_occupancy(const ResourceBudget& budget, const SmLimits& limits,
                                int threads_per_block, Rational threshold) {
    if (!threshold.valid())
        throw InvalidThreshold("threshold must satisfy 0 < t <= 1");
    if (!budget.valid())
        throw ZeroBlocksFit("resource budget invalid: R_tb=" +
                            std::to_string(budget.units_per_block) + ", R=" +
                            std::to_string(budget.units_per_sm));
    if (threads_per_block < 1 || threads_per_block > limits.max_threads)
        throw InvalidKernel("threads_per_block out of range");

    const std::int64_t r = budget.units_per_sm;
    const std::int64_t r_tb = budget.units_per_block;
    const std::int64_t baseline = r / r_tb;
    if (baseline == 0)
        throw ZeroBlocksFit("one block does not fit: R_tb > R");

    const std::int64_t remainder = r % r_tb;
    // A pair of shared blocks occupies ceil((1+t) * R_tb) units.
    const std::int64_t pair_alloc = r_tb + threshold.ceil_mul(r_tb);

    // S = floor((R mod R_tb) / (t * R_tb)), never exceeding the baseline so
    // that U stays non-negative.
    std::int64_t s = std::min<std::int64_t>(
        remainder * threshold.den / (threshold.num * r_tb), baseline);
    // Pair allocations are rounded up to whole units; give pairs back until
    // the total fits in R. Each conversion keeps U + S constant.
    while (s > 0 && (baseline - s) * r_tb + s * pair_alloc > r) --s;
    std::int64_t u = baseline - s;

    const std::int64_t m_raw = u + 2 * s;
    const std::int64_t cap_threads = limits.max_threads / threads_per_block;
    const std::int64_t cap_blocks = limits.max_blocks;
    std::int64_t m = std::min({m_raw, cap_threads, cap_blocks});

    // The cap counts as binding when the resource allocation reaches it.
    LimitedBy limited = LimitedBy::Resource;
    if (m_raw >= std::min(cap_threads, cap_blocks))
        limited = cap_blocks <= cap_threads ? LimitedBy::Blocks : LimitedBy::Threads;

    // Shrink S before U: converting a pair to one unshared block keeps the
    // guaranteed-progress count U + S unchanged.
    while (u + 2 * s > m && s > 0) {
        --s;
        ++u;
    }
    if (u > m) u = m;

    OccupancyPlan plan;
    plan.unshared_blocks = static_cast<int>(u);
    plan.shared_pairs = static_cast<int>(s);
    plan.total_blocks = static_cast<int>(u + 2 * s);
    plan.threshold = threshold;
    plan.pair_allocation_units = pair_alloc;
    if (budget.kind == ResourceKind::Register) {
        const std::int64_t regs_per_thread =
            budget.units_per_warp > 0 ? budget.units_per_warp / limits.warp_size
                                      : r_tb / threads_per_block;
        plan.private_units_per_member = threshold.floor_mul(regs_per_thread);
        plan.shared_units_per_pair =
            pair_alloc - 2 * plan.private_units_per_member * threads_per_block;
    } else {
        plan.private_units_per_member = threshold.floor_mul(r_tb);
        plan.shared_units_per_pair = pair_alloc - 2 * plan.private_units_per_member;
    }
    plan.limited_by = limited;
    return plan;
}

WasteReport waste_report(const ResourceBudget& budget) {
    if (!budget.valid())
        throw ZeroBlocksFit("resource budget invalid");
    WasteReport report;
    report.wasted_units = budget.units_per_sm % budget.units_per_block;
    report.wasted_fraction = static_cast<double>(report.wasted_units) /
                             static_cast<double>(budget.units_per_sm);
    return report;
}

HwCostReport hw_cost(int blocks_per_sm, int warps_per_sm, int num_sms) {
    const std::int64_t t = blocks_per_sm;
    const std::int64_t w = warps_per_sm;
    const std::int64_t n = num_sms;
    HwCostReport report;
    report.blocks_per_sm = blocks_per_sm;
    report.warps_per_sm = warps_per_sm;
    report.num_sms = num_sms;
    report.register_sharing_bits =
        (1 + t * ceil_log2(t + 1) + 2 * w + (w / 2) * ceil_log2(w)) * n;
    report.scratchpad_sharing_bits =
        (1 + t * ceil_log2(t + 1) + w + (t / 2) * ceil_log2(t)) * n;
    return report;
}

}  // namespace warpshare::occupancy
