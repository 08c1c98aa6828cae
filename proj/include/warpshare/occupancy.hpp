#pragma once

#include <cstdint>

#include "warpshare/rational.hpp"

namespace warpshare::occupancy {

enum class ResourceKind { Register, Scratchpad };

// One resource dimension of an SM. Registers are counted in register slots,
// scratchpad in bytes. units_per_warp is meaningful for registers only.
struct ResourceBudget {
    std::int64_t units_per_sm = 0;     // R
    std::int64_t units_per_block = 0;  // R_tb
    std::int64_t units_per_warp = 0;   // R_w (0 for scratchpad)
    ResourceKind kind = ResourceKind::Register;

    bool valid() const {
        return units_per_block >= 1 && units_per_sm >= units_per_block;
    }
};

struct SmLimits {
    int max_threads = 1536;
    int max_blocks = 8;
    int warp_size = 32;
    int num_sms = 14;
};

enum class LimitedBy { Resource, Threads, Blocks };

// (U, S, M) allocation decision for one SM.
struct OccupancyPlan {
    int unshared_blocks = 0;  // U
    int shared_pairs = 0;     // S
    int total_blocks = 0;     // M = U + 2S
    Rational threshold{1, 1};
    std::int64_t private_units_per_member = 0;
    std::int64_t shared_units_per_pair = 0;
    std::int64_t pair_allocation_units = 0;  // ceil((1+t) * R_tb)
    LimitedBy limited_by = LimitedBy::Resource;
};

struct WasteReport {
    std::int64_t wasted_units = 0;
    double wasted_fraction = 0.0;
};

struct HwCostReport {
    std::int64_t register_sharing_bits = 0;
    std::int64_t scratchpad_sharing_bits = 0;
    int blocks_per_sm = 0;  // T
    int warps_per_sm = 0;   // W
    int num_sms = 0;        // N
};

// Decides how many unshared blocks and shared pairs fit on one SM for a
// given threshold, honoring the thread and block caps. Guaranteed-progress
// blocks (U + S) never drop below the unshared baseline.
OccupancyPlan compute_occupancy(const ResourceBudget& budget, const SmLimits& limits,
                                int threads_per_block, Rational threshold);

WasteReport waste_report(const ResourceBudget& budget);

HwCostReport hw_cost(int blocks_per_sm, int warps_per_sm, int num_sms);

// Smallest b with 2^b >= x, i.e. the bit width of ids 0..x-1. ceil_log2(1) == 0.
int ceil_log2(std::int64_t x);

}  // namespace warpshare::occupancy
