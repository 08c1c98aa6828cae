#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "warpshare/config.hpp"
#include "warpshare/occupancy.hpp"
#include "warpshare/workload.hpp"

namespace warpshare::engine {

enum class PlanMode { Baseline, Sharing };

struct SchedulerUnitMetrics {
    std::int64_t issue_cycles = 0;
    std::int64_t stall_cycles = 0;
    std::int64_t idle_cycles = 0;
    friend bool operator==(const SchedulerUnitMetrics&, const SchedulerUnitMetrics&) = default;
};

struct SmMetrics {
    std::int64_t cycles = 0;
    std::int64_t instructions_issued = 0;
    double ipc = 0.0;
    std::int64_t stall_cycles = 0;
    std::int64_t idle_cycles = 0;
    std::int64_t lock_wait_cycles = 0;
    std::int64_t l1_accesses = 0;
    std::int64_t l1_misses = 0;
    int blocks_completed = 0;
    std::vector<SchedulerUnitMetrics> units;
    friend bool operator==(const SmMetrics&, const SmMetrics&) = default;
};

struct MetricsReport {
    std::int64_t cycles = 0;  // max over SMs
    std::int64_t instructions_issued = 0;
    double ipc = 0.0;
    std::int64_t stall_cycles = 0;
    std::int64_t idle_cycles = 0;
    std::int64_t lock_wait_cycles = 0;
    std::int64_t l1_accesses = 0;
    std::int64_t l1_misses = 0;
    int blocks_completed = 0;
    int blocks_resident = 0;  // per-SM plan total M
    std::vector<SmMetrics> per_sm;
    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;

    double l1_miss_rate() const {
        return l1_accesses == 0 ? 0.0
                                : static_cast<double>(l1_misses) / static_cast<double>(l1_accesses);
    }
};

std::string metrics_to_json_text(const MetricsReport& report);

// The per-SM launch decision for a kernel: the plan of the binding resource
// plus which resource it is. In Baseline mode (or t = 1) everything is
// unshared.
struct BindingPlan {
    occupancy::OccupancyPlan plan;
    occupancy::ResourceKind kind = occupancy::ResourceKind::Register;
};

BindingPlan compute_plan(const SmConfig& cfg, const workload::KernelSpec& kernel,
                         PlanMode mode);

// Saturating probability adjustment against the reference SM's stall count.
double throttle_step(double p, std::int64_t window_stalls, std::int64_t reference_stalls,
                     double step);

// Memory-instruction gate for non-owner warps. The reference SM (index 0)
// never permits; elsewhere the permit is Bernoulli(p) from the SM's own
// generator.
bool throttle_permit(int sm_index, double p, std::mt19937_64& rng);

// Runs the kernel on all SMs to grid exhaustion. Deterministic in
// (cfg, kernel, mode, reorder_enabled). reorder_enabled is accepted for
// interface parity with assembly-derived workloads; JSON workloads carry
// pre-assigned sequence numbers, so it does not change them.
MetricsReport run(const SmConfig& cfg, const workload::KernelSpec& kernel, PlanMode mode,
                  bool reorder_enabled = false, std::ostream* lock_trace = nullptr);

}  // namespace warpshare::engine
