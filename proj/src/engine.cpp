#include "warpshare/engine.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

#include "json.hpp"
#include "warpshare/errors.hpp"
#include "warpshare/l1cache.hpp"
#include "warpshare/scheduler.hpp"
#include "warpshare/sharing.hpp"

namespace warpshare::engine {

using occupancy::ResourceKind;
using scheduler::WarpClass;
using sharing::AccessClass;
using sharing::Acquire;
using sharing::BlockPair;
using workload::KernelSpec;
using workload::OpKind;
using workload::TraceOp;

double throttle_step(double p, std::int64_t window_stalls, std::int64_t reference_stalls,
                     double step) {
    if (window_stalls > reference_stalls) p -= step;
    else if (window_stalls < reference_stalls) p += step;
    return std::clamp(p, 0.0, 1.0);
}

bool throttle_permit(int sm_index, double p, std::mt19937_64& rng) {
    if (sm_index == 0) return false;
    // 53-bit uniform draw in [0, 1)
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return u < p;
}

BindingPlan compute_plan(const SmConfig& cfg, const KernelSpec& kernel, PlanMode mode) {
    occupancy::SmLimits limits{cfg.max_threads, cfg.max_blocks, cfg.warp_size, cfg.num_sms};

    occupancy::ResourceBudget regs;
    regs.kind = ResourceKind::Register;
    regs.units_per_sm = cfg.registers_per_sm;
    regs.units_per_block =
        static_cast<std::int64_t>(kernel.threads_per_block) * kernel.regs_per_thread;
    regs.units_per_warp = static_cast<std::int64_t>(cfg.warp_size) * kernel.regs_per_thread;

    const std::int64_t reg_baseline = regs.units_per_sm / regs.units_per_block;

    occupancy::ResourceBudget spm;
    spm.kind = ResourceKind::Scratchpad;
    spm.units_per_sm = cfg.scratchpad_per_sm;
    spm.units_per_block = kernel.scratchpad_per_block;
    const bool has_spm = kernel.scratchpad_per_block > 0;
    const std::int64_t spm_baseline =
        has_spm ? spm.units_per_sm / spm.units_per_block : reg_baseline + 1;

    // The scarcer resource is the one worth sharing; the other is allocated
    // unshared per block and acts as one more cap on M.
    BindingPlan out;
    occupancy::ResourceBudget binding = regs;
    std::int64_t other_cap = cfg.max_blocks;
    if (has_spm && spm_baseline < reg_baseline) {
        binding = spm;
        out.kind = ResourceKind::Scratchpad;
        other_cap = reg_baseline;
    } else if (has_spm) {
        other_cap = spm_baseline;
    }

    Rational threshold = cfg.sharing_threshold;
    if (mode == PlanMode::Baseline) threshold = Rational{1, 1};
    if (out.kind == ResourceKind::Register && !cfg.share_registers) threshold = Rational{1, 1};
    if (out.kind == ResourceKind::Scratchpad && !cfg.share_scratchpad) threshold = Rational{1, 1};

    limits.max_blocks = static_cast<int>(std::min<std::int64_t>(cfg.max_blocks, other_cap));
    out.plan = occupancy::compute_occupancy(binding, limits, kernel.threads_per_block, threshold);
    return out;
}

namespace {

enum class WarpStatus { Ready, WaitScoreboard, WaitBarrier, WaitLock, WaitThrottle, Finished };

struct WarpState {
    int dyn_id = 0;
    int unit = 0;
    int block = 0;     // index into SmCore::blocks_
    int warp_pos = 0;  // position within its block (pairing position)
    int pc = 0;
    int iter = 0;
    WarpStatus status = WarpStatus::Ready;
    std::vector<std::int64_t> reg_ready;  // ready cycle per register, 1-based
    std::int64_t max_pending = 0;
    bool at_barrier = false;
    bool exit_issued = false;
    std::int64_t exit_cycle = -1;
    bool finished = false;
    std::int64_t last_issued = -1;
    bool ready_now = false;
    WarpClass cls = WarpClass::Unshared;
};

struct BlockState {
    int grid_id = 0;
    int pair = -1;  // index into SmCore::pairs_, -1 when unshared
    std::vector<int> warp_index;
    int unfinished = 0;
    int barrier_arrived = 0;
    bool finished = false;
};

class SmCore {
public:
    SmCore(int index, const SmConfig& cfg, const KernelSpec& kernel, const BindingPlan& binding,
           std::deque<int>& grid, std::ostream* lock_trace)
        : index_(index),
          cfg_(cfg),
          kernel_(kernel),
          binding_(binding),
          grid_(grid),
          l1_(cfg.l1),
          rng_(cfg.rng_seed * 1000003ULL + static_cast<std::uint64_t>(index) + 1),
          lock_trace_(lock_trace) {
        for (int u = 0; u < cfg.num_schedulers; ++u) {
            units_.emplace_back(cfg.scheduler);
            metrics_.units.emplace_back();
        }
    }

    // Initial residency fill: U unshared launches first, then pair members in
    // launch order. Returns false when this SM is at capacity.
    bool launch_next_from_grid() {
        const auto& plan = binding_.plan;
        if (launched_ >= plan.total_blocks || grid_.empty()) return false;
        const int grid_id = grid_.front();
        grid_.pop_front();
        if (launched_ < plan.unshared_blocks) {
            launch_block(grid_id, -1);
        } else {
            const int pair_slot = (launched_ - plan.unshared_blocks) / 2;
            const bool first_member = (launched_ - plan.unshared_blocks) % 2 == 0;
            if (first_member) {
                pending_pair_member_ = launch_block(grid_id, -1);
                (void)pair_slot;
            } else {
                const int second = launch_block(grid_id, -1);
                make_pair(pending_pair_member_, second);
                pending_pair_member_ = -1;
            }
        }
        ++launched_;
        return true;
    }

    bool active() const { return active_; }
    std::int64_t cycles() const { return metrics_.cycles; }
    std::int64_t window_stalls() const { return window_stalls_; }
    void reset_window() { window_stalls_ = 0; }
    double throttle_probability() const { return throttle_p_; }
    void set_throttle_probability(double p) { throttle_p_ = p; }

    void step(std::int64_t cycle) {
        ++metrics_.cycles;
        retire(cycle);
        refresh_readiness(cycle);
        schedule(cycle);
        release_barriers();
        if (unfinished_warps_ == 0 && grid_.empty()) active_ = false;
    }

    void settle() {
        if (unfinished_warps_ == 0 && grid_.empty()) active_ = false;
    }

    std::int64_t instructions_issued() const { return metrics_.instructions_issued; }
    int blocks_completed() const { return metrics_.blocks_completed; }

    void finalize_metrics() {
        metrics_.l1_accesses = l1_.accesses();
        metrics_.l1_misses = l1_.misses();
        for (const auto& u : metrics_.units) {
            metrics_.stall_cycles += u.stall_cycles;
            metrics_.idle_cycles += u.idle_cycles;
            if (u.issue_cycles + u.stall_cycles + u.idle_cycles != metrics_.cycles)
                throw SimulatorInvariantViolation(
                    "scheduler-unit cycle conservation violated: issue+stall+idle != cycles");
        }
        metrics_.ipc = metrics_.cycles == 0
                           ? 0.0
                           : static_cast<double>(metrics_.instructions_issued) /
                                 static_cast<double>(metrics_.cycles);
    }

    const SmMetrics& metrics() const { return metrics_; }

private:
    int launch_block(int grid_id, int pair_index) {
        const int block_index = static_cast<int>(blocks_.size());
        BlockState block;
        block.grid_id = grid_id;
        block.pair = pair_index;
        const int wpb = kernel_.warps_per_block(cfg_.warp_size);
        for (int w = 0; w < wpb; ++w) {
            WarpState warp;
            warp.dyn_id = next_dyn_id_++;
            warp.unit = warp.dyn_id % cfg_.num_schedulers;
            warp.block = block_index;
            warp.warp_pos = w;
            warp.reg_ready.assign(static_cast<std::size_t>(kernel_.regs_per_thread) + 1, 0);
            block.warp_index.push_back(static_cast<int>(warps_.size()));
            warps_.push_back(std::move(warp));
        }
        block.unfinished = wpb;
        unfinished_warps_ += wpb;
        blocks_.push_back(std::move(block));
        return block_index;
    }

    void make_pair(int block_a, int block_b) {
        const int pair_index = static_cast<int>(pairs_.size());
        pairs_.emplace_back(binding_.kind, block_a, block_b,
                            kernel_.warps_per_block(cfg_.warp_size));
        blocks_[block_a].pair = pair_index;
        blocks_[block_b].pair = pair_index;
    }

    bool block_is_paired(const BlockState& block) const { return block.pair >= 0; }

    WarpClass warp_class(const WarpState& warp) const {
        const BlockState& block = blocks_[warp.block];
        if (!block_is_paired(block)) return WarpClass::Unshared;
        const BlockPair& pair = pairs_[block.pair];
        if (pair.owner_block() == BlockPair::kNone) return WarpClass::Unshared;
        return pair.owner_block() == warp.block ? WarpClass::Owner : WarpClass::NonOwner;
    }

    bool partner_warp_finished(const BlockPair& pair, const WarpState& warp) const {
        const int partner_block = pair.partner_of(warp.block);
        if (partner_block == BlockPair::kNone) return true;
        const int partner_warp = blocks_[partner_block].warp_index.at(warp.warp_pos);
        return warps_[partner_warp].finished;
    }

    void trace_lock(std::int64_t cycle, const char* event, int holder, int requester) {
        if (lock_trace_)
            *lock_trace_ << cycle << "," << index_ << "," << event << "," << holder << ","
                         << requester << "\n";
    }

    // Lock feasibility for the next op of a shared-mode warp; commit=false
    // while testing readiness, commit=true at issue.
    Acquire acquire_for_op(WarpState& warp, const TraceOp& op, bool commit,
                           std::int64_t cycle) {
        const BlockState& block = blocks_[warp.block];
        if (!block_is_paired(block)) return Acquire::Granted;
        BlockPair& pair = pairs_[block.pair];

        if (binding_.kind == ResourceKind::Register) {
            bool needs_shared = false;
            auto scan = [&](const std::vector<int>& regs) {
                for (int r : regs)
                    if (sharing::classify_register(r, kernel_.regs_per_thread,
                                                   cfg_.sharing_threshold, true) ==
                        AccessClass::Shared)
                        needs_shared = true;
            };
            scan(op.dst_regs);
            scan(op.src_regs);
            if (!needs_shared) return Acquire::Granted;
            const Acquire got = pair.try_acquire_register(
                warp.block, warp.warp_pos, warp.dyn_id, partner_warp_finished(pair, warp),
                cfg_.strict_block_ownership, commit);
            if (commit && got == Acquire::Granted)
                trace_lock(cycle, "acquire", warp.dyn_id, warp.dyn_id);
            return got;
        }

        // Scratchpad sharing: only scratchpad ops in the shared region contend.
        if (!op.is_shared_mem()) return Acquire::Granted;
        if (sharing::classify_scratchpad(op.shared_offset, kernel_.scratchpad_per_block,
                                         cfg_.sharing_threshold, true) != AccessClass::Shared)
            return Acquire::Granted;
        const Acquire got = pair.try_acquire_scratchpad(warp.block, commit);
        if (commit && got == Acquire::Granted)
            trace_lock(cycle, "acquire", warp.block, warp.dyn_id);
        return got;
    }

    void retire(std::int64_t cycle) {
        // Completions can launch replacement blocks, growing warps_/blocks_;
        // index access only, nothing held across complete_block.
        const std::size_t resident = warps_.size();
        for (std::size_t i = 0; i < resident; ++i) {
            {
                WarpState& warp = warps_[i];
                if (warp.finished || !warp.exit_issued || cycle < warp.exit_cycle + 1) continue;
                warp.finished = true;
                warp.status = WarpStatus::Finished;
            }
            --unfinished_warps_;
            const int block_index = warps_[i].block;
            const int warp_pos = warps_[i].warp_pos;
            const int dyn_id = warps_[i].dyn_id;
            --blocks_[static_cast<std::size_t>(block_index)].unfinished;
            const int pair_index = blocks_[static_cast<std::size_t>(block_index)].pair;
            if (pair_index >= 0) {
                BlockPair& pair = pairs_[static_cast<std::size_t>(pair_index)];
                if (pair.kind() == ResourceKind::Register &&
                    pair.warp_lock_holder(warp_pos) == dyn_id)
                    trace_lock(cycle, "release", dyn_id, dyn_id);
                pair.on_warp_finish(block_index, warp_pos);
            }
            if (blocks_[static_cast<std::size_t>(block_index)].unfinished == 0)
                complete_block(block_index, cycle);
        }
    }

    void complete_block(int block_index, std::int64_t cycle) {
        blocks_[static_cast<std::size_t>(block_index)].finished = true;
        const int pair_index = blocks_[static_cast<std::size_t>(block_index)].pair;
        ++metrics_.blocks_completed;
        if (pair_index < 0) {
            if (!grid_.empty()) {
                const int grid_id = grid_.front();
                grid_.pop_front();
                launch_block(grid_id, -1);
            }
            return;
        }
        BlockPair& pair = pairs_[static_cast<std::size_t>(pair_index)];
        if (pair.kind() == ResourceKind::Scratchpad && pair.block_lock_holder() == block_index)
            trace_lock(cycle, "release", block_index, block_index);
        pair.on_block_finish(block_index);
        trace_lock(cycle, "transfer", pair.owner_block(), block_index);
        if (!grid_.empty()) {
            const int grid_id = grid_.front();
            grid_.pop_front();
            const int fresh = launch_block(grid_id, pair_index);
            pair.replace_block(block_index, fresh);
        } else {
            pair.replace_block(block_index, BlockPair::kNone);
        }
        pair.assert_invariants();
    }

    bool scoreboard_clear(const WarpState& warp, const TraceOp& op,
                          std::int64_t cycle) const {
        for (int r : op.src_regs)
            if (warp.reg_ready[static_cast<std::size_t>(r)] > cycle) return false;
        for (int r : op.dst_regs)
            if (warp.reg_ready[static_cast<std::size_t>(r)] > cycle) return false;
        return true;
    }

    void refresh_readiness(std::int64_t cycle) {
        for (auto& warp : warps_) {
            warp.ready_now = false;
            if (warp.finished) continue;
            warp.cls = warp_class(warp);
            if (warp.exit_issued) {
                warp.status = WarpStatus::WaitScoreboard;  // awaiting retire
                continue;
            }
            if (warp.at_barrier) {
                warp.status = WarpStatus::WaitBarrier;
                continue;
            }
            const TraceOp& op = kernel_.body[static_cast<std::size_t>(warp.pc)];
            if (op.kind == OpKind::Exit) {
                if (warp.max_pending > cycle) {  // exit drains the pipeline
                    warp.status = WarpStatus::WaitScoreboard;
                    continue;
                }
            } else if (!scoreboard_clear(warp, op, cycle)) {
                warp.status = WarpStatus::WaitScoreboard;
                continue;
            }
            if (acquire_for_op(warp, op, /*commit=*/false, cycle) == Acquire::Denied) {
                warp.status = WarpStatus::WaitLock;
                ++metrics_.lock_wait_cycles;
                trace_lock(cycle, "deny", -1, warp.dyn_id);
                continue;
            }
            if (cfg_.dyn_exec.enabled && op.is_global() && warp.cls == WarpClass::NonOwner &&
                !throttle_permit(index_, throttle_p_, rng_)) {
                warp.status = WarpStatus::WaitThrottle;
                continue;
            }
            warp.status = WarpStatus::Ready;
            warp.ready_now = true;
        }
    }

    void schedule(std::int64_t cycle) {
        std::vector<scheduler::WarpView> views;
        for (int u = 0; u < cfg_.num_schedulers; ++u) {
            views.clear();
            std::vector<int> indices;
            for (std::size_t i = 0; i < warps_.size(); ++i) {
                const WarpState& w = warps_[i];
                if (w.finished || w.unit != u) continue;
                views.push_back({w.dyn_id, w.ready_now, w.cls, w.last_issued});
                indices.push_back(static_cast<int>(i));
            }
            if (views.empty()) {
                ++metrics_.units[static_cast<std::size_t>(u)].idle_cycles;
                continue;
            }
            bool issued = false;
            for (;;) {
                const int picked = units_[static_cast<std::size_t>(u)].pick(views);
                if (picked < 0) break;
                const std::size_t k = static_cast<std::size_t>(
                    std::find_if(views.begin(), views.end(),
                                 [&](const scheduler::WarpView& v) {
                                     return v.dynamic_warp_id == picked;
                                 }) -
                    views.begin());
                WarpState& warp = warps_[static_cast<std::size_t>(indices[k])];
                // A lock probed free during readiness may have been committed by
                // another unit earlier this cycle; re-check before issuing.
                const TraceOp& op = kernel_.body[static_cast<std::size_t>(warp.pc)];
                if (acquire_for_op(warp, op, /*commit=*/false, cycle) == Acquire::Denied) {
                    views[k].ready = false;
                    warp.ready_now = false;
                    warp.status = WarpStatus::WaitLock;
                    ++metrics_.lock_wait_cycles;
                    trace_lock(cycle, "deny", -1, warp.dyn_id);
                    continue;
                }
                if (cfg_.scheduler == SchedulerPolicy::OWF &&
                    views[k].cls == WarpClass::NonOwner) {
                    for (const auto& v : views)
                        if (v.ready && v.cls == WarpClass::Owner)
                            throw SimulatorInvariantViolation(
                                "OWF issued a non-owner warp while an owner warp was "
                                "ready");
                }
                issue(warp, cycle);
                issued = true;
                break;
            }
            if (!issued) {
                ++metrics_.units[static_cast<std::size_t>(u)].stall_cycles;
                ++window_stalls_;
                continue;
            }
            ++metrics_.units[static_cast<std::size_t>(u)].issue_cycles;
        }
    }

    void issue(WarpState& warp, std::int64_t cycle) {
        const TraceOp& op = kernel_.body[static_cast<std::size_t>(warp.pc)];
        if (acquire_for_op(warp, op, /*commit=*/true, cycle) != Acquire::Granted)
            throw SimulatorInvariantViolation("issue after failed lock acquisition");

        auto charge = [&](int latency) {
            for (int r : op.dst_regs) {
                warp.reg_ready[static_cast<std::size_t>(r)] = cycle + latency;
                warp.max_pending = std::max(warp.max_pending, cycle + latency);
            }
        };

        switch (op.kind) {
            case OpKind::Alu:
                charge(cfg_.latencies.alu);
                break;
            case OpKind::GlobalLoad: {
                const bool hit = l1_.access(effective_address(op, warp), false);
                charge(hit ? cfg_.latencies.l1_hit : cfg_.latencies.l1_miss);
                break;
            }
            case OpKind::GlobalStore:
                l1_.access(effective_address(op, warp), true);
                break;
            case OpKind::SharedLoad:
                charge(cfg_.latencies.shared_mem);
                break;
            case OpKind::SharedStore:
                break;
            case OpKind::Barrier:
                warp.at_barrier = true;
                ++blocks_[warp.block].barrier_arrived;
                break;
            case OpKind::Exit:
                if (warp.iter + 1 < kernel_.loop_trip_count) {
                    ++warp.iter;
                    warp.pc = -1;  // advances to 0 below
                } else {
                    warp.exit_issued = true;
                    warp.exit_cycle = cycle;
                }
                break;
        }
        ++warp.pc;
        warp.last_issued = cycle;
        ++metrics_.instructions_issued;
    }

    std::int64_t effective_address(const TraceOp& op, const WarpState& warp) const {
        return op.addr.base + op.addr.warp_stride * warp.dyn_id +
               op.addr.iter_stride * warp.iter;
    }

    void release_barriers() {
        for (auto& block : blocks_) {
            if (block.finished || block.barrier_arrived == 0) continue;
            if (block.barrier_arrived < block.unfinished) continue;
            for (int wi : block.warp_index) {
                WarpState& warp = warps_[static_cast<std::size_t>(wi)];
                if (!warp.finished) warp.at_barrier = false;
            }
            block.barrier_arrived = 0;
        }
    }

    int index_;
    const SmConfig& cfg_;
    const KernelSpec& kernel_;
    const BindingPlan& binding_;
    std::deque<int>& grid_;
    std::vector<WarpState> warps_;
    std::vector<BlockState> blocks_;
    std::vector<BlockPair> pairs_;
    std::vector<scheduler::SchedulerUnit> units_;
    L1Cache l1_;
    std::mt19937_64 rng_;
    std::ostream* lock_trace_;
    SmMetrics metrics_;
    double throttle_p_ = 1.0;
    std::int64_t window_stalls_ = 0;
    int next_dyn_id_ = 0;
    int unfinished_warps_ = 0;
    int launched_ = 0;
    int pending_pair_member_ = -1;
    bool active_ = true;
};

}  // namespace

MetricsReport run(const SmConfig& cfg, const KernelSpec& kernel, PlanMode mode,
                  bool reorder_enabled, std::ostream* lock_trace) {
    (void)reorder_enabled;  // JSON workloads are pre-numbered
    workload::validate(kernel, cfg);
    const BindingPlan binding = compute_plan(cfg, kernel, mode);

    std::deque<int> grid;
    for (int b = 0; b < kernel.grid_blocks; ++b) grid.push_back(b);

    std::vector<SmCore> sms;
    sms.reserve(static_cast<std::size_t>(cfg.num_sms));
    for (int i = 0; i < cfg.num_sms; ++i)
        sms.emplace_back(i, cfg, kernel, binding, grid, lock_trace);

    // Round-robin residency fill, one block per SM per round.
    bool progress = true;
    while (progress && !grid.empty()) {
        progress = false;
        for (auto& sm : sms)
            if (sm.launch_next_from_grid()) progress = true;
    }

    if (cfg.dyn_exec.enabled) sms[0].set_throttle_probability(0.0);
    for (auto& sm : sms) sm.settle();  // SMs that received no blocks never spin

    std::int64_t cycle = 0;
    for (;; ++cycle) {
        bool any = false;
        for (auto& sm : sms)
            if (sm.active()) {
                sm.step(cycle);
                any = true;
            }
        if (!any) break;
        if (cycle >= cfg.cycle_limit)
            throw CycleLimitExceeded("cycle limit " + std::to_string(cfg.cycle_limit) +
                                     " exceeded");
        if (cfg.dyn_exec.enabled && (cycle + 1) % cfg.dyn_exec.window == 0) {
            const std::int64_t reference = sms[0].window_stalls();
            for (std::size_t i = 1; i < sms.size(); ++i)
                sms[i].set_throttle_probability(
                    throttle_step(sms[i].throttle_probability(), sms[i].window_stalls(),
                                  reference, cfg.dyn_exec.step));
            for (auto& sm : sms) sm.reset_window();
        }
    }

    MetricsReport report;
    report.blocks_resident = binding.plan.total_blocks;
    for (auto& sm : sms) {
        sm.finalize_metrics();
        const SmMetrics& m = sm.metrics();
        report.cycles = std::max(report.cycles, m.cycles);
        report.instructions_issued += m.instructions_issued;
        report.stall_cycles += m.stall_cycles;
        report.idle_cycles += m.idle_cycles;
        report.lock_wait_cycles += m.lock_wait_cycles;
        report.l1_accesses += m.l1_accesses;
        report.l1_misses += m.l1_misses;
        report.blocks_completed += m.blocks_completed;
        report.per_sm.push_back(m);
    }
    report.ipc = report.cycles == 0 ? 0.0
                                    : static_cast<double>(report.instructions_issued) /
                                          static_cast<double>(report.cycles);

    const std::int64_t expected =
        static_cast<std::int64_t>(kernel.grid_blocks) * kernel.warps_per_block(cfg.warp_size) *
        static_cast<std::int64_t>(kernel.body.size()) * kernel.loop_trip_count;
    if (report.instructions_issued != expected)
        throw SimulatorInvariantViolation("instruction count mismatch: issued " +
                                          std::to_string(report.instructions_issued) +
                                          ", expected " + std::to_string(expected));
    if (report.blocks_completed != kernel.grid_blocks)
        throw SimulatorInvariantViolation("not every grid block completed");
    return report;
}

std::string metrics_to_json_text(const MetricsReport& report) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["cycles"] = report.cycles;
    j["instructions_issued"] = report.instructions_issued;
    j["ipc"] = report.ipc;
    j["stall_cycles"] = report.stall_cycles;
    j["idle_cycles"] = report.idle_cycles;
    j["lock_wait_cycles"] = report.lock_wait_cycles;
    j["l1_accesses"] = report.l1_accesses;
    j["l1_misses"] = report.l1_misses;
    j["l1_miss_rate"] = report.l1_miss_rate();
    j["blocks_completed"] = report.blocks_completed;
    j["blocks_resident"] = report.blocks_resident;
    nlohmann::json sms = nlohmann::json::array();
    for (const auto& sm : report.per_sm) {
        nlohmann::json e;
        e["cycles"] = sm.cycles;
        e["instructions_issued"] = sm.instructions_issued;
        e["ipc"] = sm.ipc;
        e["stall_cycles"] = sm.stall_cycles;
        e["idle_cycles"] = sm.idle_cycles;
        e["lock_wait_cycles"] = sm.lock_wait_cycles;
        e["l1_accesses"] = sm.l1_accesses;
        e["l1_misses"] = sm.l1_misses;
        e["blocks_completed"] = sm.blocks_completed;
        nlohmann::json units = nlohmann::json::array();
        for (const auto& u : sm.units)
            units.push_back({{"issue_cycles", u.issue_cycles},
                             {"stall_cycles", u.stall_cycles},
                             {"idle_cycles", u.idle_cycles}});
        e["units"] = units;
        sms.push_back(e);
    }
    j["per_sm"] = sms;
    return j.dump(2);
}

}  // namespace warpshare::engine
