#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <random>
#include <sstream>
#include <vector>

#include "engine_oracle.hpp"
#include "warpshare/engine.hpp"
#include "warpshare/errors.hpp"
#include "warpshare/workload.hpp"

using namespace warpshare;
using namespace warpshare::engine;
using namespace warpshare::workload;

namespace {

TraceOp alu(int dst, std::vector<int> srcs) {
    TraceOp op;
    op.kind = OpKind::Alu;
    op.dst_regs = {dst};
    op.src_regs = std::move(srcs);
    return op;
}

TraceOp plain(OpKind kind) {
    TraceOp op;
    op.kind = kind;
    return op;
}

SmConfig tiny_config() {
    SmConfig cfg;
    cfg.num_sms = 1;
    cfg.num_schedulers = 1;
    return cfg;
}

KernelSpec tiny_kernel(int grid, int tpb, int rpt, std::vector<TraceOp> body, int trips = 1) {
    KernelSpec k;
    k.name = "tiny";
    k.grid_blocks = grid;
    k.threads_per_block = tpb;
    k.regs_per_thread = rpt;
    k.loop_trip_count = trips;
    k.body = std::move(body);
    return k;
}

using warpshare::testing::OracleResult;
using warpshare::testing::oracle_run;
using warpshare::testing::random_small_kernel;

}  // namespace

TEST_CASE("hand-stepped dependent-chain timing") {
    const SmConfig cfg = tiny_config();
    const KernelSpec k =
        tiny_kernel(1, 32, 4, {alu(2, {1}), alu(3, {2}), plain(OpKind::Exit)});
    const MetricsReport r = run(cfg, k, PlanMode::Baseline);
    CHECK(r.cycles == 10);
    CHECK(r.instructions_issued == 3);
    REQUIRE(r.per_sm.size() == 1);
    REQUIRE(r.per_sm[0].units.size() == 1);
    CHECK(r.per_sm[0].units[0].issue_cycles == 3);
    CHECK(r.per_sm[0].units[0].stall_cycles == 6);
    CHECK(r.per_sm[0].units[0].idle_cycles == 1);
    CHECK(r.ipc == doctest::Approx(0.3));
}

TEST_CASE("a second independent warp hides stalls") {
    const SmConfig cfg = tiny_config();
    const std::vector<TraceOp> body = {alu(2, {1}), alu(3, {2}), plain(OpKind::Exit)};
    const MetricsReport one = run(cfg, tiny_kernel(1, 32, 4, body), PlanMode::Baseline);
    const MetricsReport two = run(cfg, tiny_kernel(1, 64, 4, body), PlanMode::Baseline);
    CHECK(two.instructions_issued == 2 * one.instructions_issued);
    CHECK(two.stall_cycles < one.stall_cycles);
}

TEST_CASE("zero grid blocks is a clean no-op") {
    const SmConfig cfg = tiny_config();
    const MetricsReport r =
        run(cfg, tiny_kernel(0, 32, 4, {alu(2, {1}), plain(OpKind::Exit)}), PlanMode::Baseline);
    CHECK(r.cycles == 0);
    CHECK(r.instructions_issued == 0);
    CHECK(r.ipc == 0.0);
    CHECK(r.blocks_completed == 0);
}

TEST_CASE("identical inputs give identical reports") {
    SmConfig cfg;
    cfg.num_sms = 2;
    cfg.scheduler = SchedulerPolicy::OWF;
    cfg.dyn_exec.enabled = true;
    cfg.rng_seed = 5;
    const KernelSpec k = generate(Profile::MemoryBound, 9);
    CHECK(run(cfg, k, PlanMode::Sharing) == run(cfg, k, PlanMode::Sharing));
}

TEST_CASE("engine matches the brute-force reference on small unshared kernels") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 400; ++i) {
        SmConfig cfg = tiny_config();
        cfg.scheduler = std::array{SchedulerPolicy::LRR, SchedulerPolicy::GTO,
                                   SchedulerPolicy::OWF}[i % 3];
        const KernelSpec k = random_small_kernel(rng);
        CAPTURE(i);
        CAPTURE(kernel_to_json_text(k));
        const MetricsReport r = run(cfg, k, PlanMode::Baseline);
        const OracleResult o = oracle_run(cfg, k);
        CHECK(r.cycles == o.cycles);
        CHECK(r.instructions_issued == o.instructions);
        CHECK(r.per_sm[0].units[0].issue_cycles == o.issue);
        CHECK(r.per_sm[0].units[0].stall_cycles == o.stall);
        CHECK(r.per_sm[0].units[0].idle_cycles == o.idle);
    }
}

TEST_CASE("plan selection binds the scarcer resource") {
    SmConfig cfg;
    KernelSpec regs = tiny_kernel(12, 64, 160, {alu(2, {1}), plain(OpKind::Exit)});
    BindingPlan plan = compute_plan(cfg, regs, PlanMode::Baseline);
    CHECK(plan.kind == occupancy::ResourceKind::Register);
    CHECK(plan.plan.total_blocks == 3);
    CHECK(plan.plan.shared_pairs == 0);

    plan = compute_plan(cfg, regs, PlanMode::Sharing);  // t = 1/10
    CHECK(plan.plan.unshared_blocks == 1);
    CHECK(plan.plan.shared_pairs == 2);
    CHECK(plan.plan.total_blocks == 5);

    KernelSpec spm = tiny_kernel(8, 128, 24, {alu(2, {1}), plain(OpKind::Exit)});
    spm.scratchpad_per_block = 6144;
    cfg.sharing_threshold = Rational{1, 2};
    plan = compute_plan(cfg, spm, PlanMode::Sharing);
    CHECK(plan.kind == occupancy::ResourceKind::Scratchpad);
    CHECK(plan.plan.unshared_blocks == 1);
    CHECK(plan.plan.shared_pairs == 1);

    cfg.share_scratchpad = false;
    plan = compute_plan(cfg, spm, PlanMode::Sharing);
    CHECK(plan.plan.shared_pairs == 0);
    CHECK(plan.plan.total_blocks == 2);
}

TEST_CASE("the unshared capacity of the other resource caps the plan") {
    SmConfig cfg;
    cfg.sharing_threshold = Rational{1, 10};
    KernelSpec k = tiny_kernel(8, 128, 80, {alu(2, {1}), plain(OpKind::Exit)});
    k.scratchpad_per_block = 6144;  // scratchpad baseline 2, registers fit only 3 blocks
    const BindingPlan plan = compute_plan(cfg, k, PlanMode::Sharing);
    CHECK(plan.kind == occupancy::ResourceKind::Scratchpad);
    CHECK(plan.plan.total_blocks == 3);
    CHECK(plan.plan.unshared_blocks + plan.plan.shared_pairs == 2);
}

TEST_CASE("throttle probability adjustment saturates") {
    CHECK(throttle_step(1.0, 120, 100, 0.1) == doctest::Approx(0.9));
    CHECK(throttle_step(1.0, 80, 100, 0.1) == doctest::Approx(1.0));
    CHECK(throttle_step(0.0, 120, 100, 0.1) == doctest::Approx(0.0));
    CHECK(throttle_step(0.5, 100, 100, 0.1) == doctest::Approx(0.5));
    CHECK(throttle_step(0.05, 120, 100, 0.1) == doctest::Approx(0.0));
}

TEST_CASE("throttle permits are deterministic and gated off on the reference SM") {
    std::mt19937_64 a(3), b(3);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(throttle_permit(0, 1.0, a));
        CHECK(throttle_permit(1, 1.0, a));
    }
    std::vector<bool> seq1, seq2;
    for (int i = 0; i < 200; ++i) seq1.push_back(throttle_permit(2, 0.3, a));
    std::mt19937_64 c(3);
    for (int i = 0; i < 100; ++i) {
        throttle_permit(0, 1.0, c);
        throttle_permit(1, 1.0, c);
    }
    for (int i = 0; i < 200; ++i) seq2.push_back(throttle_permit(2, 0.3, c));
    CHECK(seq1 == seq2);
    CHECK(std::count(seq1.begin(), seq1.end(), true) > 20);
    CHECK(std::count(seq1.begin(), seq1.end(), true) < 180);
}

TEST_CASE("register sharing runs exercise the lock protocol and finish") {
    SmConfig cfg;
    cfg.num_sms = 1;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        const KernelSpec k = generate(Profile::ComputeBound, seed);
        const MetricsReport r = run(cfg, k, PlanMode::Sharing);
        CHECK(r.blocks_completed == k.grid_blocks);
        CHECK(r.blocks_resident == 2);  // one 29440-register block plus its pair partner
        CHECK(r.lock_wait_cycles > 0);
    }
}

TEST_CASE("scratchpad sharing runs finish under both ownership rules") {
    SmConfig cfg;
    cfg.num_sms = 1;
    for (bool strict : {false, true}) {
        cfg.strict_block_ownership = strict;
        const KernelSpec k = generate(Profile::ScratchpadHeavy, 11);
        const MetricsReport r = run(cfg, k, PlanMode::Sharing);
        CHECK(r.blocks_completed == k.grid_blocks);
        CHECK(r.blocks_resident == 4);  // two shared pairs
    }
}

TEST_CASE("barrier after a shared-register access cannot deadlock") {
    SmConfig cfg;
    cfg.num_sms = 1;
    cfg.num_schedulers = 1;
    cfg.registers_per_sm = 1150;  // exactly one shared pair of 1024-register blocks
    cfg.cycle_limit = 100000;
    KernelSpec k = tiny_kernel(2, 64, 16,
                               {alu(2, {1}), plain(OpKind::Barrier), alu(3, {2}),
                                plain(OpKind::Exit)},
                               2);
    const BindingPlan plan = compute_plan(cfg, k, PlanMode::Sharing);
    REQUIRE(plan.plan.shared_pairs == 1);
    REQUIRE(plan.plan.unshared_blocks == 0);
    const MetricsReport r = run(cfg, k, PlanMode::Sharing);
    CHECK(r.blocks_completed == 2);
    CHECK(r.lock_wait_cycles > 0);
}

TEST_CASE("lock trace records the acquire, deny and transfer events") {
    SmConfig cfg;
    cfg.num_sms = 1;
    cfg.num_schedulers = 1;
    cfg.registers_per_sm = 2300;
    KernelSpec k = tiny_kernel(3, 64, 16, {alu(2, {1}), plain(OpKind::Exit)});
    std::ostringstream trace;
    run(cfg, k, PlanMode::Sharing, false, &trace);
    const std::string text = trace.str();
    CHECK(text.find("acquire") != std::string::npos);
    CHECK(text.find("deny") != std::string::npos);
    CHECK(text.find("release") != std::string::npos);
    CHECK(text.find("transfer") != std::string::npos);
}

TEST_CASE("full-threshold sharing is bit-identical to the baseline") {
    SmConfig cfg;
    cfg.num_sms = 2;
    cfg.sharing_threshold = Rational{1, 1};
    for (std::uint64_t seed : {0ULL, 7ULL, 13ULL}) {
        const KernelSpec k = generate(Profile::ComputeBound, seed);
        CHECK(run(cfg, k, PlanMode::Sharing) == run(cfg, k, PlanMode::Baseline));
    }
}

TEST_CASE("dynamic execution throttling terminates and stays deterministic") {
    SmConfig cfg;
    cfg.num_sms = 3;
    cfg.scheduler = SchedulerPolicy::OWF;
    cfg.dyn_exec.enabled = true;
    cfg.dyn_exec.window = 100;
    cfg.rng_seed = 21;
    const KernelSpec k = generate(Profile::MemoryBound, 4);
    const MetricsReport a = run(cfg, k, PlanMode::Sharing);
    CHECK(a.blocks_completed == k.grid_blocks);
    CHECK(a == run(cfg, k, PlanMode::Sharing));
}

TEST_CASE("metrics serialize with a schema version") {
    const SmConfig cfg = tiny_config();
    const MetricsReport r =
        run(cfg, tiny_kernel(1, 32, 4, {alu(2, {1}), plain(OpKind::Exit)}), PlanMode::Baseline);
    const std::string text = metrics_to_json_text(r);
    CHECK(text.find("\"schema_version\"") != std::string::npos);
    CHECK(text.find("\"ipc\"") != std::string::npos);
    CHECK(text.find("\"per_sm\"") != std::string::npos);
}

TEST_CASE("watchdog fires instead of hanging") {
    SmConfig cfg = tiny_config();
    cfg.cycle_limit = 5;
    const KernelSpec k = tiny_kernel(1, 32, 4, {alu(2, {1}), alu(3, {2}), plain(OpKind::Exit)});
    CHECK_THROWS_AS(run(cfg, k, PlanMode::Baseline), CycleLimitExceeded);
}
