#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "warpshare/config.hpp"
#include "warpshare/rational.hpp"

using namespace warpshare;

TEST_CASE("defaults mirror the modeled machine") {
    const SmConfig cfg;
    CHECK(cfg.num_sms == 14);
    CHECK(cfg.registers_per_sm == 32768);
    CHECK(cfg.scratchpad_per_sm == 16384);
    CHECK(cfg.max_threads == 1536);
    CHECK(cfg.max_blocks == 8);
    CHECK(cfg.warp_size == 32);
    CHECK(cfg.num_schedulers == 2);
    CHECK(cfg.scheduler == SchedulerPolicy::LRR);
    CHECK(cfg.latencies.alu == 4);
    CHECK(cfg.latencies.shared_mem == 24);
    CHECK(cfg.latencies.l1_hit == 28);
    CHECK(cfg.latencies.l1_miss == 200);
    CHECK(cfg.l1.sets == 32);
    CHECK(cfg.l1.ways == 4);
    CHECK(cfg.l1.line_bytes == 128);
    CHECK_FALSE(cfg.dyn_exec.enabled);
    CHECK(cfg.dyn_exec.window == 1000);
    CHECK(cfg.dyn_exec.step == 1.0 / 10);
    CHECK(cfg.sharing_threshold == Rational{1, 10});
}

TEST_CASE("JSON round-trip preserves every field") {
    SmConfig cfg;
    cfg.num_sms = 3;
    cfg.registers_per_sm = 1024;
    cfg.scratchpad_per_sm = 2048;
    cfg.max_threads = 512;
    cfg.max_blocks = 4;
    cfg.num_schedulers = 1;
    cfg.sharing_threshold = Rational{3, 10};
    cfg.share_registers = false;
    cfg.strict_block_ownership = true;
    cfg.scheduler = SchedulerPolicy::OWF;
    cfg.latencies.alu = 2;
    cfg.latencies.l1_miss = 300;
    cfg.l1.sets = 16;
    cfg.dyn_exec.enabled = true;
    cfg.dyn_exec.window = 500;
    cfg.dyn_exec.step = 0.25;
    cfg.rng_seed = 99;
    cfg.cycle_limit = 12345;

    const SmConfig back = config_from_json_text(config_to_json_text(cfg));
    CHECK(back.num_sms == cfg.num_sms);
    CHECK(back.registers_per_sm == cfg.registers_per_sm);
    CHECK(back.scratchpad_per_sm == cfg.scratchpad_per_sm);
    CHECK(back.max_threads == cfg.max_threads);
    CHECK(back.max_blocks == cfg.max_blocks);
    CHECK(back.warp_size == cfg.warp_size);
    CHECK(back.num_schedulers == cfg.num_schedulers);
    CHECK(back.sharing_threshold == cfg.sharing_threshold);
    CHECK(back.share_registers == cfg.share_registers);
    CHECK(back.share_scratchpad == cfg.share_scratchpad);
    CHECK(back.strict_block_ownership == cfg.strict_block_ownership);
    CHECK(back.scheduler == cfg.scheduler);
    CHECK(back.latencies.alu == cfg.latencies.alu);
    CHECK(back.latencies.shared_mem == cfg.latencies.shared_mem);
    CHECK(back.latencies.l1_hit == cfg.latencies.l1_hit);
    CHECK(back.latencies.l1_miss == cfg.latencies.l1_miss);
    CHECK(back.l1.sets == cfg.l1.sets);
    CHECK(back.l1.ways == cfg.l1.ways);
    CHECK(back.l1.line_bytes == cfg.l1.line_bytes);
    CHECK(back.dyn_exec.enabled == cfg.dyn_exec.enabled);
    CHECK(back.dyn_exec.window == cfg.dyn_exec.window);
    CHECK(back.dyn_exec.step == cfg.dyn_exec.step);
    CHECK(back.rng_seed == cfg.rng_seed);
    CHECK(back.cycle_limit == cfg.cycle_limit);
}

TEST_CASE("partial JSON keeps defaults for missing keys") {
    const SmConfig cfg = config_from_json_text(R"({"num_sms": 2, "scheduler": "gto"})");
    CHECK(cfg.num_sms == 2);
    CHECK(cfg.scheduler == SchedulerPolicy::GTO);
    CHECK(cfg.registers_per_sm == 32768);
    CHECK(cfg.sharing_threshold == Rational{1, 10});
}

TEST_CASE("policy names round-trip and reject unknowns") {
    for (auto p : {SchedulerPolicy::LRR, SchedulerPolicy::GTO, SchedulerPolicy::OWF})
        CHECK(policy_from_name(policy_name(p)) == p);
    CHECK_THROWS(policy_from_name("fifo"));
}

TEST_CASE("rational threshold arithmetic is exact") {
    const Rational t{1, 10};
    CHECK(t.floor_mul(9216) == 921);
    CHECK(t.ceil_mul(9216) == 922);
    CHECK(Rational{7, 10}.ceil_mul(6912) == 4839);
    CHECK(Rational::from_sharing_pct(90) == Rational{1, 10});
    CHECK(Rational::from_sharing_pct(0) == Rational{1, 1});
    CHECK(Rational::from_sharing_pct(30) == Rational{7, 10});
    CHECK_THROWS(Rational::from_sharing_pct(100));
    CHECK_THROWS(Rational::from_sharing_pct(-1));
    CHECK(Rational{1, 1}.is_one());
    CHECK_FALSE(Rational{0, 1}.valid());
    CHECK_FALSE(Rational{3, 2}.valid());
}
