#pragma once

#include <cstdint>
#include <string>

#include "warpshare/rational.hpp"

namespace warpshare {

enum class SchedulerPolicy { LRR, GTO, OWF };

SchedulerPolicy policy_from_name(const std::string& name);
const char* policy_name(SchedulerPolicy policy);

struct Latencies {
    int alu = 4;
    int shared_mem = 24;
    int l1_hit = 28;
    int l1_miss = 200;
};

struct L1Geometry {
    int sets = 32;
    int ways = 4;
    int line_bytes = 128;
};

struct DynExec {
    bool enabled = false;
    int window = 1000;    // monitoring period, cycles
    double step = 0.1;    // probability adjustment per window
};

struct SmConfig {
    int num_sms = 14;
    std::int64_t registers_per_sm = 32768;
    std::int64_t scratchpad_per_sm = 16384;
    int max_threads = 1536;
    int max_blocks = 8;
    int warp_size = 32;
    int num_schedulers = 2;
    Rational sharing_threshold{1, 10};
    bool share_registers = true;
    bool share_scratchpad = true;
    bool strict_block_ownership = false;
    SchedulerPolicy scheduler = SchedulerPolicy::LRR;
    Latencies latencies;
    L1Geometry l1;
    DynExec dyn_exec;
    std::uint64_t rng_seed = 0;
    std::int64_t cycle_limit = 100000000;
};

SmConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const SmConfig& cfg);
SmConfig load_config(const std::string& path);

}  // namespace warpshare
