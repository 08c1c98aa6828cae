#include "warpshare/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace warpshare {

using nlohmann::json;

SchedulerPolicy policy_from_name(const std::string& name) {
    if (name == "lrr") return SchedulerPolicy::LRR;
    if (name == "gto") return SchedulerPolicy::GTO;
    if (name == "owf") return SchedulerPolicy::OWF;
    throw std::invalid_argument("unknown scheduler policy: " + name);
}

const char* policy_name(SchedulerPolicy policy) {
    switch (policy) {
        case SchedulerPolicy::LRR: return "lrr";
        case SchedulerPolicy::GTO: return "gto";
        case SchedulerPolicy::OWF: return "owf";
    }
    return "?";
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

SmConfig config_from_json_text(const std::string& text) {
    json j = json::parse(text);
    SmConfig cfg;
    maybe(j, "num_sms", cfg.num_sms);
    maybe(j, "registers_per_sm", cfg.registers_per_sm);
    maybe(j, "scratchpad_per_sm", cfg.scratchpad_per_sm);
    maybe(j, "max_threads", cfg.max_threads);
    maybe(j, "max_blocks", cfg.max_blocks);
    maybe(j, "warp_size", cfg.warp_size);
    maybe(j, "num_schedulers", cfg.num_schedulers);
    maybe(j, "share_registers", cfg.share_registers);
    maybe(j, "share_scratchpad", cfg.share_scratchpad);
    maybe(j, "strict_block_ownership", cfg.strict_block_ownership);
    maybe(j, "rng_seed", cfg.rng_seed);
    maybe(j, "cycle_limit", cfg.cycle_limit);
    if (j.contains("scheduler"))
        cfg.scheduler = policy_from_name(j.at("scheduler").get<std::string>());
    if (j.contains("sharing_threshold")) {
        const auto& t = j.at("sharing_threshold");
        cfg.sharing_threshold = Rational{t.at("num").get<std::int64_t>(),
                                         t.at("den").get<std::int64_t>()};
    }
    if (j.contains("latencies")) {
        const auto& l = j.at("latencies");
        maybe(l, "alu", cfg.latencies.alu);
        maybe(l, "shared_mem", cfg.latencies.shared_mem);
        maybe(l, "l1_hit", cfg.latencies.l1_hit);
        maybe(l, "l1_miss", cfg.latencies.l1_miss);
    }
    if (j.contains("l1")) {
        const auto& l = j.at("l1");
        maybe(l, "sets", cfg.l1.sets);
        maybe(l, "ways", cfg.l1.ways);
        maybe(l, "line_bytes", cfg.l1.line_bytes);
    }
    if (j.contains("dyn_exec")) {
        const auto& d = j.at("dyn_exec");
        maybe(d, "enabled", cfg.dyn_exec.enabled);
        maybe(d, "window", cfg.dyn_exec.window);
        maybe(d, "step", cfg.dyn_exec.step);
    }
    return cfg;
}

std::string config_to_json_text(const SmConfig& cfg) {
    json j;
    j["num_sms"] = cfg.num_sms;
    j["registers_per_sm"] = cfg.registers_per_sm;
    j["scratchpad_per_sm"] = cfg.scratchpad_per_sm;
    j["max_threads"] = cfg.max_threads;
    j["max_blocks"] = cfg.max_blocks;
    j["warp_size"] = cfg.warp_size;
    j["num_schedulers"] = cfg.num_schedulers;
    j["sharing_threshold"] = {{"num", cfg.sharing_threshold.num},
                              {"den", cfg.sharing_threshold.den}};
    j["share_registers"] = cfg.share_registers;
    j["share_scratchpad"] = cfg.share_scratchpad;
    j["strict_block_ownership"] = cfg.strict_block_ownership;
    j["scheduler"] = policy_name(cfg.scheduler);
    j["latencies"] = {{"alu", cfg.latencies.alu},
                      {"shared_mem", cfg.latencies.shared_mem},
                      {"l1_hit", cfg.latencies.l1_hit},
                      {"l1_miss", cfg.latencies.l1_miss}};
    j["l1"] = {{"sets", cfg.l1.sets}, {"ways", cfg.l1.ways}, {"line_bytes", cfg.l1.line_bytes}};
    j["dyn_exec"] = {{"enabled", cfg.dyn_exec.enabled},
                     {"window", cfg.dyn_exec.window},
                     {"step", cfg.dyn_exec.step}};
    j["rng_seed"] = cfg.rng_seed;
    j["cycle_limit"] = cfg.cycle_limit;
    return j.dump(2);
}

SmConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

}  // namespace warpshare
