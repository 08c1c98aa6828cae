#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "warpshare/asm_reorder.hpp"
#include "warpshare/config.hpp"
#include "warpshare/engine.hpp"
#include "warpshare/errors.hpp"
#include "warpshare/occupancy.hpp"
#include "warpshare/workload.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";

using warpshare::Rational;
using warpshare::SmConfig;
namespace engine = warpshare::engine;
namespace occ = warpshare::occupancy;
namespace wl = warpshare::workload;

Rational threshold_from_string(const std::string& text) {
    // Accepts "1", "0.35", ".5" — exact decimal, no float round-trip.
    const auto dot = text.find('.');
    std::int64_t num = 0;
    std::int64_t den = 1;
    const std::string ipart = dot == std::string::npos ? text : text.substr(0, dot);
    const std::string fpart = dot == std::string::npos ? "" : text.substr(dot + 1);
    for (char c : ipart + fpart) {
        if (c < '0' || c > '9')
            throw warpshare::InvalidThreshold("not a decimal number: " + text);
        num = num * 10 + (c - '0');
    }
    for (std::size_t i = 0; i < fpart.size(); ++i) den *= 10;
    Rational r{num, den};
    r.reduce();
    if (!r.valid()) throw warpshare::InvalidThreshold("threshold must be in (0, 1]: " + text);
    return r;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw warpshare::ParseError(0, 0, "cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

void write_manifest(const std::string& out_path, const std::string& command,
                    const nlohmann::json& resolved_config, std::uint64_t workload_hash,
                    std::uint64_t seed) {
    nlohmann::json m;
    m["schema_version"] = 1;
    m["command"] = command;
    m["resolved_config"] = resolved_config;
    m["workload_hash"] = workload_hash;
    m["seed"] = seed;
    m["tool_version"] = kToolVersion;
    m["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    write_file(out_path + ".manifest.json", m.dump(2) + "\n");
}

std::uint64_t resolve_seed(std::uint64_t flag_seed) {
    if (const char* env = std::getenv("WARPSHARE_SEED")) return std::stoull(env);
    return flag_seed;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
}

// ---- occupancy ----

struct OccupancyArgs {
    std::int64_t registers = 32768;
    std::int64_t scratchpad = 16384;
    int regs_per_thread = 0;
    std::int64_t spm_per_block = 0;
    int threads_per_block = 0;
    std::vector<int> sharing_pct;
    int max_threads = 1536;
    int max_blocks = 8;
    std::string out;
};

int run_occupancy(const OccupancyArgs& a, const std::string& command) {
    occ::SmLimits limits;
    limits.max_threads = a.max_threads;
    limits.max_blocks = a.max_blocks;

    occ::ResourceBudget regs;
    regs.kind = occ::ResourceKind::Register;
    regs.units_per_sm = a.registers;
    regs.units_per_block = static_cast<std::int64_t>(a.threads_per_block) * a.regs_per_thread;
    regs.units_per_warp = static_cast<std::int64_t>(limits.warp_size) * a.regs_per_thread;

    occ::ResourceBudget spm;
    spm.kind = occ::ResourceKind::Scratchpad;
    spm.units_per_sm = a.scratchpad;
    spm.units_per_block = a.spm_per_block;

    occ::ResourceBudget budget = regs;
    if (a.spm_per_block > 0) {
        if (a.regs_per_thread > 0) {
            const std::int64_t reg_b0 = regs.units_per_sm / regs.units_per_block;
            const std::int64_t spm_b0 = spm.units_per_sm / spm.units_per_block;
            if (spm_b0 < reg_b0) budget = spm;
        } else {
            budget = spm;
        }
    } else if (a.regs_per_thread <= 0) {
        throw warpshare::InvalidKernel("need --regs-per-thread or --spm-per-block");
    }

    std::ostringstream csv;
    csv << "sharing_pct,U,S,M,limited_by\n";
    for (int pct : a.sharing_pct) {
        const occ::OccupancyPlan plan = occ::compute_occupancy(
            budget, limits, a.threads_per_block, Rational::from_sharing_pct(pct));
        const char* lb = plan.limited_by == occ::LimitedBy::Resource ? "resource"
                         : plan.limited_by == occ::LimitedBy::Threads ? "threads"
                                                                      : "blocks";
        csv << pct << "," << plan.unshared_blocks << "," << plan.shared_pairs << ","
            << plan.total_blocks << "," << lb << "\n";
    }
    emit(a.out, csv.str());
    if (!a.out.empty()) write_manifest(a.out, command, nlohmann::json::object(), 0, 0);
    return 0;
}

// ---- simulate / sweep ----

struct SimArgs {
    std::string config_path;
    std::string workload_path;
    std::string mode = "sharing";
    std::string scheduler;
    bool dyn = false;
    bool reorder = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string out;
    std::string trace_locks;
    std::vector<int> sharing_pct;  // sweep only
};

SmConfig resolve_config(const SimArgs& a) {
    SmConfig cfg;
    if (!a.config_path.empty()) cfg = warpshare::load_config(a.config_path);
    if (!a.scheduler.empty()) cfg.scheduler = warpshare::policy_from_name(a.scheduler);
    if (a.dyn) cfg.dyn_exec.enabled = true;
    if (a.seed_given || std::getenv("WARPSHARE_SEED")) cfg.rng_seed = resolve_seed(a.seed);
    return cfg;
}

int run_simulate(const SimArgs& a, const std::string& command) {
    SmConfig cfg = resolve_config(a);
    const std::string workload_text = read_file(a.workload_path);
    const wl::KernelSpec kernel = wl::kernel_from_json_text(workload_text);
    const engine::PlanMode mode = a.mode == "baseline" ? engine::PlanMode::Baseline
                                                       : engine::PlanMode::Sharing;
    if (a.mode != "baseline" && a.mode != "sharing")
        throw warpshare::InvalidKernel("--mode must be baseline or sharing, got " + a.mode);

    std::ofstream trace;
    std::ostream* trace_ptr = nullptr;
    if (!a.trace_locks.empty()) {
        trace.open(a.trace_locks);
        if (!trace) throw std::runtime_error("cannot write file: " + a.trace_locks);
        trace << "cycle,sm,event,holder,requester\n";
        trace_ptr = &trace;
    }

    const engine::MetricsReport report = engine::run(cfg, kernel, mode, a.reorder, trace_ptr);
    emit(a.out, engine::metrics_to_json_text(report) + "\n");
    if (!a.out.empty())
        write_manifest(a.out, command,
                       nlohmann::json::parse(warpshare::config_to_json_text(cfg)),
                       fnv1a(workload_text), cfg.rng_seed);
    return 0;
}

int run_sweep(const SimArgs& a, const std::string& command) {
    const SmConfig base_cfg = resolve_config(a);
    const std::string workload_text = read_file(a.workload_path);
    const wl::KernelSpec kernel = wl::kernel_from_json_text(workload_text);

    std::vector<std::future<engine::MetricsReport>> points;
    for (int pct : a.sharing_pct) {
        SmConfig cfg = base_cfg;
        cfg.sharing_threshold = Rational::from_sharing_pct(pct);
        points.push_back(std::async(std::launch::async, [cfg, &kernel] {
            return engine::run(cfg, kernel, engine::PlanMode::Sharing);
        }));
    }
    std::ostringstream csv;
    csv << "sharing_pct,blocks_resident,ipc,stall_cycles,idle_cycles,l1_miss_rate\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const engine::MetricsReport r = points[i].get();
        csv << a.sharing_pct[i] << "," << r.blocks_resident << "," << r.ipc << ","
            << r.stall_cycles << "," << r.idle_cycles << "," << r.l1_miss_rate() << "\n";
    }
    emit(a.out, csv.str());
    if (!a.out.empty())
        write_manifest(a.out, command,
                       nlohmann::json::parse(warpshare::config_to_json_text(base_cfg)),
                       fnv1a(workload_text), base_cfg.rng_seed);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GPU SM resource-sharing occupancy and simulation toolkit"};
    app.require_subcommand(1);

    std::string command;
    for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

    // occupancy
    OccupancyArgs oa;
    auto* occ_cmd = app.add_subcommand("occupancy", "Blocks-per-SM table across sharing percentages");
    occ_cmd->add_option("--registers", oa.registers, "Registers per SM");
    occ_cmd->add_option("--scratchpad", oa.scratchpad, "Scratchpad bytes per SM");
    occ_cmd->add_option("--regs-per-thread", oa.regs_per_thread, "Registers per thread");
    occ_cmd->add_option("--spm-per-block", oa.spm_per_block, "Scratchpad bytes per block");
    occ_cmd->add_option("--threads-per-block", oa.threads_per_block, "Threads per block")
        ->required();
    occ_cmd->add_option("--sharing-pct", oa.sharing_pct, "Sharing percentages")
        ->required()
        ->delimiter(',');
    occ_cmd->add_option("--max-threads", oa.max_threads, "Thread cap per SM");
    occ_cmd->add_option("--max-blocks", oa.max_blocks, "Block cap per SM");
    occ_cmd->add_option("--out", oa.out, "Output CSV path (default stdout)");

    // hwcost
    int hw_blocks = 0, hw_warps = 0, hw_sms = 0;
    std::string hw_out;
    auto* hw_cmd = app.add_subcommand("hwcost", "Storage cost of the sharing bookkeeping");
    hw_cmd->add_option("--blocks", hw_blocks, "Max thread blocks per SM")->required();
    hw_cmd->add_option("--warps", hw_warps, "Max warps per SM")->required();
    hw_cmd->add_option("--sms", hw_sms, "Number of SMs")->required();
    hw_cmd->add_option("--out", hw_out, "Output CSV path (default stdout)");

    // gen
    std::string gen_profile, gen_out;
    std::uint64_t gen_seed = 0;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic workload");
    gen_cmd->add_option("--profile", gen_profile, "compute|memory|scratchpad")->required();
    gen_cmd->add_option("--seed", gen_seed, "Generator seed");
    gen_cmd->add_option("--out", gen_out, "Output workload JSON path")->required();

    // reorder
    std::string ro_in, ro_out, ro_threshold = "1";
    bool ro_report = false;
    auto* ro_cmd = app.add_subcommand("reorder", "Renumber assembly registers by first use");
    ro_cmd->add_option("--in", ro_in, "Input assembly file")->required();
    ro_cmd->add_option("--out", ro_out, "Output assembly file");
    ro_cmd->add_option("--threshold", ro_threshold, "Sharing threshold t in (0,1]");
    ro_cmd->add_flag("--report", ro_report, "Print per-register classification CSV");

    // simulate
    SimArgs sa;
    auto* sim_cmd = app.add_subcommand("simulate", "Run the cycle-level SM simulation");
    sim_cmd->add_option("--config", sa.config_path, "Config JSON path");
    sim_cmd->add_option("--workload", sa.workload_path, "Workload JSON path")->required();
    sim_cmd->add_option("--mode", sa.mode, "baseline|sharing");
    sim_cmd->add_option("--scheduler", sa.scheduler, "lrr|gto|owf");
    sim_cmd->add_flag("--dyn", sa.dyn, "Enable dynamic warp execution throttling");
    sim_cmd->add_flag("--reorder", sa.reorder, "Apply register reordering");
    auto* sim_seed = sim_cmd->add_option("--seed", sa.seed, "Simulation seed");
    sim_cmd->add_option("--out", sa.out, "Metrics JSON path (default stdout)");
    sim_cmd->add_option("--trace-locks", sa.trace_locks, "Lock event trace CSV path");

    // sweep
    SimArgs wa;
    auto* sweep_cmd = app.add_subcommand("sweep", "Simulate across sharing percentages");
    sweep_cmd->add_option("--config", wa.config_path, "Config JSON path");
    sweep_cmd->add_option("--workload", wa.workload_path, "Workload JSON path")->required();
    sweep_cmd->add_option("--scheduler", wa.scheduler, "lrr|gto|owf");
    sweep_cmd->add_flag("--dyn", wa.dyn, "Enable dynamic warp execution throttling");
    auto* sweep_seed = sweep_cmd->add_option("--seed", wa.seed, "Simulation seed");
    sweep_cmd->add_option("--sharing-pct", wa.sharing_pct, "Sharing percentages")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--out", wa.out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (occ_cmd->parsed()) return run_occupancy(oa, command);
        if (hw_cmd->parsed()) {
            const occ::HwCostReport r = occ::hw_cost(hw_blocks, hw_warps, hw_sms);
            std::ostringstream csv;
            csv << "register_sharing_bits,scratchpad_sharing_bits\n"
                << r.register_sharing_bits << "," << r.scratchpad_sharing_bits << "\n";
            emit(hw_out, csv.str());
            if (!hw_out.empty()) write_manifest(hw_out, command, nlohmann::json::object(), 0, 0);
            return 0;
        }
        if (gen_cmd->parsed()) {
            const wl::Profile profile = wl::profile_from_name(gen_profile);
            const std::uint64_t seed = resolve_seed(gen_seed);
            const wl::KernelSpec kernel = wl::generate(profile, seed);
            wl::save_kernel(kernel, gen_out);
            write_manifest(gen_out, command, nlohmann::json::object(),
                           fnv1a(wl::kernel_to_json_text(kernel)), seed);
            return 0;
        }
        if (ro_cmd->parsed()) {
            const warpshare::asmreorder::AsmModule before =
                warpshare::asmreorder::parse(read_file(ro_in));
            const warpshare::asmreorder::AsmModule after =
                warpshare::asmreorder::reorder(before);
            if (!ro_out.empty()) {
                write_file(ro_out, warpshare::asmreorder::serialize(after));
                write_manifest(ro_out, command, nlohmann::json::object(), fnv1a(read_file(ro_in)),
                               0);
            }
            if (ro_report) {
                const Rational t = threshold_from_string(ro_threshold);
                std::cout << "name,seq_before,seq_after,class\n";
                for (const auto& row : warpshare::asmreorder::classification_report(before, t))
                    std::cout << row.name << "," << row.seq_before << "," << row.seq_after << ","
                              << (row.shared_after ? "shared" : "unshared") << "\n";
            }
            return 0;
        }
        if (sim_cmd->parsed()) {
            sa.seed_given = sim_seed->count() > 0;
            return run_simulate(sa, command);
        }
        if (sweep_cmd->parsed()) {
            wa.seed_given = sweep_seed->count() > 0;
            return run_sweep(wa, command);
        }
    } catch (const warpshare::SimulatorInvariantViolation& e) {
        std::cerr << "simulator invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const warpshare::ProtocolViolation& e) {
        std::cerr << "simulator invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const warpshare::CycleLimitExceeded& e) {
        std::cerr << "simulator invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
