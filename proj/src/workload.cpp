#include "warpshare/workload.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "warpshare/config.hpp"
#include "warpshare/errors.hpp"

namespace warpshare::workload {

using nlohmann::json;

const char* op_kind_name(OpKind kind) {
    switch (kind) {
        case OpKind::Alu: return "alu";
        case OpKind::GlobalLoad: return "gload";
        case OpKind::GlobalStore: return "gstore";
        case OpKind::SharedLoad: return "sload";
        case OpKind::SharedStore: return "sstore";
        case OpKind::Barrier: return "bar";
        case OpKind::Exit: return "exit";
    }
    return "?";
}

OpKind op_kind_from_name(const std::string& name) {
    if (name == "alu") return OpKind::Alu;
    if (name == "gload") return OpKind::GlobalLoad;
    if (name == "gstore") return OpKind::GlobalStore;
    if (name == "sload") return OpKind::SharedLoad;
    if (name == "sstore") return OpKind::SharedStore;
    if (name == "bar") return OpKind::Barrier;
    if (name == "exit") return OpKind::Exit;
    throw std::invalid_argument("unknown op kind: " + name);
}

Profile profile_from_name(const std::string& name) {
    if (name == "compute" || name == "ComputeBound") return Profile::ComputeBound;
    if (name == "memory" || name == "MemoryBound") return Profile::MemoryBound;
    if (name == "scratchpad" || name == "ScratchpadHeavy") return Profile::ScratchpadHeavy;
    throw std::invalid_argument("unknown profile: " + name);
}

const char* profile_name(Profile profile) {
    switch (profile) {
        case Profile::ComputeBound: return "compute";
        case Profile::MemoryBound: return "memory";
        case Profile::ScratchpadHeavy: return "scratchpad";
    }
    return "?";
}

void validate(const KernelSpec& kernel, const SmConfig& cfg) {
    std::vector<std::string> faults;
    auto fault = [&](const std::string& msg) { faults.push_back(msg); };

    if (kernel.threads_per_block < cfg.warp_size ||
        kernel.threads_per_block > cfg.max_threads ||
        kernel.threads_per_block % cfg.warp_size != 0)
        fault("threads_per_block must be a multiple of " + std::to_string(cfg.warp_size) +
              " in [" + std::to_string(cfg.warp_size) + ", " +
              std::to_string(cfg.max_threads) + "]");
    if (kernel.regs_per_thread < 1) fault("regs_per_thread must be >= 1");
    if (kernel.grid_blocks < 0) fault("grid_blocks must be >= 0");
    if (kernel.loop_trip_count < 1) fault("loop_trip_count must be >= 1");
    if (kernel.scratchpad_per_block < 0) fault("scratchpad_per_block must be >= 0");

    const std::int64_t regs_per_block =
        static_cast<std::int64_t>(kernel.threads_per_block) * kernel.regs_per_thread;
    if (regs_per_block > cfg.registers_per_sm)
        fault("block cannot fit: needs " + std::to_string(regs_per_block) +
              " registers, SM has " + std::to_string(cfg.registers_per_sm));
    if (kernel.scratchpad_per_block > cfg.scratchpad_per_sm)
        fault("block cannot fit: needs " + std::to_string(kernel.scratchpad_per_block) +
              " scratchpad bytes, SM has " + std::to_string(cfg.scratchpad_per_sm));

    if (kernel.body.empty() || kernel.body.back().kind != OpKind::Exit)
        fault("body must end with an exit op");
    for (std::size_t i = 0; i < kernel.body.size(); ++i) {
        const TraceOp& op = kernel.body[i];
        const std::string at = "body[" + std::to_string(i) + "]: ";
        if (op.kind == OpKind::Exit && i + 1 != kernel.body.size())
            fault(at + "exit before end of body");
        if (op.kind == OpKind::Barrier || op.kind == OpKind::Exit) {
            if (!op.dst_regs.empty() || !op.src_regs.empty())
                fault(at + "barrier/exit carries no operands");
            continue;
        }
        for (int r : op.dst_regs)
            if (r < 1 || r > kernel.regs_per_thread)
                fault(at + "dst register " + std::to_string(r) + " out of range");
        for (int r : op.src_regs)
            if (r < 1 || r > kernel.regs_per_thread)
                fault(at + "src register " + std::to_string(r) + " out of range");
        if (op.is_shared_mem()) {
            if (op.shared_offset < 0 || op.shared_offset >= kernel.scratchpad_per_block)
                fault(at + "scratchpad offset " + std::to_string(op.shared_offset) +
                      " out of range");
        }
        if (op.is_global()) {
            if (op.addr.base < 0 || op.addr.warp_stride < 0 || op.addr.iter_stride < 0)
                fault(at + "address pattern strides must be >= 0");
        }
    }

    if (!faults.empty()) {
        std::string msg = "invalid kernel '" + kernel.name + "':";
        for (const auto& f : faults) msg += "\n  - " + f;
        throw InvalidKernel(msg);
    }
}

namespace {

TraceOp alu(int dst, std::vector<int> srcs) {
    TraceOp op;
    op.kind = OpKind::Alu;
    op.dst_regs = {dst};
    op.src_regs = std::move(srcs);
    return op;
}

TraceOp gload(int dst, int src, AddrPattern addr) {
    TraceOp op;
    op.kind = OpKind::GlobalLoad;
    op.dst_regs = {dst};
    if (src > 0) op.src_regs = {src};
    op.addr = addr;
    return op;
}

TraceOp gstore(int src, AddrPattern addr) {
    TraceOp op;
    op.kind = OpKind::GlobalStore;
    op.src_regs = {src};
    op.addr = addr;
    return op;
}

TraceOp sload(int dst, std::int64_t offset) {
    TraceOp op;
    op.kind = OpKind::SharedLoad;
    op.dst_regs = {dst};
    op.shared_offset = offset;
    return op;
}

TraceOp sstore(int src, std::int64_t offset) {
    TraceOp op;
    op.kind = OpKind::SharedStore;
    op.src_regs = {src};
    op.shared_offset = offset;
    return op;
}

TraceOp plain(OpKind kind) {
    TraceOp op;
    op.kind = kind;
    return op;
}

}  // namespace

KernelSpec generate(Profile profile, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(profile) + 1);
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    KernelSpec k;
    k.loop_trip_count = pick(2, 4);

    switch (profile) {
        case Profile::ComputeBound: {
            // Register-hungry single-warp blocks: 32 threads x 920 regs = 29440
            // per block, so only one block fits unshared on a 32768-register SM
            // and a shared pair doubles residency. Shared-range registers
            // appear only in a short tail, mirroring numbering by first use.
            k.name = "compute-" + std::to_string(seed);
            k.threads_per_block = 32;
            k.regs_per_thread = 920;
            k.scratchpad_per_block = 0;
            k.grid_blocks = 2 * pick(4, 7);
            const int low = 92;  // floor(0.1 * 920): unshared range at t=0.1
            const int body_ops = pick(32, 44);
            const int tail_ops = pick(2, 4);  // touches shared-range registers
            int chain = pick(1, low);
            for (int i = 0; i < body_ops; ++i) {
                const bool tail = i >= body_ops - tail_ops;
                const int dst = tail ? pick(low + 1, k.regs_per_thread) : pick(1, low);
                if (!tail && i % 12 == 11) {
                    k.body.push_back(gload(dst, chain,
                                           {static_cast<std::int64_t>(pick(0, 63)) * 128,
                                            128, 128 * 64}));
                } else {
                    k.body.push_back(
                        alu(dst, {chain, tail ? pick(low + 1, k.regs_per_thread)
                                              : pick(1, low)}));
                }
                chain = dst;
            }
            break;
        }
        case Profile::MemoryBound: {
            // Single-warp blocks with a per-warp working set that three warps
            // keep resident in the 4-way L1 but five warps thrash: every load
            // reuses one line per warp per body position across loop trips.
            k.name = "memory-" + std::to_string(seed);
            k.threads_per_block = 32;
            k.regs_per_thread = 300;  // three shared pairs, six resident blocks
            k.scratchpad_per_block = 0;
            k.grid_blocks = 2 * pick(18, 22);
            k.loop_trip_count = 1;  // shared-range registers touched once, at the end
            const int low = 30;  // floor(0.1 * 300)
            // Every load in the kernel targets the same cache set and every
            // warp owns one line there for its whole lifetime: up to four
            // interleaved warps keep their lines resident, while six keep
            // evicting each other.
            const std::int64_t set_stride = 32 * 128;
            const AddrPattern line{static_cast<std::int64_t>(pick(0, 31)) * 128,
                                   set_stride, 0};
            const int body_ops = pick(40, 60);
            const int tail_ops = pick(2, 3);  // touches shared-range registers
            int chain = pick(1, low);
            for (int i = 0; i < body_ops; ++i) {
                const int dst = pick(1, low);
                if (i % 3 != 2) {
                    if (i % 8 == 6)
                        k.body.push_back(gstore(chain, line));
                    else
                        k.body.push_back(gload(dst, chain, line));
                } else {
                    k.body.push_back(alu(dst, {chain}));
                }
                chain = dst;
            }
            for (int i = 0; i < tail_ops; ++i) {
                const int dst = pick(low + 1, k.regs_per_thread);
                k.body.push_back(alu(dst, {chain}));
                chain = dst;
            }
            break;
        }
        case Profile::ScratchpadHeavy: {
            // Scratchpad-limited: 6144 bytes per block, baseline 2 blocks on a
            // 16384-byte SM; registers deliberately light.
            k.name = "scratchpad-" + std::to_string(seed);
            k.threads_per_block = 128;
            k.regs_per_thread = 24;
            k.scratchpad_per_block = 6144;
            k.grid_blocks = pick(8, 12);
            const std::int64_t half = k.scratchpad_per_block / 2;
            const int low = 2;  // floor(0.1 * 24)
            const int body_ops = pick(24, 34);
            const int prefix_ops = body_ops / 4;
            int chain = pick(1, low);
            int shared_ops = 0;
            int high_offset_ops = 0;
            for (int i = 0; i < body_ops; ++i) {
                const bool low_only = i < prefix_ops;
                const int dst = low_only ? pick(1, low) : pick(1, k.regs_per_thread);
                if (!low_only && i % 5 == 4 && i + 1 < body_ops) {
                    k.body.push_back(plain(OpKind::Barrier));
                    continue;
                }
                if (!low_only && i % 2 == 0) {
                    // At least half of the scratchpad traffic lands above the
                    // 0.5-threshold private boundary.
                    const bool high = (high_offset_ops <= shared_ops / 2);
                    const std::int64_t offset =
                        high ? half + (rng() % static_cast<std::uint64_t>(half))
                             : rng() % static_cast<std::uint64_t>(half);
                    if (high) ++high_offset_ops;
                    ++shared_ops;
                    if (i % 6 == 0)
                        k.body.push_back(sstore(chain, offset));
                    else
                        k.body.push_back(sload(dst, offset));
                } else {
                    k.body.push_back(alu(dst, {chain}));
                }
                chain = dst;
            }
            break;
        }
    }
    k.body.push_back(plain(OpKind::Exit));
    return k;
}

KernelSpec kernel_from_json_text(const std::string& text) {
    json j = json::parse(text);
    KernelSpec k;
    k.name = j.at("name").get<std::string>();
    k.grid_blocks = j.at("grid_blocks").get<int>();
    k.threads_per_block = j.at("threads_per_block").get<int>();
    k.regs_per_thread = j.at("regs_per_thread").get<int>();
    k.scratchpad_per_block = j.at("scratchpad_per_block").get<std::int64_t>();
    k.loop_trip_count = j.at("loop_trip_count").get<int>();
    for (const auto& e : j.at("body")) {
        TraceOp op;
        op.kind = op_kind_from_name(e.at("op").get<std::string>());
        if (e.contains("dst")) op.dst_regs = e.at("dst").get<std::vector<int>>();
        if (e.contains("src")) op.src_regs = e.at("src").get<std::vector<int>>();
        if (e.contains("shared_offset")) op.shared_offset = e.at("shared_offset").get<std::int64_t>();
        if (e.contains("addr")) {
            const auto& a = e.at("addr");
            op.addr.base = a.at("base").get<std::int64_t>();
            op.addr.warp_stride = a.at("warp_stride").get<std::int64_t>();
            op.addr.iter_stride = a.at("iter_stride").get<std::int64_t>();
        }
        k.body.push_back(op);
    }
    return k;
}

std::string kernel_to_json_text(const KernelSpec& k) {
    json body = json::array();
    for (const auto& op : k.body) {
        json e;
        e["op"] = op_kind_name(op.kind);
        if (!op.dst_regs.empty()) e["dst"] = op.dst_regs;
        if (!op.src_regs.empty()) e["src"] = op.src_regs;
        if (op.is_shared_mem()) e["shared_offset"] = op.shared_offset;
        if (op.is_global())
            e["addr"] = {{"base", op.addr.base},
                         {"warp_stride", op.addr.warp_stride},
                         {"iter_stride", op.addr.iter_stride}};
        body.push_back(e);
    }
    json j;
    j["name"] = k.name;
    j["grid_blocks"] = k.grid_blocks;
    j["threads_per_block"] = k.threads_per_block;
    j["regs_per_thread"] = k.regs_per_thread;
    j["scratchpad_per_block"] = k.scratchpad_per_block;
    j["loop_trip_count"] = k.loop_trip_count;
    j["body"] = body;
    return j.dump(2);
}

KernelSpec load_kernel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open workload file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return kernel_from_json_text(buf.str());
}

void save_kernel(const KernelSpec& kernel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write workload file: " + path);
    out << kernel_to_json_text(kernel) << "\n";
}

}  // namespace warpshare::workload
