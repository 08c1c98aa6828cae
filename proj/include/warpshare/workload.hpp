#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace warpshare {
struct SmConfig;
}

namespace warpshare::workload {

enum class OpKind { Alu, GlobalLoad, GlobalStore, SharedLoad, SharedStore, Barrier, Exit };

const char* op_kind_name(OpKind kind);
OpKind op_kind_from_name(const std::string& name);

// effective address = base + warp_stride * dynamic_warp_id + iter_stride * iteration
struct AddrPattern {
    std::int64_t base = 0;
    std::int64_t warp_stride = 0;
    std::int64_t iter_stride = 0;
    friend bool operator==(const AddrPattern&, const AddrPattern&) = default;
};

struct TraceOp {
    OpKind kind = OpKind::Alu;
    std::vector<int> dst_regs;  // per-thread register sequence numbers, 1-based
    std::vector<int> src_regs;
    std::int64_t shared_offset = 0;  // SharedLoad/SharedStore only
    AddrPattern addr;                // GlobalLoad/GlobalStore only
    friend bool operator==(const TraceOp&, const TraceOp&) = default;

    bool is_global() const { return kind == OpKind::GlobalLoad || kind == OpKind::GlobalStore; }
    bool is_shared_mem() const { return kind == OpKind::SharedLoad || kind == OpKind::SharedStore; }
};

struct KernelSpec {
    std::string name;
    int grid_blocks = 0;
    int threads_per_block = 0;  // multiple of 32
    int regs_per_thread = 0;
    std::int64_t scratchpad_per_block = 0;  // bytes
    int loop_trip_count = 1;
    std::vector<TraceOp> body;  // ends with Exit
    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

    int warps_per_block(int warp_size = 32) const { return threads_per_block / warp_size; }
};

// Checks all KernelSpec invariants and that one block fits on the SM without
// sharing. Throws InvalidKernel listing every violation.
void validate(const KernelSpec& kernel, const SmConfig& cfg);

enum class Profile { ComputeBound, MemoryBound, ScratchpadHeavy };

Profile profile_from_name(const std::string& name);
const char* profile_name(Profile profile);

// Deterministic in (profile, seed); always passes validate against the
// default SmConfig.
KernelSpec generate(Profile profile, std::uint64_t seed);

KernelSpec load_kernel(const std::string& path);
KernelSpec kernel_from_json_text(const std::string& text);
std::string kernel_to_json_text(const KernelSpec& kernel);
void save_kernel(const KernelSpec& kernel, const std::string& path);

}  // namespace warpshare::workload
