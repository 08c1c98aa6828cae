#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "warpshare/occupancy.hpp"
#include "warpshare/rational.hpp"

namespace warpshare::sharing {

using occupancy::ResourceKind;

enum class AccessClass { Direct, Private, Shared };
enum class Acquire { Granted, Denied };

// Fig-style access classification. Registers use 1-based sequence numbers and
// the boundary check is inclusive; scratchpad offsets are 0-based bytes, so
// offsets 0 .. boundary-1 are private.
AccessClass classify_register(int reg_no, int regs_per_thread, Rational threshold,
                              bool warp_is_shared);
AccessClass classify_scratchpad(std::int64_t offset, std::int64_t spm_per_block,
                                Rational threshold, bool block_is_shared);

// One shared pair of thread blocks. Block and warp identities are opaque ids
// supplied by the caller (the engine uses resident-slot ids and dynamic warp
// ids). Register sharing arbitrates per warp position; scratchpad sharing
// uses a single block-level lock. The single engine thread that owns the SM
// is the only mutator.
class BlockPair {
public:
    static constexpr int kNone = -1;

    BlockPair(ResourceKind kind, int block_a, int block_b, int warps_per_block);

    ResourceKind kind() const { return kind_; }
    int owner_block() const { return owner_; }
    int block_a() const { return block_a_; }
    int block_b() const { return block_b_; }
    bool has_block(int block) const { return block == block_a_ || block == block_b_; }
    int partner_of(int block) const;
    bool has_partner() const { return block_a_ != kNone && block_b_ != kNone; }

    int warp_lock_holder(int warp_pos) const { return warp_locks_.at(warp_pos); }
    int block_lock_holder() const { return block_lock_; }

    // Register sharing. partner_warp_finished reports whether the same-position
    // warp of the other block has finished; with strict_block_ownership the
    // non-owner waits for the whole partner block instead.
    Acquire try_acquire_register(int requester_block, int warp_pos, int requester_warp,
                                 bool partner_warp_finished, bool strict_block_ownership,
                                 bool commit);

    // Scratchpad sharing: granted to the first block and kept until it finishes.
    Acquire try_acquire_scratchpad(int requester_block, bool commit);

    // Frees the warp-pair lock held by (block, warp_pos), if any.
    void on_warp_finish(int block, int warp_pos);

    // Frees every lock held by the block and transfers ownership to the partner.
    void on_block_finish(int finished_block);

    // Installs a freshly launched block in the slot vacated by the finished
    // one (kNone if the grid is exhausted; the survivor then runs with
    // exclusive access to the whole pair allocation).
    void replace_block(int departed_block, int new_block);

    void assert_invariants() const;

private:
    ResourceKind kind_;
    int block_a_;
    int block_b_;
    int owner_ = kNone;
    std::vector<int> warp_locks_;  // register sharing: holder warp id per position
    std::vector<int> warp_lock_block_;  // block the holder belongs to
    int block_lock_ = kNone;       // scratchpad sharing: holder block id
};

// What the engine must do after a block in a pair finishes.
struct LaunchDirective {
    bool launch_replacement = false;  // pull the next grid block as new non-owner
    int promoted_owner = BlockPair::kNone;
};

}  // namespace warpshare::sharing
