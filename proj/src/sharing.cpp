#include "warpshare/sharing.hpp"

#include "warpshare/errors.hpp"

namespace warpshare::sharing {

AccessClass classify_register(int reg_no, int regs_per_thread, Rational threshold,
                              bool warp_is_shared) {
    if (reg_no < 1 || reg_no > regs_per_thread)
        throw IndexOutOfRange("register " + std::to_string(reg_no) + " not in [1, " +
                              std::to_string(regs_per_thread) + "]");
    if (!warp_is_shared) return AccessClass::Direct;
    const std::int64_t boundary = threshold.floor_mul(regs_per_thread);
    return reg_no <= boundary ? AccessClass::Private : AccessClass::Shared;
}

AccessClass classify_scratchpad(std::int64_t offset, std::int64_t spm_per_block,
                                Rational threshold, bool block_is_shared) {
    if (offset < 0 || offset >= spm_per_block)
        throw IndexOutOfRange("scratchpad offset " + std::to_string(offset) +
                              " not in [0, " + std::to_string(spm_per_block) + ")");
    if (!block_is_shared) return AccessClass::Direct;
    const std::int64_t boundary = threshold.floor_mul(spm_per_block);
    return offset < boundary ? AccessClass::Private : AccessClass::Shared;
}

BlockPair::BlockPair(ResourceKind kind, int block_a, int block_b, int warps_per_block)
    : kind_(kind),
      block_a_(block_a),
      block_b_(block_b),
      warp_locks_(kind == ResourceKind::Register ? warps_per_block : 0, kNone),
      warp_lock_block_(warp_locks_.size(), kNone) {}

int BlockPair::partner_of(int block) const {
    if (block == block_a_) return block_b_;
    if (block == block_b_) return block_a_;
    throw ProtocolViolation("block " + std::to_string(block) + " is not in this pair");
}

Acquire BlockPair::try_acquire_register(int requester_block, int warp_pos,
                                        int requester_warp, bool partner_warp_finished,
                                        bool strict_block_ownership, bool commit) {
    if (kind_ != ResourceKind::Register)
        throw ProtocolViolation("register acquire on a scratchpad pair");
    if (!has_block(requester_block))
        throw ProtocolViolation("requester block not in pair");

    const int holder = warp_locks_.at(warp_pos);
    const int holder_block = warp_lock_block_.at(warp_pos);
    bool granted = false;
    if (holder == requester_warp) {
        granted = true;  // already holds its pair lock
    } else if (owner_ == kNone || owner_ == requester_block) {
        granted = holder == kNone;
    } else {
        // Requester is in the non-owner block. The warps of the owner block
        // that acquired exclusive access must be done with it first; by
        // default that means the requester's own partner warp has finished.
        if (!strict_block_ownership && partner_warp_finished &&
            (holder == kNone || holder_block != requester_block))
            granted = true;
    }
    if (granted && commit) {
        warp_locks_.at(warp_pos) = requester_warp;
        warp_lock_block_.at(warp_pos) = requester_block;
        if (owner_ == kNone) owner_ = requester_block;
    }
    return granted ? Acquire::Granted : Acquire::Denied;
}

Acquire BlockPair::try_acquire_scratchpad(int requester_block, bool commit) {
    if (kind_ != ResourceKind::Scratchpad)
        throw ProtocolViolation("scratchpad acquire on a register pair");
    if (!has_block(requester_block))
        throw ProtocolViolation("requester block not in pair");

    const bool granted = block_lock_ == kNone || block_lock_ == requester_block;
    if (granted && commit) {
        block_lock_ = requester_block;
        if (owner_ == kNone) owner_ = requester_block;
    }
    return granted ? Acquire::Granted : Acquire::Denied;
}

void BlockPair::on_warp_finish(int block, int warp_pos) {
    if (kind_ != ResourceKind::Register) return;
    if (warp_lock_block_.at(warp_pos) == block) {
        warp_locks_.at(warp_pos) = kNone;
        warp_lock_block_.at(warp_pos) = kNone;
    }
}

void BlockPair::on_block_finish(int finished_block) {
    if (!has_block(finished_block))
        throw ProtocolViolation("finishing block not in pair");
    for (std::size_t i = 0; i < warp_locks_.size(); ++i) {
        if (warp_lock_block_[i] == finished_block) {
            warp_locks_[i] = kNone;
            warp_lock_block_[i] = kNone;
        }
    }
    if (block_lock_ == finished_block) block_lock_ = kNone;
    const int partner = partner_of(finished_block);
    owner_ = partner;  // ownership transfer; kNone when no partner exists
}

void BlockPair::replace_block(int departed_block, int new_block) {
    if (departed_block == block_a_)
        block_a_ = new_block;
    else if (departed_block == block_b_)
        block_b_ = new_block;
    else
        throw ProtocolViolation("departed block not in pair");
}

void BlockPair::assert_invariants() const {
    for (std::size_t i = 0; i < warp_locks_.size(); ++i) {
        const int hb = warp_lock_block_[i];
        if (hb != kNone && hb != block_a_ && hb != block_b_)
            throw SimulatorInvariantViolation("warp lock held by a block outside the pair");
    }
    if (block_lock_ != kNone && block_lock_ != block_a_ && block_lock_ != block_b_)
        throw SimulatorInvariantViolation("block lock held by a block outside the pair");
    if (owner_ != kNone && owner_ != block_a_ && owner_ != block_b_)
        throw SimulatorInvariantViolation("owner outside the pair");
}

}  // namespace warpshare::sharing
