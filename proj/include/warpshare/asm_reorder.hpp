#pragma once

#include <map>
#include <string>
#include <vector>

#include "warpshare/rational.hpp"

namespace warpshare::asmreorder {

enum class RegSpace { U32, Pred };

struct RegDecl {
    RegSpace space = RegSpace::U32;
    std::string base_name;  // name without the leading '$'
    int array_count = 0;    // 0 => scalar declaration
    bool is_array() const { return array_count > 0; }
    friend bool operator==(const RegDecl&, const RegDecl&) = default;
};

struct Operand {
    enum class Kind { Register, Scratchpad } kind = Kind::Register;
    std::string name;          // register name, no '$'
    std::string raw;           // original spelling, e.g. "s[0x003c]"
    friend bool operator==(const Operand&, const Operand&) = default;
};

struct AsmInstr {
    std::string opcode;
    std::vector<std::string> dest_operands;  // register names, written order
    std::vector<std::string> src_operands;   // register names only
    std::vector<std::string> memory_operands;  // raw s[...] spellings
    std::vector<Operand> operands;           // full textual operand list
    friend bool operator==(const AsmInstr&, const AsmInstr&) = default;
};

struct AsmModule {
    std::vector<RegDecl> declarations;
    std::vector<AsmInstr> instructions;
    friend bool operator==(const AsmModule&, const AsmModule&) = default;
};

// Parses the line-oriented PTXPlus subset: .reg declarations (scalar or
// $name<count> arrays), instructions "opcode op (, op)* ;" with register,
// dual-destination $a/$b, and s[0xHEX] operands, and /* */ comments.
// Throws ParseError with line/column on malformed input, duplicate
// declarations, or use of an undeclared register.
AsmModule parse(const std::string& text);

std::string serialize(const AsmModule& m);

// Declaration-order numbering 1..K with arrays expanded in place
// ($r<27> contributes r0..r26 before the next declaration).
std::map<std::string, int> sequence_numbers(const AsmModule& m);

// Rewrites declarations as scalars ordered by first textual use, scanning
// instructions in order with destinations before sources. Registers that are
// never used keep their relative declaration order after all used ones.
// The instruction stream is untouched.
AsmModule reorder(const AsmModule& m);

struct RegReportRow {
    std::string name;
    int seq_before = 0;
    int seq_after = 0;
    bool shared_before = false;
    bool shared_after = false;
};

// Per-register before/after sequence numbers and shared/unshared class for a
// threshold t: registers with seq > floor(K * t) fall in the shared range.
std::vector<RegReportRow> classification_report(const AsmModule& m, Rational threshold);

}  // namespace warpshare::asmreorder
