#include "warpshare/asm_reorder.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>
#include <string_view>

#include "warpshare/errors.hpp"

namespace warpshare::asmreorder {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, col, msg); }

    void skip_ws_and_comments() {
        while (!eof()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '*') {
                int start_line = line, start_col = col;
                advance();
                advance();
                while (true) {
                    if (eof()) throw ParseError(start_line, start_col, "unterminated comment");
                    if (peek() == '*' && pos + 1 < text.size() && text[pos + 1] == '/') {
                        advance();
                        advance();
                        break;
                    }
                    advance();
                }
            } else {
                break;
            }
        }
    }

    void expect(char c, const char* what) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "' " + what);
        advance();
    }

    std::string ident() {
        if (eof() || !(std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            fail("expected identifier");
        std::string out;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            out.push_back(advance());
        return out;
    }

    // Opcode mnemonics may contain dots, e.g. set.le.s32.s32
    std::string mnemonic() {
        std::string out;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                          peek() == '.'))
            out.push_back(advance());
        return out;
    }

    std::size_t integer() {
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected number");
        std::size_t v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
            v = v * 10 + static_cast<std::size_t>(advance() - '0');
        return v;
    }
};

constexpr std::array<std::string_view, 19> kOpcodeRoots = {
    "set", "mov", "add", "sub", "mul", "mad", "div", "rem", "and", "or",
    "xor", "not", "neg", "min", "max", "shl", "shr", "cvt", "bar",
};

bool known_opcode(std::string_view opcode) {
    const auto root = opcode.substr(0, opcode.find('.'));
    return std::find(kOpcodeRoots.begin(), kOpcodeRoots.end(), root) != kOpcodeRoots.end();
}

RegDecl parse_declaration(Cursor& cur) {
    cur.expect('.', "starting declaration");
    const std::string kw = cur.ident();
    if (kw != "reg") cur.fail("unknown directive ." + kw);
    cur.skip_ws_and_comments();
    cur.expect('.', "before register space");
    const std::string space = cur.ident();
    RegDecl decl;
    if (space == "u32")
        decl.space = RegSpace::U32;
    else if (space == "pred")
        decl.space = RegSpace::Pred;
    else
        cur.fail("unknown register space ." + space);
    cur.skip_ws_and_comments();
    cur.expect('$', "before register name");
    decl.base_name = cur.ident();
    cur.skip_ws_and_comments();
    if (!cur.eof() && cur.peek() == '<') {
        cur.advance();
        const std::size_t count = cur.integer();
        if (count < 1) cur.fail("array count must be >= 1");
        decl.array_count = static_cast<int>(count);
        cur.expect('>', "closing array count");
        cur.skip_ws_and_comments();
    }
    cur.expect(';', "terminating declaration");
    return decl;
}

Operand parse_register_operand(Cursor& cur) {
    cur.expect('$', "before register name");
    Operand op;
    op.kind = Operand::Kind::Register;
    op.name = cur.ident();
    op.raw = "$" + op.name;
    return op;
}

AsmInstr parse_instruction(Cursor& cur) {
    AsmInstr instr;
    instr.opcode = cur.mnemonic();
    if (instr.opcode.empty()) cur.fail("expected instruction");
    if (!known_opcode(instr.opcode)) cur.fail("unknown opcode " + instr.opcode);

    bool first_operand = true;
    while (true) {
        cur.skip_ws_and_comments();
        if (cur.eof()) cur.fail("unterminated instruction");
        if (cur.peek() == ';') {
            cur.advance();
            break;
        }
        if (!first_operand) {
            cur.expect(',', "between operands");
            cur.skip_ws_and_comments();
        }
        if (cur.peek() == '$') {
            Operand op = parse_register_operand(cur);
            std::vector<std::string> names{op.name};
            if (!cur.eof() && cur.peek() == '/') {  // dual destination $a/$b
                cur.advance();
                Operand second = parse_register_operand(cur);
                op.raw += "/" + second.raw;
                names.push_back(second.name);
            }
            for (const auto& n : names) {
                if (first_operand)
                    instr.dest_operands.push_back(n);
                else
                    instr.src_operands.push_back(n);
            }
            instr.operands.push_back(op);
        } else if (cur.peek() == 's' && cur.pos + 1 < cur.text.size() &&
                   cur.text[cur.pos + 1] == '[') {
            cur.advance();
            cur.advance();
            std::string inner;
            if (cur.eof() || cur.peek() != '0') cur.fail("expected 0x offset in s[]");
            while (!cur.eof() && cur.peek() != ']') inner.push_back(cur.advance());
            cur.expect(']', "closing scratchpad operand");
            if (inner.size() < 3 || inner[0] != '0' || (inner[1] != 'x' && inner[1] != 'X'))
                cur.fail("scratchpad offset must be hexadecimal");
            Operand op;
            op.kind = Operand::Kind::Scratchpad;
            op.raw = "s[" + inner + "]";
            instr.operands.push_back(op);
            instr.memory_operands.push_back(op.raw);
            if (first_operand) cur.fail("scratchpad operand cannot be a destination");
        } else {
            cur.fail("expected operand");
        }
        first_operand = false;
    }
    return instr;
}

std::vector<std::pair<std::string, const RegDecl*>> expand(const AsmModule& m) {
    std::vector<std::pair<std::string, const RegDecl*>> out;
    for (const auto& d : m.declarations) {
        if (d.is_array()) {
            for (int i = 0; i < d.array_count; ++i)
                out.emplace_back(d.base_name + std::to_string(i), &d);
        } else {
            out.emplace_back(d.base_name, &d);
        }
    }
    return out;
}

}  // namespace

AsmModule parse(const std::string& text) {
    Cursor cur{text};
    AsmModule m;
    while (true) {
        cur.skip_ws_and_comments();
        if (cur.eof()) break;
        if (cur.peek() == '.') {
            if (!m.instructions.empty())
                cur.fail("declarations must precede instructions");
            m.declarations.push_back(parse_declaration(cur));
        } else {
            m.instructions.push_back(parse_instruction(cur));
        }
    }

    std::set<std::string> declared;
    for (const auto& [name, decl] : expand(m)) {
        (void)decl;
        if (!declared.insert(name).second)
            throw ParseError(1, 1, "duplicate declaration of $" + name);
    }
    for (const auto& instr : m.instructions) {
        for (const auto& op : instr.operands) {
            if (op.kind != Operand::Kind::Register) continue;
            if (!declared.count(op.name))
                throw ParseError(1, 1, "undeclared register $" + op.name);
        }
        for (const auto& n : instr.dest_operands)
            if (!declared.count(n)) throw ParseError(1, 1, "undeclared register $" + n);
        for (const auto& n : instr.src_operands)
            if (!declared.count(n)) throw ParseError(1, 1, "undeclared register $" + n);
    }
    return m;
}

std::string serialize(const AsmModule& m) {
    std::ostringstream out;
    for (const auto& d : m.declarations) {
        out << ".reg ." << (d.space == RegSpace::U32 ? "u32" : "pred") << " $" << d.base_name;
        if (d.is_array()) out << "<" << d.array_count << ">";
        out << ";\n";
    }
    for (const auto& instr : m.instructions) {
        out << instr.opcode;
        for (std::size_t i = 0; i < instr.operands.size(); ++i)
            out << (i == 0 ? " " : ", ") << instr.operands[i].raw;
        out << ";\n";
    }
    return out.str();
}

std::map<std::string, int> sequence_numbers(const AsmModule& m) {
    std::map<std::string, int> seq;
    int next = 1;
    for (const auto& [name, decl] : expand(m)) {
        (void)decl;
        seq[name] = next++;
    }
    return seq;
}

AsmModule reorder(const AsmModule& m) {
    const auto expanded = expand(m);
    std::map<std::string, const RegDecl*> decl_of;
    for (const auto& [name, decl] : expanded) decl_of[name] = decl;

    // First textual use: destinations before sources, left to right.
    std::vector<std::string> order;
    std::set<std::string> seen;
    auto visit = [&](const std::string& name) {
        if (seen.insert(name).second) order.push_back(name);
    };
    for (const auto& instr : m.instructions) {
        for (const auto& n : instr.dest_operands) visit(n);
        for (const auto& n : instr.src_operands) visit(n);
    }
    for (const auto& [name, decl] : expanded) {
        (void)decl;
        visit(name);  // unused registers keep declaration order, after all used
    }

    AsmModule out;
    out.instructions = m.instructions;
    out.declarations.reserve(order.size());
    for (const auto& name : order) {
        RegDecl d;
        d.space = decl_of.at(name)->space;
        d.base_name = name;
        d.array_count = 0;
        out.declarations.push_back(d);
    }
    return out;
}

std::vector<RegReportRow> classification_report(const AsmModule& m, Rational threshold) {
    if (!threshold.valid()) throw InvalidThreshold("threshold must satisfy 0 < t <= 1");
    const auto before = sequence_numbers(m);
    const auto after = sequence_numbers(reorder(m));
    const std::int64_t boundary =
        threshold.floor_mul(static_cast<std::int64_t>(before.size()));
    std::vector<RegReportRow> rows;
    rows.reserve(before.size());
    for (const auto& [name, seq] : before) {
        RegReportRow row;
        row.name = name;
        row.seq_before = seq;
        row.seq_after = after.at(name);
        row.shared_before = seq > boundary;
        row.shared_after = row.seq_after > boundary;
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(),
              [](const RegReportRow& a, const RegReportRow& b) {
                  return a.seq_before < b.seq_before;
              });
    return rows;
}

}  // namespace warpshare::asmreorder
