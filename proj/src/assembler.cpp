#include "ohmscope/assembler.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

#include "ohmscope/errors.hpp"

namespace ohmscope {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw AssembleError("line " + std::to_string(line) + ": " + msg);
}

// "R3" -> 3, validated against the register file size.
uint8_t parse_register(const std::string& tok, Isa isa, int line) {
    if (tok.size() < 2 || (tok[0] != 'R' && tok[0] != 'r'))
        fail(line, "expected register, got '" + tok + "'");
    int value = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] < '0' || tok[i] > '9')
            fail(line, "expected register, got '" + tok + "'");
        value = value * 10 + (tok[i] - '0');
        if (value > 255) break;
    }
    if (value >= register_count(isa))
        fail(line, "register out of range: '" + tok + "' (" + isa_name(isa) + " has R0-R" +
                       std::to_string(register_count(isa) - 1) + ")");
    return static_cast<uint8_t>(value);
}

// Immediates are bytes. Accepts decimal and 0x hex; negatives encode as
// two's-complement (signed branch offsets), so the accepted range is
// [-128, 255].
uint8_t parse_immediate(const std::string& tok, int line) {
    if (tok.empty()) fail(line, "empty immediate");
    long value = 0;
    try {
        std::size_t pos = 0;
        value = std::stol(tok, &pos, 0);
        if (pos != tok.size()) fail(line, "bad immediate '" + tok + "'");
    } catch (const AssembleError&) {
        throw;
    } catch (...) {
        fail(line, "bad immediate '" + tok + "'");
    }
    if (value < -128 || value > 255)
        fail(line, "immediate out of range [-128, 255]: '" + tok + "'");
    return static_cast<uint8_t>(value & 0xFF);
}

}  // namespace

Program assemble(const std::string& source, Isa isa) {
    Program program;
    program.isa = isa;
    std::istringstream in(source);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::size_t semi = raw.find(';');
        if (semi != std::string::npos) raw = raw.substr(0, semi);
        std::string line = strip(raw);
        if (line.empty()) continue;

        std::size_t sp = line.find_first_of(" \t");
        std::string mnemonic = line.substr(0, sp);
        for (auto& c : mnemonic) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        const InstructionSpec* spec = find_by_mnemonic(isa, mnemonic);
        if (!spec) fail(line_no, "unknown mnemonic '" + mnemonic + "' for " + isa_name(isa));

        std::vector<std::string> operands;
        if (sp != std::string::npos) {
            std::string rest = line.substr(sp + 1);
            std::size_t start = 0;
            while (true) {
                std::size_t comma = rest.find(',', start);
                std::string tok = strip(comma == std::string::npos ? rest.substr(start)
                                                                   : rest.substr(start, comma - start));
                if (!tok.empty()) operands.push_back(tok);
                else if (comma != std::string::npos || !operands.empty())
                    fail(line_no, "empty operand");
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }

        int expected = 0;
        for (Operand op : spec->operand_schema)
            if (op != Operand::NONE) ++expected;
        if (static_cast<int>(operands.size()) != expected)
            fail(line_no, mnemonic + " expects " + std::to_string(expected) + " operand(s), got " +
                              std::to_string(operands.size()));

        Word w;
        w.bytes[0] = spec->opcode_value;
        for (int i = 0; i < expected; ++i) {
            Operand kind = spec->operand_schema[static_cast<std::size_t>(i)];
            w.bytes[static_cast<std::size_t>(i) + 1] =
                kind == Operand::REG ? parse_register(operands[static_cast<std::size_t>(i)], isa, line_no)
                                     : parse_immediate(operands[static_cast<std::size_t>(i)], line_no);
        }
        program.words.push_back(w);
        program.source_map.push_back(line_no);
    }
    return program;
}

std::string disassemble(const Program& program) {
    std::string out;
    for (std::size_t i = 0; i < program.words.size(); ++i) {
        const Word& w = program.words[i];
        const InstructionSpec* spec = find_by_opcode(program.isa, w.bytes[0]);
        if (!spec)
            throw CorruptProgramError("word " + std::to_string(i) + ": undecodable opcode 0x" +
                                      [&] {
                                          char buf[3];
                                          std::snprintf(buf, sizeof buf, "%02X", w.bytes[0]);
                                          return std::string(buf);
                                      }());
        out += spec->mnemonic;
        bool first = true;
        for (int k = 0; k < 3; ++k) {
            Operand kind = spec->operand_schema[static_cast<std::size_t>(k)];
            if (kind == Operand::NONE) break;
            out += first ? " " : ", ";
            first = false;
            uint8_t v = w.bytes[static_cast<std::size_t>(k) + 1];
            if (kind == Operand::REG) out += "R" + std::to_string(v);
            else out += std::to_string(v);
        }
        out += "\n";
    }
    return out;
}

}  // namespace ohmscope
