#include "ohmscope/isa.hpp"

#include "ohmscope/errors.hpp"

namespace ohmscope {

std::string isa_name(Isa isa) { return isa == Isa::FPGA12 ? "FPGA12" : "ATMEGA"; }

Isa isa_from_name(const std::string& name) {
    if (name == "FPGA12") return Isa::FPGA12;
    if (name == "ATMEGA") return Isa::ATMEGA;
    throw ConfigError("unknown ISA '" + name + "' (expected FPGA12 or ATMEGA)");
}

static const std::vector<InstructionSpec>& fpga12_table() {
    using enum Operand;
    static const std::vector<InstructionSpec> t = {
        {"LOAD", Isa::FPGA12, 0x01, {REG, REG, IMM8}, Semantics::LOAD},
        {"STORE", Isa::FPGA12, 0x02, {REG, REG, IMM8}, Semantics::STORE},
        {"SET", Isa::FPGA12, 0x03, {REG, IMM8, NONE}, Semantics::SET},
        {"ADD", Isa::FPGA12, 0x04, {REG, REG, REG}, Semantics::ADD3},
        {"SUB", Isa::FPGA12, 0x05, {REG, REG, REG}, Semantics::SUB3},
        {"AND", Isa::FPGA12, 0x06, {REG, REG, REG}, Semantics::AND3},
        {"OR", Isa::FPGA12, 0x07, {REG, REG, REG}, Semantics::OR3},
        {"XOR", Isa::FPGA12, 0x08, {REG, REG, REG}, Semantics::XOR3},
        {"SHL", Isa::FPGA12, 0x09, {REG, REG, REG}, Semantics::SHL},
        {"SHR", Isa::FPGA12, 0x0A, {REG, REG, REG}, Semantics::SHR},
        {"BEQ", Isa::FPGA12, 0x0B, {REG, IMM8, NONE}, Semantics::BEQ},
        {"BNEQ", Isa::FPGA12, 0x0C, {REG, IMM8, NONE}, Semantics::BNEQ},
    };
    return t;
}

static const std::vector<InstructionSpec>& atmega_table() {
    using enum Operand;
    static const std::vector<InstructionSpec> t = {
        {"MOV", Isa::ATMEGA, 0x81, {REG, REG, NONE}, Semantics::MOV},
        {"LDI", Isa::ATMEGA, 0x82, {REG, IMM8, NONE}, Semantics::LDI},
        {"ADD", Isa::ATMEGA, 0x83, {REG, REG, NONE}, Semantics::ADD2},
        {"SUB", Isa::ATMEGA, 0x84, {REG, REG, NONE}, Semantics::SUB2},
        {"AND", Isa::ATMEGA, 0x85, {REG, REG, NONE}, Semantics::AND2},
        {"OR", Isa::ATMEGA, 0x86, {REG, REG, NONE}, Semantics::OR2},
        {"EOR", Isa::ATMEGA, 0x87, {REG, REG, NONE}, Semantics::EOR2},
        {"LSL", Isa::ATMEGA, 0x88, {REG, NONE, NONE}, Semantics::LSL},
        {"LSR", Isa::ATMEGA, 0x89, {REG, NONE, NONE}, Semantics::LSR},
        {"BREQ", Isa::ATMEGA, 0x8A, {IMM8, NONE, NONE}, Semantics::BREQ},
        {"BRNE", Isa::ATMEGA, 0x8B, {IMM8, NONE, NONE}, Semantics::BRNE},
        {"CPI", Isa::ATMEGA, 0x8C, {REG, IMM8, NONE}, Semantics::CPI},
        {"RJMP", Isa::ATMEGA, 0x8D, {IMM8, NONE, NONE}, Semantics::RJMP},
    };
    return t;
}

const std::vector<InstructionSpec>& isa_table(Isa isa) {
    return isa == Isa::FPGA12 ? fpga12_table() : atmega_table();
}

const InstructionSpec* find_by_mnemonic(Isa isa, const std::string& mnemonic) {
    for (const auto& s : isa_table(isa))
        if (s.mnemonic == mnemonic) return &s;
    return nullptr;
}

const InstructionSpec* find_by_opcode(Isa isa, uint8_t opcode) {
    for (const auto& s : isa_table(isa))
        if (s.opcode_value == opcode) return &s;
    return nullptr;
}

std::vector<std::string> dataset_class_names(Isa isa) {
    std::vector<std::string> names;
    for (const auto& s : isa_table(isa)) {
        if (s.semantics == Semantics::CPI || s.semantics == Semantics::RJMP) continue;
        names.push_back(s.mnemonic);
    }
    return names;
}

int register_count(Isa isa) { return isa == Isa::FPGA12 ? 8 : 32; }

MachineState make_initial_state(Isa isa) {
    MachineState st;
    st.isa = isa;
    st.registers.assign(static_cast<std::size_t>(register_count(isa)), 0);
    return st;
}

}  // namespace ohmscope
