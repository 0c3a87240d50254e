#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace ohmscope {

enum class Isa { FPGA12, ATMEGA };

std::string isa_name(Isa isa);
Isa isa_from_name(const std::string& name);  // throws ConfigError on unknown

enum class Operand { REG, IMM8, NONE };

enum class Semantics {
    LOAD, STORE, SET,                       // FPGA12 data transfer
    ADD3, SUB3, AND3, OR3, XOR3,            // FPGA12 three-register ALU
    SHL, SHR,                               // FPGA12 shifts, amount from register
    BEQ, BNEQ,                              // FPGA12 compare-immediate branches
    MOV, LDI,                               // ATMEGA data transfer
    ADD2, SUB2, AND2, OR2, EOR2,            // ATMEGA two-register ALU (Z flag)
    LSL, LSR,                               // ATMEGA one-bit shifts (Z flag)
    BREQ, BRNE,                             // ATMEGA Z-flag branches, signed offset
    CPI, RJMP                               // ATMEGA compare-immediate / relative jump
};

struct InstructionSpec {
    std::string mnemonic;
    Isa isa;
    uint8_t opcode_value;
    std::array<Operand, 3> operand_schema;
    Semantics semantics;
};

// Full instruction tables: 12 specs for FPGA12, 13 for ATMEGA.
const std::vector<InstructionSpec>& isa_table(Isa isa);

const InstructionSpec* find_by_mnemonic(Isa isa, const std::string& mnemonic);
const InstructionSpec* find_by_opcode(Isa isa, uint8_t opcode);

// Mnemonics that label synthesized/acquired traces: all 12 for FPGA12, the
// 11 table instructions for ATMEGA (CPI/RJMP only steer control flow).
std::vector<std::string> dataset_class_names(Isa isa);

int register_count(Isa isa);  // 8 or 32

// Fixed 4-byte instruction word: [opcode][operand1][operand2][operand3],
// unused operand bytes 0x00.
struct Word {
    std::array<uint8_t, 4> bytes{0, 0, 0, 0};
};

struct Program {
    Isa isa = Isa::FPGA12;
    std::vector<Word> words;
    std::vector<int> source_map;  // word index -> 1-based source line
};

struct MachineState {
    Isa isa = Isa::FPGA12;
    std::vector<uint8_t> registers;       // 8 (FPGA12) or 32 (ATMEGA)
    uint32_t pc = 0;                      // instruction index
    bool zero_flag = false;               // ATMEGA only
    std::array<uint8_t, 256> memory{};    // FPGA12 LOAD/STORE space, zero-init
    bool halted = false;
};

MachineState make_initial_state(Isa isa);

struct RegisterWrite {
    int index = -1;
    uint8_t old_value = 0;
    uint8_t new_value = 0;
};

struct ExecutionEvent {
    int step_index = 0;
    std::string executed_mnemonic;
    uint32_t pc_before = 0;
    uint32_t pc_after = 0;
    bool has_register_write = false;
    RegisterWrite register_write;
    int hamming_toggle = 0;  // popcount of XOR of packed state (pc excluded)
};

}  // namespace ohmscope
