#include "ohmscope/simulator.hpp"

#include <bit>

#include "ohmscope/errors.hpp"

namespace ohmscope {

namespace {

// Bit flips across registers, memory, Z and halted. pc is deliberately not
// part of the packed state: it advances on every step and would mask the
// "instruction changed nothing" case.
int packed_state_toggle(const MachineState& a, const MachineState& b) {
    int bits = 0;
    for (std::size_t i = 0; i < a.registers.size(); ++i)
        bits += std::popcount(static_cast<unsigned>(a.registers[i] ^ b.registers[i]));
    for (std::size_t i = 0; i < a.memory.size(); ++i)
        bits += std::popcount(static_cast<unsigned>(a.memory[i] ^ b.memory[i]));
    if (a.zero_flag != b.zero_flag) ++bits;
    if (a.halted != b.halted) ++bits;
    return bits;
}

int memory_address(const MachineState& st, uint8_t base_reg, uint8_t offset) {
    int addr = static_cast<int>(st.registers[base_reg]) + static_cast<int>(offset);
    if (addr > 255)
        throw AddressFaultError("address fault: base " + std::to_string(st.registers[base_reg]) +
                                " + offset " + std::to_string(offset) + " > 255");
    return addr;
}

uint32_t branch_target(uint32_t pc_before, uint8_t k, std::size_t program_length) {
    // K is a signed two's-complement byte; PC <- PC + K + 1.
    int target = static_cast<int>(pc_before) + static_cast<int8_t>(k) + 1;
    if (target < 0)
        throw AddressFaultError("address fault: branch target " + std::to_string(target) +
                                " before program start");
    if (target > static_cast<int>(program_length)) target = static_cast<int>(program_length);
    return static_cast<uint32_t>(target);
}

}  // namespace

ExecutionEvent step(MachineState& state, const Program& program) {
    if (state.halted) throw ContractError("step: machine is halted");
    if (state.pc >= program.words.size()) throw ContractError("step: pc past program end");

    const Word& w = program.words[state.pc];
    const InstructionSpec* spec = find_by_opcode(program.isa, w.bytes[0]);
    if (!spec)
        throw CorruptProgramError("word " + std::to_string(state.pc) + ": undecodable opcode");

    MachineState before = state;
    ExecutionEvent ev;
    ev.executed_mnemonic = spec->mnemonic;
    ev.pc_before = state.pc;

    uint8_t o1 = w.bytes[1], o2 = w.bytes[2], o3 = w.bytes[3];
    uint32_t next_pc = state.pc + 1;
    auto write_reg = [&](uint8_t idx, uint8_t value) {
        ev.has_register_write = true;
        ev.register_write = {static_cast<int>(idx), state.registers[idx], value};
        state.registers[idx] = value;
    };
    auto alu2 = [&](uint8_t result) {  // ATMEGA ALU result: write + Z update
        write_reg(o1, result);
        state.zero_flag = result == 0;
    };

    switch (spec->semantics) {
        case Semantics::LOAD:
            write_reg(o1, state.memory[static_cast<std::size_t>(memory_address(state, o2, o3))]);
            break;
        case Semantics::STORE:
            state.memory[static_cast<std::size_t>(memory_address(state, o2, o3))] =
                state.registers[o1];
            break;
        case Semantics::SET: write_reg(o1, o2); break;
        case Semantics::ADD3:
            write_reg(o1, static_cast<uint8_t>(state.registers[o2] + state.registers[o3]));
            break;
        case Semantics::SUB3:
            write_reg(o1, static_cast<uint8_t>(state.registers[o2] - state.registers[o3]));
            break;
        case Semantics::AND3: write_reg(o1, state.registers[o2] & state.registers[o3]); break;
        case Semantics::OR3: write_reg(o1, state.registers[o2] | state.registers[o3]); break;
        case Semantics::XOR3: write_reg(o1, state.registers[o2] ^ state.registers[o3]); break;
        case Semantics::SHL:
            write_reg(o1, static_cast<uint8_t>(state.registers[o2] << (state.registers[o3] % 8)));
            break;
        case Semantics::SHR:
            write_reg(o1, static_cast<uint8_t>(state.registers[o2] >> (state.registers[o3] % 8)));
            break;
        case Semantics::BEQ:
            if (state.registers[o1] == o2) next_pc = ev.pc_before + 2;
            break;
        case Semantics::BNEQ:
            if (state.registers[o1] != o2) next_pc = ev.pc_before + 2;
            break;
        case Semantics::MOV: write_reg(o1, state.registers[o2]); break;
        case Semantics::LDI: write_reg(o1, o2); break;
        case Semantics::ADD2:
            alu2(static_cast<uint8_t>(state.registers[o1] + state.registers[o2]));
            break;
        case Semantics::SUB2:
            alu2(static_cast<uint8_t>(state.registers[o1] - state.registers[o2]));
            break;
        case Semantics::AND2: alu2(state.registers[o1] & state.registers[o2]); break;
        case Semantics::OR2: alu2(state.registers[o1] | state.registers[o2]); break;
        case Semantics::EOR2: alu2(state.registers[o1] ^ state.registers[o2]); break;
        case Semantics::LSL: alu2(static_cast<uint8_t>(state.registers[o1] << 1)); break;
        case Semantics::LSR: alu2(static_cast<uint8_t>(state.registers[o1] >> 1)); break;
        case Semantics::BREQ:
            if (state.zero_flag) next_pc = branch_target(ev.pc_before, o1, program.words.size());
            break;
        case Semantics::BRNE:
            if (!state.zero_flag) next_pc = branch_target(ev.pc_before, o1, program.words.size());
            break;
        case Semantics::CPI: state.zero_flag = state.registers[o1] == o2; break;
        case Semantics::RJMP: next_pc = branch_target(ev.pc_before, o1, program.words.size()); break;
    }

    if (next_pc > program.words.size()) next_pc = static_cast<uint32_t>(program.words.size());
    state.pc = next_pc;
    if (state.pc >= program.words.size()) state.halted = true;

    ev.pc_after = state.pc;
    ev.hamming_toggle = packed_state_toggle(before, state);
    return ev;
}

std::vector<ExecutionEvent> run(MachineState& state, const Program& program, int max_steps) {
    std::vector<ExecutionEvent> events;
    if (state.pc >= program.words.size()) {
        state.halted = true;
        return events;
    }
    for (int i = 0; i < max_steps && !state.halted; ++i) {
        ExecutionEvent ev = step(state, program);
        ev.step_index = i;
        events.push_back(ev);
    }
    return events;
}

}  // namespace ohmscope
