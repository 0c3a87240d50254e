#pragma once

#include <vector>

#include "ohmscope/isa.hpp"

namespace ohmscope {

// Executes exactly one instruction. Arithmetic is modulo-256; FPGA12 shifts
// reduce the amount mod 8; ATMEGA ALU ops and CPI set Z, MOV/LDI leave it.
// pc moving past the last word sets halted. Throws AddressFaultError on a
// memory access or branch target outside the valid range, ContractError when
// called on a halted state.
ExecutionEvent step(MachineState& state, const Program& program);

// Steps until halted or max_steps; returns the full event trace.
std::vector<ExecutionEvent> run(MachineState& state, const Program& program, int max_steps);

}  // namespace ohmscope
