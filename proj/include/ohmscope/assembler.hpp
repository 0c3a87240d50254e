#pragma once

#include <string>

#include "ohmscope/isa.hpp"

namespace ohmscope {

// Line-oriented assembly: one instruction per line, operands comma-separated,
// ';' starts a comment, blank lines allowed. Errors carry the source line.
Program assemble(const std::string& source, Isa isa);

// Canonical source: assemble(disassemble(p), p.isa) == p exactly.
std::string disassemble(const Program& program);

}  // namespace ohmscope
