#pragma once

#include <cstdint>
#include <string>

#include "ohmscope/vna.hpp"

namespace ohmscope {

// Full acquisition flow against an instrument speaking the MockVnaServer
// dialect: identify, program the sweep, verify the points readback, select
// the instruction label, trigger, fetch one averaged reflection trace.
//
// Throws TransportError on connect/receive timeout (default 10 s),
// ProtocolError (carrying the instrument ERR code) on any ERR response, and
// ProtocolError on response arity mismatch or points-readback disagreement.
ReflectionTrace acquire(const std::string& host, uint16_t port, const SweepConfig& config,
                        const std::string& label, double timeout_seconds = 10.0);

}  // namespace ohmscope
