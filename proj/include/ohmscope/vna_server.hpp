#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>

#include "ohmscope/impedance_model.hpp"
#include "ohmscope/isa.hpp"
#include "ohmscope/net.hpp"
#include "ohmscope/trace_synth.hpp"

namespace ohmscope {

struct MockVnaOptions {
    Isa isa = Isa::FPGA12;
    double sigma_ohms = 0.0;
    uint64_t seed = 1;
    NandGateModel gate = default_nand_model();
    ProfileMapping mapping{};
    double z_ref = 50.0;
    // Test hook: when > 0, :SENS:SWE:POIN silently clamps to this many points
    // (the readback then disagrees with the request, as on a real instrument
    // with a fixed sweep memory).
    int max_points = 0;
};

// Line protocol served over TCP. Set commands answer "OK", query commands
// echo state, failures answer "ERR <code> <text>":
//   100  query before the sweep or instruction label is configured
//   101  unknown instruction label
//   102  unknown command
//   103  malformed or out-of-range argument
// Data queries average averaging-count noisy sweeps point-wise in the
// reflection domain before transmission. The noise stream advances once per
// data query for the lifetime of the server, never per connection, so a
// fixed command sequence yields an identical byte stream for a fixed seed.
class MockVnaServer {
  public:
    MockVnaServer(const std::string& host, uint16_t port, const MockVnaOptions& options);

    uint16_t port() const { return listener_.port(); }
    void run();   // serve connections sequentially until stop()
    void stop();

  private:
    struct Session {
        std::optional<double> start_hz;
        std::optional<double> stop_hz;
        std::optional<int> points;
        int averaging_count = 1;
        std::optional<std::string> label;
    };

    void serve_connection(TcpStream stream);
    std::string handle(Session& session, const std::string& line);
    std::string data_response(Session& session);

    MockVnaOptions options_;
    TcpListener listener_;
    std::atomic<bool> stop_{false};
    uint64_t query_counter_ = 0;

    // One-slot profile cache; rebuilt when label or grid changes.
    std::optional<InstructionProfile> cached_profile_;
};

}  // namespace ohmscope
