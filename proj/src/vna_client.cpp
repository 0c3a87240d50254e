#include "ohmscope/vna_client.hpp"

#include <vector>

#include "ohmscope/errors.hpp"
#include "ohmscope/net.hpp"
#include "ohmscope/textio.hpp"

namespace ohmscope {

namespace {

// Raise a typed error when the instrument answered "ERR <code> <text>".
void check_not_err(const std::string& response, const std::string& context) {
    if (response.rfind("ERR ", 0) != 0) return;
    std::string rest = response.substr(4);
    std::size_t space = rest.find(' ');
    int code = 0;
    try {
        code = static_cast<int>(parse_integer(rest.substr(0, space), "ERR code"));
    } catch (const IoError&) {
        throw ProtocolError(context + ": malformed error response '" + response + "'");
    }
    std::string text = space == std::string::npos ? "" : rest.substr(space + 1);
    throw ProtocolError(code, context + ": instrument error " + std::to_string(code) + ": " + text);
}

std::string command(TcpStream& stream, const std::string& line, const std::string& context) {
    stream.send_line(line);
    std::string response = stream.recv_line();
    check_not_err(response, context);
    return response;
}

void expect_ok(TcpStream& stream, const std::string& line, const std::string& context) {
    std::string response = command(stream, line, context);
    if (response != "OK")
        throw ProtocolError(context + ": expected OK, got '" + response + "'");
}

double response_double(const std::string& token, const std::string& what) {
    try {
        return parse_double(token, what);
    } catch (const IoError& e) {
        throw ProtocolError(e.what());
    }
}

long long response_integer(const std::string& token, const std::string& what) {
    try {
        return parse_integer(token, what);
    } catch (const IoError& e) {
        throw ProtocolError(e.what());
    }
}

}  // namespace

ReflectionTrace acquire(const std::string& host, uint16_t port, const SweepConfig& config,
                        const std::string& label, double timeout_seconds) {
    config.grid.validate();
    if (config.averaging_count < 1) throw DomainError("acquire: averaging_count must be >= 1");

    TcpStream stream = TcpStream::connect(host, port, timeout_seconds);

    std::string identity = command(stream, "*IDN?", "identify");
    if (identity.empty()) throw ProtocolError("identify: empty identity string");

    expect_ok(stream, ":SENS:FREQ:STAR " + format_double(config.grid.start_hz), "set start");
    expect_ok(stream, ":SENS:FREQ:STOP " + format_double(config.grid.stop_hz), "set stop");
    expect_ok(stream, ":SENS:SWE:POIN " + std::to_string(config.grid.points), "set points");

    // Instruments clamp sweep memory silently; read back and refuse to
    // continue with a grid other than the one requested.
    std::string poin = command(stream, ":SENS:SWE:POIN?", "points readback");
    long long reported = response_integer(poin, "points readback");
    if (reported != config.grid.points)
        throw ProtocolError("points readback mismatch: requested " +
                            std::to_string(config.grid.points) + ", instrument reports " +
                            std::to_string(reported));

    expect_ok(stream, ":SENS:AVER:COUN " + std::to_string(config.averaging_count),
              "set averaging");
    expect_ok(stream, ":DEV:PROG " + label, "select instruction");
    expect_ok(stream, ":INIT:IMM", "trigger");

    std::string data = command(stream, ":CALC:DATA:SDAT?", "fetch data");
    std::vector<std::string> fields = split(data, ',');
    std::size_t expected = 2 * static_cast<std::size_t>(config.grid.points);
    if (fields.size() != expected)
        throw ProtocolError("data arity mismatch: expected " + std::to_string(expected) +
                            " values, got " + std::to_string(fields.size()));

    ReflectionTrace trace;
    trace.grid = config.grid;
    trace.t_re.resize(static_cast<std::size_t>(config.grid.points));
    trace.t_im.resize(static_cast<std::size_t>(config.grid.points));
    for (int i = 0; i < config.grid.points; ++i) {
        trace.t_re[static_cast<std::size_t>(i)] =
            response_double(fields[2 * static_cast<std::size_t>(i)], "data value");
        trace.t_im[static_cast<std::size_t>(i)] =
            response_double(fields[2 * static_cast<std::size_t>(i) + 1], "data value");
    }
    return trace;
}

}  // namespace ohmscope
