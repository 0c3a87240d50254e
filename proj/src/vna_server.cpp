#include "ohmscope/vna_server.hpp"

#include <vector>

#include "ohmscope/errors.hpp"
#include "ohmscope/rng.hpp"
#include "ohmscope/textio.hpp"
#include "ohmscope/vna.hpp"

namespace ohmscope {

namespace {

std::string err(int code, const std::string& text) {
    return "ERR " + std::to_string(code) + " " + text;
}

}  // namespace

MockVnaServer::MockVnaServer(const std::string& host, uint16_t port,
                             const MockVnaOptions& options)
    : options_(options), listener_(host, port) {}

void MockVnaServer::run() {
    while (!stop_.load()) {
        TcpStream client = listener_.accept(200);
        if (client.open()) serve_connection(std::move(client));
    }
}

void MockVnaServer::stop() { stop_.store(true); }

void MockVnaServer::serve_connection(TcpStream stream) {
    Session session;
    std::string line;
    while (!stop_.load()) {
        try {
            if (!stream.try_recv_line(line)) return;  // client done
        } catch (const TransportError&) {
            return;  // timeout or reset; drop the session
        }
        stream.send_line(handle(session, line));
    }
}

std::string MockVnaServer::handle(Session& session, const std::string& line) {
    std::string cmd = trim(line);
    if (cmd.empty()) return err(102, "empty command");

    std::string head = cmd, arg;
    std::size_t space = cmd.find(' ');
    if (space != std::string::npos) {
        head = cmd.substr(0, space);
        arg = trim(cmd.substr(space + 1));
    }

    try {
        if (head == "*IDN?") return "MOCKVNA,OHMSCOPE,0,1.0";

        if (head == ":SENS:FREQ:STAR") {
            double v = parse_double(arg, "STAR");
            if (!(v > 0.0)) return err(103, "start must be > 0");
            session.start_hz = v;
            return "OK";
        }
        if (head == ":SENS:FREQ:STAR?") {
            if (!session.start_hz) return err(100, "start frequency not configured");
            return format_double(*session.start_hz);
        }
        if (head == ":SENS:FREQ:STOP") {
            double v = parse_double(arg, "STOP");
            if (!(v > 0.0)) return err(103, "stop must be > 0");
            session.stop_hz = v;
            return "OK";
        }
        if (head == ":SENS:FREQ:STOP?") {
            if (!session.stop_hz) return err(100, "stop frequency not configured");
            return format_double(*session.stop_hz);
        }
        if (head == ":SENS:SWE:POIN") {
            long long n = parse_integer(arg, "POIN");
            if (n < 2) return err(103, "points must be >= 2");
            if (options_.max_points > 0 && n > options_.max_points) n = options_.max_points;
            session.points = static_cast<int>(n);
            return "OK";
        }
        if (head == ":SENS:SWE:POIN?") {
            if (!session.points) return err(100, "sweep points not configured");
            return std::to_string(*session.points);
        }
        if (head == ":SENS:AVER:COUN") {
            long long m = parse_integer(arg, "COUN");
            if (m < 1) return err(103, "averaging count must be >= 1");
            session.averaging_count = static_cast<int>(m);
            return "OK";
        }
        if (head == ":SENS:AVER:COUN?") return std::to_string(session.averaging_count);
        if (head == ":DEV:PROG") {
            if (arg.empty()) return err(103, "missing instruction label");
            if (!find_by_mnemonic(options_.isa, arg)) return err(101, "unknown label " + arg);
            session.label = arg;
            return "OK";
        }
        if (head == ":DEV:PROG?") {
            if (!session.label) return err(100, "instruction label not configured");
            return *session.label;
        }
        if (head == ":INIT:IMM") {
            if (!session.start_hz || !session.stop_hz || !session.points)
                return err(100, "sweep not configured");
            return "OK";
        }
        if (head == ":CALC:DATA:SDAT?") return data_response(session);
    } catch (const IoError& e) {
        return err(103, e.what());
    } catch (const Error& e) {
        return err(103, e.what());
    }
    return err(102, "unknown command " + head);
}

std::string MockVnaServer::data_response(Session& session) {
    if (!session.start_hz || !session.stop_hz || !session.points)
        return err(100, "sweep not configured");
    if (!session.label) return err(100, "instruction label not configured");

    FrequencyGrid grid{*session.start_hz, *session.stop_hz, *session.points};
    try {
        grid.validate();
    } catch (const Error& e) {
        return err(103, e.what());
    }

    if (!cached_profile_ || cached_profile_->label.mnemonic != *session.label ||
        !(cached_profile_->grid == grid)) {
        const InstructionSpec* spec = find_by_mnemonic(options_.isa, *session.label);
        cached_profile_ = build_profile(*spec, options_.gate, grid, options_.mapping);
    }
    const InstructionProfile& profile = *cached_profile_;

    // Average M noisy sweeps in the reflection domain, as the instrument
    // front-end would before shipping data.
    uint64_t query_seed = sub_seed(options_.seed, query_counter_++);
    std::size_t points = profile.base.size();
    std::vector<double> acc_re(points, 0.0), acc_im(points, 0.0);
    for (int s = 0; s < session.averaging_count; ++s) {
        uint64_t sweep_seed = sub_seed(query_seed, static_cast<uint64_t>(s));
        for (std::size_t i = 0; i < points; ++i) {
            SplitMix64 gen(sub_seed(sweep_seed, i));
            double zr, zx;
            normal_pair(gen, zr, zx);
            ComplexImpedance z{profile.base[i].resistance + options_.sigma_ohms * zr,
                               profile.base[i].reactance + options_.sigma_ohms * zx};
            auto [gre, gim] = impedance_to_gamma(z, options_.z_ref);
            acc_re[i] += gre;
            acc_im[i] += gim;
        }
    }

    std::string out;
    double m = static_cast<double>(session.averaging_count);
    for (std::size_t i = 0; i < points; ++i) {
        if (i) out += ',';
        out += format_double(acc_re[i] / m);
        out += ',';
        out += format_double(acc_im[i] / m);
    }
    return out;
}

}  // namespace ohmscope
