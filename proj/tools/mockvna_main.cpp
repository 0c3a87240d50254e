// Standalone mock instrument. Binds, prints the listening endpoint, then
// serves connections until killed.
#include <iostream>

#include <CLI11.hpp>

#include "ohmscope/errors.hpp"
#include "ohmscope/isa.hpp"
#include "ohmscope/vna_server.hpp"

int main(int argc, char** argv) {
    CLI::App app{"mock vector network analyzer"};

    std::string host = "127.0.0.1";
    int port = 5025;
    std::string isa_str = "FPGA12";
    double sigma = 0.0;
    unsigned long long seed = 1;
    int max_points = 0;

    app.add_option("--host", host, "bind address");
    app.add_option("--port", port, "TCP port (0 picks an ephemeral port)");
    app.add_option("--isa", isa_str, "instruction set the device executes");
    app.add_option("--sigma", sigma, "measurement noise sigma in ohms");
    app.add_option("--seed", seed, "noise stream seed");
    app.add_option("--max-points", max_points, "clamp configured sweep points (0 = no clamp)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (port < 0 || port > 65535) throw ohmscope::ConfigError("--port out of range");
        if (sigma < 0) throw ohmscope::ConfigError("--sigma must be >= 0");

        ohmscope::MockVnaOptions options;
        options.isa = ohmscope::isa_from_name(isa_str);
        options.sigma_ohms = sigma;
        options.seed = seed;
        options.max_points = max_points;

        ohmscope::MockVnaServer server(host, static_cast<uint16_t>(port), options);
        std::cout << "listening on " << host << ":" << server.port() << std::endl;
        server.run();
        return 0;
    } catch (const ohmscope::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ohmscope::TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ohmscope::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
