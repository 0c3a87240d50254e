// Operator entry point: assemble programs and drive the dataset/pipeline
// workflow. Exit codes: 0 success, 2 usage, 3 data or protocol failure,
// 4 numeric failure.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ohmscope/assembler.hpp"
#include "ohmscope/config.hpp"
#include "ohmscope/dataset_io.hpp"
#include "ohmscope/errors.hpp"
#include "ohmscope/pipeline.hpp"
#include "ohmscope/textio.hpp"

namespace {

using namespace ohmscope;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string replace_extension(const std::string& path, const std::string& ext) {
    return std::filesystem::path(path).replace_extension(ext).string();
}

int run_assemble(const std::string& src_path, const std::string& isa_str, std::string out_path,
                 std::string listing_path) {
    Isa isa = isa_from_name(isa_str);
    std::string source = read_text_file(src_path);
    Program program = assemble(source, isa);
    if (program.words.empty()) log_warning("assemble: " + src_path + " produced an empty program");

    if (out_path.empty()) out_path = replace_extension(src_path, ".prog");
    if (listing_path.empty()) listing_path = replace_extension(src_path, ".lst");

    std::ostringstream prog;
    prog << "isa = " << isa_name(isa) << "\n";
    prog << "words = " << program.words.size() << "\n";
    for (const Word& w : program.words) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%02X %02X %02X %02X", w.bytes[0], w.bytes[1], w.bytes[2],
                      w.bytes[3]);
        prog << buf << "\n";
    }
    write_text_file(out_path, prog.str());

    std::ostringstream lst;
    std::vector<std::string> lines = ohmscope::split(source, '\n');
    for (std::size_t i = 0; i < program.words.size(); ++i) {
        const Word& w = program.words[i];
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%02X %02X %02X %02X", w.bytes[0], w.bytes[1], w.bytes[2],
                      w.bytes[3]);
        int src_line = program.source_map[i];
        std::string text = src_line > 0 && static_cast<std::size_t>(src_line) <= lines.size()
                               ? trim(lines[static_cast<std::size_t>(src_line - 1)])
                               : "";
        lst << i << ": " << buf << "    ; line " << src_line << ": " << text << "\n";
    }
    write_text_file(listing_path, lst.str());

    std::cout << "assembled " << program.words.size() << " words -> " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"impedance side-channel experiment toolkit"};
    app.require_subcommand(1);

    std::string asm_src, asm_isa = "FPGA12", asm_out, asm_listing;
    CLI::App* cmd_assemble = app.add_subcommand("assemble", "translate assembly to a program file");
    cmd_assemble->add_option("src", asm_src, "assembly source file")->required();
    cmd_assemble->add_option("--isa", asm_isa, "instruction set (FPGA12 or ATMEGA)");
    cmd_assemble->add_option("-o,--out", asm_out, "program file (default: src with .prog)");
    cmd_assemble->add_option("--listing", asm_listing, "listing file (default: src with .lst)");

    std::string synth_config, synth_out;
    int synth_per_class = -1;
    std::string synth_sigma;
    CLI::App* cmd_synth = app.add_subcommand("synth-dataset", "synthesize a labeled trace dataset");
    cmd_synth->add_option("--config", synth_config, "experiment config file")->required();
    cmd_synth->add_option("--out", synth_out, "output dataset directory")->required();
    cmd_synth->add_option("--per-class", synth_per_class, "override traces per class");
    cmd_synth->add_option("--sigma", synth_sigma, "override noise sigma (number or 'auto')");

    std::string acq_config, acq_out, acq_endpoint;
    CLI::App* cmd_acquire = app.add_subcommand("acquire", "capture a dataset from an instrument");
    cmd_acquire->add_option("--config", acq_config, "experiment config file")->required();
    cmd_acquire->add_option("--out", acq_out, "output dataset directory")->required();
    cmd_acquire->add_option("--endpoint", acq_endpoint, "host:port (default: config endpoint)");

    std::string pipe_dataset, pipe_config, pipe_out, pipe_classifier;
    CLI::App* cmd_pipeline = app.add_subcommand("run-pipeline", "feature selection + classification");
    cmd_pipeline->add_option("--dataset", pipe_dataset, "dataset directory")->required();
    cmd_pipeline->add_option("--config", pipe_config, "experiment config file")->required();
    cmd_pipeline->add_option("--out", pipe_out, "report output directory")->required();
    cmd_pipeline->add_option("--classifier", pipe_classifier, "override classifier kind");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // --help exits 0; any parse failure is usage
    }

    try {
        if (cmd_assemble->parsed())
            return run_assemble(asm_src, asm_isa, asm_out, asm_listing);

        if (cmd_synth->parsed()) {
            ExperimentConfig config = load_config(synth_config);
            if (synth_per_class > 0) config.per_class = synth_per_class;
            if (!synth_sigma.empty()) {
                if (synth_sigma == "auto") {
                    config.sigma_auto = true;
                } else {
                    config.sigma_auto = false;
                    config.sigma_ohms = parse_double(synth_sigma, "--sigma");
                    if (config.sigma_ohms < 0) throw ConfigError("--sigma must be >= 0");
                }
            }
            synthesize_dataset(synth_out, config);
            std::cout << "dataset written to " << synth_out << "\n";
            return 0;
        }

        if (cmd_acquire->parsed()) {
            ExperimentConfig config = load_config(acq_config);
            std::string endpoint = acq_endpoint.empty() ? config.endpoint : acq_endpoint;
            acquire_dataset(acq_out, config, endpoint);
            std::cout << "dataset acquired to " << acq_out << "\n";
            return 0;
        }

        if (cmd_pipeline->parsed()) {
            ExperimentConfig config = load_config(pipe_config);
            if (!pipe_classifier.empty()) config.classifier = classifier_from_name(pipe_classifier);
            LoadedDataset loaded = read_dataset(pipe_dataset);
            if (loaded.manifest.isa != config.isa)
                throw DatasetError("dataset ISA " + isa_name(loaded.manifest.isa) +
                                   " does not match config ISA " + isa_name(config.isa));
            LabeledDataset dataset = to_labeled_dataset(loaded);
            PipelineResult result = run_pipeline(dataset, config);
            write_reports(pipe_out, config, dataset, result);
            std::cout << "reports written to " << pipe_out << "\n";
            std::cout << "overall_accuracy = " << format_double(result.metrics.overall_accuracy)
                      << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const AssembleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CorruptProgramError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const AddressFaultError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DatasetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ProtocolError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;  // remaining taxonomy: numeric/model failures
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
