#include "ohmscope/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ohmscope/errors.hpp"
#include "ohmscope/impedance_model.hpp"
#include "ohmscope/textio.hpp"

namespace ohmscope {

Hyperparams ExperimentConfig::hyperparams() const {
    Hyperparams hp;
    hp.svm_lambda = svm_lambda;
    hp.svm_epochs = svm_epochs;
    hp.svm_seed = svm_seed;
    hp.knn_k = knn_k;
    return hp;
}

double ExperimentConfig::resolve_sigma(const NandGateModel& gate) const {
    if (!sigma_auto) return sigma_ohms;
    return default_sigma(build_class_profiles(isa, gate, grid, mapping));
}

namespace {

uint64_t parse_seed(const std::string& value, const std::string& key) {
    std::string t = trim(value);
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(t, &pos, 10);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a seed value: '" + value + "'");
    }
}

bool parse_bool(const std::string& value, const std::string& key) {
    std::string t = trim(value);
    if (t == "1" || t == "true" || t == "yes") return true;
    if (t == "0" || t == "false" || t == "no") return false;
    throw ConfigError(key + ": expected boolean, got '" + value + "'");
}

double number(const std::string& value, const std::string& key) {
    try {
        return parse_double(value, key);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
}

long long integer(const std::string& value, const std::string& key) {
    try {
        return parse_integer(value, key);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
}

template <std::size_t N>
std::array<double, N> number_list(const std::string& value, const std::string& key) {
    std::vector<std::string> parts = split(value, ',');
    if (parts.size() != N)
        throw ConfigError(key + ": expected " + std::to_string(N) + " comma-separated values");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = number(parts[i], key);
    return out;
}

struct Parser {
    ExperimentConfig config;
    std::set<std::string> seen;

    void apply(const std::string& key, const std::string& value) {
        if (!seen.insert(key).second) throw ConfigError("duplicate config key '" + key + "'");

        if (key == "isa") {
            config.isa = isa_from_name(trim(value));
        } else if (key == "grid.start_hz") {
            config.grid.start_hz = number(value, key);
        } else if (key == "grid.stop_hz") {
            config.grid.stop_hz = number(value, key);
        } else if (key == "grid.points") {
            config.grid.points = static_cast<int>(integer(value, key));
        } else if (key == "sigma") {
            std::string t = trim(value);
            if (t == "auto") {
                config.sigma_auto = true;
            } else {
                config.sigma_auto = false;
                config.sigma_ohms = number(value, key);
                if (config.sigma_ohms < 0) throw ConfigError("sigma must be >= 0");
            }
        } else if (key == "per_class") {
            config.per_class = static_cast<int>(integer(value, key));
            if (config.per_class < 1) throw ConfigError("per_class must be >= 1");
        } else if (key == "tau1") {
            config.tau1 = number(value, key);
        } else if (key == "tau2") {
            config.tau2 = number(value, key);
        } else if (key == "variance_target") {
            config.variance_target = number(value, key);
        } else if (key == "classifier") {
            config.classifier = classifier_from_name(trim(value));
        } else if (key == "screen_mode") {
            std::string t = trim(value);
            if (t == "indicator-max")
                config.screen_mode = ScreenMode::INDICATOR_MAX;
            else if (t == "integer-codes")
                config.screen_mode = ScreenMode::INTEGER_CODES;
            else
                throw ConfigError("screen_mode: expected indicator-max or integer-codes");
        } else if (key == "mode") {
            std::string t = trim(value);
            if (t != "synthetic" && t != "mock")
                throw ConfigError("mode: expected synthetic or mock");
            config.mode = t;
        } else if (key == "endpoint") {
            config.endpoint = trim(value);
        } else if (key == "averaging_count") {
            config.averaging_count = static_cast<int>(integer(value, key));
            if (config.averaging_count < 1) throw ConfigError("averaging_count must be >= 1");
        } else if (key == "seed.dataset") {
            config.dataset_seed = parse_seed(value, key);
        } else if (key == "seed.split") {
            config.split_seed = parse_seed(value, key);
        } else if (key == "seed.folds") {
            config.folds_seed = parse_seed(value, key);
        } else if (key == "seed.svm") {
            config.svm_seed = parse_seed(value, key);
        } else if (key == "test_fraction") {
            config.test_fraction = number(value, key);
        } else if (key == "folds") {
            config.folds = static_cast<int>(integer(value, key));
        } else if (key == "svm.lambda") {
            config.svm_lambda = number(value, key);
        } else if (key == "svm.epochs") {
            config.svm_epochs = static_cast<int>(integer(value, key));
        } else if (key == "knn.k") {
            config.knn_k = static_cast<int>(integer(value, key));
        } else if (key == "map.branch_widths") {
            config.mapping.branch_widths = number_list<4>(value, key);
        } else if (key == "map.branch_inductance_h") {
            config.mapping.branch_inductance_h = number_list<4>(value, key);
        } else if (key == "map.termination_resistance") {
            config.mapping.termination_resistance = number(value, key);
        } else if (key == "map.pdn_resistance") {
            config.mapping.pdn_resistance = number(value, key);
        } else if (key == "map.pdn_capacitance") {
            config.mapping.pdn_capacitance = number(value, key);
        } else if (key == "map.fpga12_mask") {
            config.mapping.fpga12_mask = static_cast<uint8_t>(integer(value, key));
        } else if (key == "map.atmega_mask") {
            config.mapping.atmega_mask = static_cast<uint8_t>(integer(value, key));
        } else if (key == "map.zero_signal") {
            config.mapping.zero_signal = parse_bool(value, key);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    Parser parser;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            parser.apply(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }

    const ExperimentConfig& c = parser.config;
    try {
        c.grid.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    if (!(c.tau1 >= 0.0 && c.tau1 < 1.0)) throw ConfigError("tau1 must be in [0,1)");
    if (!(c.tau2 > 0.0 && c.tau2 <= 1.0)) throw ConfigError("tau2 must be in (0,1]");
    if (!(c.variance_target > 0.0 && c.variance_target <= 1.0))
        throw ConfigError("variance_target must be in (0,1]");
    if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0))
        throw ConfigError("test_fraction must be in (0,1)");
    if (c.folds < 2) throw ConfigError("folds must be >= 2");
    return parser.config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();

    ExperimentConfig config = parse_config_text(buf.str());

    if (const char* env = std::getenv("OHMSCOPE_SEED")) {
        uint64_t env_seed = parse_seed(env, "OHMSCOPE_SEED");
        std::string text = buf.str();
        // The environment only fills seeds the file does not pin.
        auto file_sets = [&](const std::string& key) {
            return text.find(key) != std::string::npos;
        };
        if (!file_sets("seed.dataset")) config.dataset_seed = env_seed;
        if (!file_sets("seed.split")) config.split_seed = env_seed;
        if (!file_sets("seed.folds")) config.folds_seed = env_seed;
        if (!file_sets("seed.svm")) config.svm_seed = env_seed;
    }
    return config;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "isa = " << isa_name(c.isa) << "\n";
    out << "grid.start_hz = " << format_double(c.grid.start_hz) << "\n";
    out << "grid.stop_hz = " << format_double(c.grid.stop_hz) << "\n";
    out << "grid.points = " << c.grid.points << "\n";
    out << "sigma = " << (c.sigma_auto ? std::string("auto") : format_double(c.sigma_ohms)) << "\n";
    out << "per_class = " << c.per_class << "\n";
    out << "tau1 = " << format_double(c.tau1) << "\n";
    out << "tau2 = " << format_double(c.tau2) << "\n";
    out << "variance_target = " << format_double(c.variance_target) << "\n";
    out << "classifier = " << classifier_name(c.classifier) << "\n";
    out << "screen_mode = "
        << (c.screen_mode == ScreenMode::INDICATOR_MAX ? "indicator-max" : "integer-codes")
        << "\n";
    out << "mode = " << c.mode << "\n";
    out << "endpoint = " << c.endpoint << "\n";
    out << "averaging_count = " << c.averaging_count << "\n";
    out << "seed.dataset = " << c.dataset_seed << "\n";
    out << "seed.split = " << c.split_seed << "\n";
    out << "seed.folds = " << c.folds_seed << "\n";
    out << "seed.svm = " << c.svm_seed << "\n";
    out << "test_fraction = " << format_double(c.test_fraction) << "\n";
    out << "folds = " << c.folds << "\n";
    out << "svm.lambda = " << format_double(c.svm_lambda) << "\n";
    out << "svm.epochs = " << c.svm_epochs << "\n";
    out << "knn.k = " << c.knn_k << "\n";
    out << "map.branch_widths = " << format_double(c.mapping.branch_widths[0]) << ","
        << format_double(c.mapping.branch_widths[1]) << ","
        << format_double(c.mapping.branch_widths[2]) << ","
        << format_double(c.mapping.branch_widths[3]) << "\n";
    out << "map.branch_inductance_h = " << format_double(c.mapping.branch_inductance_h[0]) << ","
        << format_double(c.mapping.branch_inductance_h[1]) << ","
        << format_double(c.mapping.branch_inductance_h[2]) << ","
        << format_double(c.mapping.branch_inductance_h[3]) << "\n";
    out << "map.termination_resistance = " << format_double(c.mapping.termination_resistance)
        << "\n";
    out << "map.pdn_resistance = " << format_double(c.mapping.pdn_resistance) << "\n";
    out << "map.pdn_capacitance = " << format_double(c.mapping.pdn_capacitance) << "\n";
    out << "map.fpga12_mask = " << static_cast<int>(c.mapping.fpga12_mask) << "\n";
    out << "map.atmega_mask = " << static_cast<int>(c.mapping.atmega_mask) << "\n";
    out << "map.zero_signal = " << (c.mapping.zero_signal ? 1 : 0) << "\n";
    return out.str();
}

}  // namespace ohmscope
