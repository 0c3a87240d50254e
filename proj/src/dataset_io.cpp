#include "ohmscope/dataset_io.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "ohmscope/errors.hpp"
#include "ohmscope/textio.hpp"

namespace fs = std::filesystem;

namespace ohmscope {

namespace {

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ',';
        out += names[i];
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path, const std::string& role) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("dataset layout: missing " + role + " file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

DatasetWriter::DatasetWriter(const std::string& dir, const DatasetManifest& manifest)
    : dir_(dir), manifest_(manifest) {
    fs::create_directories(dir_);

    std::ostringstream m;
    m << "isa = " << isa_name(manifest_.isa) << "\n";
    m << "grid.start_hz = " << format_double(manifest_.grid.start_hz) << "\n";
    m << "grid.stop_hz = " << format_double(manifest_.grid.stop_hz) << "\n";
    m << "grid.points = " << manifest_.grid.points << "\n";
    m << "sigma = " << format_double(manifest_.sigma_ohms) << "\n";
    m << "seed.dataset = " << manifest_.dataset_seed << "\n";
    m << "per_class = " << manifest_.per_class << "\n";
    m << "classes = " << join_names(manifest_.class_names) << "\n";
    m << "source = " << manifest_.source << "\n";
    write_file(dir_ + "/manifest", m.str());

    std::ostringstream g;
    g << "freq_index,frequency_hz\n";
    for (int i = 0; i < manifest_.grid.points; ++i)
        g << i << ',' << format_double(manifest_.grid.frequency(i)) << "\n";
    write_file(dir_ + "/grid.csv", g.str());

    traces_.open(dir_ + "/traces.csv", std::ios::binary);
    if (!traces_) throw IoError("cannot write " + dir_ + "/traces.csv");
    traces_ << "trace_id,label,freq_index,re_ohms,im_ohms\n";
}

void DatasetWriter::add_trace(int global_trace_id, const std::string& label,
                              const TraceRecord& trace) {
    if (trace.samples.size() != static_cast<std::size_t>(manifest_.grid.points))
        throw DatasetError("add_trace: sample count does not match grid");
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        traces_ << global_trace_id << ',' << label << ',' << i << ','
                << format_double(trace.samples[i].resistance) << ','
                << format_double(trace.samples[i].reactance) << "\n";
    }
    ++traces_written_;
}

void DatasetWriter::finish() {
    traces_.flush();
    if (!traces_) throw IoError("write failed: " + dir_ + "/traces.csv");
    traces_.close();
    long long expected =
        static_cast<long long>(manifest_.per_class) * static_cast<long long>(manifest_.class_names.size());
    if (traces_written_ != expected)
        throw DatasetError("dataset incomplete: wrote " + std::to_string(traces_written_) +
                           " traces, manifest promises " + std::to_string(expected));
}

LoadedDataset read_dataset(const std::string& dir) {
    LoadedDataset out;

    // manifest
    std::string mtext = read_file(dir + "/manifest", "manifest");
    std::istringstream min(mtext);
    std::string line;
    int line_no = 0;
    bool have_start = false, have_stop = false, have_points = false, have_classes = false;
    while (std::getline(min, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw DatasetError("manifest line " + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "isa") {
                out.manifest.isa = isa_from_name(value);
            } else if (key == "grid.start_hz") {
                out.manifest.grid.start_hz = parse_double(value, key);
                have_start = true;
            } else if (key == "grid.stop_hz") {
                out.manifest.grid.stop_hz = parse_double(value, key);
                have_stop = true;
            } else if (key == "grid.points") {
                out.manifest.grid.points = static_cast<int>(parse_integer(value, key));
                have_points = true;
            } else if (key == "sigma") {
                out.manifest.sigma_ohms = parse_double(value, key);
            } else if (key == "seed.dataset") {
                out.manifest.dataset_seed = static_cast<uint64_t>(parse_integer(value, key));
            } else if (key == "per_class") {
                out.manifest.per_class = static_cast<int>(parse_integer(value, key));
            } else if (key == "classes") {
                for (const std::string& name : split(value, ','))
                    out.manifest.class_names.push_back(trim(name));
                have_classes = true;
            } else if (key == "source") {
                out.manifest.source = value;
            } else {
                throw DatasetError("manifest: unknown key '" + key + "'");
            }
        } catch (const IoError& e) {
            throw DatasetError("manifest line " + std::to_string(line_no) + ": " + e.what());
        } catch (const ConfigError& e) {
            throw DatasetError("manifest line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_start || !have_stop || !have_points || !have_classes)
        throw DatasetError("manifest: missing grid or class declaration");
    out.manifest.grid.validate();

    // grid.csv cross-check
    std::string gtext = read_file(dir + "/grid.csv", "grid index");
    {
        std::istringstream gin(gtext);
        std::string header;
        if (!std::getline(gin, header) || trim(header) != "freq_index,frequency_hz")
            throw DatasetError("grid.csv: bad header");
        int rows = 0;
        while (std::getline(gin, line)) {
            if (trim(line).empty()) continue;
            std::vector<std::string> f = split(line, ',');
            if (f.size() != 2) throw DatasetError("grid.csv: expected 2 columns");
            int idx = static_cast<int>(parse_integer(f[0], "grid freq_index"));
            if (idx != rows) throw DatasetError("grid.csv: indices not consecutive");
            double hz = parse_double(f[1], "grid frequency_hz");
            double expect = out.manifest.grid.frequency(idx);
            if (hz != expect)
                throw DatasetError("grid.csv: point " + std::to_string(idx) +
                                   " disagrees with the manifest grid");
            ++rows;
        }
        if (rows != out.manifest.grid.points)
            throw DatasetError("grid.csv: " + std::to_string(rows) + " rows, manifest promises " +
                               std::to_string(out.manifest.grid.points));
    }

    // traces.csv
    std::string ttext = read_file(dir + "/traces.csv", "trace index");
    std::istringstream tin(ttext);
    std::string header;
    if (!std::getline(tin, header) || trim(header) != "trace_id,label,freq_index,re_ohms,im_ohms")
        throw DatasetError("traces.csv: bad header");

    int points = out.manifest.grid.points;
    TraceRecord current;
    bool in_trace = false;
    int expected_freq = 0;
    auto close_trace = [&] {
        if (!in_trace) return;
        if (expected_freq != points)
            throw DatasetError("traces.csv: trace " + std::to_string(current.trace_id) + " has " +
                               std::to_string(expected_freq) + " points, grid has " +
                               std::to_string(points));
        out.traces.push_back(std::move(current));
        current = TraceRecord{};
        in_trace = false;
    };

    long long row_no = 1;
    while (std::getline(tin, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 5)
            throw DatasetError("traces.csv row " + std::to_string(row_no) + ": expected 5 columns");
        int trace_id = static_cast<int>(parse_integer(f[0], "trace_id"));
        std::string label = trim(f[1]);
        int freq_index = static_cast<int>(parse_integer(f[2], "freq_index"));
        double re = parse_double(f[3], "re_ohms");
        double im = parse_double(f[4], "im_ohms");

        if (!in_trace || trace_id != current.trace_id) {
            close_trace();
            in_trace = true;
            current.trace_id = trace_id;
            current.label = {label, out.manifest.isa};
            current.grid = out.manifest.grid;
            current.samples.clear();
            current.samples.reserve(static_cast<std::size_t>(points));
            expected_freq = 0;
        }
        if (freq_index != expected_freq)
            throw DatasetError("traces.csv row " + std::to_string(row_no) +
                               ": freq_index out of order");
        if (label != current.label.mnemonic)
            throw DatasetError("traces.csv row " + std::to_string(row_no) +
                               ": label changes within trace " + std::to_string(trace_id));
        current.samples.push_back({re, im});
        ++expected_freq;
    }
    close_trace();

    long long expected_traces =
        static_cast<long long>(out.manifest.per_class) *
        static_cast<long long>(out.manifest.class_names.size());
    if (static_cast<long long>(out.traces.size()) != expected_traces)
        throw DatasetError("traces.csv: " + std::to_string(out.traces.size()) +
                           " traces, manifest promises " + std::to_string(expected_traces));
    return out;
}

LabeledDataset to_labeled_dataset(const LoadedDataset& loaded) {
    LabeledDataset ds;
    ds.grid = loaded.manifest.grid;
    ds.class_names = loaded.manifest.class_names;
    ds.magnitudes.reserve(loaded.traces.size());
    ds.labels.reserve(loaded.traces.size());
    for (const TraceRecord& rec : loaded.traces) {
        auto it = std::find(ds.class_names.begin(), ds.class_names.end(), rec.label.mnemonic);
        if (it == ds.class_names.end())
            throw DatasetError("trace " + std::to_string(rec.trace_id) + " has label '" +
                               rec.label.mnemonic + "' not in the manifest class list");
        std::vector<double> row(rec.samples.size());
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = rec.samples[i].magnitude();
        ds.magnitudes.push_back(std::move(row));
        ds.labels.push_back(static_cast<int>(it - ds.class_names.begin()));
    }
    return ds;
}

}  // namespace ohmscope
