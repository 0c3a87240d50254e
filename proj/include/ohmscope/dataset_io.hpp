#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "ohmscope/isa.hpp"
#include "ohmscope/trace_synth.hpp"

namespace ohmscope {

// On-disk dataset: <dir>/manifest (key = value), <dir>/grid.csv
// (freq_index,frequency_hz) and <dir>/traces.csv
// (trace_id,label,freq_index,re_ohms,im_ohms) in (class, trace, frequency)
// order with trace_id = class_index * per_class + trace_index. All floats are
// shortest round-trip decimals, so regenerating with the same seeds is
// byte-identical.
struct DatasetManifest {
    Isa isa = Isa::FPGA12;
    FrequencyGrid grid;
    double sigma_ohms = 0.0;
    uint64_t dataset_seed = 0;
    int per_class = 0;
    std::vector<std::string> class_names;
    std::string source = "synthetic";  // or "acquired"
};

// Streams traces.csv row by row so callers can synthesize one class at a time.
class DatasetWriter {
  public:
    DatasetWriter(const std::string& dir, const DatasetManifest& manifest);
    void add_trace(int global_trace_id, const std::string& label, const TraceRecord& trace);
    void finish();  // flushes and validates the expected row count

  private:
    std::string dir_;
    DatasetManifest manifest_;
    std::ofstream traces_;
    long long traces_written_ = 0;
};

struct LoadedDataset {
    DatasetManifest manifest;
    std::vector<TraceRecord> traces;  // trace_id carries the global id
};

LoadedDataset read_dataset(const std::string& dir);

// Magnitude matrix with labels mapped through the manifest class order.
LabeledDataset to_labeled_dataset(const LoadedDataset& loaded);

}  // namespace ohmscope
