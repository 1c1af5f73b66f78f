#pragma once

#include <span>
#include <string>
#include <vector>

#include "spikerate/spike_train.hpp"

namespace spikerate::io {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

// Whitespace-separated floats interpreted as strictly increasing spike epochs;
// blank lines tolerated, horizon = last epoch.
// Non-numeric token → ParseError(line); non-monotone / non-finite / non-positive
// → RejectedInput naming the line.
core::SpikeTrain read_spike_times(const std::string& path);

// ISI column from a CSV: either "index,isi" rows (one header line tolerated)
// or one ISI per line.
std::vector<double> read_isis_csv(const std::string& path);

struct Column {
    std::string name;
    std::span<const double> values;
};

// Equal-length columns, header row, full round-trip precision.
void write_csv(const std::string& path, std::span<const Column> columns);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// Sidecar path convention: "<output>.meta.json".
std::string metadata_path(const std::string& output_path);

} // namespace spikerate::io
