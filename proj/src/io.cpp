#include "spikerate/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "spikerate/errors.hpp"

namespace spikerate::io {

namespace {

bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n';
    };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

std::vector<std::string_view> split_char(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RejectedInput("cannot open file: " + path);
    return in;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return {buf, ptr};
}

core::SpikeTrain read_spike_times(const std::string& path) {
    auto in = open_for_read(path);
    std::vector<double> epochs;
    std::string line;
    long line_no = 0;
    double prev = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        for (std::string_view token : split_whitespace(line)) {
            double value = 0.0;
            if (!parse_double(token, value))
                throw ParseError("read_spike_times: non-numeric token '" +
                                     std::string(token) + "'",
                                 line_no);
            if (!std::isfinite(value))
                throw RejectedInput("read_spike_times: non-finite spike time (line " +
                                    std::to_string(line_no) + ")");
            if (value <= 0.0)
                throw RejectedInput("read_spike_times: spike time must be > 0 (line " +
                                    std::to_string(line_no) + ")");
            if (!epochs.empty() && value <= prev)
                throw RejectedInput(
                    "read_spike_times: spike times must be strictly increasing (line " +
                    std::to_string(line_no) + ")");
            epochs.push_back(value);
            prev = value;
        }
    }
    if (epochs.empty())
        throw InsufficientData("read_spike_times: no spike times in " + path);
    const double horizon = epochs.back();
    return core::SpikeTrain(std::move(epochs), horizon);
}

std::vector<double> read_isis_csv(const std::string& path) {
    auto in = open_for_read(path);
    std::vector<double> isis;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto fields = split_char(trimmed, ',');
        double value = 0.0;
        if (!parse_double(trim(fields.back()), value)) {
            if (line_no == 1) continue; // header row
            throw ParseError("read_isis_csv: non-numeric ISI field '" +
                                 std::string(trim(fields.back())) + "'",
                             line_no);
        }
        if (!std::isfinite(value) || value <= 0.0)
            throw RejectedInput("read_isis_csv: ISI must be finite and > 0 (line " +
                                std::to_string(line_no) + ")");
        isis.push_back(value);
    }
    if (isis.empty()) throw InsufficientData("read_isis_csv: no ISIs in " + path);
    return isis;
}

void write_csv(const std::string& path, std::span<const Column> columns) {
    if (columns.empty()) throw RejectedInput("write_csv: no columns");
    const std::size_t rows = columns.front().values.size();
    for (const auto& col : columns)
        if (col.values.size() != rows)
            throw RejectedInput("write_csv: column '" + col.name +
                                "' has mismatched length");
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c > 0) out << ',';
        out << columns[c].name;
    }
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c > 0) out << ',';
            out << format_double(columns[c].values[r]);
        }
        out << '\n';
    }
    write_text(path, out.str());
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RejectedInput("cannot open file for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + path);
}

std::string read_text(const std::string& path) {
    auto in = open_for_read(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string metadata_path(const std::string& output_path) {
    return output_path + ".meta.json";
}

} // namespace spikerate::io
