#include "vianalab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace viana {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

std::string CsvWriter::format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::runtime_error("CsvWriter: column mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::row_indexed(std::int64_t index, const std::vector<double>& values) {
    if (values.size() + 1 != columns_) throw std::runtime_error("CsvWriter: column mismatch");
    out_ << index;
    for (double v : values) out_ << ',' << format(v);
    out_ << '\n';
}

void ensure_directory(const std::string& path) {
    std::filesystem::create_directories(path);
}

void write_json(const Json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_json: cannot open " + path);
    out << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_json: cannot open " + path);
    Json j;
    in >> j;
    return j;
}

}  // namespace viana
