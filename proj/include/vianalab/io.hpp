#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace viana {

using Json = nlohmann::ordered_json;

// CSV with a fixed header and 17-significant-digit decimal cells, so equal
// runs produce byte-identical files.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void row(const std::vector<double>& values);
    void row_indexed(std::int64_t index, const std::vector<double>& values);

    static std::string format(double v);

private:
    std::ofstream out_;
    std::size_t columns_;
};

void ensure_directory(const std::string& path);
void write_json(const Json& j, const std::string& path);
Json read_json(const std::string& path);

}  // namespace viana
