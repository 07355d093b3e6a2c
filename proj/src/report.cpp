#include "pinchlab/report.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pinchlab {

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_meta(const std::string& key, const std::string& value) {
    meta_.emplace_back(key, value);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw std::runtime_error("csv row width mismatch");
    rows_.push_back(cells);
}

std::string CsvTable::num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string CsvTable::body() const {
    std::string out;
    for (const auto& [k, v] : meta_) out += "# " + k + "=" + v + "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c)
        out += (c ? "," : "") + columns_[c];
    out += "\n";
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
        out += "\n";
    }
    return out;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << body();
}

void Manifest::add(const std::string& file, const std::string& status) {
    entries_.emplace_back(file, status);
}

void Manifest::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (const auto& [file, status] : entries_) f << file << " " << status << "\n";
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    f << "timestamp "
      << std::chrono::duration_cast<std::chrono::seconds>(now).count() << "\n";
}

std::string hash_tag(std::uint64_t hash) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace pinchlab
