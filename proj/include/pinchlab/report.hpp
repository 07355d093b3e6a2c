#pragma once

#include <string>
#include <vector>

namespace pinchlab {

/// Deterministic CSV assembly: comment lines carrying run metadata, a header
/// row, then data rows with every number printed as %.12g. The body contains
/// no timestamps so identical runs produce identical bytes.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_meta(const std::string& key, const std::string& value);
    void add_row(const std::vector<std::string>& cells);

    static std::string num(double v);

    std::string body() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<std::string>> rows_;
};

/// Run manifest: one line per artifact with its completion status, plus a
/// trailing timestamp (the only non-deterministic output of a run).
class Manifest {
public:
    void add(const std::string& file, const std::string& status);
    void write(const std::string& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Lower-case hex tag of a spec hash used in output file names.
std::string hash_tag(std::uint64_t hash);

} // namespace pinchlab
