#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pinchlab {

/// Error raised when a config file cannot be parsed. Carries the offending key
/// or line so callers can report it verbatim.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Line-oriented `key = value` text with `[section]` headers. Keys are stored
/// as "section.key". Later assignments win.
class Config {
public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;

    /// Comma-separated list of doubles.
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    const std::map<std::string, std::string>& entries() const { return values_; }

    /// Canonical "key=value\n" dump, sorted by key; input to spec hashing.
    std::string canonical() const;

private:
    std::map<std::string, std::string> values_;
};

/// FNV-1a hash of a string, used to tag output files with the spec they came from.
std::uint64_t fnv1a(const std::string& text);

} // namespace pinchlab
