#pragma once

// Flat `key = value` configuration text. Lines starting with '#' are
// comments; keys keep their first-insertion order when rendered. Doubles
// render with 17 significant digits so parse(render(c)) == c.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pmt {

class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::string& path);

    std::string render() const;
    void save(const std::string& path) const;

    bool has(const std::string& key) const;
    std::optional<std::string> find(const std::string& key) const;

    void set(const std::string& key, std::string value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, int value) { set(key, static_cast<std::int64_t>(value)); }
    void set(const std::string& key, std::size_t value) { set(key, static_cast<std::int64_t>(value)); }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }

    /// Values from other overwrite ours; new keys are appended.
    void merge(const KeyValueConfig& other);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    friend bool operator==(const KeyValueConfig&, const KeyValueConfig&) = default;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_double(double v);
/// Full-string numeric parse; throws std::invalid_argument naming `what`.
double parse_double(const std::string& text, const std::string& what);
std::int64_t parse_int(const std::string& text, const std::string& what);

} // namespace pmt
