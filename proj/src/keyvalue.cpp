#include "pmt/keyvalue.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pmt {

namespace {

std::string trim(const std::string& s)
{
    auto b = std::find_if_not(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
    auto e = std::find_if_not(s.rbegin(), s.rend(), [](unsigned char c) { return std::isspace(c); }).base();
    return b < e ? std::string(b, e) : std::string();
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(what + ": expected a number, got `" + text + "`");
}

std::int64_t parse_int(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    std::int64_t v = 0;
    int base = 10;
    const char* first = t.data();
    if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
        base = 16;
        first += 2;
    }
    const char* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v, base);
    if (ec != std::errc() || ptr != last || first == last)
        throw std::invalid_argument(what + ": expected an integer, got `" + text + "`");
    return v;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text)
{
    KeyValueConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected `key = value`");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        c.set(key, trim(t.substr(eq + 1)));
    }
    return c;
}

KeyValueConfig KeyValueConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file `" + path + "`");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string KeyValueConfig::render() const
{
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

void KeyValueConfig::save(const std::string& path) const
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write `" + path + "`");
    out << render();
}

bool KeyValueConfig::has(const std::string& key) const
{
    return find(key).has_value();
}

std::optional<std::string> KeyValueConfig::find(const std::string& key) const
{
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return std::nullopt;
}

void KeyValueConfig::set(const std::string& key, std::string value)
{
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(key, std::move(value));
}

void KeyValueConfig::set(const std::string& key, double value)
{
    set(key, format_double(value));
}

void KeyValueConfig::set(const std::string& key, std::int64_t value)
{
    set(key, std::to_string(value));
}

void KeyValueConfig::merge(const KeyValueConfig& other)
{
    for (const auto& [k, v] : other.entries_) set(k, v);
}

std::string KeyValueConfig::get_string(const std::string& key) const
{
    auto v = find(key);
    if (!v) throw std::invalid_argument("missing required setting `" + key + "`");
    return *v;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const
{
    return find(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key) const
{
    return parse_double(get_string(key), key);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const
{
    auto v = find(key);
    return v ? parse_double(*v, key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const
{
    return parse_int(get_string(key), key);
}

std::int64_t KeyValueConfig::get_int(const std::string& key, std::int64_t fallback) const
{
    auto v = find(key);
    return v ? parse_int(*v, key) : fallback;
}

} // namespace pmt
