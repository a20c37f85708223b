#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "gbmlab/common.hpp"

namespace gbmlab {

// One "name" or "name(a, b, ...)" selector from a catalog-valued entry.
struct CatalogCall {
    std::string name;
    std::vector<double> args;
};

// Strict parse of a catalog selector; anything but an identifier with an
// optional parenthesized numeric argument list is rejected.
CatalogCall parse_catalog_call(const std::string& text);

// Plain-text `key = value` configuration with [section] headers and full-line
// `#` comments. Every key must be read exactly once; require_all_consumed()
// rejects leftovers by name, so typos cannot silently fall back to defaults.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text, std::string origin = "<text>");

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

    // entries in file order as (section, key, value), consumed or not
    std::vector<std::tuple<std::string, std::string, std::string>> entries() const;
    // replace a value in place (seed/output overrides), marking nothing
    void set(const std::string& section, const std::string& key, const std::string& value);

    void require_all_consumed() const;  // throws naming every unread key
    const std::string& origin() const { return origin_; }

private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };

    const Entry* find(const std::string& section, const std::string& key) const;
    const std::string& raw(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::vector<std::pair<std::string, std::string>> order_;
    std::string origin_;
};

}  // namespace gbmlab
