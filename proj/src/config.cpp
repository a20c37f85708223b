#include "gbmlab/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gbmlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '.')
            return false;
    return true;
}

double parse_number(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    require(!t.empty(), what + ": empty number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    require(end == t.c_str() + t.size(), what + ": not a number: '" + t + "'");
    return v;
}

}  // namespace

CatalogCall parse_catalog_call(const std::string& text) {
    const std::string t = trim(text);
    const std::size_t open = t.find('(');
    CatalogCall call;
    if (open == std::string::npos) {
        call.name = t;
    } else {
        require(!t.empty() && t.back() == ')',
                "catalog selector must end with ')': '" + t + "'");
        call.name = trim(t.substr(0, open));
        const std::string inner = t.substr(open + 1, t.size() - open - 2);
        std::size_t pos = 0;
        while (pos <= inner.size() && !trim(inner).empty()) {
            const std::size_t comma = inner.find(',', pos);
            const std::string piece =
                inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            call.args.push_back(parse_number(piece, "catalog selector '" + call.name + "'"));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    require(valid_name(call.name), "bad catalog selector: '" + t + "'");
    return call;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot read config file: " + path);
    std::ostringstream body;
    body << in.rdbuf();
    return parse_text(body.str(), path);
}

Config Config::parse_text(const std::string& text, std::string origin) {
    Config cfg;
    cfg.origin_ = std::move(origin);
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::string where = cfg.origin_ + ":" + std::to_string(line_no);
        if (t.front() == '[') {
            require(t.back() == ']', where + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            require(valid_name(section), where + ": bad section name '" + section + "'");
            continue;
        }
        const std::size_t eq = t.find('=');
        require(eq != std::string::npos, where + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        require(valid_name(key), where + ": bad key '" + key + "'");
        require(!section.empty(), where + ": key '" + key + "' appears before any [section]");
        require(!value.empty(), where + ": key '" + key + "' has an empty value");
        auto [it, inserted] = cfg.sections_[section].emplace(key, Entry{value, line_no});
        require(inserted, where + ": duplicate key '" + section + "." + key + "'");
        cfg.order_.emplace_back(section, key);
    }
    return cfg;
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
    const auto sit = sections_.find(section);
    if (sit == sections_.end()) return nullptr;
    const auto kit = sit->second.find(key);
    return kit == sit->second.end() ? nullptr : &kit->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const std::string& Config::raw(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e)
        throw ValidationError(origin_ + ": missing required key '" + section + "." + key + "'");
    e->consumed = true;
    return e->value;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    return raw(section, key);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? raw(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    return parse_number(raw(section, key), "key '" + section + "." + key + "'");
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key) const {
    const std::string t = raw(section, key);
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    require(end == t.c_str() + t.size() && end != t.c_str(),
            "key '" + section + "." + key + "': not an integer: '" + t + "'");
    return v;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key,
                             std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string t = raw(section, key);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw ValidationError("key '" + section + "." + key + "': not a boolean: '" + t + "'");
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
    std::istringstream in(raw(section, key));
    std::vector<double> out;
    std::string piece;
    while (in >> piece) out.push_back(parse_number(piece, "key '" + section + "." + key + "'"));
    require(!out.empty(), "key '" + section + "." + key + "': expected numbers");
    return out;
}

std::vector<std::tuple<std::string, std::string, std::string>> Config::entries() const {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    out.reserve(order_.size());
    for (const auto& [section, key] : order_)
        out.emplace_back(section, key, sections_.at(section).at(key).value);
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    auto [it, inserted] = sections_[section].emplace(key, Entry{value, 0});
    if (!inserted)
        it->second.value = value;
    else
        order_.emplace_back(section, key);
}

void Config::require_all_consumed() const {
    std::string unknown;
    for (const auto& [section, key] : order_) {
        const Entry& e = sections_.at(section).at(key);
        if (!e.consumed) {
            if (!unknown.empty()) unknown += ", ";
            unknown += section + "." + key;
        }
    }
    if (!unknown.empty())
        throw ValidationError(origin_ + ": unknown config key(s): " + unknown);
}

}  // namespace gbmlab
