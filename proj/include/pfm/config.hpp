#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pfm {

/// Minimal key/value config with nested tables, one file per experiment:
///
///   # comment
///   name = "circle-profile"
///   [surface]
///   shape = "circle"
///   size = 0.01
///   [compare]
///   cells = [5, 9, 13, 21]
///
/// Values: bool, integer, float, quoted string, flat numeric array.
/// Insertion order is preserved so parse -> serialize -> parse is stable.
class Config {
  public:
    using Value = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

    struct Entry {
        std::string section; // empty for top-level keys
        std::string key;
        Value value;
        bool operator==(const Entry&) const = default;
    };

    bool operator==(const Config&) const = default;

    void set(const std::string& section, const std::string& key, Value v) {
        for (auto& e : entries_) {
            if (e.section == section && e.key == key) {
                e.value = std::move(v);
                return;
            }
        }
        entries_.push_back({section, key, std::move(v)});
    }

    const Value* find(const std::string& section, const std::string& key) const {
        for (const auto& e : entries_)
            if (e.section == section && e.key == key) return &e.value;
        return nullptr;
    }

    bool has(const std::string& section, const std::string& key) const {
        return find(section, key) != nullptr;
    }

    // Typed getters; integers promote to double where a float is requested.
    double get_double(const std::string& section, const std::string& key, double fallback) const {
        const Value* v = find(section, key);
        if (!v) return fallback;
        if (const auto* d = std::get_if<double>(v)) return *d;
        if (const auto* i = std::get_if<std::int64_t>(v)) return double(*i);
        throw std::runtime_error("config key " + section + "." + key + " is not a number");
    }
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const {
        const Value* v = find(section, key);
        if (!v) return fallback;
        if (const auto* i = std::get_if<std::int64_t>(v)) return *i;
        throw std::runtime_error("config key " + section + "." + key + " is not an integer");
    }
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
        const Value* v = find(section, key);
        if (!v) return fallback;
        if (const auto* s = std::get_if<std::string>(v)) return *s;
        throw std::runtime_error("config key " + section + "." + key + " is not a string");
    }
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        const Value* v = find(section, key);
        if (!v) return fallback;
        if (const auto* b = std::get_if<bool>(v)) return *b;
        throw std::runtime_error("config key " + section + "." + key + " is not a bool");
    }
    std::vector<double> get_array(const std::string& section, const std::string& key,
                                  std::vector<double> fallback) const {
        const Value* v = find(section, key);
        if (!v) return fallback;
        if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
        if (const auto* d = std::get_if<double>(v)) return {*d};
        if (const auto* i = std::get_if<std::int64_t>(v)) return {double(*i)};
        throw std::runtime_error("config key " + section + "." + key + " is not an array");
    }

    const std::vector<Entry>& entries() const { return entries_; }

    static Config parse(std::istream& in) {
        Config c;
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = strip_comment(line);
            s = trim(s);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') throw std::runtime_error(err(lineno, "unterminated section"));
                section = trim(s.substr(1, s.size() - 2));
                if (section.empty()) throw std::runtime_error(err(lineno, "empty section name"));
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw std::runtime_error(err(lineno, "expected key = value"));
            const std::string key = trim(s.substr(0, eq));
            const std::string val = trim(s.substr(eq + 1));
            if (key.empty() || val.empty())
                throw std::runtime_error(err(lineno, "empty key or value"));
            c.entries_.push_back({section, key, parse_value(val, lineno)});
        }
        return c;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path);
        return parse(in);
    }

    std::string serialize() const {
        std::ostringstream out;
        std::string section;
        bool first = true;
        for (const auto& e : entries_) {
            if (e.section != section || first) {
                if (!e.section.empty()) out << (first ? "" : "\n") << "[" << e.section << "]\n";
                section = e.section;
            }
            first = false;
            out << e.key << " = " << format_value(e.value) << "\n";
        }
        return out.str();
    }

  private:
    static std::string err(int line, const std::string& what) {
        return "config line " + std::to_string(line) + ": " + what;
    }
    static std::string trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return s.substr(b, e - b);
    }
    static std::string strip_comment(const std::string& s) {
        bool in_str = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') in_str = !in_str;
            if (s[i] == '#' && !in_str) return s.substr(0, i);
        }
        return s;
    }

    static Value parse_value(const std::string& v, int lineno) {
        if (v == "true") return true;
        if (v == "false") return false;
        if (v.front() == '"') {
            if (v.size() < 2 || v.back() != '"')
                throw std::runtime_error(err(lineno, "unterminated string"));
            return v.substr(1, v.size() - 2);
        }
        if (v.front() == '[') {
            if (v.back() != ']') throw std::runtime_error(err(lineno, "unterminated array"));
            std::vector<double> arr;
            std::istringstream ss(v.substr(1, v.size() - 2));
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (tok.empty()) continue;
                arr.push_back(std::stod(tok));
            }
            return arr;
        }
        // number: integer iff it survives a round trip without dot/exponent
        if (v.find_first_of(".eE") == std::string::npos) {
            try {
                std::size_t used = 0;
                const std::int64_t i = std::stoll(v, &used);
                if (used == v.size()) return i;
            } catch (...) {
            }
        }
        try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used == v.size()) return d;
        } catch (...) {
        }
        throw std::runtime_error(err(lineno, "cannot parse value: " + v));
    }

    static std::string format_value(const Value& v) {
        char buf[64];
        if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
        if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
        if (const auto* d = std::get_if<double>(&v)) {
            std::snprintf(buf, sizeof buf, "%.17g", *d);
            std::string s = buf;
            if (s.find_first_of(".eE") == std::string::npos) s += ".0";
            return s;
        }
        if (const auto* s = std::get_if<std::string>(&v)) return "\"" + *s + "\"";
        const auto& arr = std::get<std::vector<double>>(v);
        std::string out = "[";
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", arr[i]);
            out += buf;
            if (i + 1 < arr.size()) out += ", ";
        }
        return out + "]";
    }

    std::vector<Entry> entries_;
};

} // namespace pfm
