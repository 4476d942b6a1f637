#pragma once

#include <map>
#include <set>
#include <string>

namespace sos {

// Flat "key = value" text. Blank lines and lines starting with '#' are ignored; keys may not repeat.
class SpecFile {
public:
    static SpecFile parse(const std::string& text, const std::set<std::string>& allowed);
    static SpecFile load(const std::string& path, const std::set<std::string>& allowed);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    double require_double(const std::string& key) const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace sos
