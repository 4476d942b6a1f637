#include "sos/specfile.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sos/error.hpp"

namespace sos {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

SpecFile SpecFile::parse(const std::string& text, const std::set<std::string>& allowed) {
    SpecFile spec;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": expected key=value");
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": empty key");
        if (!allowed.count(key))
            throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": unknown key '" + key + "'");
        if (!spec.values_.emplace(key, value).second)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(number) + ": repeated key '" + key + "'");
    }
    return spec;
}

SpecFile SpecFile::load(const std::string& path, const std::set<std::string>& allowed) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse(buf.str(), allowed);
}

std::string SpecFile::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double SpecFile::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return require_double(key);
}

double SpecFile::require_double(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::ParseError, "missing key '" + key + "'");
    const char* s = it->second.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || errno == ERANGE)
        throw Error(ErrorCode::ParseError, "key '" + key + "': not a number: " + it->second);
    return v;
}

long SpecFile::get_long(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const char* s = it->second.c_str();
    char* end = nullptr;
    errno = 0;
    long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || errno == ERANGE)
        throw Error(ErrorCode::ParseError, "key '" + key + "': not an integer: " + it->second);
    return v;
}

bool SpecFile::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::ParseError, "key '" + key + "': not a boolean: " + v);
}

}  // namespace sos
