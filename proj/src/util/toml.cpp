#include "tacgap/util/toml.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "tacgap/errors.hpp"

namespace tacgap::util {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Strips a # comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

json parse_scalar(const std::string& raw, int lineno) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError("toml line " + std::to_string(lineno) + ": empty value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw ConfigError("toml line " + std::to_string(lineno) + ": unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            if (v[i] == '\\' && i + 2 < v.size()) {
                ++i;
                switch (v[i]) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    default:
                        throw ConfigError("toml line " + std::to_string(lineno) +
                                          ": unsupported escape");
                }
            } else {
                out += v[i];
            }
        }
        return out;
    }
    if (v == "true") return true;
    if (v == "false") return false;
    // integer first, then float
    {
        std::int64_t iv = 0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), iv);
        if (ec == std::errc() && p == v.data() + v.size()) return iv;
    }
    {
        double dv = 0.0;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), dv);
        if (ec == std::errc() && p == v.data() + v.size()) return dv;
    }
    throw ConfigError("toml line " + std::to_string(lineno) + ": cannot parse value '" + v + "'");
}

json parse_value(const std::string& raw, int lineno) {
    const std::string v = trim(raw);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']')
            throw ConfigError("toml line " + std::to_string(lineno) + ": unterminated array");
        json arr = json::array();
        std::string inner = v.substr(1, v.size() - 2);
        std::string cur;
        bool quoted = false;
        for (char ch : inner) {
            if (ch == '"') quoted = !quoted;
            if (ch == ',' && !quoted) {
                arr.push_back(parse_scalar(cur, lineno));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!trim(cur).empty()) arr.push_back(parse_scalar(cur, lineno));
        return arr;
    }
    return parse_scalar(v, lineno);
}

}  // namespace

json parse_toml(const std::string& text) {
    json root = json::object();
    json* table = &root;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("toml line " + std::to_string(lineno) + ": malformed table");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty())
                throw ConfigError("toml line " + std::to_string(lineno) + ": empty table name");
            table = &root;
            std::size_t start = 0;
            while (true) {
                const auto dot = name.find('.', start);
                const std::string part =
                    trim(name.substr(start, dot == std::string::npos ? dot : dot - start));
                table = &(*table)[part];
                if (dot == std::string::npos) break;
                start = dot + 1;
            }
            if (table->is_null()) *table = json::object();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("toml line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("toml line " + std::to_string(lineno) + ": empty key");
        (*table)[key] = parse_value(line.substr(eq + 1), lineno);
    }
    return root;
}

json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    if (path.extension() == ".json") {
        try {
            return json::parse(ss.str());
        } catch (const json::exception& e) {
            throw ConfigError("config parse error in " + path.string() + ": " + e.what());
        }
    }
    return parse_toml(ss.str());
}

}  // namespace tacgap::util
