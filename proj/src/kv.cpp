#include "ikde/kv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ikde {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

[[noreturn]] void fail_key(std::string_view key, std::string_view what) {
    throw std::invalid_argument("config key '" + std::string(key) + "': " + std::string(what));
}

} // namespace

KvMap parse_kv_text(std::string_view text) {
    KvMap kv;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++lineno;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        }
        if (!kv.emplace(key, value).second) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KvMap parse_kv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw std::runtime_error("read failure on config '" + path.string() + "'");
    return parse_kv_text(buf.str());
}

std::string kv_string(const KvMap& kv, std::string_view key) {
    const auto it = kv.find(key);
    if (it == kv.end()) fail_key(key, "missing");
    return it->second;
}

std::string kv_string_or(const KvMap& kv, std::string_view key, std::string_view fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? std::string(fallback) : it->second;
}

double kv_double(const KvMap& kv, std::string_view key) {
    const auto it = kv.find(key);
    if (it == kv.end()) fail_key(key, "missing");
    double v = 0.0;
    std::size_t used = 0;
    bool ok = true;
    try {
        v = std::stod(it->second, &used);
    } catch (const std::exception&) {
        ok = false;
    }
    if (!ok || used != it->second.size() || !std::isfinite(v)) {
        fail_key(key, "not a finite number");
    }
    return v;
}

double kv_double_or(const KvMap& kv, std::string_view key, double fallback) {
    return kv.find(key) == kv.end() ? fallback : kv_double(kv, key);
}

std::int64_t kv_int(const KvMap& kv, std::string_view key) {
    const double v = kv_double(kv, key);
    const double r = std::nearbyint(v);
    if (v != r || std::abs(v) > 9.0e15) fail_key(key, "not an integer");
    return static_cast<std::int64_t>(r);
}

std::int64_t kv_int_or(const KvMap& kv, std::string_view key, std::int64_t fallback) {
    return kv.find(key) == kv.end() ? fallback : kv_int(kv, key);
}

std::vector<double> parse_double_list(std::string_view text, std::string_view context) {
    std::string normalized(text);
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    std::vector<double> out;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(context) + ": bad list entry '" + token + "'");
        }
    }
    return out;
}

std::vector<double> kv_double_list(const KvMap& kv, std::string_view key) {
    const auto it = kv.find(key);
    if (it == kv.end()) fail_key(key, "missing");
    return parse_double_list(it->second, key);
}

void kv_require_known_keys(const KvMap& kv, std::initializer_list<std::string_view> allowed,
                           std::string_view context) {
    for (const auto& [key, value] : kv) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw std::invalid_argument(std::string(context) + ": unknown key '" + key + "'");
        }
    }
}

} // namespace ikde
