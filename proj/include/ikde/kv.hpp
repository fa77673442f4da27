#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ikde {

//! Flat `key = value` configuration map (full-line # comments allowed).
using KvMap = std::map<std::string, std::string, std::less<>>;

KvMap parse_kv_text(std::string_view text);
KvMap parse_kv_file(const std::filesystem::path& path);

//! Typed lookups; throw std::invalid_argument naming the key on bad syntax.
//! The *_or variants return the fallback when the key is absent.
std::string kv_string(const KvMap& kv, std::string_view key);
std::string kv_string_or(const KvMap& kv, std::string_view key, std::string_view fallback);
double kv_double(const KvMap& kv, std::string_view key);
double kv_double_or(const KvMap& kv, std::string_view key, double fallback);
std::int64_t kv_int(const KvMap& kv, std::string_view key);
std::int64_t kv_int_or(const KvMap& kv, std::string_view key, std::int64_t fallback);

//! Comma- and/or whitespace-separated list of numbers.
std::vector<double> kv_double_list(const KvMap& kv, std::string_view key);
std::vector<double> parse_double_list(std::string_view text, std::string_view context);

//! Rejects keys outside `allowed` (typo safety for config files).
void kv_require_known_keys(const KvMap& kv, std::initializer_list<std::string_view> allowed,
                           std::string_view context);

} // namespace ikde
