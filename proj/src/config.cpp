#include "enff/config.hpp"

#include "enff/error.hpp"
#include "enff/text.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace enff {

KeyValueFile KeyValueFile::parse(std::istream& in, std::string_view origin) {
    KeyValueFile kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidConfig,
                        std::string(origin) + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = text::trim(t.substr(0, eq));
        if (key.empty()) {
            throw Error(ErrorCode::InvalidConfig, std::string(origin) + ":" + std::to_string(line_no) + ": empty key");
        }
        kv.entries_[std::string(key)] = std::string(text::trim(t.substr(eq + 1)));
    }
    return kv;
}

KeyValueFile KeyValueFile::read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path.string());
    return parse(in, path.string());
}

bool KeyValueFile::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

const std::string& KeyValueFile::get(std::string_view key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw Error(ErrorCode::InvalidConfig, "missing key '" + std::string(key) + "'");
    return it->second;
}

std::optional<std::string> KeyValueFile::find(std::string_view key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueFile::get_or(std::string_view key, std::string fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? std::move(fallback) : it->second;
}

double KeyValueFile::get_double(std::string_view key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    auto v = text::parse_double(it->second);
    if (!v) throw Error(ErrorCode::InvalidConfig, "key '" + std::string(key) + "' is not a number");
    return *v;
}

long long KeyValueFile::get_int(std::string_view key, long long fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    auto v = text::parse_int(it->second);
    if (!v) throw Error(ErrorCode::InvalidConfig, "key '" + std::string(key) + "' is not an integer");
    return *v;
}

bool KeyValueFile::get_bool(std::string_view key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const auto& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::InvalidConfig, "key '" + std::string(key) + "' is not a boolean");
}

std::vector<std::string> KeyValueFile::get_list(std::string_view key) const {
    std::vector<std::string> out;
    auto it = entries_.find(key);
    if (it == entries_.end()) return out;
    for (auto part : text::split(it->second)) {
        auto t = text::trim(part);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

void KeyValueFile::set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }

void KeyValueFile::write(std::ostream& out) const {
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace enff
