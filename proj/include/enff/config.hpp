#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enff {

/// Flat `key = value` text with dotted section keys.
///
///   # comment
///   synth.years = 2
///   split.train = 2008-01-01..2008-10-31
///
/// Keys are case-sensitive, surrounding whitespace is dropped, later
/// duplicates override earlier ones. A line without '=' is an error.
class KeyValueFile {
public:
    static KeyValueFile parse(std::istream& in, std::string_view origin = "<stream>");
    static KeyValueFile read(const std::filesystem::path& path);

    bool has(std::string_view key) const;
    /// Throws InvalidConfig when the key is absent.
    const std::string& get(std::string_view key) const;
    std::optional<std::string> find(std::string_view key) const;

    std::string get_or(std::string_view key, std::string fallback) const;
    double get_double(std::string_view key, double fallback) const;
    long long get_int(std::string_view key, long long fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;
    std::vector<std::string> get_list(std::string_view key) const;  // comma-separated

    void set(std::string key, std::string value);
    const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return entries_; }
    /// Keys in sorted order.
    void write(std::ostream& out) const;

private:
    std::map<std::string, std::string, std::less<>> entries_;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string to_hex(std::uint64_t value);

}  // namespace enff
