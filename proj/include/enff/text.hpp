#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enff::text {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Fixed-point form used in human-readable reports.
std::string format_fixed(double value, int decimals);

std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

std::string_view trim(std::string_view s) noexcept;

/// Splits on `sep` without quoting support; none of the formats we read
/// use quoted fields.
std::vector<std::string_view> split(std::string_view line, char sep = ',');

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace enff::text
