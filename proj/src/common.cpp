#include "enff/error.hpp"
#include "enff/random.hpp"
#include "enff/text.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

namespace enff {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::GapDetected: return "GapDetected";
        case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
        case ErrorCode::RangeOutOfData: return "RangeOutOfData";
        case ErrorCode::InvalidSplit: return "InvalidSplit";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::DegenerateVariance: return "DegenerateVariance";
        case ErrorCode::InsufficientHistory: return "InsufficientHistory";
        case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
        case ErrorCode::SignalTooShort: return "SignalTooShort";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::UnsupportedKind: return "UnsupportedKind";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::EmptyValidation: return "EmptyValidation";
        case ErrorCode::ZeroActual: return "ZeroActual";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

namespace text {

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view field) {
    field = trim(field);
    if (field.empty()) return std::nullopt;
    if (field.front() == '+') field.remove_prefix(1);
    double out = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) return std::nullopt;
    return out;
}

std::optional<long long> parse_int(std::string_view field) {
    field = trim(field);
    if (field.empty()) return std::nullopt;
    long long out = 0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) return std::nullopt;
    return out;
}

std::string_view trim(std::string_view s) noexcept {
    const auto ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace text
}  // namespace enff
