#include "enff/wavelet.hpp"

#include "enff/error.hpp"
#include "enff/text.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

namespace enff::wavelet {

std::string_view to_string(Family family) noexcept {
    return family == Family::Haar ? "haar" : "db4";
}

Family parse_family(std::string_view name) {
    if (name == "haar") return Family::Haar;
    if (name == "db4") return Family::Daubechies4;
    throw Error(ErrorCode::InvalidConfig, "unknown wavelet family '" + std::string(name) + "'");
}

FilterPair::FilterPair(std::vector<double> lowpass) : lowpass_(std::move(lowpass)) {
    const std::size_t L = lowpass_.size();
    if (L < 2 || L % 2 != 0) throw Error(ErrorCode::InvalidConfig, "filter length must be even and >= 2");
    highpass_.resize(L);
    for (std::size_t k = 0; k < L; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        highpass_[k] = sign * lowpass_[L - 1 - k];
    }
}

FilterPair FilterPair::haar() {
    const double s = std::numbers::sqrt2 / 2.0;
    return FilterPair({s, s});
}

FilterPair FilterPair::daubechies4() {
    return FilterPair({0.2303778133088964, 0.7148465705529154, 0.6308807679298587,
                       -0.0279837694168599, -0.1870348117190931, 0.0308413818355607,
                       0.0328830116668852, -0.0105974017850690});
}

FilterPair FilterPair::of(Family family) {
    return family == Family::Haar ? haar() : daubechies4();
}

std::size_t coefficient_count(std::size_t signal_length, std::size_t filter_length) noexcept {
    return (signal_length + filter_length - 1) / 2;
}

namespace {

// Half-sample symmetric extension: x[-1] = x[0], x[N] = x[N-1], repeating
// with period 2N for indices further out.
double extended(std::span<const double> x, long n) {
    const long N = static_cast<long>(x.size());
    const long period = 2 * N;
    long m = n % period;
    if (m < 0) m += period;
    return m < N ? x[static_cast<std::size_t>(m)] : x[static_cast<std::size_t>(period - 1 - m)];
}

void analyze(std::span<const double> x, std::span<const double> filter, std::vector<double>& out) {
    const long L = static_cast<long>(filter.size());
    const long N = static_cast<long>(x.size());
    out.assign(coefficient_count(x.size(), filter.size()), 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const long base = 2 * static_cast<long>(k) + 1;
        double acc = 0.0;
        if (base - (L - 1) >= 0 && base < N) {
            for (long j = 0; j < L; ++j) acc += filter[j] * x[static_cast<std::size_t>(base - j)];
        } else {
            for (long j = 0; j < L; ++j) acc += filter[j] * extended(x, base - j);
        }
        out[k] = acc;
    }
}

}  // namespace

Coefficients dwt_pair(std::span<const double> signal, const FilterPair& filters) {
    if (signal.size() < filters.size()) {
        throw Error(ErrorCode::SignalTooShort, "signal of " + std::to_string(signal.size()) +
                                                   " samples shorter than filter length " +
                                                   std::to_string(filters.size()));
    }
    Coefficients c;
    analyze(signal, filters.lowpass(), c.approx);
    analyze(signal, filters.highpass(), c.detail);
    return c;
}

std::vector<double> idwt_pair(std::span<const double> approx, std::span<const double> detail,
                              const FilterPair& filters, std::size_t out_length) {
    const std::size_t expected = coefficient_count(out_length, filters.size());
    if (approx.size() != expected || detail.size() != expected) {
        throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(expected) +
                                                   " coefficients per channel for " +
                                                   std::to_string(out_length) + " samples");
    }
    const auto h = filters.lowpass();
    const auto g = filters.highpass();
    const long L = static_cast<long>(filters.size());
    const long M = static_cast<long>(expected);
    std::vector<double> out(out_length, 0.0);
    // Adjoint of the analysis map: x[n] = sum_k h[2k+1-n] a[k] + g[2k+1-n] d[k].
    for (long n = 0; n < static_cast<long>(out_length); ++n) {
        long k_lo = n / 2;  // smallest k with 2k+1-n >= 0
        if (2 * k_lo + 1 - n < 0) ++k_lo;
        const long k_hi = std::min(M - 1, (n + L - 2) / 2);
        double acc = 0.0;
        for (long k = k_lo; k <= k_hi; ++k) {
            const long j = 2 * k + 1 - n;
            acc += h[j] * approx[k] + g[j] * detail[k];
        }
        out[n] = acc;
    }
    return out;
}

const std::vector<double>& MultiresolutionDecomposition::component(std::size_t index) const {
    switch (index) {
        case 0: return a3;
        case 1: return d3;
        case 2: return d2;
        case 3: return d1;
    }
    throw Error(ErrorCode::RangeOutOfData, "component index out of range");
}

std::vector<double> MultiresolutionDecomposition::reconstruct() const {
    std::vector<double> out(a3.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a3[i] + d3[i] + d2[i] + d1[i];
    return out;
}

std::string_view component_name(std::size_t index) noexcept {
    static constexpr std::string_view names[] = {"A3", "D3", "D2", "D1"};
    return index < kComponentCount ? names[index] : "?";
}

MultiresolutionDecomposition decompose3(std::span<const double> signal, const FilterPair& filters) {
    const std::size_t N = signal.size();
    if (N < 8 * filters.size()) {
        throw Error(ErrorCode::SignalTooShort, "three-level decomposition needs at least " +
                                                   std::to_string(8 * filters.size()) + " samples");
    }
    const auto level1 = dwt_pair(signal, filters);
    const auto level2 = dwt_pair(level1.approx, filters);
    const auto level3 = dwt_pair(level2.approx, filters);
    const std::size_t n1 = level1.approx.size();
    const std::size_t n2 = level2.approx.size();

    auto zeros = [](std::size_t n) { return std::vector<double>(n, 0.0); };
    // Reconstructs one branch alone, lifting it through the coarser levels.
    auto lift_from_level1_approx = [&](const std::vector<double>& a1) {
        return idwt_pair(a1, zeros(a1.size()), filters, N);
    };
    auto lift_from_level2_approx = [&](const std::vector<double>& a2) {
        return lift_from_level1_approx(idwt_pair(a2, zeros(a2.size()), filters, n1));
    };

    MultiresolutionDecomposition out;
    out.d1 = idwt_pair(zeros(level1.detail.size()), level1.detail, filters, N);
    out.d2 = lift_from_level1_approx(idwt_pair(zeros(level2.detail.size()), level2.detail, filters, n1));
    out.d3 = lift_from_level2_approx(idwt_pair(zeros(level3.detail.size()), level3.detail, filters, n2));
    out.a3 = lift_from_level2_approx(idwt_pair(level3.approx, zeros(level3.approx.size()), filters, n2));
    return out;
}

void write_components_csv(std::ostream& out, std::span<const dataio::HourStamp> stamps,
                          const MultiresolutionDecomposition& d) {
    if (stamps.size() != d.size()) throw Error(ErrorCode::LengthMismatch, "stamps not aligned with components");
    out << "timestamp,A3,D3,D2,D1\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        out << dataio::format_timestamp(stamps[i]) << ',' << text::format_double(d.a3[i]) << ','
            << text::format_double(d.d3[i]) << ',' << text::format_double(d.d2[i]) << ','
            << text::format_double(d.d1[i]) << '\n';
    }
}

}  // namespace enff::wavelet
