#pragma once

#include "enff/dataio.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace enff::wavelet {

enum class Family { Haar, Daubechies4 };

std::string_view to_string(Family family) noexcept;
Family parse_family(std::string_view name);  // "haar" | "db4"

/// Orthogonal two-channel filter bank. The highpass is derived from the
/// lowpass by the quadrature mirror relation g[k] = (-1)^k h[L-1-k].
class FilterPair {
public:
    static FilterPair haar();
    static FilterPair daubechies4();  // 8 taps
    static FilterPair of(Family family);

    explicit FilterPair(std::vector<double> lowpass);

    std::span<const double> lowpass() const noexcept { return lowpass_; }
    std::span<const double> highpass() const noexcept { return highpass_; }
    std::size_t size() const noexcept { return lowpass_.size(); }

private:
    std::vector<double> lowpass_;
    std::vector<double> highpass_;
};

/// Coefficients per channel for a signal of `signal_length` samples:
/// floor((N + L - 1) / 2). Equals ceil(N/2) for two-tap filters.
std::size_t coefficient_count(std::size_t signal_length, std::size_t filter_length) noexcept;

struct Coefficients {
    std::vector<double> approx;
    std::vector<double> detail;
};

/// One analysis step: convolution over the half-sample symmetric extension,
/// keeping odd output phases. Throws SignalTooShort if N < L.
Coefficients dwt_pair(std::span<const double> signal, const FilterPair& filters);

/// Synthesis step inverting dwt_pair for a signal of `out_length` samples.
/// Throws LengthMismatch when the coefficient counts do not fit out_length.
std::vector<double> idwt_pair(std::span<const double> approx, std::span<const double> detail,
                              const FilterPair& filters, std::size_t out_length);

/// Full-length additive components of a three-level Mallat decomposition:
/// signal == a3 + d3 + d2 + d1.
struct MultiresolutionDecomposition {
    static constexpr int kLevels = 3;

    std::vector<double> a3;
    std::vector<double> d3;
    std::vector<double> d2;
    std::vector<double> d1;

    std::size_t size() const noexcept { return a3.size(); }
    /// Component by index in the order A3, D3, D2, D1.
    const std::vector<double>& component(std::size_t index) const;
    std::vector<double> reconstruct() const;
};

inline constexpr std::size_t kComponentCount = 4;
std::string_view component_name(std::size_t index) noexcept;  // "A3", "D3", "D2", "D1"

/// Throws SignalTooShort if the signal has fewer than 8·L samples.
MultiresolutionDecomposition decompose3(std::span<const double> signal, const FilterPair& filters);

/// `timestamp,A3,D3,D2,D1`
void write_components_csv(std::ostream& out, std::span<const dataio::HourStamp> stamps,
                          const MultiresolutionDecomposition& decomposition);

}  // namespace enff::wavelet
