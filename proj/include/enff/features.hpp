#pragma once

#include "enff/dataio.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace enff::features {

/// Hours of history a feature row needs (one week).
inline constexpr std::size_t kHistoryHours = 168;
/// Predictor inputs per row (the target is kept separately).
inline constexpr std::size_t kInputCount = 8;

/// Biased sample autocorrelation for lags 0..max_lag. Throws SeriesTooShort
/// when the series is not longer than max_lag, DegenerateVariance for a
/// constant series.
std::vector<double> autocorrelation(std::span<const double> values, std::size_t max_lag);

/// Pearson correlation. Throws LengthMismatch, SeriesTooShort (n < 2) or
/// DegenerateVariance.
double correlation(std::span<const double> a, std::span<const double> b);

struct FeatureVector {
    double lag_prev_hour = 0.0;  // L(h-1)
    double lag_prev_day = 0.0;   // L(h-24)
    double lag_prev_week = 0.0;  // L(h-168)
    int day_of_week = 1;
    int day_type = 0;            // 1 = off day
    int hour_of_day = 0;
    double dew_point_f = 0.0;
    double dry_bulb_f = 0.0;
    double target = 0.0;         // L(h)

    /// Raw (unnormalized) inputs in network order.
    std::array<double, kInputCount> inputs() const;
};

/// Feature row for series index `index` using the record loads for lags and target.
FeatureVector build_features(const dataio::TaggedSeries& series, std::size_t index);

/// Same, but lag and target values come from `load_source`, which holds the
/// values for series indices [source_offset, source_offset + size) (e.g. one
/// wavelet component of a sub-range). Calendar and weather still come from
/// the series. Needs index >= source_offset + kHistoryHours.
FeatureVector build_features(const dataio::TaggedSeries& series, std::size_t index,
                             std::span<const double> load_source, std::size_t source_offset = 0);

/// All rows for indices [kHistoryHours, size).
std::vector<FeatureVector> build_all_features(const dataio::TaggedSeries& series);

struct Bounds {
    double min = 0.0;
    double max = 1.0;
};

/// Min-max scaling per input plus the target. Categorical inputs use fixed
/// ranges: day_of_week/7, day_type as-is, hour_of_day/23.
class NormalizationParams {
public:
    NormalizationParams() = default;
    NormalizationParams(std::array<Bounds, kInputCount> inputs, Bounds target)
        : inputs_(inputs), target_(target) {}

    /// Throws EmptyTrainingSet for fewer than two rows.
    static NormalizationParams fit(std::span<const FeatureVector> rows);

    std::array<double, kInputCount> apply(const FeatureVector& row) const;
    double apply_input(std::size_t feature, double raw) const;
    double invert_input(std::size_t feature, double normalized) const;
    double apply_target(double raw) const;
    double invert_target(double normalized) const;

    const std::array<Bounds, kInputCount>& input_bounds() const noexcept { return inputs_; }
    const Bounds& target_bounds() const noexcept { return target_; }

    friend bool operator==(const NormalizationParams& a, const NormalizationParams& b) {
        for (std::size_t i = 0; i < kInputCount; ++i) {
            if (a.inputs_[i].min != b.inputs_[i].min || a.inputs_[i].max != b.inputs_[i].max) return false;
        }
        return a.target_.min == b.target_.min && a.target_.max == b.target_.max;
    }

private:
    std::array<Bounds, kInputCount> inputs_{};
    Bounds target_{};
};

double scale(const Bounds& b, double raw);
double unscale(const Bounds& b, double normalized);

/// Normalized rows and targets, row-major, plus the index back to timestamps.
struct Dataset {
    std::size_t input_dim = kInputCount;
    std::vector<double> inputs;
    std::vector<double> targets;
    NormalizationParams params;
    std::vector<dataio::HourStamp> stamps;

    std::size_t rows() const noexcept { return targets.size(); }
    bool empty() const noexcept { return targets.empty(); }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(inputs).subspan(i * input_dim, input_dim);
    }
};

/// Normalizes `rows` with `params` (no clamping).
Dataset make_dataset(std::span<const FeatureVector> rows, std::span<const dataio::HourStamp> stamps,
                     const NormalizationParams& params);

}  // namespace enff::features
