#include "enff/features.hpp"

#include "enff/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace enff::features {

namespace {

constexpr std::size_t kDayOfWeek = 3;
constexpr std::size_t kDayType = 4;
constexpr std::size_t kHour = 5;

bool is_categorical(std::size_t feature) {
    return feature == kDayOfWeek || feature == kDayType || feature == kHour;
}

Bounds categorical_bounds(std::size_t feature) {
    switch (feature) {
        case kDayOfWeek: return {0.0, 7.0};
        case kDayType: return {0.0, 1.0};
        default: return {0.0, 23.0};
    }
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> autocorrelation(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (n <= max_lag) {
        throw Error(ErrorCode::SeriesTooShort,
                    "need more than " + std::to_string(max_lag) + " samples, got " + std::to_string(n));
    }
    const double m = mean_of(values);
    double denom = 0.0;
    for (double x : values) denom += (x - m) * (x - m);
    if (denom == 0.0) throw Error(ErrorCode::DegenerateVariance, "constant series");

    std::vector<double> acf(max_lag + 1);
    acf[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) num += (values[t] - m) * (values[t + k] - m);
        acf[k] = std::clamp(num / denom, -1.0, 1.0);
    }
    return acf;
}

double correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "correlation inputs differ in length");
    if (a.size() < 2) throw Error(ErrorCode::SeriesTooShort, "correlation needs at least 2 samples");
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw Error(ErrorCode::DegenerateVariance, "zero variance input");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::array<double, kInputCount> FeatureVector::inputs() const {
    return {lag_prev_hour,
            lag_prev_day,
            lag_prev_week,
            static_cast<double>(day_of_week),
            static_cast<double>(day_type),
            static_cast<double>(hour_of_day),
            dew_point_f,
            dry_bulb_f};
}

FeatureVector build_features(const dataio::TaggedSeries& series, std::size_t index,
                             std::span<const double> load_source, std::size_t source_offset) {
    if (source_offset + load_source.size() > series.size()) {
        throw Error(ErrorCode::LengthMismatch, "load source extends past the series");
    }
    if (index < source_offset + kHistoryHours) {
        throw Error(ErrorCode::InsufficientHistory,
                    "index " + std::to_string(index) + " has less than one week of history");
    }
    if (index >= source_offset + load_source.size()) {
        throw Error(ErrorCode::RangeOutOfData, "index past end of load source");
    }
    const auto& rec = series.record(index);
    const auto& tag = series.tag(index);
    const std::size_t at = index - source_offset;
    FeatureVector f;
    f.lag_prev_hour = load_source[at - 1];
    f.lag_prev_day = load_source[at - 24];
    f.lag_prev_week = load_source[at - kHistoryHours];
    f.day_of_week = tag.day_of_week;
    f.day_type = tag.day_type == dataio::DayType::Off ? 1 : 0;
    f.hour_of_day = tag.hour_of_day;
    f.dew_point_f = rec.dew_point_f;
    f.dry_bulb_f = rec.dry_bulb_f;
    f.target = load_source[at];
    return f;
}

FeatureVector build_features(const dataio::TaggedSeries& series, std::size_t index) {
    if (index < kHistoryHours) {
        throw Error(ErrorCode::InsufficientHistory,
                    "index " + std::to_string(index) + " has less than one week of history");
    }
    if (index >= series.size()) throw Error(ErrorCode::RangeOutOfData, "index past end of series");
    const auto& rec = series.record(index);
    const auto& tag = series.tag(index);
    FeatureVector f;
    f.lag_prev_hour = series.record(index - 1).load_mw;
    f.lag_prev_day = series.record(index - 24).load_mw;
    f.lag_prev_week = series.record(index - kHistoryHours).load_mw;
    f.day_of_week = tag.day_of_week;
    f.day_type = tag.day_type == dataio::DayType::Off ? 1 : 0;
    f.hour_of_day = tag.hour_of_day;
    f.dew_point_f = rec.dew_point_f;
    f.dry_bulb_f = rec.dry_bulb_f;
    f.target = rec.load_mw;
    return f;
}

std::vector<FeatureVector> build_all_features(const dataio::TaggedSeries& series) {
    std::vector<FeatureVector> out;
    if (series.size() <= kHistoryHours) return out;
    out.reserve(series.size() - kHistoryHours);
    for (std::size_t i = kHistoryHours; i < series.size(); ++i) out.push_back(build_features(series, i));
    return out;
}

double scale(const Bounds& b, double raw) {
    if (!(b.max > b.min)) return 0.5;
    return (raw - b.min) / (b.max - b.min);
}

double unscale(const Bounds& b, double normalized) {
    if (!(b.max > b.min)) return b.min;
    return normalized * (b.max - b.min) + b.min;
}

NormalizationParams NormalizationParams::fit(std::span<const FeatureVector> rows) {
    if (rows.size() < 2) throw Error(ErrorCode::EmptyTrainingSet, "normalization needs at least 2 rows");
    std::array<Bounds, kInputCount> in{};
    Bounds target{rows.front().target, rows.front().target};
    const auto first = rows.front().inputs();
    for (std::size_t k = 0; k < kInputCount; ++k) in[k] = {first[k], first[k]};
    for (const auto& r : rows) {
        const auto x = r.inputs();
        for (std::size_t k = 0; k < kInputCount; ++k) {
            in[k].min = std::min(in[k].min, x[k]);
            in[k].max = std::max(in[k].max, x[k]);
        }
        target.min = std::min(target.min, r.target);
        target.max = std::max(target.max, r.target);
    }
    for (std::size_t k = 0; k < kInputCount; ++k) {
        if (is_categorical(k)) in[k] = categorical_bounds(k);
    }
    return NormalizationParams(in, target);
}

std::array<double, kInputCount> NormalizationParams::apply(const FeatureVector& row) const {
    auto x = row.inputs();
    for (std::size_t k = 0; k < kInputCount; ++k) x[k] = scale(inputs_[k], x[k]);
    return x;
}

double NormalizationParams::apply_input(std::size_t feature, double raw) const {
    return scale(inputs_.at(feature), raw);
}

double NormalizationParams::invert_input(std::size_t feature, double normalized) const {
    return unscale(inputs_.at(feature), normalized);
}

double NormalizationParams::apply_target(double raw) const { return scale(target_, raw); }

double NormalizationParams::invert_target(double normalized) const { return unscale(target_, normalized); }

Dataset make_dataset(std::span<const FeatureVector> rows, std::span<const dataio::HourStamp> stamps,
                     const NormalizationParams& params) {
    if (!stamps.empty() && stamps.size() != rows.size()) {
        throw Error(ErrorCode::LengthMismatch, "stamp count differs from row count");
    }
    Dataset ds;
    ds.params = params;
    ds.inputs.reserve(rows.size() * kInputCount);
    ds.targets.reserve(rows.size());
    for (const auto& r : rows) {
        const auto x = params.apply(r);
        ds.inputs.insert(ds.inputs.end(), x.begin(), x.end());
        ds.targets.push_back(params.apply_target(r.target));
    }
    ds.stamps.assign(stamps.begin(), stamps.end());
    return ds;
}

}  // namespace enff::features
