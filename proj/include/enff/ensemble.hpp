#pragma once

#include "enff/dataio.hpp"
#include "enff/features.hpp"
#include "enff/nnet.hpp"
#include "enff/trainer.hpp"
#include "enff/wavelet.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace enff::ensemble {

/// How the h-1 load lag is filled for hours after the first forecast hour.
enum class LagMode {
    Recursive,      // the member's own previous-hour forecast
    TeacherForced,  // the actual previous-hour load (diagnostic; not a true day-ahead setting)
};

std::string_view to_string(LagMode mode) noexcept;
LagMode parse_lag_mode(std::string_view name);

struct MemberKind {
    nnet::Kind kind;
    std::size_t hidden_units;
};

struct EnsembleConfig {
    std::vector<MemberKind> kinds{{nnet::Kind::FNN, 12}, {nnet::Kind::Elman, 10}, {nnet::Kind::RBF, 15}};
    /// Copies per kind; copy r gets hidden_units + 2r for architectural diversity.
    std::size_t instances_per_kind = 1;
    /// Shared swarm settings. The seed field is ignored: sub-network (m, c)
    /// uses derive_seed(seed, 1000 + 4m + c).
    trainer::SwarmConfig swarm;
    std::vector<double> alpha_grid{0, 10, 20, 30, 40, 50};
    std::optional<double> alpha_override;
    wavelet::Family wavelet = wavelet::Family::Daubechies4;
    LagMode lag_mode = LagMode::Recursive;
    /// Hours of history decomposed when forecasting a day.
    std::size_t history_window = 672;
    std::uint64_t seed = 0;
    /// Workers for the independent sub-network training tasks (0 = hardware).
    std::size_t threads = 1;

    std::vector<nnet::NetworkSpec> member_specs() const;
};

struct SubNetwork {
    nnet::WeightVector weights;
    trainer::TrainingTrace trace;
};

struct Member {
    nnet::NetworkSpec spec;
    std::array<SubNetwork, wavelet::kComponentCount> components;  // A3, D3, D2, D1
};

struct TrainedEnsemble {
    std::vector<Member> members;
    /// One scaling per wavelet component, shared by all members.
    std::array<features::NormalizationParams, wavelet::kComponentCount> normalization;
    wavelet::Family wavelet = wavelet::Family::Daubechies4;
    double alpha = 0.0;
    LagMode lag_mode = LagMode::Recursive;
    std::size_t history_window = 672;

    std::size_t member_count() const noexcept { return members.size(); }
};

/// Forecasts for N_h hours (rows) by NN_total members (columns), in MW.
class MemberMatrix {
public:
    MemberMatrix() = default;
    MemberMatrix(std::size_t hours, std::size_t members) : hours_(hours), members_(members), values_(hours * members) {}

    std::size_t hours() const noexcept { return hours_; }
    std::size_t members() const noexcept { return members_; }
    double& at(std::size_t hour, std::size_t member) { return values_[hour * members_ + member]; }
    double at(std::size_t hour, std::size_t member) const { return values_[hour * members_ + member]; }
    std::span<const double> hour_values(std::size_t hour) const {
        return std::span<const double>(values_).subspan(hour * members_, members_);
    }
    std::vector<double> member_column(std::size_t member) const;

    friend bool operator==(const MemberMatrix&, const MemberMatrix&) = default;

private:
    std::size_t hours_ = 0;
    std::size_t members_ = 0;
    std::vector<double> values_;
};

struct EnsembleForecast {
    MemberMatrix members;
    std::vector<double> trimmed;  // one value per hour
    double alpha = 0.0;
    std::size_t trim_count = 0;
};

/// Decomposes the training-range load, trains every (member, component)
/// sub-network with GPSO and selects alpha on validation days.
///
/// Throws InsufficientData when the training range is shorter than two weeks,
/// EmptyValidation when no validation days exist and no alpha override is set.
TrainedEnsemble train_ensemble(const EnsembleConfig& config, const dataio::TaggedSeries& series,
                               const dataio::SplitSpec& split);

/// 24 × NN_total member forecasts for `day`. Throws InsufficientHistory when
/// the day has less than one week of history, RangeOutOfData when the day is
/// not in the series.
MemberMatrix forecast_members(const TrainedEnsemble& ensemble, const dataio::TaggedSeries& series,
                              dataio::Date day);
MemberMatrix forecast_members(const TrainedEnsemble& ensemble, const dataio::TaggedSeries& series,
                              dataio::Date day, LagMode mode);

/// NN_trim = 2·floor(alpha·NN_total / 200). Throws InvalidConfig for alpha
/// outside [0, 100) or NN_total == 0.
std::size_t compute_trim_count(double alpha, std::size_t total);

/// Mean of the values left after dropping NN_trim/2 from each end of the
/// sorted list.
double trimmed_mean(std::span<const double> values, double alpha);

std::vector<double> aggregate(const MemberMatrix& members, double alpha);

/// MAPE of the trimmed output over all validation hours, in percent.
double trimmed_mape(std::span<const MemberMatrix> forecasts, std::span<const std::vector<double>> actuals,
                    double alpha);

/// Grid alpha with the smallest trimmed MAPE; ties go to the smaller alpha.
/// Throws EmptyValidation when there are no validation days.
double select_alpha(std::span<const MemberMatrix> forecasts, std::span<const std::vector<double>> actuals,
                    std::span<const double> alpha_grid);

EnsembleForecast ensemble_forecast(const TrainedEnsemble& ensemble, const dataio::TaggedSeries& series,
                                   dataio::Date day);

/// Persists as `dir/manifest.txt` plus one model file and one trace file per
/// sub-network. The manifest records an FNV-1a hash of each model file.
void save(const TrainedEnsemble& ensemble, const std::filesystem::path& dir);
TrainedEnsemble load(const std::filesystem::path& dir);

/// `timestamp,forecast_mw[,member_1..member_N]`
void write_forecast_csv(std::ostream& out, std::span<const dataio::HourStamp> stamps,
                        std::span<const double> forecast, const MemberMatrix* members = nullptr);

}  // namespace enff::ensemble
