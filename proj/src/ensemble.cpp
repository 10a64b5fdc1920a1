#include "enff/ensemble.hpp"

#include "enff/config.hpp"
#include "enff/error.hpp"
#include "enff/parallel.hpp"
#include "enff/random.hpp"
#include "enff/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace enff::ensemble {

namespace {

constexpr std::size_t kComponents = wavelet::kComponentCount;
constexpr std::size_t kHoursPerDay = 24;
constexpr std::uint64_t kSubnetStreamBase = 1000;

features::FeatureVector make_row(const dataio::TaggedSeries& series, std::size_t index, double lag_hour,
                                 double lag_day, double lag_week) {
    const auto& rec = series.record(index);
    const auto& tag = series.tag(index);
    features::FeatureVector f;
    f.lag_prev_hour = lag_hour;
    f.lag_prev_day = lag_day;
    f.lag_prev_week = lag_week;
    f.day_of_week = tag.day_of_week;
    f.day_type = tag.day_type == dataio::DayType::Off ? 1 : 0;
    f.hour_of_day = tag.hour_of_day;
    f.dew_point_f = rec.dew_point_f;
    f.dry_bulb_f = rec.dry_bulb_f;
    return f;
}

// Decomposed history around one forecast day.
struct DayContext {
    std::size_t start = 0;   // series index of hour 00 of the day
    std::size_t offset = 0;  // series index of comps[c][0]
    std::array<std::vector<double>, kComponents> comps;

    double value(std::size_t component, std::size_t series_index) const {
        return comps[component][series_index - offset];
    }
};

DayContext prepare_day(const TrainedEnsemble& e, const dataio::TaggedSeries& series, dataio::Date day,
                       LagMode mode) {
    DayContext ctx;
    ctx.start = series.day_start(day);
    if (ctx.start < features::kHistoryHours) {
        throw Error(ErrorCode::InsufficientHistory,
                    "day " + dataio::format_date(day) + " has less than one week of history");
    }
    const std::size_t window = std::max(e.history_window, features::kHistoryHours);
    const std::size_t span = std::min(window, ctx.start);
    ctx.offset = ctx.start - span;
    const std::size_t end = mode == LagMode::TeacherForced ? ctx.start + kHoursPerDay : ctx.start;
    std::vector<double> loads;
    loads.reserve(end - ctx.offset);
    for (std::size_t i = ctx.offset; i < end; ++i) loads.push_back(series.record(i).load_mw);
    const auto d = wavelet::decompose3(loads, wavelet::FilterPair::of(e.wavelet));
    for (std::size_t c = 0; c < kComponents; ++c) ctx.comps[c] = d.component(c);
    return ctx;
}

std::array<double, kHoursPerDay> forecast_component(const Member& member, std::size_t c,
                                                    const features::NormalizationParams& norm,
                                                    const DayContext& ctx, const dataio::TaggedSeries& series,
                                                    LagMode mode) {
    const auto& spec = member.spec;
    const auto& w = member.components[c].weights;
    const bool elman = spec.kind == nnet::Kind::Elman;
    std::vector<double> context(elman ? spec.hidden_units : 0, 0.0);
    std::vector<double> scratch(elman ? spec.hidden_units : 0, 0.0);

    auto run = [&](const features::FeatureVector& f) {
        const auto x = norm.apply(f);
        return elman ? nnet::elman_step(spec, w, x, context, scratch) : nnet::forward(spec, w, x);
    };

    if (elman) {
        // Warm the context over (up to) the preceding week of actual components.
        const std::size_t available = ctx.start - ctx.offset - features::kHistoryHours;
        const std::size_t warm = std::min(features::kHistoryHours, available);
        for (std::size_t i = ctx.start - warm; i < ctx.start; ++i) {
            run(make_row(series, i, ctx.value(c, i - 1), ctx.value(c, i - 24),
                         ctx.value(c, i - features::kHistoryHours)));
        }
    }

    std::array<double, kHoursPerDay> preds{};
    for (std::size_t t = 0; t < kHoursPerDay; ++t) {
        const std::size_t i = ctx.start + t;
        const double lag_hour = (t == 0 || mode == LagMode::TeacherForced) ? ctx.value(c, i - 1) : preds[t - 1];
        const auto f = make_row(series, i, lag_hour, ctx.value(c, i - 24), ctx.value(c, i - features::kHistoryHours));
        preds[t] = norm.invert_target(run(f));
    }
    return preds;
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha < 100.0)) {
        throw Error(ErrorCode::InvalidConfig, "alpha must be in [0, 100), got " + text::format_double(alpha));
    }
}

}  // namespace

std::string_view to_string(LagMode mode) noexcept {
    return mode == LagMode::Recursive ? "recursive" : "teacher_forced";
}

LagMode parse_lag_mode(std::string_view name) {
    if (name == "recursive") return LagMode::Recursive;
    if (name == "teacher_forced") return LagMode::TeacherForced;
    throw Error(ErrorCode::InvalidConfig, "unknown lag mode '" + std::string(name) + "'");
}

std::vector<nnet::NetworkSpec> EnsembleConfig::member_specs() const {
    if (instances_per_kind < 1) throw Error(ErrorCode::InvalidConfig, "instances_per_kind must be >= 1");
    std::vector<nnet::NetworkSpec> specs;
    for (const auto& k : kinds) {
        for (std::size_t r = 0; r < instances_per_kind; ++r) {
            nnet::NetworkSpec s;
            s.kind = k.kind;
            s.input_dim = features::kInputCount;
            s.hidden_units = k.hidden_units + 2 * r;
            s.validate();
            specs.push_back(s);
        }
    }
    if (specs.empty()) throw Error(ErrorCode::InvalidConfig, "ensemble needs at least one member");
    return specs;
}

std::vector<double> MemberMatrix::member_column(std::size_t member) const {
    std::vector<double> out(hours_);
    for (std::size_t i = 0; i < hours_; ++i) out[i] = at(i, member);
    return out;
}

std::size_t compute_trim_count(double alpha, std::size_t total) {
    check_alpha(alpha);
    if (total == 0) throw Error(ErrorCode::InvalidConfig, "ensemble has no members");
    const auto half = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(total) / 200.0));
    return 2 * half;
}

double trimmed_mean(std::span<const double> values, double alpha) {
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "trimmed mean of no values");
    const std::size_t total = values.size();
    const std::size_t trim = compute_trim_count(alpha, total);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    const std::size_t lo = trim / 2;
    const std::size_t hi = total - trim / 2;
    for (std::size_t j = lo; j < hi; ++j) sum += sorted[j];
    // Rounding in the sum can push the mean an ulp outside the retained values.
    return std::clamp(sum / static_cast<double>(total - trim), sorted[lo], sorted[hi - 1]);
}

std::vector<double> aggregate(const MemberMatrix& m, double alpha) {
    std::vector<double> out(m.hours());
    for (std::size_t i = 0; i < m.hours(); ++i) out[i] = trimmed_mean(m.hour_values(i), alpha);
    return out;
}

double trimmed_mape(std::span<const MemberMatrix> forecasts, std::span<const std::vector<double>> actuals,
                    double alpha) {
    if (forecasts.empty()) throw Error(ErrorCode::EmptyValidation, "no validation days");
    if (forecasts.size() != actuals.size()) {
        throw Error(ErrorCode::LengthMismatch, "forecast and actual day counts differ");
    }
    double sum = 0.0;
    std::size_t hours = 0;
    for (std::size_t d = 0; d < forecasts.size(); ++d) {
        const auto trimmed = aggregate(forecasts[d], alpha);
        if (trimmed.size() != actuals[d].size()) {
            throw Error(ErrorCode::LengthMismatch, "forecast and actual hour counts differ");
        }
        for (std::size_t i = 0; i < trimmed.size(); ++i) {
            const double a = actuals[d][i];
            if (!(a > 0.0)) throw Error(ErrorCode::ZeroActual, "validation actuals must be positive");
            sum += std::abs((trimmed[i] - a) / a);
            ++hours;
        }
    }
    return 100.0 * sum / static_cast<double>(hours);
}

double select_alpha(std::span<const MemberMatrix> forecasts, std::span<const std::vector<double>> actuals,
                    std::span<const double> alpha_grid) {
    if (forecasts.empty()) throw Error(ErrorCode::EmptyValidation, "no validation days for alpha selection");
    if (alpha_grid.empty()) throw Error(ErrorCode::InvalidConfig, "alpha grid is empty");
    std::vector<double> grid(alpha_grid.begin(), alpha_grid.end());
    std::sort(grid.begin(), grid.end());
    double best_alpha = grid.front();
    double best_mape = trimmed_mape(forecasts, actuals, best_alpha);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double m = trimmed_mape(forecasts, actuals, grid[k]);
        if (m < best_mape) {
            best_mape = m;
            best_alpha = grid[k];
        }
    }
    return best_alpha;
}

MemberMatrix forecast_members(const TrainedEnsemble& e, const dataio::TaggedSeries& series, dataio::Date day,
                              LagMode mode) {
    if (e.members.empty()) throw Error(ErrorCode::InvalidConfig, "ensemble has no members");
    const auto ctx = prepare_day(e, series, day, mode);
    MemberMatrix out(kHoursPerDay, e.members.size());
    for (std::size_t m = 0; m < e.members.size(); ++m) {
        std::array<double, kHoursPerDay> total{};
        for (std::size_t c = 0; c < kComponents; ++c) {
            const auto part = forecast_component(e.members[m], c, e.normalization[c], ctx, series, mode);
            for (std::size_t t = 0; t < kHoursPerDay; ++t) total[t] += part[t];
        }
        for (std::size_t t = 0; t < kHoursPerDay; ++t) out.at(t, m) = total[t];
    }
    return out;
}

MemberMatrix forecast_members(const TrainedEnsemble& e, const dataio::TaggedSeries& series, dataio::Date day) {
    return forecast_members(e, series, day, e.lag_mode);
}

EnsembleForecast ensemble_forecast(const TrainedEnsemble& e, const dataio::TaggedSeries& series,
                                   dataio::Date day) {
    EnsembleForecast f;
    f.members = forecast_members(e, series, day);
    f.alpha = e.alpha;
    f.trim_count = compute_trim_count(e.alpha, e.members.size());
    f.trimmed = aggregate(f.members, e.alpha);
    return f;
}

TrainedEnsemble train_ensemble(const EnsembleConfig& config, const dataio::TaggedSeries& series,
                               const dataio::SplitSpec& split_spec) {
    const auto specs = config.member_specs();
    if (config.alpha_override) check_alpha(*config.alpha_override);
    for (double a : config.alpha_grid) check_alpha(a);
    const auto partition = dataio::split(series, split_spec);
    const bool has_validation = !partition.validation.empty();
    if (!has_validation && !config.alpha_override) {
        throw Error(ErrorCode::EmptyValidation,
                    "validation range is empty; set an explicit alpha override to train without it");
    }
    const std::size_t t0 = partition.train.front();
    const std::size_t t1 = partition.train.back();
    const std::size_t train_len = t1 - t0 + 1;
    if (train_len < 2 * features::kHistoryHours) {
        throw Error(ErrorCode::InsufficientData, "training range must span at least two weeks");
    }

    TrainedEnsemble e;
    e.wavelet = config.wavelet;
    e.lag_mode = config.lag_mode;
    e.history_window = std::max(config.history_window, features::kHistoryHours);

    std::vector<double> loads;
    loads.reserve(train_len);
    for (std::size_t i = t0; i <= t1; ++i) loads.push_back(series.record(i).load_mw);
    const auto decomposition = wavelet::decompose3(loads, wavelet::FilterPair::of(config.wavelet));

    std::array<features::Dataset, kComponents> datasets;
    for (std::size_t c = 0; c < kComponents; ++c) {
        const auto& comp = decomposition.component(c);
        std::vector<features::FeatureVector> rows;
        std::vector<dataio::HourStamp> stamps;
        rows.reserve(train_len - features::kHistoryHours);
        for (std::size_t i = t0 + features::kHistoryHours; i <= t1; ++i) {
            rows.push_back(features::build_features(series, i, comp, t0));
            stamps.push_back(series.record(i).timestamp);
        }
        e.normalization[c] = features::NormalizationParams::fit(rows);
        datasets[c] = features::make_dataset(rows, stamps, e.normalization[c]);
    }

    e.members.resize(specs.size());
    for (std::size_t m = 0; m < specs.size(); ++m) e.members[m].spec = specs[m];
    const std::size_t tasks = specs.size() * kComponents;
    parallel_for(tasks, config.threads, [&](std::size_t task) {
        const std::size_t m = task / kComponents;
        const std::size_t c = task % kComponents;
        auto swarm = config.swarm;
        swarm.seed = derive_seed(config.seed, kSubnetStreamBase + task);
        swarm.threads = 1;
        auto result = trainer::train_gpso(specs[m], datasets[c], swarm);
        e.members[m].components[c] = {std::move(result.weights), std::move(result.trace)};
    });

    if (config.alpha_override) {
        e.alpha = *config.alpha_override;
        return e;
    }

    // Alpha is chosen on off days (weekends and holidays) when the validation
    // range has any, otherwise on every validation day.
    std::vector<dataio::Date> all_days;
    std::vector<dataio::Date> off_days;
    for (const auto& d : split_spec.validation->days()) {
        const auto start = series.day_start(d);
        if (start < features::kHistoryHours) continue;
        all_days.push_back(d);
        if (series.tag(start).day_type == dataio::DayType::Off) off_days.push_back(d);
    }
    const auto& days = off_days.empty() ? all_days : off_days;
    std::vector<MemberMatrix> forecasts;
    std::vector<std::vector<double>> actuals;
    for (const auto& d : days) {
        forecasts.push_back(forecast_members(e, series, d));
        const auto start = series.day_start(d);
        std::vector<double> a(kHoursPerDay);
        for (std::size_t t = 0; t < kHoursPerDay; ++t) a[t] = series.record(start + t).load_mw;
        actuals.push_back(std::move(a));
    }
    e.alpha = select_alpha(forecasts, actuals, config.alpha_grid);
    return e;
}

namespace {

std::string bounds_to_string(const features::Bounds& b) {
    return text::format_double(b.min) + "," + text::format_double(b.max);
}

features::Bounds bounds_from_string(const std::string& s) {
    const auto parts = text::split(s);
    if (parts.size() != 2) throw Error(ErrorCode::MalformedRow, "bounds need 'min,max'");
    const auto lo = text::parse_double(parts[0]);
    const auto hi = text::parse_double(parts[1]);
    if (!lo || !hi) throw Error(ErrorCode::MalformedRow, "bad bounds '" + s + "'");
    return {*lo, *hi};
}

std::string subnet_stem(std::size_t m, std::size_t c) {
    return "member" + std::to_string(m) + "_" + std::string(wavelet::component_name(c));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + p.string());
    out << content;
}

}  // namespace

void save(const TrainedEnsemble& e, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    KeyValueFile manifest;
    manifest.set("format", "enff-ensemble-1");
    manifest.set("alpha", text::format_double(e.alpha));
    manifest.set("wavelet", std::string(wavelet::to_string(e.wavelet)));
    manifest.set("lag_mode", std::string(to_string(e.lag_mode)));
    manifest.set("history_window", std::to_string(e.history_window));
    manifest.set("members", std::to_string(e.members.size()));
    for (std::size_t c = 0; c < kComponents; ++c) {
        const std::string prefix = "norm." + std::string(wavelet::component_name(c));
        const auto& bounds = e.normalization[c].input_bounds();
        for (std::size_t k = 0; k < features::kInputCount; ++k) {
            manifest.set(prefix + ".input" + std::to_string(k), bounds_to_string(bounds[k]));
        }
        manifest.set(prefix + ".target", bounds_to_string(e.normalization[c].target_bounds()));
    }
    for (std::size_t m = 0; m < e.members.size(); ++m) {
        for (std::size_t c = 0; c < kComponents; ++c) {
            const auto stem = subnet_stem(m, c);
            const auto& sub = e.members[m].components[c];
            const auto model = nnet::model_to_string(e.members[m].spec, sub.weights) + "\n";
            spill(dir / (stem + ".model.csv"), model);
            std::string trace = "iteration,gbest_mse\n";
            for (std::size_t i = 0; i < sub.trace.size(); ++i) {
                trace += std::to_string(i + 1) + "," + text::format_double(sub.trace[i]) + "\n";
            }
            spill(dir / (stem + ".trace.csv"), trace);
            manifest.set("model." + stem, stem + ".model.csv");
            manifest.set("hash." + stem, to_hex(fnv1a64(model)));
        }
    }
    std::ofstream out(dir / "manifest.txt");
    if (!out) throw Error(ErrorCode::Io, "cannot write manifest in " + dir.string());
    manifest.write(out);
}

TrainedEnsemble load(const std::filesystem::path& dir) {
    const auto manifest = KeyValueFile::read(dir / "manifest.txt");
    if (manifest.get("format") != "enff-ensemble-1") {
        throw Error(ErrorCode::MalformedRow, "unsupported ensemble manifest format");
    }
    TrainedEnsemble e;
    const auto alpha = text::parse_double(manifest.get("alpha"));
    if (!alpha) throw Error(ErrorCode::MalformedRow, "bad alpha in manifest");
    e.alpha = *alpha;
    e.wavelet = wavelet::parse_family(manifest.get("wavelet"));
    e.lag_mode = parse_lag_mode(manifest.get("lag_mode"));
    e.history_window = static_cast<std::size_t>(manifest.get_int("history_window", 672));
    for (std::size_t c = 0; c < kComponents; ++c) {
        const std::string prefix = "norm." + std::string(wavelet::component_name(c));
        std::array<features::Bounds, features::kInputCount> inputs{};
        for (std::size_t k = 0; k < features::kInputCount; ++k) {
            inputs[k] = bounds_from_string(manifest.get(prefix + ".input" + std::to_string(k)));
        }
        e.normalization[c] = features::NormalizationParams(inputs, bounds_from_string(manifest.get(prefix + ".target")));
    }
    const auto count = manifest.get_int("members", 0);
    if (count < 1) throw Error(ErrorCode::MalformedRow, "manifest lists no members");
    e.members.resize(static_cast<std::size_t>(count));
    for (std::size_t m = 0; m < e.members.size(); ++m) {
        for (std::size_t c = 0; c < kComponents; ++c) {
            const auto stem = subnet_stem(m, c);
            const auto content = slurp(dir / manifest.get("model." + stem));
            if (to_hex(fnv1a64(content)) != manifest.get("hash." + stem)) {
                throw Error(ErrorCode::MalformedRow, "hash mismatch for " + stem);
            }
            auto [spec, weights] = nnet::model_from_string(content);
            if (c == 0) {
                e.members[m].spec = spec;
            } else if (!(spec == e.members[m].spec)) {
                throw Error(ErrorCode::MalformedRow, "member " + std::to_string(m) + " mixes network specs");
            }
            e.members[m].components[c].weights = std::move(weights);
        }
    }
    return e;
}

void write_forecast_csv(std::ostream& out, std::span<const dataio::HourStamp> stamps,
                        std::span<const double> forecast, const MemberMatrix* members) {
    if (stamps.size() != forecast.size() || (members && members->hours() != forecast.size())) {
        throw Error(ErrorCode::LengthMismatch, "forecast rows are not aligned");
    }
    out << "timestamp,forecast_mw";
    if (members) {
        for (std::size_t j = 0; j < members->members(); ++j) out << ",member_" << (j + 1);
    }
    out << '\n';
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        out << dataio::format_timestamp(stamps[i]) << ',' << text::format_double(forecast[i]);
        if (members) {
            for (std::size_t j = 0; j < members->members(); ++j) out << ',' << text::format_double(members->at(i, j));
        }
        out << '\n';
    }
}

}  // namespace enff::ensemble
