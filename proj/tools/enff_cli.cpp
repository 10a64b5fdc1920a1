// enff: command-line driver for the forecasting toolkit.
//
//   enff synth    --config run.conf [--force]
//   enff analyze  --config run.conf
//   enff train    --config run.conf --seed 7
//   enff forecast --config run.conf [--day 2009-12-25 ...]
//   enff evaluate --config run.conf [--day ...]
//
// The config grammar is documented in docs/config.md.

#include "enff/benchmarks.hpp"
#include "enff/config.hpp"
#include "enff/dataio.hpp"
#include "enff/ensemble.hpp"
#include "enff/error.hpp"
#include "enff/eval.hpp"
#include "enff/features.hpp"
#include "enff/random.hpp"
#include "enff/text.hpp"
#include "enff/wavelet.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace enff;

namespace {

// Seed streams split off the master seed.
constexpr std::uint64_t kEnsembleStream = 100;
constexpr std::uint64_t kBpnnStream = 200;

struct RunConfig {
    std::optional<fs::path> load_csv;
    std::optional<fs::path> holiday_csv;
    std::optional<dataio::SynthParams> synth;

    std::optional<dataio::DateRange> train;
    std::optional<dataio::DateRange> validation;
    std::vector<dataio::Date> test_days;
    bool test_days_are_holidays = false;

    ensemble::EnsembleConfig ensemble;
    nnet::NetworkSpec bpnn_spec{nnet::Kind::FNN, features::kInputCount, 12, 1};
    trainer::BackpropConfig bpnn;

    std::optional<benchmarks::ArimaOrder> arima_order;  // nullopt: select by AIC
    benchmarks::OrderSearch arima_search;
    std::size_t arima_search_window = 2016;
    bool arima_refit_per_day = false;

    std::size_t max_lag = 336;
    std::optional<fs::path> reference_csv;
    fs::path out_dir = "out";
    std::optional<std::uint64_t> seed;
};

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool force = false;
    bool refit_per_day = false;
    std::vector<std::string> days;
};

dataio::DateRange parse_range(const std::string& key, const std::string& value) {
    const auto dots = value.find("..");
    if (dots == std::string::npos) {
        throw Error(ErrorCode::InvalidConfig, "key '" + key + "' must look like YYYY-MM-DD..YYYY-MM-DD");
    }
    dataio::DateRange r{dataio::parse_date(text::trim(value.substr(0, dots))),
                        dataio::parse_date(text::trim(value.substr(dots + 2)))};
    if (r.empty()) throw Error(ErrorCode::InvalidConfig, "key '" + key + "' has an empty range");
    return r;
}

fs::path resolve(const fs::path& base, const std::string& value) {
    fs::path p(value);
    return p.is_absolute() ? p : base / p;
}

std::size_t get_size(const KeyValueFile& kv, std::string_view key, std::size_t fallback) {
    const auto v = kv.get_int(key, static_cast<long long>(fallback));
    if (v < 0) throw Error(ErrorCode::InvalidConfig, "key '" + std::string(key) + "' must be >= 0");
    return static_cast<std::size_t>(v);
}

std::vector<ensemble::MemberKind> parse_members(const std::vector<std::string>& items) {
    std::vector<ensemble::MemberKind> out;
    for (const auto& item : items) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorCode::InvalidConfig, "ensemble.members entries look like 'fnn:12'");
        }
        std::string kind(text::trim(std::string_view(item).substr(0, colon)));
        std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return std::tolower(c); });
        const auto hidden = text::parse_int(text::trim(std::string_view(item).substr(colon + 1)));
        if (!hidden || *hidden < 1) throw Error(ErrorCode::InvalidConfig, "bad hidden size in '" + item + "'");
        nnet::Kind k = kind == "fnn" ? nnet::Kind::FNN
                       : kind == "elman" ? nnet::Kind::Elman
                       : kind == "rbf" ? nnet::Kind::RBF
                                       : nnet::parse_kind(kind);
        out.push_back({k, static_cast<std::size_t>(*hidden)});
    }
    return out;
}

RunConfig load_config(const Flags& flags) {
    RunConfig rc;
    KeyValueFile kv;
    fs::path base = fs::current_path();
    if (!flags.config.empty()) {
        kv = KeyValueFile::read(flags.config);
        base = fs::absolute(flags.config).parent_path();
    }

    const bool has_paths = kv.has("data.load_csv") || kv.has("data.holiday_csv");
    bool has_synth = false;
    for (const auto& [k, v] : kv.entries()) {
        if (k.starts_with("synth.")) has_synth = true;
    }
    if (has_paths && has_synth) {
        throw Error(ErrorCode::InvalidConfig, "give either data.* paths or synth.* parameters, not both");
    }
    if (has_paths) {
        rc.load_csv = resolve(base, kv.get("data.load_csv"));
        if (auto h = kv.find("data.holiday_csv")) rc.holiday_csv = resolve(base, *h);
    } else {
        dataio::SynthParams sp;
        sp.years = static_cast<int>(kv.get_int("synth.years", sp.years));
        sp.start_year = static_cast<int>(kv.get_int("synth.start_year", sp.start_year));
        sp.holiday_effect = kv.get_double("synth.holiday_effect", sp.holiday_effect);
        sp.base_load_mw = kv.get_double("synth.base_load_mw", sp.base_load_mw);
        sp.noise_fraction = kv.get_double("synth.noise_fraction", sp.noise_fraction);
        if (kv.has("synth.seed")) {
            sp.seed = static_cast<std::uint64_t>(kv.get_int("synth.seed", 0));
        } else if (flags.seed || kv.has("seed")) {
            sp.seed = flags.seed ? *flags.seed : static_cast<std::uint64_t>(kv.get_int("seed", 0));
        }
        rc.synth = sp;
    }

    if (auto v = kv.find("split.train")) rc.train = parse_range("split.train", *v);
    if (auto v = kv.find("split.validation")) rc.validation = parse_range("split.validation", *v);
    for (const auto& item : kv.get_list("split.test_days")) {
        if (item == "holidays") {
            rc.test_days_are_holidays = true;
        } else {
            rc.test_days.push_back(dataio::parse_date(item));
        }
    }

    auto& ec = rc.ensemble;
    if (kv.has("ensemble.members")) ec.kinds = parse_members(kv.get_list("ensemble.members"));
    ec.instances_per_kind = get_size(kv, "ensemble.instances_per_kind", ec.instances_per_kind);
    if (kv.has("ensemble.alpha_grid")) {
        ec.alpha_grid.clear();
        for (const auto& a : kv.get_list("ensemble.alpha_grid")) {
            const auto v = text::parse_double(a);
            if (!v) throw Error(ErrorCode::InvalidConfig, "bad value in ensemble.alpha_grid");
            ec.alpha_grid.push_back(*v);
        }
    }
    if (kv.has("ensemble.alpha")) ec.alpha_override = kv.get_double("ensemble.alpha", 0.0);
    if (auto v = kv.find("ensemble.wavelet")) ec.wavelet = wavelet::parse_family(*v);
    if (auto v = kv.find("ensemble.lag_mode")) ec.lag_mode = ensemble::parse_lag_mode(*v);
    ec.history_window = get_size(kv, "ensemble.history_window", ec.history_window);
    ec.threads = get_size(kv, "ensemble.threads", ec.threads);

    auto& sw = ec.swarm;
    sw.swarm_size = get_size(kv, "swarm.size", sw.swarm_size);
    sw.max_iterations = static_cast<int>(kv.get_int("swarm.max_iterations", sw.max_iterations));
    sw.target_error = kv.get_double("swarm.target_error", sw.target_error);
    sw.inertia = kv.get_double("swarm.inertia", sw.inertia);
    sw.cognitive = kv.get_double("swarm.cognitive", sw.cognitive);
    sw.social = kv.get_double("swarm.social", sw.social);
    sw.v_max_fraction = kv.get_double("swarm.v_max_fraction", sw.v_max_fraction);
    const double init = kv.get_double("swarm.init_range", sw.init_hi);
    sw.init_lo = -init;
    sw.init_hi = init;
    sw.threads = get_size(kv, "swarm.threads", sw.threads);
    sw.validate();

    rc.bpnn_spec.hidden_units = get_size(kv, "bpnn.hidden", rc.bpnn_spec.hidden_units);
    rc.bpnn.learning_rate = kv.get_double("bpnn.learning_rate", 0.5);
    rc.bpnn.epochs = static_cast<int>(kv.get_int("bpnn.epochs", 2000));
    rc.bpnn.init_range = kv.get_double("bpnn.init_range", rc.bpnn.init_range);

    const auto order = kv.get_or("arima.order", "2,1,2");
    if (order != "auto") {
        const auto parts = text::split(order);
        const auto p = parts.size() == 3 ? text::parse_int(text::trim(parts[0])) : std::nullopt;
        const auto d = parts.size() == 3 ? text::parse_int(text::trim(parts[1])) : std::nullopt;
        const auto q = parts.size() == 3 ? text::parse_int(text::trim(parts[2])) : std::nullopt;
        if (!p || !d || !q) throw Error(ErrorCode::InvalidConfig, "arima.order must be 'p,d,q' or 'auto'");
        rc.arima_order = benchmarks::ArimaOrder{static_cast<int>(*p), static_cast<int>(*d), static_cast<int>(*q)};
        rc.arima_order->validate();
    }
    rc.arima_search.p_max = static_cast<int>(kv.get_int("arima.p_max", rc.arima_search.p_max));
    rc.arima_search.q_max = static_cast<int>(kv.get_int("arima.q_max", rc.arima_search.q_max));
    rc.arima_search.max_css_iterations =
        static_cast<int>(kv.get_int("arima.max_iterations", rc.arima_search.max_css_iterations));
    rc.arima_search_window = get_size(kv, "arima.search_window", rc.arima_search_window);
    rc.arima_refit_per_day = kv.get_bool("arima.refit_per_day", false) || flags.refit_per_day;

    rc.max_lag = get_size(kv, "analyze.max_lag", rc.max_lag);
    if (auto v = kv.find("evaluate.reference_csv")) rc.reference_csv = resolve(base, *v);

    if (!flags.out.empty()) {
        rc.out_dir = flags.out;
    } else if (auto v = kv.find("output.dir")) {
        rc.out_dir = resolve(base, *v);
    }
    if (flags.seed) {
        rc.seed = flags.seed;
    } else if (kv.has("seed")) {
        rc.seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));
    }
    return rc;
}

struct Data {
    dataio::LoadSeries series;
    std::vector<dataio::Holiday> holidays;
};

Data load_data(const RunConfig& rc) {
    if (rc.synth) {
        auto s = dataio::synthesize(*rc.synth);
        return {std::move(s.series), std::move(s.holidays)};
    }
    if (!fs::exists(*rc.load_csv)) throw Error(ErrorCode::Io, "load file not found: " + rc.load_csv->string());
    auto series = dataio::read_csv(*rc.load_csv);
    std::vector<dataio::Holiday> holidays;
    if (rc.holiday_csv) {
        if (!fs::exists(*rc.holiday_csv)) {
            throw Error(ErrorCode::Io, "holiday file not found: " + rc.holiday_csv->string());
        }
        holidays = dataio::read_holidays(*rc.holiday_csv);
    }
    return {std::move(series), std::move(holidays)};
}

dataio::SplitSpec split_of(const RunConfig& rc) {
    if (!rc.train) throw Error(ErrorCode::InvalidConfig, "missing key 'split.train'");
    return {*rc.train, rc.validation, {}};
}

std::vector<dataio::Date> resolve_days(const RunConfig& rc, const Flags& flags, const dataio::TaggedSeries& tagged,
                                       std::span<const dataio::Holiday> holidays) {
    std::vector<dataio::Date> days;
    if (!flags.days.empty()) {
        for (const auto& d : flags.days) days.push_back(dataio::parse_date(d));
        return days;
    }
    days = rc.test_days;
    if (rc.test_days_are_holidays) {
        for (const auto& h : holidays) {
            if (rc.train && rc.train->contains(h.date)) continue;
            if (rc.validation && rc.validation->contains(h.date)) continue;
            if (!tagged.covers_day(h.date)) continue;
            if (tagged.day_start(h.date) < features::kHistoryHours) continue;
            days.push_back(h.date);
        }
    }
    std::sort(days.begin(), days.end());
    days.erase(std::unique(days.begin(), days.end()), days.end());
    if (days.empty()) throw Error(ErrorCode::InvalidConfig, "no test days (set split.test_days or pass --day)");
    return days;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    return in;
}

void write_trace(const fs::path& path, std::span<const double> trace, const char* header) {
    auto out = open_out(path);
    out << header << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << text::format_double(trace[i]) << '\n';
}

fs::path model_dir(const RunConfig& rc) { return rc.out_dir / "model"; }

int cmd_synth(const RunConfig& rc, const Flags& flags) {
    if (!rc.synth) throw Error(ErrorCode::InvalidConfig, "synth needs synth.* parameters, not data.* paths");
    const auto load = rc.out_dir / "load.csv";
    const auto hol = rc.out_dir / "holidays.csv";
    for (const auto& p : {load, hol}) {
        if (fs::exists(p) && !flags.force) {
            throw Error(ErrorCode::Io, p.string() + " exists; pass --force to overwrite");
        }
    }
    const auto data = dataio::synthesize(*rc.synth);
    {
        auto out = open_out(load);
        dataio::write_csv(out, data.series);
    }
    {
        auto out = open_out(hol);
        dataio::write_holidays(out, data.holidays);
    }
    std::cout << "wrote " << data.series.size() << " hours to " << load.string() << " and " << data.holidays.size()
              << " holidays to " << hol.string() << '\n';
    return 0;
}

int cmd_analyze(const RunConfig& rc) {
    const auto data = load_data(rc);
    const auto tagged = dataio::tag_calendar(data.series, data.holidays);
    const auto loads = data.series.loads();

    const auto acf = features::autocorrelation(loads, std::min(rc.max_lag, loads.size() - 1));
    {
        auto out = open_out(rc.out_dir / "acf.csv");
        out << "lag,acf\n";
        for (std::size_t k = 0; k < acf.size(); ++k) out << k << ',' << text::format_double(acf[k]) << '\n';
    }

    const auto rows = features::build_all_features(tagged);
    static constexpr const char* kNames[features::kInputCount] = {
        "lag_prev_hour", "lag_prev_day", "lag_prev_week", "day_of_week",
        "day_type",      "hour_of_day",  "dew_point_f",   "dry_bulb_f"};
    std::vector<double> target(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) target[i] = rows[i].target;
    {
        auto out = open_out(rc.out_dir / "correlation.csv");
        out << "feature,correlation\n";
        for (std::size_t k = 0; k < features::kInputCount; ++k) {
            std::vector<double> col(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i].inputs()[k];
            out << kNames[k] << ',';
            try {
                out << text::format_double(features::correlation(col, target)) << '\n';
            } catch (const Error& e) {
                if (e.code() != ErrorCode::DegenerateVariance) throw;
                out << "nan\n";
            }
        }
    }

    const auto dec = wavelet::decompose3(loads, wavelet::FilterPair::of(rc.ensemble.wavelet));
    std::vector<dataio::HourStamp> stamps;
    for (const auto& r : data.series.records()) stamps.push_back(r.timestamp);
    {
        auto out = open_out(rc.out_dir / "components.csv");
        wavelet::write_components_csv(out, stamps, dec);
    }
    std::cout << "wrote acf.csv, correlation.csv, components.csv to " << rc.out_dir.string() << '\n';
    return 0;
}

int cmd_train(RunConfig rc) {
    if (!rc.seed) throw Error(ErrorCode::InvalidConfig, "train needs a seed (--seed or 'seed = N')");
    const auto data = load_data(rc);
    const auto tagged = dataio::tag_calendar(data.series, data.holidays);
    const auto split = split_of(rc);
    const auto partition = dataio::split(tagged, split);

    rc.ensemble.seed = derive_seed(*rc.seed, kEnsembleStream);
    std::cout << "training ensemble (" << rc.ensemble.member_specs().size() << " members x "
              << wavelet::kComponentCount << " components)\n";
    const auto trained = ensemble::train_ensemble(rc.ensemble, tagged, split);
    ensemble::save(trained, model_dir(rc) / "ensemble");
    std::cout << "alpha = " << text::format_double(trained.alpha) << '\n';

    rc.bpnn.seed = derive_seed(*rc.seed, kBpnnStream);
    const auto bpnn = benchmarks::train_bpnn_baseline(tagged, split, rc.bpnn_spec, rc.bpnn);
    {
        auto out = open_out(model_dir(rc) / "bpnn.csv");
        benchmarks::write_bpnn(out, bpnn);
    }
    write_trace(model_dir(rc) / "bpnn_trace.csv", bpnn.trace, "epoch,mse");

    const auto loads = data.series.loads();
    const std::vector<double> train_loads(loads.begin() + static_cast<long>(partition.train.front()),
                                          loads.begin() + static_cast<long>(partition.train.back()) + 1);
    auto order = rc.arima_order;
    if (!order) {
        const std::size_t n = std::min(rc.arima_search_window, train_loads.size());
        const std::span<const double> tail(train_loads.data() + train_loads.size() - n, n);
        order = benchmarks::select_order(tail, rc.arima_search);
        std::cout << "selected ARIMA(" << order->p << ',' << order->d << ',' << order->q << ")\n";
    }
    const auto arima = benchmarks::fit_arima(train_loads, *order, rc.arima_search.max_css_iterations);
    {
        auto out = open_out(model_dir(rc) / "arima.csv");
        benchmarks::write_arima(out, arima);
    }
    write_trace(model_dir(rc) / "arima_trace.csv", arima.css_trace, "iteration,css");
    std::cout << "models written to " << model_dir(rc).string() << '\n';
    return 0;
}

struct DayForecasts {
    dataio::Date day;
    std::vector<dataio::HourStamp> stamps;
    std::vector<double> actual;
    ensemble::EnsembleForecast enff;
    std::vector<double> bpnn;
    std::vector<double> arima;
};

std::vector<DayForecasts> run_forecasts(const RunConfig& rc, const Flags& flags, const Data& data) {
    const auto tagged = dataio::tag_calendar(data.series, data.holidays);
    const auto days = resolve_days(rc, flags, tagged, data.holidays);
    const auto trained = ensemble::load(model_dir(rc) / "ensemble");
    auto bpnn_in = open_in(model_dir(rc) / "bpnn.csv");
    const auto bpnn = benchmarks::read_bpnn(bpnn_in);
    auto arima_in = open_in(model_dir(rc) / "arima.csv");
    const auto arima = benchmarks::read_arima(arima_in);
    const auto loads = data.series.loads();

    std::vector<DayForecasts> out;
    for (const auto day : days) {
        DayForecasts f;
        f.day = day;
        const std::size_t start = tagged.day_start(day);
        if (start < features::kHistoryHours) {
            throw Error(ErrorCode::InsufficientHistory,
                        "day " + dataio::format_date(day) + " has less than one week of history");
        }
        for (std::size_t h = 0; h < 24; ++h) {
            f.stamps.push_back(tagged.record(start + h).timestamp);
            f.actual.push_back(loads[start + h]);
        }
        f.enff = ensemble::ensemble_forecast(trained, tagged, day);
        f.bpnn = benchmarks::forecast_bpnn(bpnn, tagged, day);
        const std::span<const double> history(loads.data(), start);
        if (rc.arima_refit_per_day) {
            const std::size_t span = rc.train ? static_cast<std::size_t>(rc.train->days().size()) * 24 : start;
            const std::size_t n = std::min(span, start);
            const auto refit = benchmarks::fit_arima(history.subspan(start - n), arima.order,
                                                     rc.arima_search.max_css_iterations);
            f.arima = benchmarks::forecast_arima(refit, 24);
        } else {
            f.arima = benchmarks::forecast_arima(benchmarks::condition_on(arima, history), 24);
        }
        out.push_back(std::move(f));
    }
    return out;
}

int cmd_forecast(const RunConfig& rc, const Flags& flags) {
    const auto data = load_data(rc);
    const auto results = run_forecasts(rc, flags, data);
    const auto dir = rc.out_dir / "forecasts";
    for (const auto& f : results) {
        const auto stem = dataio::format_date(f.day);
        {
            auto out = open_out(dir / (stem + "_ENFF.csv"));
            ensemble::write_forecast_csv(out, f.stamps, f.enff.trimmed, &f.enff.members);
        }
        {
            auto out = open_out(dir / (stem + "_BPNN.csv"));
            ensemble::write_forecast_csv(out, f.stamps, f.bpnn);
        }
        {
            auto out = open_out(dir / (stem + "_ARIMA.csv"));
            ensemble::write_forecast_csv(out, f.stamps, f.arima);
        }
    }
    std::cout << "wrote forecasts for " << results.size() << " day(s) to " << dir.string() << '\n';
    return 0;
}

int cmd_evaluate(const RunConfig& rc, const Flags& flags) {
    const auto data = load_data(rc);
    const auto forecasts = run_forecasts(rc, flags, data);
    std::vector<eval::DayForecastResult> results;
    std::vector<eval::ScatterRow> scatter;
    for (const auto& f : forecasts) {
        const std::vector<eval::ModelForecast> models{
            {"ENFF", f.enff.trimmed}, {"BPNN", f.bpnn}, {"ARIMA", f.arima}};
        for (auto& r : eval::evaluate_day(f.actual, models, f.day)) {
            const auto rows = eval::scatter_data(r.actual, r.predicted, r.model);
            scatter.insert(scatter.end(), rows.begin(), rows.end());
            auto out = open_out(rc.out_dir / ("series_" + dataio::format_date(f.day) + "_" + r.model + ".csv"));
            eval::write_series_csv(out, r);
            results.push_back(std::move(r));
        }
    }
    const auto report = eval::comparison_report(results);
    std::optional<eval::ReferenceTable> reference;
    if (rc.reference_csv) {
        auto in = open_in(*rc.reference_csv);
        reference = eval::read_reference_csv(in);
    }
    {
        auto out = open_out(rc.out_dir / "report.txt");
        eval::write_report_text(out, report, reference ? &*reference : nullptr);
    }
    {
        auto out = open_out(rc.out_dir / "report.csv");
        eval::write_report_csv(out, report);
    }
    {
        auto out = open_out(rc.out_dir / "scatter.csv");
        eval::write_scatter_csv(out, scatter);
    }
    eval::write_report_text(std::cout, report, reference ? &*reference : nullptr);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ensemble short-term load forecasting"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags flags;
    app.add_option("--config", flags.config, "Run configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", flags.seed, "Master seed");
    app.add_option("--out", flags.out, "Output directory (overrides output.dir)");
    app.add_flag("--force", flags.force, "Overwrite existing synthetic data files");

    auto* synth = app.add_subcommand("synth", "Write a synthetic load series and holiday calendar");
    auto* analyze = app.add_subcommand("analyze", "Autocorrelation, input correlation and wavelet components");
    auto* train = app.add_subcommand("train", "Train the ensemble and the BPNN and ARIMA benchmarks");
    auto* forecast = app.add_subcommand("forecast", "24-hour forecasts for each test day and model");
    auto* evaluate = app.add_subcommand("evaluate", "MAPE comparison report over the test days");
    for (auto* sub : {forecast, evaluate}) {
        sub->add_option("--day", flags.days, "Test day YYYY-MM-DD (repeatable; default split.test_days)");
        sub->add_flag("--refit-per-day", flags.refit_per_day, "Refit ARIMA on the history before each day");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const auto rc = load_config(flags);
        if (*synth) return cmd_synth(rc, flags);
        if (*analyze) return cmd_analyze(rc);
        if (*train) return cmd_train(rc);
        if (*forecast) return cmd_forecast(rc, flags);
        if (*evaluate) return cmd_evaluate(rc, flags);
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
