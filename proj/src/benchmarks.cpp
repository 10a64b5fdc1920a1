#include "enff/benchmarks.hpp"

#include "enff/config.hpp"
#include "enff/error.hpp"
#include "enff/text.hpp"
#include "nelder_mead.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace enff::benchmarks {

void ArimaOrder::validate(bool require_terms) const {
    if (p < 0 || q < 0) throw Error(ErrorCode::InvalidConfig, "ARIMA p and q must be >= 0");
    if (d < 0 || d > 2) throw Error(ErrorCode::InvalidConfig, "ARIMA d must be 0, 1 or 2");
    if (require_terms && p + q < 1) throw Error(ErrorCode::InvalidConfig, "ARIMA needs p + q >= 1");
}

namespace {

// Double-double arithmetic (Dekker/Knuth error-free transforms).
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD normalize(double s, double e) {
    const double hi = s + e;
    return {hi, e - (hi - s)};
}

DD dd_add(DD x, DD y) {
    DD s = two_sum(x.hi, y.hi);
    return normalize(s.hi, s.lo + x.lo + y.lo);
}

DD dd_sub(DD x, DD y) { return dd_add(x, {-y.hi, -y.lo}); }

std::vector<double> plain_difference(std::span<const double> x) {
    std::vector<double> out;
    if (x.size() < 2) return out;
    out.reserve(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) out.push_back(x[i] - x[i - 1]);
    return out;
}

}  // namespace

Differenced difference(std::span<const double> series, int d) {
    if (d < 0 || d > 2) throw Error(ErrorCode::InvalidConfig, "differencing order must be 0, 1 or 2");
    if (series.size() <= static_cast<std::size_t>(d)) {
        throw Error(ErrorCode::SeriesTooShort, "series must be longer than the differencing order");
    }
    std::vector<DD> level(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) level[i] = {series[i], 0.0};
    Differenced out;
    out.order = d;
    for (int k = 0; k < d; ++k) {
        out.anchors_hi.push_back(level.front().hi);
        out.anchors_lo.push_back(level.front().lo);
        std::vector<DD> next(level.size() - 1);
        for (std::size_t i = 0; i + 1 < level.size(); ++i) next[i] = dd_sub(level[i + 1], level[i]);
        level = std::move(next);
    }
    out.values.reserve(level.size());
    out.low.reserve(level.size());
    for (const auto& v : level) {
        out.values.push_back(v.hi);
        out.low.push_back(v.lo);
    }
    return out;
}

std::vector<double> integrate(const Differenced& diff) {
    if (diff.low.size() != diff.values.size() || diff.anchors_hi.size() != static_cast<std::size_t>(diff.order) ||
        diff.anchors_lo.size() != diff.anchors_hi.size()) {
        throw Error(ErrorCode::LengthMismatch, "inconsistent differenced series");
    }
    std::vector<DD> level(diff.values.size());
    for (std::size_t i = 0; i < level.size(); ++i) level[i] = {diff.values[i], diff.low[i]};
    for (int k = diff.order - 1; k >= 0; --k) {
        std::vector<DD> up(level.size() + 1);
        up[0] = {diff.anchors_hi[static_cast<std::size_t>(k)], diff.anchors_lo[static_cast<std::size_t>(k)]};
        for (std::size_t i = 0; i < level.size(); ++i) up[i + 1] = dd_add(up[i], level[i]);
        level = std::move(up);
    }
    std::vector<double> out(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) out[i] = level[i].hi;
    return out;
}

bool is_stationary(std::span<const double> ar) {
    std::vector<double> a(ar.begin(), ar.end());
    for (std::size_t m = a.size(); m >= 1; --m) {
        const double k = a[m - 1];
        if (!(std::abs(k) < 1.0)) return false;
        std::vector<double> b(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i) b[i] = (a[i] + k * a[m - 2 - i]) / (1.0 - k * k);
        a = std::move(b);
    }
    return true;
}

bool is_invertible(std::span<const double> ma) {
    std::vector<double> neg(ma.size());
    for (std::size_t i = 0; i < ma.size(); ++i) neg[i] = -ma[i];
    return is_stationary(neg);
}

namespace {

struct CssState {
    double css = 0.0;
    std::vector<double> residuals;
};

// Residual recursion over the differenced series w:
// e_t = (w_t - mu) - sum_i phi_i (w_{t-i} - mu) - sum_j theta_j e_{t-j},
// with w_{t-i} = presample for t-i < 0 and e_{t-j} = 0 for t-j < 0.
CssState css_residuals(std::span<const double> w, double mu, std::span<const double> phi,
                       std::span<const double> theta, double presample, bool keep_residuals) {
    CssState st;
    std::vector<double> e(w.size());
    double sum = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
        double r = w[t] - mu;
        for (std::size_t i = 1; i <= phi.size(); ++i) {
            const double past = t >= i ? w[t - i] : presample;
            r -= phi[i - 1] * (past - mu);
        }
        for (std::size_t j = 1; j <= theta.size(); ++j) {
            if (t >= j) r -= theta[j - 1] * e[t - j];
        }
        e[t] = r;
        sum += r * r;
        if (!std::isfinite(sum)) {
            st.css = std::numeric_limits<double>::infinity();
            return st;
        }
    }
    st.css = sum;
    if (keep_residuals) st.residuals = std::move(e);
    return st;
}

double sample_mean(std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

void set_origin(ArimaModel& model, std::span<const double> series) {
    const auto& o = model.order;
    std::vector<std::vector<double>> levels{std::vector<double>(series.begin(), series.end())};
    for (int k = 0; k < o.d; ++k) levels.push_back(plain_difference(levels.back()));
    const auto& w = levels.back();
    model.level_anchors.clear();
    for (int k = 0; k < o.d; ++k) model.level_anchors.push_back(levels[static_cast<std::size_t>(k)].back());

    const auto st = css_residuals(w, model.mean, model.ar, model.ma, model.presample_mean, true);
    const std::size_t keep_p = static_cast<std::size_t>(std::max(o.p, 1));
    model.recent_values.clear();
    for (std::size_t i = w.size() - std::min(keep_p, w.size()); i < w.size(); ++i) model.recent_values.push_back(w[i]);
    model.recent_residuals.clear();
    const std::size_t keep_q = static_cast<std::size_t>(o.q);
    if (!st.residuals.empty()) {
        for (std::size_t i = w.size() - std::min(keep_q, w.size()); i < w.size(); ++i) {
            model.recent_residuals.push_back(st.residuals[i]);
        }
    } else {
        model.recent_residuals.assign(std::min(keep_q, w.size()), 0.0);
    }
}

}  // namespace

ArimaModel fit_arima(std::span<const double> series, const ArimaOrder& order, int max_css_iterations) {
    order.validate();
    const std::size_t needed = 10 * static_cast<std::size_t>(order.p + order.q + 1);
    if (series.size() < needed) {
        throw Error(ErrorCode::SeriesTooShort, "ARIMA fit needs at least " + std::to_string(needed) + " samples");
    }
    std::vector<double> w(series.begin(), series.end());
    for (int k = 0; k < order.d; ++k) w = plain_difference(w);
    ArimaModel model;
    model.order = order;
    model.observations = w.size();
    model.presample_mean = sample_mean(w);

    const std::size_t p = static_cast<std::size_t>(order.p);
    const std::size_t q = static_cast<std::size_t>(order.q);
    auto unpack = [&](const std::vector<double>& x, std::vector<double>& phi, std::vector<double>& theta) {
        phi.assign(x.begin() + 1, x.begin() + 1 + static_cast<long>(p));
        theta.assign(x.begin() + 1 + static_cast<long>(p), x.end());
    };
    std::vector<double> phi, theta;
    auto objective = [&](const std::vector<double>& x) {
        std::vector<double> ph, th;
        unpack(x, ph, th);
        return css_residuals(w, x[0], ph, th, model.presample_mean, false).css;
    };

    std::vector<double> x0(1 + p + q, 0.0);
    x0[0] = model.presample_mean;
    std::vector<double> steps(1 + p + q, 0.1);
    const double sd = sample_sd(w);
    steps[0] = sd > 0.0 ? 0.1 * sd : 1e-3 * std::max(1.0, std::abs(model.presample_mean));

    const auto nm = detail::nelder_mead(objective, x0, steps, max_css_iterations);
    unpack(nm.x, phi, theta);
    model.mean = nm.x[0];
    model.ar = phi;
    model.ma = theta;
    model.intercept = model.mean * (1.0 - std::accumulate(phi.begin(), phi.end(), 0.0));
    model.css = nm.value;
    model.css_trace = nm.trace;
    model.converged = nm.converged;
    model.residual_variance = std::isfinite(nm.value) ? nm.value / static_cast<double>(w.size()) : 0.0;
    model.stationary = is_stationary(model.ar);
    model.invertible = is_invertible(model.ma);
    set_origin(model, series);
    return model;
}

ArimaModel condition_on(const ArimaModel& model, std::span<const double> history) {
    if (history.size() <= static_cast<std::size_t>(model.order.d)) {
        throw Error(ErrorCode::SeriesTooShort, "history shorter than the differencing order");
    }
    ArimaModel out = model;
    set_origin(out, history);
    return out;
}

std::vector<double> forecast_arima(const ArimaModel& model, int horizon) {
    if (horizon < 1) throw Error(ErrorCode::InvalidConfig, "forecast horizon must be >= 1");
    const auto& o = model.order;
    if (model.ar.size() != static_cast<std::size_t>(o.p) || model.ma.size() != static_cast<std::size_t>(o.q) ||
        model.level_anchors.size() != static_cast<std::size_t>(o.d)) {
        throw Error(ErrorCode::LengthMismatch, "ARIMA model state does not match its order");
    }
    std::vector<double> w(model.recent_values);
    std::vector<double> e(model.recent_residuals);
    const std::size_t w0 = w.size();
    for (int h = 0; h < horizon; ++h) {
        double y = model.intercept;
        for (std::size_t i = 1; i <= model.ar.size(); ++i) {
            const double past = w.size() >= i ? w[w.size() - i] : model.presample_mean;
            y += model.ar[i - 1] * past;
        }
        for (std::size_t j = 1; j <= model.ma.size(); ++j) {
            if (e.size() >= j) y += model.ma[j - 1] * e[e.size() - j];
        }
        w.push_back(y);
        e.push_back(0.0);
    }
    std::vector<double> out(w.begin() + static_cast<long>(w0), w.end());
    // Integrate from the innermost level outward.
    for (int k = o.d - 1; k >= 0; --k) {
        double level = model.level_anchors[static_cast<std::size_t>(k)];
        for (auto& v : out) {
            level += v;
            v = level;
        }
    }
    return out;
}

double arima_aic(const ArimaModel& model) {
    const double n = static_cast<double>(model.observations);
    const double k = static_cast<double>(model.order.p + model.order.q + 1);
    if (!(model.css > 0.0)) return -std::numeric_limits<double>::infinity();
    return n * std::log(model.css / n) + 2.0 * k;
}

ArimaOrder select_order(std::span<const double> series, const OrderSearch& search) {
    if (search.p_max < 0 || search.q_max < 0 || search.d_grid.empty()) {
        throw Error(ErrorCode::InvalidConfig, "order search grid is empty");
    }
    ArimaOrder best{};
    double best_aic = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int d : search.d_grid) {
        for (int p = 0; p <= search.p_max; ++p) {
            for (int q = 0; q <= search.q_max; ++q) {
                if (p + q < 1) continue;
                const ArimaOrder cand{p, d, q};
                const auto model = fit_arima(series, cand, search.max_css_iterations);
                if (!model.stationary || !model.invertible) continue;
                const double aic = arima_aic(model);
                if (!found || aic < best_aic) {
                    best = cand;
                    best_aic = aic;
                    found = true;
                }
            }
        }
    }
    if (!found) throw Error(ErrorCode::InvalidConfig, "order search grid has no admissible candidate");
    return best;
}

void write_arima(std::ostream& out, const ArimaModel& m) {
    out << "name,value\n";
    out << "p," << m.order.p << "\nd," << m.order.d << "\nq," << m.order.q << '\n';
    out << "mean," << text::format_double(m.mean) << '\n';
    out << "intercept," << text::format_double(m.intercept) << '\n';
    out << "presample_mean," << text::format_double(m.presample_mean) << '\n';
    for (std::size_t i = 0; i < m.ar.size(); ++i) out << "ar" << (i + 1) << ',' << text::format_double(m.ar[i]) << '\n';
    for (std::size_t i = 0; i < m.ma.size(); ++i) out << "ma" << (i + 1) << ',' << text::format_double(m.ma[i]) << '\n';
    out << "residual_variance," << text::format_double(m.residual_variance) << '\n';
    out << "css," << text::format_double(m.css) << '\n';
    out << "observations," << m.observations << '\n';
    out << "converged," << (m.converged ? 1 : 0) << '\n';
    out << "stationary," << (m.stationary ? 1 : 0) << '\n';
    out << "invertible," << (m.invertible ? 1 : 0) << '\n';
}

ArimaModel read_arima(std::istream& in) {
    std::string line;
    std::getline(in, line);
    if (text::trim(line) != "name,value") throw Error(ErrorCode::MalformedRow, "ARIMA file needs 'name,value' header");
    KeyValueFile kv;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::MalformedRow, "bad ARIMA row '" + line + "'");
        kv.set(std::string(text::trim(line.substr(0, comma))), std::string(text::trim(line.substr(comma + 1))));
    }
    ArimaModel m;
    m.order = {static_cast<int>(kv.get_int("p", 0)), static_cast<int>(kv.get_int("d", 0)),
               static_cast<int>(kv.get_int("q", 0))};
    m.order.validate(false);
    m.mean = kv.get_double("mean", 0.0);
    m.intercept = kv.get_double("intercept", 0.0);
    m.presample_mean = kv.get_double("presample_mean", 0.0);
    for (int i = 1; i <= m.order.p; ++i) m.ar.push_back(kv.get_double("ar" + std::to_string(i), 0.0));
    for (int i = 1; i <= m.order.q; ++i) m.ma.push_back(kv.get_double("ma" + std::to_string(i), 0.0));
    m.residual_variance = kv.get_double("residual_variance", 0.0);
    m.css = kv.get_double("css", 0.0);
    m.observations = static_cast<std::size_t>(kv.get_int("observations", 0));
    m.converged = kv.get_bool("converged", true);
    m.stationary = kv.get_bool("stationary", true);
    m.invertible = kv.get_bool("invertible", true);
    return m;
}

namespace {

struct TrainRange {
    std::size_t first;
    std::size_t last;
};

TrainRange train_range(const dataio::TaggedSeries& series, const dataio::SplitSpec& split) {
    const auto partition = dataio::split(series, split);
    const TrainRange r{partition.train.front(), partition.train.back()};
    if (r.last - r.first + 1 < 2 * features::kHistoryHours) {
        throw Error(ErrorCode::InsufficientData, "training range must span at least two weeks");
    }
    return r;
}

}  // namespace

BpnnModel train_bpnn_baseline(const dataio::TaggedSeries& series, const dataio::SplitSpec& split,
                              const nnet::NetworkSpec& spec, const trainer::BackpropConfig& config) {
    if (spec.kind != nnet::Kind::FNN) throw Error(ErrorCode::UnsupportedKind, "BPNN baseline is an FNN");
    if (spec.input_dim != features::kInputCount) {
        throw Error(ErrorCode::DimensionMismatch, "BPNN input_dim must match the feature count");
    }
    const auto range = train_range(series, split);
    std::vector<features::FeatureVector> rows;
    std::vector<dataio::HourStamp> stamps;
    for (std::size_t i = range.first + features::kHistoryHours; i <= range.last; ++i) {
        rows.push_back(features::build_features(series, i));
        stamps.push_back(series.record(i).timestamp);
    }
    BpnnModel model;
    model.spec = spec;
    model.normalization = features::NormalizationParams::fit(rows);
    const auto data = features::make_dataset(rows, stamps, model.normalization);
    auto result = trainer::train_backprop(spec, data, config);
    model.weights = std::move(result.weights);
    model.trace = std::move(result.trace);
    return model;
}

std::vector<double> forecast_bpnn(const BpnnModel& model, const dataio::TaggedSeries& series, dataio::Date day) {
    const std::size_t start = series.day_start(day);
    if (start < features::kHistoryHours) {
        throw Error(ErrorCode::InsufficientHistory,
                    "day " + dataio::format_date(day) + " has less than one week of history");
    }
    std::vector<double> out(24);
    for (std::size_t t = 0; t < 24; ++t) {
        auto f = features::build_features(series, start + t);
        if (t > 0) f.lag_prev_hour = out[t - 1];
        const auto x = model.normalization.apply(f);
        out[t] = model.normalization.invert_target(nnet::fnn_forward(model.spec, model.weights, x));
    }
    return out;
}

void write_bpnn(std::ostream& out, const BpnnModel& model) {
    out << nnet::model_to_string(model.spec, model.weights) << '\n';
    const auto& b = model.normalization.input_bounds();
    for (std::size_t k = 0; k < features::kInputCount; ++k) {
        out << "input" << k << ',' << text::format_double(b[k].min) << ',' << text::format_double(b[k].max) << '\n';
    }
    const auto& t = model.normalization.target_bounds();
    out << "target," << text::format_double(t.min) << ',' << text::format_double(t.max) << '\n';
}

BpnnModel read_bpnn(std::istream& in) {
    BpnnModel model;
    auto [spec, weights] = nnet::read_model(in);
    model.spec = spec;
    model.weights = std::move(weights);
    std::array<features::Bounds, features::kInputCount> inputs{};
    features::Bounds target{};
    std::string line;
    std::size_t seen = 0;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        const auto parts = text::split(text::trim(line));
        if (parts.size() != 3) throw Error(ErrorCode::MalformedRow, "bad BPNN bounds row");
        const auto lo = text::parse_double(parts[1]);
        const auto hi = text::parse_double(parts[2]);
        if (!lo || !hi) throw Error(ErrorCode::MalformedRow, "bad BPNN bounds values");
        if (parts[0] == "target") {
            target = {*lo, *hi};
        } else if (parts[0].starts_with("input")) {
            const auto k = text::parse_int(parts[0].substr(5));
            if (!k || *k < 0 || *k >= static_cast<long long>(features::kInputCount)) {
                throw Error(ErrorCode::MalformedRow, "bad BPNN input index");
            }
            inputs[static_cast<std::size_t>(*k)] = {*lo, *hi};
        }
        ++seen;
    }
    if (seen != features::kInputCount + 1) throw Error(ErrorCode::MalformedRow, "BPNN file lacks bounds rows");
    model.normalization = features::NormalizationParams(inputs, target);
    return model;
}

}  // namespace enff::benchmarks
