#include "enff/eval.hpp"

#include "enff/error.hpp"
#include "enff/text.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace enff::eval {

std::vector<double> absolute_percentage_errors(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size() || actual.empty()) {
        throw Error(ErrorCode::LengthMismatch, "MAPE needs equal, non-empty actual and predicted series (got " +
                                                   std::to_string(actual.size()) + " and " +
                                                   std::to_string(predicted.size()) + ")");
    }
    std::vector<double> out(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) throw Error(ErrorCode::ZeroActual, "zero actual at position " + std::to_string(i));
        out[i] = 100.0 * std::abs(actual[i] - predicted[i]) / std::abs(actual[i]);
    }
    return out;
}

double mape(std::span<const double> actual, std::span<const double> predicted) {
    const auto ape = absolute_percentage_errors(actual, predicted);
    double sum = 0.0;
    for (double v : ape) sum += v;
    return sum / static_cast<double>(ape.size());
}

std::vector<DayForecastResult> evaluate_day(std::span<const double> actual, std::span<const ModelForecast> forecasts,
                                            dataio::Date date) {
    if (actual.size() != 24) throw Error(ErrorCode::LengthMismatch, "a forecast day has 24 actual values");
    std::vector<DayForecastResult> out;
    out.reserve(forecasts.size());
    for (const auto& f : forecasts) {
        if (f.predicted.size() != 24) {
            throw Error(ErrorCode::LengthMismatch, "model " + f.model + " forecast for " + dataio::format_date(date) +
                                                       " has " + std::to_string(f.predicted.size()) + " values");
        }
        DayForecastResult r;
        r.date = date;
        r.model = f.model;
        r.actual.assign(actual.begin(), actual.end());
        r.predicted = f.predicted;
        r.ape = absolute_percentage_errors(r.actual, r.predicted);
        double sum = 0.0;
        for (double v : r.ape) sum += v;
        r.mape = sum / 24.0;
        out.push_back(std::move(r));
    }
    return out;
}

std::optional<std::size_t> ComparisonReport::model_index(std::string_view name) const {
    for (std::size_t i = 0; i < models.size(); ++i) {
        if (models[i] == name) return i;
    }
    return std::nullopt;
}

double improvement_percent(double enff, double benchmark) { return 100.0 * (benchmark - enff) / benchmark; }

ComparisonReport comparison_report(std::span<const DayForecastResult> results) {
    if (results.empty()) throw Error(ErrorCode::EmptyInput, "comparison report needs at least one result");
    ComparisonReport rep;
    for (const auto& r : results) {
        if (std::find(rep.days.begin(), rep.days.end(), r.date) == rep.days.end()) rep.days.push_back(r.date);
        if (!rep.model_index(r.model)) rep.models.push_back(r.model);
    }
    rep.mape.assign(rep.days.size(), std::vector<std::optional<double>>(rep.models.size()));
    for (const auto& r : results) {
        const auto d = static_cast<std::size_t>(std::find(rep.days.begin(), rep.days.end(), r.date) - rep.days.begin());
        rep.mape[d][*rep.model_index(r.model)] = r.mape;
    }
    rep.mean.assign(rep.models.size(), 0.0);
    for (std::size_t m = 0; m < rep.models.size(); ++m) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& row : rep.mape) {
            if (row[m]) {
                sum += *row[m];
                ++n;
            }
        }
        rep.mean[m] = sum / static_cast<double>(n);
    }

    const auto ref = rep.model_index(kReferenceModel);
    if (!ref) return rep;
    for (std::size_t m = 0; m < rep.models.size(); ++m) {
        if (m == *ref) continue;
        Improvement imp;
        imp.benchmark = rep.models[m];
        for (const auto& row : rep.mape) {
            if (row[m] && row[*ref]) {
                const double v = improvement_percent(*row[*ref], *row[m]);
                imp.per_day.push_back(v);
                if (!imp.maximum || v > *imp.maximum) imp.maximum = v;
            } else {
                imp.per_day.push_back(std::nullopt);
            }
        }
        imp.on_mean = improvement_percent(rep.mean[*ref], rep.mean[m]);
        rep.improvements.push_back(std::move(imp));
    }
    return rep;
}

std::vector<ScatterRow> scatter_data(std::span<const double> actual, std::span<const double> predicted,
                                     const std::string& model) {
    if (actual.size() != predicted.size()) {
        throw Error(ErrorCode::LengthMismatch, "scatter data needs equal-length series");
    }
    std::vector<ScatterRow> rows;
    rows.reserve(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        rows.push_back({actual[i], predicted[i], model, static_cast<int>(i)});
    }
    return rows;
}

void write_scatter_csv(std::ostream& out, std::span<const ScatterRow> rows) {
    out << "actual_mw,predicted_mw,model,hour\n";
    for (const auto& r : rows) {
        out << text::format_double(r.actual_mw) << ',' << text::format_double(r.predicted_mw) << ',' << r.model << ','
            << r.hour << '\n';
    }
}

std::vector<ScatterRow> read_scatter_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || text::trim(line) != "actual_mw,predicted_mw,model,hour") {
        throw Error(ErrorCode::MalformedRow, "scatter CSV header missing");
    }
    std::vector<ScatterRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto f = text::split(text::trim(line));
        const auto a = f.size() == 4 ? text::parse_double(f[0]) : std::nullopt;
        const auto p = f.size() == 4 ? text::parse_double(f[1]) : std::nullopt;
        const auto h = f.size() == 4 ? text::parse_int(f[3]) : std::nullopt;
        if (!a || !p || !h) throw Error(ErrorCode::MalformedRow, "scatter CSV line " + std::to_string(line_no));
        rows.push_back({*a, *p, std::string(f[2]), static_cast<int>(*h)});
    }
    return rows;
}

void write_series_csv(std::ostream& out, const DayForecastResult& result) {
    out << "hour,actual,predicted\n";
    for (std::size_t h = 0; h < result.actual.size(); ++h) {
        out << h << ',' << text::format_double(result.actual[h]) << ',' << text::format_double(result.predicted[h])
            << '\n';
    }
}

void write_report_csv(std::ostream& out, const ComparisonReport& report) {
    out << "kind,model,day,value\n";
    for (std::size_t d = 0; d < report.days.size(); ++d) {
        for (std::size_t m = 0; m < report.models.size(); ++m) {
            if (!report.mape[d][m]) continue;
            out << "mape," << report.models[m] << ',' << dataio::format_date(report.days[d]) << ','
                << text::format_double(*report.mape[d][m]) << '\n';
        }
    }
    for (std::size_t m = 0; m < report.models.size(); ++m) {
        out << "mape," << report.models[m] << ",mean," << text::format_double(report.mean[m]) << '\n';
    }
    for (const auto& imp : report.improvements) {
        for (std::size_t d = 0; d < report.days.size(); ++d) {
            if (!imp.per_day[d]) continue;
            out << "improvement," << imp.benchmark << ',' << dataio::format_date(report.days[d]) << ','
                << text::format_double(*imp.per_day[d]) << '\n';
        }
        if (imp.on_mean) out << "improvement," << imp.benchmark << ",mean," << text::format_double(*imp.on_mean) << '\n';
        if (imp.maximum) out << "improvement," << imp.benchmark << ",max," << text::format_double(*imp.maximum) << '\n';
    }
}

ReferenceTable read_reference_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || text::trim(line) != "day,model,mape") {
        throw Error(ErrorCode::MalformedRow, "reference CSV needs 'day,model,mape' header");
    }
    ReferenceTable t;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto f = text::split(text::trim(line));
        const auto v = f.size() == 3 ? text::parse_double(f[2]) : std::nullopt;
        if (!v) throw Error(ErrorCode::MalformedRow, "reference CSV line " + std::to_string(line_no));
        std::string day(text::trim(f[0])), model(text::trim(f[1]));
        if (std::find(t.days.begin(), t.days.end(), day) == t.days.end()) t.days.push_back(day);
        if (std::find(t.models.begin(), t.models.end(), model) == t.models.end()) t.models.push_back(model);
        t.values[{day, model}] = *v;
    }
    return t;
}

namespace {

std::string cell(const std::optional<double>& v) { return v ? text::format_fixed(*v, 2) : std::string("-"); }

void table(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c == 0) {
                out << std::left << std::setw(static_cast<int>(width[c])) << r[c];
            } else {
                out << "  " << std::right << std::setw(static_cast<int>(width[c])) << r[c];
            }
        }
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

}  // namespace

void write_report_text(std::ostream& out, const ComparisonReport& report, const ReferenceTable* reference) {
    out << "MAPE (%) by day and model\n\n";
    std::vector<std::string> header{"day"};
    header.insert(header.end(), report.models.begin(), report.models.end());
    std::vector<std::vector<std::string>> rows;
    for (std::size_t d = 0; d < report.days.size(); ++d) {
        std::vector<std::string> r{dataio::format_date(report.days[d])};
        for (std::size_t m = 0; m < report.models.size(); ++m) r.push_back(cell(report.mape[d][m]));
        rows.push_back(std::move(r));
    }
    std::vector<std::string> mean{"mean"};
    for (double v : report.mean) mean.push_back(text::format_fixed(v, 2));
    rows.push_back(std::move(mean));
    table(out, header, rows);

    if (!report.improvements.empty()) {
        out << "\nImprovement of " << kReferenceModel << " over each benchmark (%)\n\n";
        std::vector<std::string> ih{"day"};
        for (const auto& imp : report.improvements) ih.push_back(imp.benchmark);
        std::vector<std::vector<std::string>> irows;
        for (std::size_t d = 0; d < report.days.size(); ++d) {
            std::vector<std::string> r{dataio::format_date(report.days[d])};
            for (const auto& imp : report.improvements) r.push_back(cell(imp.per_day[d]));
            irows.push_back(std::move(r));
        }
        std::vector<std::string> on_mean{"mean"}, maximum{"max"};
        for (const auto& imp : report.improvements) {
            on_mean.push_back(cell(imp.on_mean));
            maximum.push_back(cell(imp.maximum));
        }
        irows.push_back(std::move(on_mean));
        irows.push_back(std::move(maximum));
        table(out, ih, irows);
    }

    if (reference) {
        out << "\nPublished reference MAPE (%)\n\n";
        std::vector<std::string> rh{"day"};
        rh.insert(rh.end(), reference->models.begin(), reference->models.end());
        std::vector<std::vector<std::string>> rrows;
        for (const auto& day : reference->days) {
            std::vector<std::string> r{day};
            for (const auto& model : reference->models) {
                const auto it = reference->values.find({day, model});
                r.push_back(it == reference->values.end() ? std::string("-") : text::format_fixed(it->second, 2));
            }
            rrows.push_back(std::move(r));
        }
        table(out, rh, rrows);
    }
}

}  // namespace enff::eval
