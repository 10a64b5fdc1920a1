#pragma once

#include "enff/dataio.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace enff::eval {

/// (100/M)·sum |a − p| / |a|. Throws LengthMismatch (including empty input)
/// and ZeroActual.
double mape(std::span<const double> actual, std::span<const double> predicted);

/// Per-hour absolute percentage errors.
std::vector<double> absolute_percentage_errors(std::span<const double> actual, std::span<const double> predicted);

struct DayForecastResult {
    dataio::Date date;
    std::string model;
    std::vector<double> actual;
    std::vector<double> predicted;
    std::vector<double> ape;
    double mape = 0.0;
};

struct ModelForecast {
    std::string model;
    std::vector<double> predicted;
};

/// One result per model, in input order. Each forecast must hold 24 values.
std::vector<DayForecastResult> evaluate_day(std::span<const double> actual, std::span<const ModelForecast> forecasts,
                                            dataio::Date date);

inline constexpr const char* kReferenceModel = "ENFF";

struct Improvement {
    std::string benchmark;
    std::vector<std::optional<double>> per_day;  // aligned with ComparisonReport::days
    std::optional<double> on_mean;               // from the mean row
    std::optional<double> maximum;               // largest per-day value
};

struct ComparisonReport {
    std::vector<dataio::Date> days;
    std::vector<std::string> models;  // first-seen order
    /// mape[d][m]; nullopt when model m has no result for day d.
    std::vector<std::vector<std::optional<double>>> mape;
    std::vector<double> mean;  // per model, over the days it was evaluated
    /// ENFF against each other model; empty when ENFF is absent or alone.
    std::vector<Improvement> improvements;

    std::optional<std::size_t> model_index(std::string_view name) const;
};

/// 100·(benchmark − enff) / benchmark.
double improvement_percent(double enff, double benchmark);

/// Throws EmptyInput when `results` is empty.
ComparisonReport comparison_report(std::span<const DayForecastResult> results);

struct ScatterRow {
    double actual_mw = 0.0;
    double predicted_mw = 0.0;
    std::string model;
    int hour = 0;

    friend bool operator==(const ScatterRow&, const ScatterRow&) = default;
};

/// One row per hour; throws LengthMismatch.
std::vector<ScatterRow> scatter_data(std::span<const double> actual, std::span<const double> predicted,
                                     const std::string& model);

void write_scatter_csv(std::ostream& out, std::span<const ScatterRow> rows);
std::vector<ScatterRow> read_scatter_csv(std::istream& in);

/// `hour,actual,predicted`
void write_series_csv(std::ostream& out, const DayForecastResult& result);

/// Long-form table: `date,model,mape` rows, then `mean` rows, then
/// `improvement` rows (`improvement,<benchmark>,<day or mean or max>,<value>`).
void write_report_csv(std::ostream& out, const ComparisonReport& report);

/// Published MAPEs keyed by (day label, model), printed next to our own table.
struct ReferenceTable {
    std::vector<std::string> days;
    std::vector<std::string> models;
    std::map<std::pair<std::string, std::string>, double> values;
};

/// `day,model,mape` CSV.
ReferenceTable read_reference_csv(std::istream& in);

void write_report_text(std::ostream& out, const ComparisonReport& report, const ReferenceTable* reference = nullptr);

}  // namespace enff::eval
