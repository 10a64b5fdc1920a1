#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace enff::dataio {

using HourStamp = std::chrono::sys_time<std::chrono::hours>;
using Date = std::chrono::year_month_day;

Date parse_date(std::string_view text);          // YYYY-MM-DD, throws MalformedRow
std::string format_date(Date date);
/// Accepts `YYYY-MM-DDTHH:MM[:SS]` or a space instead of `T`; minutes/seconds must be zero.
std::optional<HourStamp> parse_timestamp(std::string_view text);
std::string format_timestamp(HourStamp stamp);   // YYYY-MM-DDTHH:00

HourStamp start_of(Date date);
Date date_of(HourStamp stamp);
int hour_of(HourStamp stamp);
/// ISO weekday, Monday = 1 .. Sunday = 7.
int day_of_week(Date date);

struct HourlyRecord {
    HourStamp timestamp;
    double load_mw = 0.0;
    double dry_bulb_f = 0.0;
    double dew_point_f = 0.0;

    friend bool operator==(const HourlyRecord&, const HourlyRecord&) = default;
};

/// Non-empty, strictly hourly sequence of records (no gaps, no duplicates).
class LoadSeries {
public:
    /// Sorts by timestamp and validates. Throws MalformedRow for bad values,
    /// DuplicateTimestamp or GapDetected for continuity violations.
    static LoadSeries from_records(std::vector<HourlyRecord> records);

    std::size_t size() const noexcept { return records_.size(); }
    const HourlyRecord& operator[](std::size_t i) const { return records_[i]; }
    std::span<const HourlyRecord> records() const noexcept { return records_; }

    HourStamp first_stamp() const { return records_.front().timestamp; }
    HourStamp last_stamp() const { return records_.back().timestamp; }

    std::optional<std::size_t> index_of(HourStamp stamp) const;
    std::vector<double> loads() const;

    friend bool operator==(const LoadSeries&, const LoadSeries&) = default;

private:
    explicit LoadSeries(std::vector<HourlyRecord> records) : records_(std::move(records)) {}
    std::vector<HourlyRecord> records_;
};

LoadSeries parse_csv(std::istream& in);
LoadSeries read_csv(const std::filesystem::path& path);
void write_csv(std::ostream& out, const LoadSeries& series);

enum class DayType { Working, Off };

struct CalendarTag {
    int day_of_week = 1;  // 1..7, Monday = 1
    DayType day_type = DayType::Working;
    int hour_of_day = 0;
    std::optional<std::string> holiday;

    bool anomalous() const noexcept { return holiday.has_value(); }
};

struct Holiday {
    Date date;
    std::string name;
};

std::vector<Holiday> parse_holidays(std::istream& in);
std::vector<Holiday> read_holidays(const std::filesystem::path& path);
void write_holidays(std::ostream& out, std::span<const Holiday> holidays);

class TaggedSeries {
public:
    TaggedSeries(LoadSeries series, std::vector<CalendarTag> tags);

    const LoadSeries& series() const noexcept { return series_; }
    std::span<const CalendarTag> tags() const noexcept { return tags_; }
    std::size_t size() const noexcept { return series_.size(); }

    const HourlyRecord& record(std::size_t i) const { return series_[i]; }
    const CalendarTag& tag(std::size_t i) const { return tags_[i]; }

    /// Index of hour 00 of `day`; throws RangeOutOfData unless all 24 hours exist.
    std::size_t day_start(Date day) const;
    bool covers_day(Date day) const;

private:
    LoadSeries series_;
    std::vector<CalendarTag> tags_;
};

/// Holidays falling outside the series are ignored.
TaggedSeries tag_calendar(const LoadSeries& series, std::span<const Holiday> holidays);

struct DateRange {
    Date first;
    Date last;  // inclusive

    bool empty() const { return std::chrono::sys_days{last} < std::chrono::sys_days{first}; }
    bool contains(Date d) const {
        const auto s = std::chrono::sys_days{d};
        return !empty() && std::chrono::sys_days{first} <= s && s <= std::chrono::sys_days{last};
    }
    std::vector<Date> days() const;
};

struct SplitSpec {
    DateRange train;
    std::optional<DateRange> validation;
    std::vector<Date> test_days;
};

/// Record indices into the tagged series; the sets are disjoint.
struct Partition {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

Partition split(const TaggedSeries& series, const SplitSpec& spec);

struct SynthParams {
    int years = 2;
    std::uint64_t seed = 42;
    double holiday_effect = 0.12;  // fractional load suppression on holidays
    int start_year = 2008;

    double base_load_mw = 14000.0;
    double annual_amplitude = 0.06;   // fraction of base, winter-high
    double daily_amplitude = 0.18;    // double-peak daily profile, fraction of base
    double saturday_factor = 0.93;
    double sunday_factor = 0.89;
    double cooling_coeff = 0.010;     // fraction of base per °F above cooling_balance_f
    double heating_coeff = 0.004;     // fraction of base per °F below heating_balance_f
    double cooling_balance_f = 65.0;
    double heating_balance_f = 50.0;
    double noise_fraction = 0.01;     // stationary sd of AR(1) load noise
    double noise_ar = 0.9;

    double temp_mean_f = 50.0;
    double temp_annual_amp_f = 22.0;
    double temp_daily_amp_f = 8.0;
    double temp_noise_f = 3.0;
};

struct SyntheticData {
    LoadSeries series;
    std::vector<Holiday> holidays;
};

/// Fixed-date holidays applied every synthetic year (month, day, name).
struct FixedHoliday {
    unsigned month;
    unsigned day;
    const char* name;
};
std::span<const FixedHoliday> synthetic_holiday_calendar() noexcept;

/// Deterministic for a fixed parameter set; random draws do not depend on
/// holiday_effect, so changing it only rescales holiday hours.
SyntheticData synthesize(const SynthParams& params);

}  // namespace enff::dataio
