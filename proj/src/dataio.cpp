#include "enff/dataio.hpp"

#include "enff/error.hpp"
#include "enff/random.hpp"
#include "enff/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>

namespace enff::dataio {

using namespace std::chrono;

namespace {

constexpr std::string_view kLoadHeader = "timestamp,load_mw,dry_bulb_f,dew_point_f";
constexpr std::string_view kHolidayHeader = "date,name";

std::string two_digits(unsigned v) {
    std::string s = std::to_string(v);
    return v < 10 ? "0" + s : s;
}

std::optional<Date> try_parse_date(std::string_view t) {
    t = text::trim(t);
    if (t.size() != 10 || t[4] != '-' || t[7] != '-') return std::nullopt;
    const auto y = text::parse_int(t.substr(0, 4));
    const auto m = text::parse_int(t.substr(5, 2));
    const auto d = text::parse_int(t.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    const Date date{year{static_cast<int>(*y)}, month{static_cast<unsigned>(*m)},
                    day{static_cast<unsigned>(*d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string describe_line(std::size_t line) { return "line " + std::to_string(line); }

}  // namespace

Date parse_date(std::string_view t) {
    auto d = try_parse_date(t);
    if (!d) throw Error(ErrorCode::MalformedRow, "invalid date '" + std::string(t) + "'");
    return *d;
}

std::string format_date(Date d) {
    return std::to_string(static_cast<int>(d.year())) + "-" +
           two_digits(static_cast<unsigned>(d.month())) + "-" +
           two_digits(static_cast<unsigned>(d.day()));
}

std::optional<HourStamp> parse_timestamp(std::string_view t) {
    t = text::trim(t);
    if (t.size() < 16 || (t[10] != 'T' && t[10] != ' ') || t[13] != ':') return std::nullopt;
    const auto date = try_parse_date(t.substr(0, 10));
    const auto hh = text::parse_int(t.substr(11, 2));
    const auto mm = text::parse_int(t.substr(14, 2));
    if (!date || !hh || !mm || *hh < 0 || *hh > 23 || *mm != 0) return std::nullopt;
    if (t.size() > 16) {
        if (t.size() != 19 || t[16] != ':') return std::nullopt;
        const auto ss = text::parse_int(t.substr(17, 2));
        if (!ss || *ss != 0) return std::nullopt;
    }
    return start_of(*date) + hours{*hh};
}

std::string format_timestamp(HourStamp stamp) {
    return format_date(date_of(stamp)) + "T" + two_digits(static_cast<unsigned>(hour_of(stamp))) + ":00";
}

HourStamp start_of(Date date) { return HourStamp{sys_days{date}}; }

Date date_of(HourStamp stamp) { return Date{floor<days>(stamp)}; }

int hour_of(HourStamp stamp) { return static_cast<int>((stamp - floor<days>(stamp)).count()); }

int day_of_week(Date date) { return static_cast<int>(weekday{sys_days{date}}.iso_encoding()); }

LoadSeries LoadSeries::from_records(std::vector<HourlyRecord> records) {
    if (records.empty()) throw Error(ErrorCode::MalformedRow, "series has no records");
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!std::isfinite(r.load_mw) || r.load_mw <= 0.0) {
            throw Error(ErrorCode::MalformedRow,
                        "record " + std::to_string(i) + ": load must be finite and positive");
        }
        if (!std::isfinite(r.dry_bulb_f) || !std::isfinite(r.dew_point_f)) {
            throw Error(ErrorCode::MalformedRow,
                        "record " + std::to_string(i) + ": temperatures must be finite");
        }
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const HourlyRecord& a, const HourlyRecord& b) { return a.timestamp < b.timestamp; });
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto prev = records[i - 1].timestamp;
        const auto cur = records[i].timestamp;
        if (cur == prev) {
            throw Error(ErrorCode::DuplicateTimestamp, format_timestamp(cur));
        }
        if (cur - prev != hours{1}) {
            throw Error(ErrorCode::GapDetected, "first missing hour " + format_timestamp(prev + hours{1}));
        }
    }
    return LoadSeries(std::move(records));
}

std::optional<std::size_t> LoadSeries::index_of(HourStamp stamp) const {
    if (stamp < first_stamp() || stamp > last_stamp()) return std::nullopt;
    return static_cast<std::size_t>((stamp - first_stamp()).count());
}

std::vector<double> LoadSeries::loads() const {
    std::vector<double> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r.load_mw);
    return out;
}

LoadSeries parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedRow, "empty input, missing header");
    ++line_no;
    if (text::trim(line) != kLoadHeader) {
        throw Error(ErrorCode::MalformedRow, describe_line(1) + ": expected header '" +
                                                 std::string(kLoadHeader) + "'");
    }
    std::vector<HourlyRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto fields = text::split(line);
        if (fields.size() != 4) {
            throw Error(ErrorCode::MalformedRow, describe_line(line_no) + ": expected 4 fields");
        }
        const auto stamp = parse_timestamp(fields[0]);
        const auto load = text::parse_double(fields[1]);
        const auto dry = text::parse_double(fields[2]);
        const auto dew = text::parse_double(fields[3]);
        if (!stamp) throw Error(ErrorCode::MalformedRow, describe_line(line_no) + ": bad timestamp");
        if (!load || !std::isfinite(*load) || *load <= 0.0) {
            throw Error(ErrorCode::MalformedRow, describe_line(line_no) + ": load must be a positive number");
        }
        if (!dry || !dew || !std::isfinite(*dry) || !std::isfinite(*dew)) {
            throw Error(ErrorCode::MalformedRow, describe_line(line_no) + ": bad temperature");
        }
        records.push_back({*stamp, *load, *dry, *dew});
    }
    if (records.empty()) throw Error(ErrorCode::MalformedRow, "no data rows after header");
    return LoadSeries::from_records(std::move(records));
}

LoadSeries read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open load file " + path.string());
    return parse_csv(in);
}

void write_csv(std::ostream& out, const LoadSeries& series) {
    out << kLoadHeader << '\n';
    for (const auto& r : series.records()) {
        out << format_timestamp(r.timestamp) << ',' << text::format_double(r.load_mw) << ','
            << text::format_double(r.dry_bulb_f) << ',' << text::format_double(r.dew_point_f) << '\n';
    }
}

std::vector<Holiday> parse_holidays(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<Holiday> out;
    if (!std::getline(in, line)) return out;
    ++line_no;
    if (text::trim(line) != kHolidayHeader) {
        throw Error(ErrorCode::MalformedRow, describe_line(1) + ": expected header 'date,name'");
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorCode::MalformedRow, describe_line(line_no) + ": expected 'date,name'");
        }
        const auto date = try_parse_date(std::string_view(line).substr(0, comma));
        const auto name = text::trim(std::string_view(line).substr(comma + 1));
        if (!date || name.empty()) {
            throw Error(ErrorCode::MalformedRow, describe_line(line_no) + ": bad holiday row");
        }
        out.push_back({*date, std::string(name)});
    }
    return out;
}

std::vector<Holiday> read_holidays(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open holiday file " + path.string());
    return parse_holidays(in);
}

void write_holidays(std::ostream& out, std::span<const Holiday> holidays) {
    out << kHolidayHeader << '\n';
    for (const auto& h : holidays) out << format_date(h.date) << ',' << h.name << '\n';
}

TaggedSeries::TaggedSeries(LoadSeries series, std::vector<CalendarTag> tags)
    : series_(std::move(series)), tags_(std::move(tags)) {
    if (tags_.size() != series_.size()) {
        throw Error(ErrorCode::LengthMismatch, "tag count differs from record count");
    }
}

bool TaggedSeries::covers_day(Date day) const {
    const auto first = series_.index_of(start_of(day));
    return first.has_value() && series_.index_of(start_of(day) + hours{23}).has_value();
}

std::size_t TaggedSeries::day_start(Date day) const {
    if (!covers_day(day)) {
        throw Error(ErrorCode::RangeOutOfData, "day " + format_date(day) + " not fully covered by series");
    }
    return *series_.index_of(start_of(day));
}

TaggedSeries tag_calendar(const LoadSeries& series, std::span<const Holiday> holidays) {
    std::map<sys_days, std::string> by_day;
    for (const auto& h : holidays) by_day.emplace(sys_days{h.date}, h.name);

    std::vector<CalendarTag> tags;
    tags.reserve(series.size());
    for (const auto& r : series.records()) {
        const Date date = date_of(r.timestamp);
        CalendarTag tag;
        tag.day_of_week = day_of_week(date);
        tag.hour_of_day = hour_of(r.timestamp);
        if (auto it = by_day.find(sys_days{date}); it != by_day.end()) tag.holiday = it->second;
        tag.day_type = (tag.day_of_week >= 6 || tag.holiday) ? DayType::Off : DayType::Working;
        tags.push_back(std::move(tag));
    }
    return TaggedSeries(series, std::move(tags));
}

std::vector<Date> DateRange::days() const {
    std::vector<Date> out;
    if (empty()) return out;
    for (auto d = sys_days{first}; d <= sys_days{last}; d += std::chrono::days{1}) out.emplace_back(d);
    return out;
}

Partition split(const TaggedSeries& series, const SplitSpec& spec) {
    if (spec.train.empty()) throw Error(ErrorCode::InvalidSplit, "training range is empty");
    const bool has_validation = spec.validation && !spec.validation->empty();
    if (has_validation) {
        const auto& v = *spec.validation;
        if (spec.train.contains(v.first) || spec.train.contains(v.last) || v.contains(spec.train.first)) {
            throw Error(ErrorCode::InvalidSplit, "training and validation ranges overlap");
        }
    }
    for (std::size_t i = 0; i < spec.test_days.size(); ++i) {
        const auto& d = spec.test_days[i];
        if (spec.train.contains(d)) {
            throw Error(ErrorCode::InvalidSplit, "test day " + format_date(d) + " inside training range");
        }
        if (has_validation && spec.validation->contains(d)) {
            throw Error(ErrorCode::InvalidSplit, "test day " + format_date(d) + " inside validation range");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (spec.test_days[j] == d) {
                throw Error(ErrorCode::InvalidSplit, "duplicate test day " + format_date(d));
            }
        }
    }

    auto range_indices = [&](const DateRange& r, std::vector<std::size_t>& out) {
        const auto first = series.day_start(r.first);
        const auto last = series.day_start(r.last) + 23;
        for (std::size_t i = first; i <= last; ++i) out.push_back(i);
    };

    Partition p;
    range_indices(spec.train, p.train);
    if (has_validation) range_indices(*spec.validation, p.validation);
    for (const auto& d : spec.test_days) {
        const auto first = series.day_start(d);
        for (std::size_t h = 0; h < 24; ++h) p.test.push_back(first + h);
    }
    return p;
}

std::span<const FixedHoliday> synthetic_holiday_calendar() noexcept {
    static constexpr std::array<FixedHoliday, 6> kCalendar{{
        {1, 1, "New Year's Day"},
        {4, 12, "Easter Day"},
        {5, 25, "Memorial Day"},
        {7, 4, "Independence Day"},
        {9, 7, "Labor Day"},
        {12, 25, "Christmas Day"},
    }};
    return kCalendar;
}

namespace {

// Zero-mean double-peak daily shape (morning and evening peaks).
std::array<double, 24> daily_profile() {
    std::array<double, 24> shape{};
    double mean = 0.0;
    for (int h = 0; h < 24; ++h) {
        const double morning = std::exp(-0.5 * std::pow((h - 9.0) / 2.5, 2));
        const double evening = 1.2 * std::exp(-0.5 * std::pow((h - 18.5) / 2.5, 2));
        const double night = -0.6 * std::exp(-0.5 * std::pow((h - 3.5) / 2.5, 2));
        shape[h] = morning + evening + night;
        mean += shape[h];
    }
    mean /= 24.0;
    for (auto& v : shape) v -= mean;
    return shape;
}

}  // namespace

SyntheticData synthesize(const SynthParams& p) {
    if (p.years < 1) throw Error(ErrorCode::InvalidConfig, "synth years must be >= 1");
    const Date first{year{p.start_year}, January, day{1}};
    const Date end{year{p.start_year + p.years}, January, day{1}};
    const auto n_hours = static_cast<std::size_t>((sys_days{end} - sys_days{first}).count()) * 24;

    std::vector<Holiday> holidays;
    for (int y = p.start_year; y < p.start_year + p.years; ++y) {
        for (const auto& fh : synthetic_holiday_calendar()) {
            holidays.push_back({Date{year{y}, month{fh.month}, day{fh.day}}, fh.name});
        }
    }
    std::map<sys_days, bool> holiday_days;
    for (const auto& h : holidays) holiday_days[sys_days{h.date}] = true;

    // Independent streams for temperature and load noise.
    Rng temp_rng(derive_seed(p.seed, 1));
    Rng load_rng(derive_seed(p.seed, 2));
    Rng dew_rng(derive_seed(p.seed, 3));

    const auto shape = daily_profile();
    const double two_pi = 2.0 * std::numbers::pi;
    const double innovation_sd = p.noise_fraction * std::sqrt(1.0 - p.noise_ar * p.noise_ar);
    const double temp_innovation_sd = p.temp_noise_f * std::sqrt(1.0 - 0.95 * 0.95);

    std::vector<HourlyRecord> records;
    records.reserve(n_hours);
    double load_noise = 0.0;
    double temp_noise = 0.0;
    const auto origin = start_of(first);
    for (std::size_t i = 0; i < n_hours; ++i) {
        const HourStamp stamp = origin + hours{static_cast<long>(i)};
        const Date date = date_of(stamp);
        const int hour = hour_of(stamp);
        const double day_of_year = static_cast<double>(
            (sys_days{date} - sys_days{Date{date.year(), January, day{1}}}).count());
        const double season = std::cos(two_pi * (day_of_year - 15.0) / 365.25);

        temp_noise = 0.95 * temp_noise + temp_rng.normal(0.0, temp_innovation_sd);
        const double dry = p.temp_mean_f - p.temp_annual_amp_f * season +
                           p.temp_daily_amp_f * std::cos(two_pi * (hour - 15.0) / 24.0) + temp_noise;
        const double dew = dry - 6.0 - 6.0 * dew_rng.uniform();

        load_noise = p.noise_ar * load_noise + load_rng.normal(0.0, innovation_sd);

        const int dow = day_of_week(date);
        const double weekly = dow == 6 ? p.saturday_factor : dow == 7 ? p.sunday_factor : 1.0;
        const double weather = p.cooling_coeff * std::max(0.0, dry - p.cooling_balance_f) +
                               p.heating_coeff * std::max(0.0, p.heating_balance_f - dry);
        double load = p.base_load_mw *
                      (weekly * (1.0 + p.annual_amplitude * season + p.daily_amplitude * shape[hour]) +
                       weather + load_noise);
        if (holiday_days.contains(sys_days{date})) load *= (1.0 - p.holiday_effect);
        load = std::max(load, 0.05 * p.base_load_mw);
        records.push_back({stamp, load, dry, dew});
    }
    return {LoadSeries::from_records(std::move(records)), std::move(holidays)};
}

}  // namespace enff::dataio
