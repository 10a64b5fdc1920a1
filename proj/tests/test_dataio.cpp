#include <doctest.h>

#include "enff/dataio.hpp"
#include "enff/error.hpp"
#include "enff/random.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

using namespace enff;
using namespace enff::dataio;
using namespace std::chrono;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return year{y} / month{m} / day{d}; }

LoadSeries hourly(Date first, std::size_t hours, double load = 1000.0) {
    std::vector<HourlyRecord> recs;
    for (std::size_t i = 0; i < hours; ++i) {
        recs.push_back({start_of(first) + std::chrono::hours{static_cast<int>(i)}, load + static_cast<double>(i), 40.0, 30.0});
    }
    return LoadSeries::from_records(std::move(recs));
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no enff::Error thrown");
    return ErrorCode::Io;
}

// Zeller's congruence; returns ISO weekday (Monday = 1).
int zeller_iso(int y, int m, int d) {
    if (m < 3) {
        m += 12;
        y -= 1;
    }
    const int k = y % 100;
    const int j = y / 100;
    const int h = (d + 13 * (m + 1) / 5 + k + k / 4 + j / 4 + 5 * j) % 7;  // 0 = Saturday
    return ((h + 5) % 7) + 1;
}

}  // namespace

TEST_CASE("parse_csv reads well-formed rows") {
    std::istringstream in(
        "timestamp,load_mw,dry_bulb_f,dew_point_f\n"
        "2009-01-01T00:00,12000,30,20\n"
        "2009-01-01T01:00,11800.5,29,19\n"
        "2009-01-01 02:00:00,11500,28,18\n");
    const auto s = parse_csv(in);
    REQUIRE(s.size() == 3);
    CHECK(s[1].load_mw == 11800.5);
    CHECK(hour_of(s[2].timestamp) == 2);
    CHECK(format_timestamp(s[0].timestamp) == "2009-01-01T00:00");
}

TEST_CASE("parse_csv sorts unordered input") {
    std::istringstream in(
        "timestamp,load_mw,dry_bulb_f,dew_point_f\n"
        "2009-01-01T01:00,2,0,0\n"
        "2009-01-01T00:00,1,0,0\n");
    const auto s = parse_csv(in);
    CHECK(s[0].load_mw == 1.0);
    CHECK(s[1].load_mw == 2.0);
}

TEST_CASE("parse_csv reports the first missing hour") {
    std::istringstream in(
        "timestamp,load_mw,dry_bulb_f,dew_point_f\n"
        "2009-01-01T00:00,1,0,0\n"
        "2009-01-01T02:00,1,0,0\n");
    try {
        parse_csv(in);
        FAIL("expected GapDetected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GapDetected);
        CHECK(std::string(e.what()).find("2009-01-01T01:00") != std::string::npos);
    }
}

TEST_CASE("parse_csv rejects duplicates, bad rows and empty bodies") {
    std::istringstream dup(
        "timestamp,load_mw,dry_bulb_f,dew_point_f\n"
        "2009-01-01T00:00,1,0,0\n"
        "2009-01-01T00:00,1,0,0\n");
    CHECK(code_of([&] { parse_csv(dup); }) == ErrorCode::DuplicateTimestamp);

    std::istringstream bad(
        "timestamp,load_mw,dry_bulb_f,dew_point_f\n"
        "2009-01-01T00:00,1,0,0\n"
        "2009-01-01T01:00,abc,0,0\n");
    try {
        parse_csv(bad);
        FAIL("expected MalformedRow");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MalformedRow);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    std::istringstream nonpositive(
        "timestamp,load_mw,dry_bulb_f,dew_point_f\n"
        "2009-01-01T00:00,0,0,0\n");
    CHECK(code_of([&] { parse_csv(nonpositive); }) == ErrorCode::MalformedRow);

    std::istringstream empty("timestamp,load_mw,dry_bulb_f,dew_point_f\n");
    CHECK(code_of([&] { parse_csv(empty); }) == ErrorCode::MalformedRow);

    std::istringstream header("time,load\n2009-01-01T00:00,1\n");
    CHECK(code_of([&] { parse_csv(header); }) == ErrorCode::MalformedRow);
}

TEST_CASE("write_csv then parse_csv is the identity") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<HourlyRecord> recs;
        const auto n = 1 + static_cast<std::size_t>(rng.uniform() * 200);
        for (std::size_t i = 0; i < n; ++i) {
            recs.push_back({start_of(ymd(2007, 3, 1)) + hours{static_cast<int>(i)}, rng.uniform(1.0, 30000.0),
                            rng.uniform(-20.0, 100.0), rng.uniform(-30.0, 80.0)});
        }
        const auto s = LoadSeries::from_records(recs);
        std::stringstream io;
        write_csv(io, s);
        CHECK(parse_csv(io) == s);
    }
}

TEST_CASE("tag_calendar marks the named holidays") {
    const auto s = hourly(ymd(2009, 9, 1), 24 * 120);
    const std::vector<Holiday> hols{{ymd(2009, 12, 25), "Christmas"}, {ymd(2009, 9, 7), "Labor Day"},
                                    {ymd(2012, 1, 1), "outside"}};
    const auto t = tag_calendar(s, hols);

    const auto xmas = t.day_start(ymd(2009, 12, 25));
    CHECK(t.tag(xmas).day_of_week == 5);
    CHECK(t.tag(xmas).holiday == std::optional<std::string>("Christmas"));
    CHECK(t.tag(xmas + 23).day_type == DayType::Off);
    CHECK(t.tag(xmas + 23).hour_of_day == 23);

    const auto labor = t.day_start(ymd(2009, 9, 7));
    CHECK(t.tag(labor).day_of_week == 1);
    CHECK(t.tag(labor).holiday == std::optional<std::string>("Labor Day"));
    CHECK(t.tag(labor).day_type == DayType::Off);

    const auto tuesday = t.day_start(ymd(2009, 9, 8));
    CHECK(t.tag(tuesday).day_of_week == 2);
    CHECK(t.tag(tuesday).day_type == DayType::Working);
    CHECK_FALSE(t.tag(tuesday).anomalous());

    const auto saturday = t.day_start(ymd(2009, 9, 12));
    CHECK(t.tag(saturday).day_type == DayType::Off);
    CHECK_FALSE(t.tag(saturday).anomalous());
}

TEST_CASE("day_of_week agrees with Zeller's congruence") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const int y = 1950 + static_cast<int>(rng.uniform() * 151);
        const auto m = 1u + static_cast<unsigned>(rng.uniform() * 12);
        const auto last = static_cast<unsigned>((year{y} / month{m} / std::chrono::last).day());
        const auto d = 1u + static_cast<unsigned>(rng.uniform() * last);
        CHECK(day_of_week(ymd(y, m, d)) == zeller_iso(y, static_cast<int>(m), static_cast<int>(d)));
    }
}

TEST_CASE("holiday file round trip") {
    const std::vector<Holiday> hols{{ymd(2009, 1, 1), "New Year's Day"}, {ymd(2009, 5, 25), "Memorial Day"}};
    std::stringstream io;
    write_holidays(io, hols);
    const auto back = parse_holidays(io);
    REQUIRE(back.size() == 2);
    CHECK(back[1].date == ymd(2009, 5, 25));
    CHECK(back[1].name == "Memorial Day");
}

TEST_CASE("split partitions by date") {
    const auto s = hourly(ymd(2008, 12, 1), 24 * 40);
    const auto t = tag_calendar(s, {});

    SplitSpec spec{{ymd(2008, 12, 1), ymd(2008, 12, 20)}, DateRange{ymd(2008, 12, 21), ymd(2008, 12, 27)},
                   {ymd(2009, 1, 1)}};
    const auto p = split(t, spec);
    CHECK(p.train.size() == 20 * 24);
    CHECK(p.validation.size() == 7 * 24);
    REQUIRE(p.test.size() == 24);
    CHECK(date_of(t.record(p.test.front()).timestamp) == ymd(2009, 1, 1));

    std::set<std::size_t> all;
    for (const auto* v : {&p.train, &p.validation, &p.test}) {
        for (auto i : *v) CHECK(all.insert(i).second);
    }
    CHECK(all.size() == (20 + 7 + 1) * 24);

    SplitSpec no_validation{{ymd(2008, 12, 1), ymd(2008, 12, 20)}, std::nullopt, {}};
    CHECK(split(t, no_validation).validation.empty());

    SplitSpec before{{ymd(2008, 12, 1), ymd(2008, 12, 20)}, std::nullopt, {ymd(2008, 11, 1)}};
    CHECK(code_of([&] { split(t, before); }) == ErrorCode::RangeOutOfData);

    SplitSpec overlap{{ymd(2008, 12, 1), ymd(2008, 12, 20)}, DateRange{ymd(2008, 12, 15), ymd(2008, 12, 25)}, {}};
    CHECK(code_of([&] { split(t, overlap); }) == ErrorCode::InvalidSplit);

    SplitSpec test_in_train{{ymd(2008, 12, 1), ymd(2008, 12, 20)}, std::nullopt, {ymd(2008, 12, 5)}};
    CHECK(code_of([&] { split(t, test_in_train); }) == ErrorCode::InvalidSplit);
}

TEST_CASE("synthesize is deterministic and centred on the base load") {
    SynthParams p;
    p.years = 1;
    p.seed = 42;
    const auto a = synthesize(p);
    const auto b = synthesize(p);
    CHECK(a.series == b.series);
    CHECK(a.series.size() == 366 * 24);  // 2008 is a leap year

    SynthParams five = p;
    five.years = 5;
    const auto loads = synthesize(five).series.loads();
    const double mean = std::accumulate(loads.begin(), loads.end(), 0.0) / static_cast<double>(loads.size());
    CHECK(std::abs(mean - five.base_load_mw) / five.base_load_mw < 0.05);
}

TEST_CASE("holiday_effect only rescales holiday hours") {
    SynthParams p;
    p.years = 1;
    SynthParams none = p;
    none.holiday_effect = 0.0;
    const auto with = synthesize(p);
    const auto without = synthesize(none);
    const auto tagged = tag_calendar(with.series, with.holidays);
    REQUIRE(!with.holidays.empty());
    for (std::size_t i = 0; i < with.series.size(); ++i) {
        const double a = with.series[i].load_mw;
        const double b = without.series[i].load_mw;
        if (tagged.tag(i).anomalous()) {
            CHECK(a == doctest::Approx(b * (1.0 - p.holiday_effect)).epsilon(1e-12));
        } else {
            CHECK(a == b);
        }
    }
}
