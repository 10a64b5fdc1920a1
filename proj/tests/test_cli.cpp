#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status = -1;
    std::string output;
};

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = fs::temp_directory_path() / ("enff_cli_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run enff(const fs::path& dir, const std::string& args) {
    const auto log = dir / "cli.log";
    const std::string cmd = "cd '" + dir.string() + "' && '" + ENFF_CLI_PATH + "' " + args + " > '" + log.string() +
                            "' 2>&1";
    const int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.output = slurp(log);
    return r;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

const char* kSmallRun =
    "seed = 3\n"
    "synth.years = 1\n"
    "split.train = 2008-01-01..2008-03-31\n"
    "split.validation = 2008-04-01..2008-04-30\n"
    "split.test_days = 2008-05-26, 2008-07-04\n"
    "swarm.size = 4\n"
    "swarm.max_iterations = 2\n"
    "bpnn.epochs = 5\n"
    "output.dir = out\n";

std::size_t line_count(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("synth is deterministic and guards existing files") {
    TempDir t("synth");
    write_file(t.path() / "run.conf", "synth.years = 1\nsynth.seed = 5\noutput.dir = nested/data\n");
    REQUIRE(enff(t.path(), "--config run.conf synth").status == 0);
    const auto load = t.path() / "nested/data/load.csv";
    const auto first = slurp(load);
    CHECK(line_count(first) == 8784 + 1);
    CHECK(fs::exists(t.path() / "nested/data/holidays.csv"));

    const auto again = enff(t.path(), "--config run.conf synth");
    CHECK(again.status != 0);
    CHECK(again.output.find("--force") != std::string::npos);

    REQUIRE(enff(t.path(), "--config run.conf synth --force").status == 0);
    CHECK(slurp(load) == first);
}

TEST_CASE("missing inputs fail with the path in the message") {
    TempDir t("missing");
    write_file(t.path() / "run.conf",
               "data.load_csv = nowhere/load.csv\nsplit.train = 2008-01-01..2008-03-31\noutput.dir = out\nseed = 1\n");
    const auto r = enff(t.path(), "--config run.conf train");
    CHECK(r.status == 1);
    CHECK(r.output.find("nowhere/load.csv") != std::string::npos);

    write_file(t.path() / "both.conf", "data.load_csv = a.csv\nsynth.years = 1\n");
    CHECK(enff(t.path(), "--config both.conf synth").status == 1);
    CHECK(enff(t.path(), "bogus").status != 0);
}

TEST_CASE("train, forecast and evaluate on a small synthetic run") {
    TempDir t("pipeline");
    write_file(t.path() / "run.conf", kSmallRun);
    REQUIRE(enff(t.path(), "--config run.conf synth").status == 0);

    const auto train = enff(t.path(), "--config run.conf train");
    REQUIRE_MESSAGE(train.status == 0, train.output);
    const auto model = t.path() / "out/model";
    std::size_t subnets = 0;
    for (const auto& e : fs::directory_iterator(model / "ensemble")) {
        subnets += e.path().filename().string().ends_with(".model.csv");
    }
    CHECK(subnets == 12);
    for (const char* f : {"bpnn.csv", "bpnn_trace.csv", "arima.csv", "arima_trace.csv"}) CHECK(fs::exists(model / f));
    const auto manifest = slurp(model / "ensemble/manifest.txt");
    const auto arima = slurp(model / "arima.csv");

    REQUIRE(enff(t.path(), "--config run.conf train").status == 0);
    CHECK(slurp(model / "ensemble/manifest.txt") == manifest);
    CHECK(slurp(model / "arima.csv") == arima);

    REQUIRE(enff(t.path(), "--config run.conf forecast").status == 0);
    for (const char* day : {"2008-05-26", "2008-07-04"}) {
        for (const char* m : {"ENFF", "BPNN", "ARIMA"}) {
            const auto f = t.path() / "out/forecasts" / (std::string(day) + "_" + m + ".csv");
            REQUIRE(fs::exists(f));
            CHECK(line_count(slurp(f)) == 25);
        }
    }

    const auto early = enff(t.path(), "--config run.conf forecast --day 2008-01-03");
    CHECK(early.status == 1);
    CHECK(early.output.find("InsufficientHistory") != std::string::npos);

    const auto ev = enff(t.path(), "--config run.conf evaluate");
    REQUIRE_MESSAGE(ev.status == 0, ev.output);
    CHECK(ev.output.find("ENFF") != std::string::npos);
    const auto report = slurp(t.path() / "out/report.csv");
    CHECK(report.rfind("kind,model,day,value\n", 0) == 0);
    CHECK(line_count(slurp(t.path() / "out/scatter.csv")) == 2 * 3 * 24 + 1);
    CHECK(fs::exists(t.path() / "out/report.txt"));
    CHECK(fs::exists(t.path() / "out/series_2008-05-26_ARIMA.csv"));

    REQUIRE(enff(t.path(), "--config run.conf evaluate").status == 0);
    CHECK(slurp(t.path() / "out/report.csv") == report);

    // Training without any seed is refused.
    TempDir u("noseed");
    std::string conf = kSmallRun;
    conf.erase(0, conf.find('\n') + 1);
    write_file(u.path() / "run.conf", conf);
    CHECK(enff(u.path(), "--config run.conf train").status == 1);
}
