#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fiberdd/harness.hpp"

using namespace fiberdd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fiberdd_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::vector<std::vector<double>> read_csv(const fs::path& path, std::string* header = nullptr) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

SimulationConfig small_config(const fs::path& out) {
    SimulationConfig cfg;
    cfg.length_max = 12.0;
    cfg.grid_points = 24;
    cfg.out = out.string();
    return cfg;
}

}  // namespace

TEST_CASE("shipped default configuration matches the built-in defaults") {
    SimulationConfig from_file;
    apply_config_file(from_file, fs::path(FIBERDD_SOURCE_DIR) / "config" / "default.conf");
    CHECK(from_file.resolved() == SimulationConfig{}.resolved());
}

TEST_CASE("settings accept dashes or underscores") {
    SimulationConfig cfg;
    apply_setting(cfg, "noise-amp", "0.05");
    apply_setting(cfg, "length_max", "20");
    apply_setting(cfg, "sequence", "cpmg");
    apply_setting(cfg, "pulses", "4");
    CHECK(cfg.noise.amplitude == 0.05);
    CHECK(cfg.length_max == 20.0);
    CHECK(cfg.pulse_sequence().label() == "cpmg:N=4");
    apply_setting(cfg, "pulses", "none");
    CHECK(cfg.pulse_sequence().label() == "cpmg:n=0.2");
    CHECK_THROWS_AS(apply_setting(cfg, "colour", "red"), UsageError);
    CHECK_THROWS_AS(apply_setting(cfg, "trials", "1.5"), UsageError);
    CHECK_THROWS_AS(apply_setting(cfg, "sigma", "wide"), UsageError);
}

TEST_CASE("config stream errors carry the line number") {
    SimulationConfig cfg;
    std::istringstream in("# comment\nalpha = 1.5\n\nsigma = abc\n");
    try {
        apply_config_stream(cfg, in, "run.conf");
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("run.conf:4") != std::string::npos);
    }
    CHECK(cfg.noise.exponent == 1.5);
    CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/run.conf"), IoError);
}

TEST_CASE("validation collects every problem") {
    SimulationConfig cfg;
    cfg.noise.exponent = 3.0;
    cfg.profile.sigma = -1.0;
    cfg.grid_points = 0;
    cfg.pulses = 4;
    const auto report = cfg.validation_report();
    CHECK(report.size() == 4);
    try {
        cfg.validate();
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("grid_points") != std::string::npos);
        CHECK(msg.find("sigma") != std::string::npos);
        CHECK(msg.find("exponent") != std::string::npos);
        CHECK(msg.find("pulses") != std::string::npos);
    }
    SimulationConfig bad_state;
    bad_state.state = "werner:1.5";
    CHECK_FALSE(bad_state.validation_report().empty());
    bad_state.state = "ghz";
    CHECK_FALSE(bad_state.validation_report().empty());
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
    CHECK(format_shortest(0.1) == "0.1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("simulate writes the curve CSV") {
    TempDir tmp;
    const auto out = tmp.path / "curve.csv";
    const auto result = run_simulate(small_config(out));
    std::string header;
    const auto rows = read_csv(out, &header);
    CHECK(header == "L,f_L,gamma,concurrence");
    REQUIRE(rows.size() == 24);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][0] > rows[i - 1][0]);
    CHECK(rows.back()[3] == 0.0);
    CHECK(result.esd.has_value());
    CHECK(result.summary.rfind("esd_length=", 0) == 0);
    CHECK(result.summary.find("failed_points=0") != std::string::npos);
}

TEST_CASE("zero noise leaves the concurrence column constant") {
    TempDir tmp;
    auto cfg = small_config(tmp.path / "quiet.csv");
    apply_setting(cfg, "noise-amp", "0");
    const auto result = run_simulate(cfg);
    const auto rows = read_csv(cfg.out);
    for (const auto& r : rows) CHECK(r[3] == rows.front()[3]);
    CHECK_FALSE(result.esd.has_value());
    CHECK(result.summary.rfind("esd_length=none", 0) == 0);
}

TEST_CASE("doubling the pulse density never lowers the concurrence") {
    TempDir tmp;
    auto one = small_config(tmp.path / "d1.csv");
    apply_setting(one, "sequence", "cpmg");
    apply_setting(one, "density", "1");
    auto two = one;
    two.out = (tmp.path / "d2.csv").string();
    apply_setting(two, "density", "2");
    run_simulate(one);
    run_simulate(two);
    const auto a = read_csv(one.out), b = read_csv(two.out);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i][3] >= a[i][3]);
}

TEST_CASE("simulate reports unwritable output") {
    auto cfg = small_config("/nonexistent/dir/curve.csv");
    CHECK_THROWS_AS(run_simulate(cfg), IoError);
}

TEST_CASE("figure presets") {
    SimulationConfig cfg;
    cfg.length_max = 20.0;
    cfg.grid_points = 20;
    cfg.max_pulses = 12;

    const auto b = compute_figure(FigurePreset::fig2b, cfg);
    REQUIRE(b.series.size() == 2);
    for (std::size_t i = 0; i < b.series[0].curve.points.size(); ++i)
        CHECK(b.series[0].curve.points[i].concurrence >= b.series[1].curve.points[i].concurrence);

    const auto a = compute_figure(FigurePreset::fig2a, cfg);
    REQUIRE(a.series.size() == 4);
    for (std::size_t s = 1; s < a.series.size(); ++s)
        for (std::size_t i = 0; i < a.series[s].curve.points.size(); ++i)
            CHECK(a.series[s].curve.points[i].concurrence >= a.series[s - 1].curve.points[i].concurrence);

    const auto f3 = compute_figure(FigurePreset::fig3, cfg);
    REQUIRE(f3.series.size() == 1);
    const auto& scan = f3.series[0].curve.points;
    REQUIRE(scan.size() == 13);
    for (std::size_t n = 0; n < scan.size(); ++n) {
        CHECK(scan[n].pulses == static_cast<int>(n));
        CHECK(scan[n].length == kFig3Length);
    }
    CHECK(scan.back().concurrence > scan.front().concurrence);

    std::ostringstream os;
    write_figure_csv(os, f3);
    CHECK(os.str().find("\nseries,pulses,L,f_L,gamma,concurrence\npulse_scan,0,50,") != std::string::npos);

    CHECK(parse_figure("fig4") == FigurePreset::fig4);
    CHECK_THROWS_AS(parse_figure("fig5"), UsageError);
}

TEST_CASE("figure CSV lands in the output directory") {
    TempDir tmp;
    SimulationConfig cfg;
    cfg.length_max = 5.0;
    cfg.grid_points = 5;
    const auto path = run_figure(FigurePreset::fig2b, cfg, tmp.path / "figs");
    CHECK(path == tmp.path / "figs" / "fig2b.csv");
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "# preset = fig2b");
}

TEST_CASE("mc-check with no noise has z exactly zero") {
    SimulationConfig cfg;
    cfg.noise.amplitude = 0.0;
    cfg.mc.trials = 100;
    const auto rep = run_mc_check(cfg);
    CHECK(rep.z_score == 0.0);
    CHECK(rep.passed);
}

TEST_CASE("mc-check report is reproducible") {
    SimulationConfig cfg;
    cfg.mc.trials = 2000;
    cfg.mc.resolution = 2000;
    cfg.mc.frequency_modes = 512;
    const auto a = run_mc_check(cfg);
    const auto b = run_mc_check(cfg);
    CHECK(a.text == b.text);
    CHECK(a.passed);
    CHECK(a.text.find("result = pass") != std::string::npos);
}

TEST_CASE("mc-check refuses oversized grids with a sizing hint") {
    SimulationConfig cfg;
    cfg.mc_length = 5000.0;
    try {
        (void)run_mc_check(cfg);
        FAIL("expected a usage error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("reduce the length or the resolution") != std::string::npos);
    }
}
