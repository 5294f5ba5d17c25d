#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "config.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using namespace foxlink;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run foxlink_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = app::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("foxlink_test_" + name); }

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// Data rows (no comment lines) split on commas; labels here carry no quotes.
std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("preset dumps match the golden files") {
    for (const auto& name : app::preset_names()) {
        CAPTURE(name);
        const auto r = foxlink_cli({"dump-preset", "--preset", name});
        CHECK(r.code == 0);
        CHECK(r.out == slurp(fs::path(FOXLINK_GOLDEN_DIR) / (name + ".json")));
    }
}

TEST_CASE("configuration errors exit with code 2") {
    CHECK(foxlink_cli({"outage", "--preset", "fig9"}).code == 2);
    CHECK(foxlink_cli({"outage", "--config", scratch("missing.json").string()}).code == 2);
    CHECK(foxlink_cli({"outage", "--detection", "3"}).code == 2);
    CHECK(foxlink_cli({"frobnicate"}).code == 2);

    const auto cfg = scratch("bad.json");
    write_file(cfg, R"({"mu_r": 20})");
    auto r = foxlink_cli({"outage", "--config", cfg.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("mu_r") != std::string::npos);

    write_file(cfg, R"({"sweep_start": 30, "sweep_stop": 10})");
    CHECK(foxlink_cli({"outage", "--config", cfg.string()}).code == 2);
    write_file(cfg, R"({"series": [{"label": "x", "kappa": -1}]})");
    CHECK(foxlink_cli({"outage", "--config", cfg.string()}).code == 2);
    write_file(cfg, R"({"samples": 100})");
    CHECK(foxlink_cli({"outage", "--config", cfg.string()}).code == 2);
    CHECK(foxlink_cli({"outage", "--preset", "fig7"}).code == 2);
}

TEST_CASE("flags override the preset") {
    const auto r = foxlink_cli({"dump-preset", "--preset", "fig2", "--scheme", "csi", "--detection", "1", "--seed",
                                "9", "--samples", "2e5", "--asymptotic"});
    REQUIRE(r.code == 0);
    const auto cfg = app::json::parse(r.out);
    CHECK(cfg["scheme"] == "csi");
    CHECK(cfg["r"] == 1);
    CHECK(cfg["seed"] == 9);
    CHECK(cfg["samples"] == 200000);
}

TEST_CASE("CSV quoting, header and column order") {
    const auto cfg = scratch("quote.json");
    write_file(cfg, R"({"sweep_points": 2, "sweep_start": 10, "sweep_stop": 20,
                        "series": [{"label": "strong, \"xi\"=1.1"}], "assumed": ["xi"]})");
    const auto r = foxlink_cli({"capacity", "--config", cfg.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\n\"strong, \"\"xi\"\"=1.1\",10,") != std::string::npos);
    CHECK(r.out.find("# assumed: true xi=1.1\n") != std::string::npos);
    CHECK(r.out.find("\nseries,mu_r_db,analytic,asymptotic,mc_mean,mc_stderr,converged\n") != std::string::npos);
    CHECK(r.out.rfind("# config: {", 0) == std::string::npos);
    CHECK(r.out.find("# config: {") != std::string::npos);
}

TEST_CASE("fig2 sweep: one interferer never worse than two") {
    const auto out = scratch("fig2.csv");
    REQUIRE(foxlink_cli({"outage", "--preset", "fig2", "--out", out.string()}).code == 0);
    const auto rows = rows_of(slurp(out));
    REQUIRE(rows.size() == 27);
    for (std::size_t i = 1; i <= 13; ++i) {
        CHECK(rows[i][0] == "L=1");
        CHECK(rows[i + 13][0] == "L=2");
        CHECK(rows[i][1] == rows[i + 13][1]);
        CHECK(std::stod(rows[i][2]) <= std::stod(rows[i + 13][2]));
        CHECK(rows[i][6] == "true");
    }
}

TEST_CASE("fig7 power allocation: optimal split never worse than equal split") {
    const auto r = foxlink_cli({"power-alloc", "--preset", "fig7"});
    REQUIRE(r.code == 0);
    const auto rows = rows_of(r.out);
    REQUIRE(rows.size() == 23);
    CHECK(rows[0] == std::vector<std::string>{"series", "P_tot_db", "P_F", "P_R", "outage_equal", "outage_optimal",
                                              "objective", "converged"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][5]) <= std::stod(rows[i][4]));
}

TEST_CASE("simulate is reproducible across runs and thread counts") {
    const auto cfg = scratch("sim.json");
    write_file(cfg, R"({"sweep_points": 3, "sweep_start": 0, "sweep_stop": 20, "samples": 20000,
                        "series": [{"label": "a"}, {"label": "b", "L": 1}]})");
    setenv("FOXLINK_THREADS", "1", 1);
    const auto a = foxlink_cli({"simulate", "--config", cfg.string(), "--seed", "7"});
    setenv("FOXLINK_THREADS", "3", 1);
    const auto b = foxlink_cli({"simulate", "--config", cfg.string(), "--seed", "7"});
    unsetenv("FOXLINK_THREADS");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto rows = rows_of(a.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[1][2].empty());
    CHECK(!rows[1][4].empty());
    const auto c = foxlink_cli({"simulate", "--config", cfg.string(), "--seed", "8"});
    CHECK(c.out != a.out);
}

TEST_CASE("sweep specs") {
    auto cfg = app::default_config();
    cfg["sweep_spacing"] = "linear";
    cfg["sweep_start"] = 1.0;
    cfg["sweep_stop"] = 3.0;
    cfg["sweep_points"] = 3;
    const auto s = app::sweep_of(cfg);
    CHECK(s.values() == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(s.column() == "mu_r");
    cfg["sweep_spacing"] = "log-dB";
    cfg["sweep_stop"] = 30.0;
    const auto d = app::sweep_of(cfg);
    CHECK(d.values()[2] == doctest::Approx(1000.0));
    CHECK(d.column() == "mu_r_db");
    CHECK(d.display(100.0) == doctest::Approx(20.0));
}

TEST_CASE("mu_r_db sets the normalized FSO SNR") {
    auto cfg = app::preset("fig2");
    cfg["mu_r_db"] = 30.0;
    const auto sys = app::system_of(cfg);
    CHECK(channels::malaga_derive(sys.fso).mu_r == doctest::Approx(1000.0).epsilon(1e-12));
    CHECK(sys.sirMean() == doctest::Approx(100.0));
}
