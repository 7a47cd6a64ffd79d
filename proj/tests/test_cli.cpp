#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "polymerlab/io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

// Runs the installed binary with the given arguments; the path is baked in
// at configure time so the test exercises the exact artifact users run.
CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(POLYMERLAB_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("polymerlab_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << content;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Data rows of a CSV: comment and header lines stripped, cells parsed.
std::vector<std::vector<double>> csv_rows(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<double>> rows;
    std::string line;
    bool past_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!past_header) {
            past_header = true;  // exactly one header row follows the comments
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("zero-interaction ensemble diffuses at the Brownian rate") {
    const fs::path dir = fresh_dir("brownian");
    write_file(dir / "run.cfg",
               "kernel.family = gaussian\n"
               "kernel.a = 0\n"
               "sim.horizon = 10\n"
               "sim.replicas = 1000\n"
               "sim.output_times = uniform:0.5\n"
               "seed = 424242\n");
    const CliResult r = run_cli("simulate -c " + (dir / "run.cfg").string() + " -j 2 -o " +
                                (dir / "out").string());
    CHECK(r.exit_code == 0);

    const auto rows = csv_rows(dir / "out" / "moments.csv");
    REQUIRE(rows.size() == 21);
    std::size_t checked = 0;
    for (const auto& row : rows) {
        REQUIRE(row.size() == 3);
        const double t = row[0], e = row[1];
        if (!(t > 0.0)) continue;
        const double d = e / t;
        CHECK(d >= 0.9);
        CHECK(d <= 1.1);
        ++checked;
    }
    CHECK(checked == 20);

    // The comment block pins the effective configuration.
    const std::string text = slurp(dir / "out" / "moments.csv");
    CHECK(text.find("# config_hash=") != std::string::npos);
    CHECK(text.find("# kernel.a=0") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across worker counts") {
    const fs::path dir = fresh_dir("determinism");
    write_file(dir / "run.cfg",
               "kernel.family = gaussian\n"
               "sim.horizon = 2\n"
               "sim.replicas = 40\n"
               "sim.output_times = uniform:0.5\n"
               "seed = 1337\n");
    const std::string base = "simulate -c " + (dir / "run.cfg").string();
    CHECK(run_cli(base + " -j 1 -o " + (dir / "one").string()).exit_code == 0);
    CHECK(run_cli(base + " -j 2 -o " + (dir / "two").string()).exit_code == 0);
    for (const char* name : {"moments.csv", "autocorrelation.csv", "transform.csv", "summary.json"})
        CHECK(slurp(dir / "one" / name) == slurp(dir / "two" / name));

    const std::string drs = "drs -c " + (dir / "run.cfg").string();
    CHECK(run_cli(drs + " -j 1 -o " + (dir / "drs_one").string()).exit_code == 0);
    CHECK(run_cli(drs + " -j 2 -o " + (dir / "drs_two").string()).exit_code == 0);
    CHECK(slurp(dir / "drs_one" / "scenery_rate.csv") ==
          slurp(dir / "drs_two" / "scenery_rate.csv"));
}

TEST_CASE("bound faces on the default grid show the predicted slopes") {
    const fs::path dir = fresh_dir("bounds");
    const CliResult r = run_cli("bounds --kernel gaussian -o " + (dir / "out").string());
    CHECK(r.exit_code == 0);

    const auto rows = csv_rows(dir / "out" / "bounds.csv");
    REQUIRE(rows.size() == 13);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 6);
        // sandwich ordering per lambda: closed <= variational <= resolvent
        CHECK(row[2] <= row[3] + 1e-6);
        CHECK(row[3] <= row[1] + 1e-6);
    }

    const json j = json::parse(slurp(dir / "out" / "bounds.json"));
    const double upper = j["e_hat_upper_exponent"]["fitted"].get<double>();
    const double lower = j["e_hat_lower_exponent"]["fitted"].get<double>();
    CHECK(std::fabs(upper - (-2.5)) <= 0.05);
    CHECK(lower >= -2.28);
    CHECK(lower <= -2.0);
    CHECK(j["e_hat_upper_exponent"]["target"].get<double>() == -2.5);
    CHECK(j["e_hat_lower_exponent"]["bound"].get<double>() == -2.25);
}

TEST_CASE("power-law fit recovers a synthetic exponent") {
    const fs::path dir = fresh_dir("fit");
    std::ostringstream csv;
    csv << "# synthetic\nt,value\n";
    for (int i = 1; i <= 40; ++i) {
        const double t = 0.25 * i;
        csv << polymer::format_g17(t) << "," << polymer::format_g17(3.0 * std::pow(t, 1.4))
            << "\n";
    }
    write_file(dir / "curve.csv", csv.str());
    const CliResult r = run_cli("fit --csv " + (dir / "curve.csv").string() + " -o " +
                                (dir / "out").string());
    CHECK(r.exit_code == 0);
    const json j = json::parse(slurp(dir / "out" / "fit.json"));
    CHECK(j["exponent"].get<double>() == doctest::Approx(1.4).epsilon(1e-9));
    CHECK(j["points_used"].get<int>() == 40);
}

TEST_CASE("config errors point at the offending line and fail the run") {
    const fs::path dir = fresh_dir("config_errors");
    write_file(dir / "unknown.cfg", "kernel.family = gaussian\nbogus.key = 3\n");
    CliResult r = run_cli("simulate -c " + (dir / "unknown.cfg").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("unknown.cfg:2") != std::string::npos);
    CHECK(r.output.find("bogus.key") != std::string::npos);

    write_file(dir / "nan.cfg", "sim.dt = banana\n");
    r = run_cli("simulate -c " + (dir / "nan.cfg").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("nan.cfg:1") != std::string::npos);

    write_file(dir / "dup.cfg", "seed = 1\nseed = 2\n");
    r = run_cli("simulate -c " + (dir / "dup.cfg").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("dup.cfg:2") != std::string::npos);
}

TEST_CASE("stationarity report carries residual pulls for every check point") {
    const fs::path dir = fresh_dir("stationarity");
    const CliResult r = run_cli("stationarity --kernel gaussian --replicas 60 --seed 11 -j 2 -o " +
                                (dir / "out").string());
    CHECK(r.exit_code == 0);
    const json j = json::parse(slurp(dir / "out" / "stationarity.json"));
    const auto t_checks = j["t_checks"].get<std::vector<double>>();
    const auto lags = j["lags"].get<std::vector<double>>();
    CHECK(j["rows"].size() == t_checks.size() * lags.size());
    CHECK(j["max_cov_pull"].get<double>() > 0.0);
    CHECK(j["max_cov_pull"].get<double>() < 6.0);
    CHECK(j["pass"].is_boolean());
    // default check times {0, 1, 2} activate the increment flip report
    CHECK(j["flip"].is_object());
    CHECK(j["flip"]["t_full"].get<double>() == doctest::Approx(2.0));
}
