// End-to-end checks of the command line binary; the path arrives in the
// SRREG_CLI environment variable.
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli() {
    const char* path = std::getenv("SRREG_CLI");
    REQUIRE_MESSAGE(path != nullptr, "SRREG_CLI not set");
    return path;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    fs::path tmp = fs::temp_directory_path() / "srreg_cli_out.txt";
    std::string cmd = cli() + " " + args + " > " + tmp.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    std::ifstream in(tmp);
    std::stringstream buf;
    buf << in.rdbuf();
    return {WEXITSTATUS(rc), buf.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void key_paths(const json& j, const std::string& prefix, std::set<std::string>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            key_paths(it.value(), prefix + "/" + it.key(), out);
    } else {
        out.insert(prefix);
    }
}

}  // namespace

TEST_CASE("fit star with sr flags the known outliers") {
    RunResult r = run("fit --dataset star --method sr --json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["outlier_indices"] == json::array({7, 9, 11, 20, 30, 34}));
    CHECK(j["method"] == "sr");
}

TEST_CASE("fit hbk with sr flags the bad leverage block only") {
    RunResult r = run("fit --dataset hbk --method sr --json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["outlier_indices"] == json::array({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
}

TEST_CASE("fit star with ols flags nothing") {
    RunResult r = run("fit --dataset star --method ols --json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["outlier_indices"].empty());
    double w_ones = 0;
    for (const auto& v : j["weights"]["w"]) w_ones += v.get<double>();
    CHECK(w_ones == 47.0);
}

TEST_CASE("fit human output mentions the outliers") {
    RunResult r = run("fit --dataset star --method sr");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("outliers") != std::string::npos);
    CHECK(r.out.find("7 9 11 20 30 34") != std::string::npos);
}

TEST_CASE("fit report json is schema-stable") {
    RunResult r = run("fit --dataset hbk --method sr --json");
    REQUIRE(r.exit_code == 0);
    std::set<std::string> keys;
    key_paths(json::parse(r.out), "", keys);
    std::set<std::string> expected{
        "/coefficients/intercept", "/coefficients/slopes", "/method",
        "/outlier_indices",        "/provenance/dataset_hash",
        "/provenance/delta1",      "/provenance/delta2",
        "/provenance/n",           "/r2",
        "/adjusted_r2",            "/sigma2",
        "/weights/w",              "/weights/wr"};
    CHECK(keys == expected);
}

TEST_CASE("validation errors exit with code 2") {
    RunResult r = run("fit --dataset unknown --method sr");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("error") != std::string::npos);

    fs::path bad = fs::temp_directory_path() / "srreg_bad.csv";
    std::ofstream(bad) << "1,2\n2,3\noops,4\n4,5\n";
    RunResult r2 = run("fit --csv " + bad.string() + " --method ols");
    CHECK(r2.exit_code == 2);
    CHECK(r2.out.find("row 3") != std::string::npos);
    fs::remove(bad);
}

TEST_CASE("numerical failures exit with code 3") {
    fs::path collinear = fs::temp_directory_path() / "srreg_collinear.csv";
    std::ofstream(collinear) << "1,2,0\n2,4,1\n3,6,0\n4,8,1\n5,10,0\n6,12,1\n";
    RunResult r = run("fit --csv " + collinear.string() + " --method ols");
    CHECK(r.exit_code == 3);
    fs::remove(collinear);
}

TEST_CASE("simulate runs are deterministic and thread-count independent") {
    fs::path dir1 = fs::temp_directory_path() / "srreg_sim1";
    fs::path dir2 = fs::temp_directory_path() / "srreg_sim2";
    fs::path dir3 = fs::temp_directory_path() / "srreg_sim3";
    std::string base = "simulate --scenario ne --p 5 --n 100 --m 40 --seed 42 --out ";
    REQUIRE(run("--threads 2 " + base + dir1.string()).exit_code == 0);
    REQUIRE(run("--threads 2 " + base + dir2.string()).exit_code == 0);
    REQUIRE(run("--threads 1 " + base + dir3.string()).exit_code == 0);

    CHECK(slurp(dir1 / "metrics.csv") == slurp(dir2 / "metrics.csv"));
    CHECK(slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json"));
    CHECK(slurp(dir1 / "metrics.csv") == slurp(dir3 / "metrics.csv"));
    CHECK(slurp(dir1 / "summary.json") == slurp(dir3 / "summary.json"));

    json j = json::parse(slurp(dir1 / "summary.json"));
    CHECK(j["config"]["seed"] == 42);
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    fs::remove_all(dir3);
}

TEST_CASE("neo simulation emits one csv row per method and cell") {
    fs::path dir = fs::temp_directory_path() / "srreg_sim_neo";
    RunResult r = run(
        "simulate --scenario neo --delta 0.10 --p 3 --n 60 --m 10 "
        "--lambda-grid 0,1,2 --k-grid 0,4 --out " +
        dir.string());
    REQUIRE(r.exit_code == 0);
    std::string csv = slurp(dir / "metrics.csv");
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 2 * 3 * 2);
    fs::remove_all(dir);
}

TEST_CASE("breakdown summary orders sr below ols") {
    fs::path dir = fs::temp_directory_path() / "srreg_bdp";
    RunResult r = run(
        "breakdown --delta 0.45 --p 5 --n 100 --m 25 "
        "--lambda-grid 0,0.5,1 --k-grid 0,5,10 --out " +
        dir.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(slurp(dir / "summary.json"));
    double sr = j["rollups"]["sr"]["mmmse"]["beta"].get<double>();
    double ols = j["rollups"]["ols"]["mmmse"]["beta"].get<double>();
    CHECK(sr < ols);
    fs::remove_all(dir);
}

TEST_CASE("breakdown rejects delta at or beyond the ceiling") {
    RunResult r = run("breakdown --delta 0.5 --p 3 --n 30 --m 5 --out /tmp/srreg_never");
    CHECK(r.exit_code == 2);
    RunResult r2 = run("breakdown --p 3 --n 30 --m 5 --out /tmp/srreg_never");
    CHECK(r2.exit_code == 2);
}

TEST_CASE("equivariance subcommand writes artifacts") {
    fs::path dir = fs::temp_directory_path() / "srreg_equi";
    RunResult r = run(
        "equivariance --transform x --p 3 --n 60 --m 10 "
        "--lambda-grid 0 --k-grid 0 --out " +
        dir.string());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(slurp(dir / "summary.json"));
    CHECK(j["transform"] == "x");
    CHECK(j["rollups"]["ols"]["mmmse"]["phi"].get<double>() <= 1e-8);
    fs::remove_all(dir);
}

TEST_CASE("datasets subcommand lists the embedded data") {
    RunResult r = run("datasets");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("star") != std::string::npos);
    CHECK(r.out.find("n=47") != std::string::npos);
    CHECK(r.out.find("hbk") != std::string::npos);
    CHECK(r.out.find("n=75") != std::string::npos);
}
