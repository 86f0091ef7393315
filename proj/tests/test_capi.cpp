#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "srreg.h"

using nlohmann::json;

TEST_CASE("version and builtin names") {
    CHECK(std::strlen(sr_version()) > 0);
    CHECK(std::string(sr_builtin_dataset_names()) == "star,hbk");
}

TEST_CASE("dataset lifecycle and accessors") {
    sr_dataset* ds = nullptr;
    REQUIRE(sr_dataset_builtin("star", &ds) == SR_OK);
    CHECK(sr_dataset_n(ds) == 47);
    CHECK(sr_dataset_p(ds) == 1);
    CHECK(sr_dataset_hash(ds) != 0);
    sr_dataset_free(ds);

    CHECK(sr_dataset_builtin("nope", &ds) == SR_ERROR_VALIDATION);
    CHECK(std::string(sr_last_error()).find("star") != std::string::npos);
}

TEST_CASE("dataset from arrays validates") {
    double x[4] = {0, 1, 2, 3};
    double y[4] = {1, 3, 5, 7};
    sr_dataset* ds = nullptr;
    REQUIRE(sr_dataset_create(x, y, 4, 1, &ds) == SR_OK);
    CHECK(sr_dataset_n(ds) == 4);
    sr_dataset_free(ds);

    CHECK(sr_dataset_create(x, y, 2, 1, &ds) == SR_ERROR_VALIDATION);
    CHECK(sr_dataset_create(nullptr, y, 4, 1, &ds) == SR_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("sr fit through the c api reproduces the star analysis") {
    sr_dataset* ds = nullptr;
    REQUIRE(sr_dataset_builtin("star", &ds) == SR_OK);

    sr_fit_options opts;
    sr_fit_options_init(&opts);
    CHECK(opts.delta1 == 0.025);
    CHECK(opts.delta2 == 0.01);

    sr_fit_result* f = nullptr;
    REQUIRE(sr_fit(ds, "sr", &opts, &f) == SR_OK);
    CHECK(sr_fit_p(f) == 1);

    int32_t count = sr_fit_outlier_count(f);
    REQUIRE(count == 6);
    std::vector<int32_t> outliers(count);
    REQUIRE(sr_fit_outliers(f, outliers.data()) == SR_OK);
    CHECK(outliers == std::vector<int32_t>{7, 9, 11, 20, 30, 34});

    std::vector<double> w(47), wr(47);
    REQUIRE(sr_fit_weights(f, w.data(), wr.data()) == SR_OK);
    int zero_wr = 0;
    for (double v : wr) {
        CHECK((v == 0.0 || v == 1.0));
        zero_wr += v == 0.0;
    }
    CHECK(zero_wr == 6);

    char* report = nullptr;
    REQUIRE(sr_fit_report_json(f, &report) == SR_OK);
    json j = json::parse(report);
    CHECK(j["method"] == "sr");
    CHECK(j["outlier_indices"] == json::array({7, 9, 11, 20, 30, 34}));
    CHECK(j["provenance"]["delta1"] == 0.025);
    CHECK(j["provenance"]["dataset_hash"].get<std::string>().size() == 16);
    CHECK(j["coefficients"]["slopes"][0]["name"] == "log_Te");
    sr_string_free(report);

    sr_fit_free(f);
    sr_dataset_free(ds);
}

TEST_CASE("ols fit flags nothing") {
    sr_dataset* ds = nullptr;
    REQUIRE(sr_dataset_builtin("star", &ds) == SR_OK);
    sr_fit_result* f = nullptr;
    REQUIRE(sr_fit(ds, "ols", nullptr, &f) == SR_OK);
    CHECK(sr_fit_outlier_count(f) == 0);
    CHECK(sr_fit_r2(f) == doctest::Approx(0.0443).epsilon(0.02));
    double slope = 0.0;
    REQUIRE(sr_fit_slopes(f, &slope) == SR_OK);
    CHECK(slope == doctest::Approx(-0.4133).epsilon(1e-3));
    CHECK(sr_fit_intercept(f) == doctest::Approx(6.7935).epsilon(1e-3));
    sr_fit_free(f);

    CHECK(sr_fit(ds, "nope", nullptr, &f) == SR_ERROR_VALIDATION);
    sr_dataset_free(ds);
}

TEST_CASE("simulation through the c api") {
    sr_sim_config cfg;
    sr_sim_config_init(&cfg);
    cfg.scenario = "neo";
    cfg.p = 3;
    cfg.n = 60;
    cfg.m = 10;
    cfg.delta = 0.2;
    double grid[2] = {0.0, 3.0};
    cfg.lambda_grid = grid;
    cfg.lambda_count = 2;
    cfg.k_grid = grid;
    cfg.k_count = 2;
    cfg.threads = 2;

    sr_sim_result* r = nullptr;
    REQUIRE(sr_simulate(&cfg, &r) == SR_OK);

    char* csv = nullptr;
    REQUIRE(sr_sim_result_csv(r, &csv) == SR_OK);
    CHECK(std::string(csv).rfind("method,scenario,", 0) == 0);
    sr_string_free(csv);

    char* summary = nullptr;
    REQUIRE(sr_sim_result_summary_json(r, &summary) == SR_OK);
    json j = json::parse(summary);
    CHECK(j["config"]["scenario"] == "neo");
    CHECK(j["rollups"].contains("sr"));
    CHECK(j["rollups"].contains("ols"));
    CHECK(j["valid"].get<bool>());
    sr_string_free(summary);
    sr_sim_result_free(r);

    cfg.delta = 0.7;
    CHECK(sr_simulate(&cfg, &r) == SR_ERROR_VALIDATION);
}

TEST_CASE("equivariance through the c api") {
    sr_sim_config cfg;
    sr_sim_config_init(&cfg);
    cfg.p = 3;
    cfg.n = 60;
    cfg.m = 10;
    double grid[1] = {0.0};
    cfg.lambda_grid = grid;
    cfg.lambda_count = 1;
    cfg.k_grid = grid;
    cfg.k_count = 1;

    sr_sim_result* r = nullptr;
    REQUIRE(sr_equivariance(&cfg, "x", &r) == SR_OK);
    char* summary = nullptr;
    REQUIRE(sr_sim_result_summary_json(r, &summary) == SR_OK);
    json j = json::parse(summary);
    CHECK(j["transform"] == "x");
    CHECK(j["rollups"]["ols"]["mmmse"]["phi"].get<double>() <= 1e-8);
    sr_string_free(summary);
    sr_sim_result_free(r);

    CHECK(sr_equivariance(&cfg, "sideways", &r) == SR_ERROR_VALIDATION);
}

TEST_CASE("csv loading errors map to validation status") {
    sr_dataset* ds = nullptr;
    CHECK(sr_dataset_load_csv("/no/such/file.csv", 0, nullptr, &ds) == SR_ERROR_VALIDATION);
}
