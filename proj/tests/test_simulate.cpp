#include <doctest.h>

#include <cmath>

#include "srreg/simulate.hpp"

using namespace srreg;

namespace {

ScenarioConfig quick_config(Scenario s, int m = 50) {
    ScenarioConfig cfg;
    cfg.scenario = s;
    cfg.p = 3;
    cfg.n = 60;
    cfg.m = m;
    cfg.seed = 7;
    cfg.threads = 2;
    return cfg;
}

}  // namespace

TEST_CASE("neo with zero contamination generates byte-identical data to ne") {
    ScenarioConfig ne = quick_config(Scenario::NE);
    ScenarioConfig neo = ne;
    neo.scenario = Scenario::NEO;
    neo.delta = 0.0;
    for (int rep : {0, 1, 5}) {
        GeneratedDataset a = generate(ne, 0.0, 0.0, rep);
        GeneratedDataset b = generate(neo, 3.0, 3.0, rep);
        CHECK(a.data.x == b.data.x);
        CHECK(a.data.y == b.data.y);
        CHECK(b.contaminated == 0);
    }
}

TEST_CASE("vertical outliers keep carriers centered at zero") {
    ScenarioConfig cfg = quick_config(Scenario::NEO);
    cfg.delta = 0.4;
    double carrier_sum = 0.0, response_sum = 0.0;
    int carriers = 0, contaminated = 0;
    for (int rep = 0; rep < 20; ++rep) {
        GeneratedDataset clean = generate(quick_config(Scenario::NE), 0.0, 0.0, rep);
        GeneratedDataset g = generate(cfg, 0.0, 8.0, rep);
        contaminated += g.contaminated;
        for (int i = 0; i < g.data.n(); ++i) {
            bool replaced = false;
            for (int j = 0; j < g.data.p(); ++j)
                if (g.data.x(i, j) != clean.data.x(i, j)) replaced = true;
            if (!replaced) continue;
            for (int j = 0; j < g.data.p(); ++j) {
                carrier_sum += g.data.x(i, j);
                ++carriers;
            }
            response_sum += g.data.y[i];
        }
    }
    REQUIRE(contaminated > 100);
    CHECK(std::fabs(carrier_sum / carriers) < 0.2);  // lambda = 0: centered
    CHECK(response_sum / contaminated > 5.0);        // k = 8: far response
}

TEST_CASE("contamination count concentrates at delta*n") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::NEO;
    cfg.p = 5;
    cfg.n = 100;
    cfg.delta = 0.10;
    cfg.seed = 3;
    long total = 0;
    const int reps = 1000;
    for (int rep = 0; rep < reps; ++rep) total += generate(cfg, 1.0, 1.0, rep).contaminated;
    double mean = static_cast<double>(total) / reps;
    CHECK(mean >= 9.0);
    CHECK(mean <= 11.0);

    cfg.mode = ContaminationMode::FixedCount;
    for (int rep = 0; rep < 20; ++rep) CHECK(generate(cfg, 1.0, 1.0, rep).contaminated == 10);
}

TEST_CASE("student t3 responses are heavier tailed") {
    ScenarioConfig te = quick_config(Scenario::TE);
    te.n = 2000;
    GeneratedDataset g = generate(te, 0.0, 0.0, 0);
    int extreme = 0;
    for (double v : g.data.y)
        if (std::fabs(v) > 4.0) ++extreme;
    // P(|t3| > 4) ~ 1.4%; P(|N| > 4) ~ 0.006%
    CHECK(extreme > 5);
}

TEST_CASE("ne run reports the efficiency ratio") {
    ScenarioConfig cfg = quick_config(Scenario::NE, 30);
    SimResult res = run_simulation(cfg);
    REQUIRE(res.efficiency.count("sr") == 1);
    CHECK(res.efficiency["sr"] > 0.0);
    CHECK(res.efficiency["sr"] < 2.0);
    CHECK(res.cells.size() == 2);  // single cell, two methods
}

TEST_CASE("simulation tables are deterministic across thread counts") {
    ScenarioConfig cfg = quick_config(Scenario::NEO, 20);
    cfg.delta = 0.2;
    cfg.lambda_grid = {0.0, 2.0};
    cfg.k_grid = {0.0, 4.0};
    cfg.threads = 1;
    SimResult a = run_simulation(cfg);
    cfg.threads = 4;
    SimResult b = run_simulation(cfg);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.summary_json() == b.summary_json());
}

TEST_CASE("rollups dominate their cells") {
    ScenarioConfig cfg = quick_config(Scenario::NEO, 15);
    cfg.delta = 0.15;
    cfg.lambda_grid = {0.0, 1.0, 4.0};
    cfg.k_grid = {0.0, 2.0, 6.0};
    SimResult res = run_simulation(cfg);
    for (const MetricsCell& c : res.cells) {
        const Rollup& r = res.rollups.at(c.method);
        CHECK(r.mmse_lambda_beta.at(c.lambda) >= c.mse_beta - 1e-15);
        CHECK(r.mmmse_beta >= c.mse_beta - 1e-15);
        CHECK(r.mmmse_alpha >= c.mse_alpha - 1e-15);
        CHECK(r.mmbias_beta >= c.bias2_beta - 1e-15);
    }
}

TEST_CASE("cell mse dominates squared bias") {
    ScenarioConfig cfg = quick_config(Scenario::NE, 25);
    SimResult res = run_simulation(cfg);
    for (const MetricsCell& c : res.cells) {
        CHECK(c.mse_beta >= c.bias2_beta - 1e-15);
        CHECK(c.mse_alpha >= c.bias2_alpha - 1e-15);
    }
}

TEST_CASE("identity transforms predict exactly") {
    ScenarioConfig cfg = quick_config(Scenario::NE, 1);
    GeneratedDataset g = generate(cfg, 0.0, 0.0, 0);
    RegressionFit f = sr_fit(g.data);

    YTransform ident_y;
    ident_y.c = 1.0;
    ident_y.g.assign(cfg.p, 0.0);
    ident_y.v = 0.0;
    Dataset same = apply_y_transform(g.data, ident_y);
    RegressionFit f2 = sr_fit(same);
    Vec pred = predict_y_transform(f.beta, f.alpha, ident_y);
    for (int j = 0; j < cfg.p; ++j) CHECK(std::fabs(f2.beta[j] - pred[j]) < 1e-10);
    CHECK(std::fabs(f2.alpha - pred[cfg.p]) < 1e-10);

    XTransform ident_x;
    ident_x.a = Matrix::identity(cfg.p);
    ident_x.a_inv = Matrix::identity(cfg.p);
    Dataset same_x = apply_x_transform(g.data, ident_x);
    RegressionFit f3 = sr_fit(same_x);
    Vec pred_x = predict_x_transform(f.beta, f.alpha, ident_x);
    for (int j = 0; j < cfg.p; ++j) CHECK(std::fabs(f3.beta[j] - pred_x[j]) < 1e-10);
    CHECK(std::fabs(f3.alpha - pred_x[cfg.p]) < 1e-10);
}

TEST_CASE("drawn transforms respect the conditioning guard") {
    RandomStream rng(substream_seed(5, 0, 2));
    for (int trial = 0; trial < 50; ++trial) {
        YTransform yt = draw_y_transform(rng, 4);
        CHECK(std::fabs(yt.c) >= 0.05);
        XTransform xt = draw_x_transform(rng, 4);
        Matrix prod = matmul(xt.a, xt.a_inv);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(std::fabs(prod(i, j) - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
}

TEST_CASE("ols is exactly equivariant in the harness") {
    ScenarioConfig cfg = quick_config(Scenario::NE, 25);
    cfg.lambda_grid = {0.0};
    cfg.k_grid = {0.0};
    for (auto t : {EquivarianceTransform::RegressionY, EquivarianceTransform::X}) {
        SimResult res = run_equivariance(cfg, t);
        CHECK(res.rollups.at("ols").mmmse_phi <= 1e-8);
    }
}

TEST_CASE("ols degrades monotonically in contamination") {
    // moderate carrier magnitude: at very large lambda the leverage
    // saturates and the slope bias stops growing with delta
    for (uint64_t seed : {11ULL, 12ULL, 13ULL, 14ULL}) {
        double prev = -1.0;
        for (double delta : {0.0, 0.1, 0.2}) {
            ScenarioConfig cfg;
            cfg.scenario = Scenario::NEO;
            cfg.p = 3;
            cfg.n = 80;
            cfg.m = 40;
            cfg.delta = delta;
            cfg.seed = seed;
            cfg.lambda_grid = {1.0};
            cfg.k_grid = {8.0};
            cfg.threads = 2;
            SimResult res = run_simulation(cfg);
            double mse = res.rollups.at("ols").mmmse_beta;
            CHECK(mse > prev);
            prev = mse;
        }
    }
}

TEST_CASE("config validation") {
    ScenarioConfig cfg = quick_config(Scenario::NEO);
    cfg.delta = 0.5;
    CHECK_THROWS(run_simulation(cfg));
    cfg.delta = 0.2;
    cfg.lambda_grid.clear();
    cfg.k_grid.clear();
    CHECK_THROWS(run_simulation(cfg));
    cfg = quick_config(Scenario::NE);
    cfg.n = cfg.p + 1;
    CHECK_THROWS(run_simulation(cfg));
}

TEST_CASE("csv table has the fixed column order and one row per cell") {
    ScenarioConfig cfg = quick_config(Scenario::NEO, 5);
    cfg.delta = 0.1;
    cfg.lambda_grid = {0.0, 1.0};
    cfg.k_grid = {0.0, 2.0, 3.0};
    SimResult res = run_simulation(cfg);
    std::string csv = res.to_csv();
    CHECK(csv.rfind("method,scenario,p,n,delta,lambda,k,mse_beta,mse_alpha,bias2_beta,bias2_alpha\n",
                    0) == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + 2 * 2 * 3);  // header + methods x lambda x k
}

TEST_CASE("timing is only reported when requested") {
    ScenarioConfig cfg = quick_config(Scenario::NE, 5);
    SimResult plain = run_simulation(cfg);
    CHECK(plain.summary_json().find("timing_seconds_per_fit") == std::string::npos);
    cfg.timing = true;
    SimResult timed = run_simulation(cfg);
    CHECK(timed.summary_json().find("timing_seconds_per_fit") != std::string::npos);
    CHECK(timed.seconds_per_fit.at("ols") < timed.seconds_per_fit.at("sr"));
}
