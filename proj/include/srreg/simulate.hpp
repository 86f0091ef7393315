#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "srreg/dataset.hpp"
#include "srreg/regression.hpp"
#include "srreg/rng.hpp"

namespace srreg {

enum class Scenario { NE, TE, NEO };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

enum class ContaminationMode { Bernoulli, FixedCount };

struct ScenarioConfig {
    Scenario scenario = Scenario::NE;
    int p = 5;
    int n = 100;
    int m = 200;                 // replications
    double delta = 0.0;          // contamination fraction, < 0.5
    Vec lambda_grid;             // carrier outlier magnitudes
    Vec k_grid;                  // response outlier magnitudes
    uint64_t seed = 42;
    int threads = 0;             // 0: hardware concurrency
    double delta1 = 0.025;
    double delta2 = 0.01;
    ContaminationMode mode = ContaminationMode::Bernoulli;
    bool timing = false;

    void validate() const;
};

/// The grid used throughout the robustness experiments:
/// 0, 0.5, 1, 1.5, 2, 3, ..., 10.
Vec paper_magnitude_grid();
/// Integer grid 0..10.
Vec integer_magnitude_grid();

struct GeneratedDataset {
    Dataset data;
    int contaminated = 0;
};

/// Deterministic function of (config, replicate): carriers standard normal,
/// response standard normal (NE), t3 (TE), or contaminated normal (NEO).
/// Base draws and contamination draws use separate substreams so the clean
/// part of a replicate is byte-identical across delta values.
GeneratedDataset generate(const ScenarioConfig& cfg, double lambda, double k, int replicate);

struct MetricsCell {
    std::string method;
    double lambda = 0.0;
    double k = 0.0;
    double mse_beta = 0.0;
    double mse_alpha = 0.0;
    double mse_phi = 0.0;  // joint vector, per-coordinate
    double bias2_beta = 0.0;
    double bias2_alpha = 0.0;
    int failures = 0;
};

struct Rollup {
    std::map<double, double> mmse_lambda_beta;
    std::map<double, double> mmse_lambda_alpha;
    std::map<double, double> mmse_lambda_phi;
    std::map<double, double> mmbias_lambda_beta;
    double mmmse_beta = 0.0;
    double mmmse_alpha = 0.0;
    double mmmse_phi = 0.0;
    double mmbias_beta = 0.0;
    double mmbias_alpha = 0.0;
};

struct SimResult {
    ScenarioConfig config;
    std::string command;  // simulate | equivariance | breakdown
    std::string transform;  // equivariance only
    std::vector<MetricsCell> cells;
    std::map<std::string, Rollup> rollups;     // per method
    std::map<std::string, double> efficiency;  // per robust method, NE only
    std::map<std::string, int> failures;
    std::map<std::string, double> seconds_per_fit;  // filled when timing
    bool valid = true;

    std::string to_csv() const;
    std::string summary_json() const;
};

/// Monte-Carlo MSE/bias table for SR and OLS over the configured grids.
/// NE/TE collapse to a single cell.
SimResult run_simulation(const ScenarioConfig& cfg, const std::string& command = "simulate");

enum class EquivarianceTransform { RegressionY, X };

EquivarianceTransform transform_from_name(const std::string& name);
std::string transform_name(EquivarianceTransform t);

/// Per-replicate transforms for the equivariance experiments. Exposed for
/// tests; `draw_*` redraws any coefficient smaller than 0.05 in magnitude.
struct YTransform {
    double c = 1.0;
    Vec g;       // p
    double v = 0.0;
};
struct XTransform {
    Matrix a;      // p x p, a = t * diag(d)
    Matrix a_inv;  // diag(1/d) * t'
};

YTransform draw_y_transform(RandomStream& rng, int p);
XTransform draw_x_transform(RandomStream& rng, int p);

Dataset apply_y_transform(const Dataset& ds, const YTransform& t);
Dataset apply_x_transform(const Dataset& ds, const XTransform& t);

/// Parameter vector (beta, alpha) predicted by the equivariance law.
Vec predict_y_transform(const Vec& beta, double alpha, const YTransform& t);
Vec predict_x_transform(const Vec& beta, double alpha, const XTransform& t);

/// Squared-deviation table between refitted and predicted parameters under
/// random transforms.
SimResult run_equivariance(const ScenarioConfig& cfg, EquivarianceTransform transform);

}  // namespace srreg
