// srreg command line: robust (shrinkage-reweighted) regression fits over CSV
// or embedded datasets, plus the Monte-Carlo experiment drivers.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "srreg.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(sr_status s) {
    switch (s) {
        case SR_OK: return 0;
        case SR_ERROR_NUMERICAL: return kExitNumerical;
        default: return kExitValidation;
    }
}

[[noreturn]] void fail(sr_status s) {
    std::cerr << "error: " << sr_last_error() << "\n";
    std::exit(exit_code_for(s));
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "error: cannot write " << tmp << "\n";
            std::exit(kExitValidation);
        }
        out << content;
    }
    fs::rename(tmp, path);
}

std::vector<double> parse_grid(const std::string& text) {
    if (text == "paper") return {0, 0.5, 1, 1.5, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    if (text == "integers") return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> grid;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) {
                try {
                    grid.push_back(std::stod(cur));
                } catch (...) {
                    std::cerr << "error: bad grid value '" << cur << "'\n";
                    std::exit(kExitValidation);
                }
                cur.clear();
            }
        } else {
            cur += c;
        }
    }
    if (grid.empty()) {
        std::cerr << "error: empty grid\n";
        std::exit(kExitValidation);
    }
    return grid;
}

struct DatasetArgs {
    std::string builtin;
    std::string csv;
    bool header = false;
    std::string response;
};

sr_dataset* open_dataset(const DatasetArgs& args) {
    sr_dataset* ds = nullptr;
    sr_status s;
    if (!args.builtin.empty()) {
        s = sr_dataset_builtin(args.builtin.c_str(), &ds);
    } else if (!args.csv.empty()) {
        s = sr_dataset_load_csv(args.csv.c_str(), args.header ? 1 : 0,
                                args.response.empty() ? nullptr : args.response.c_str(), &ds);
    } else {
        std::cerr << "error: provide --dataset or --csv\n";
        std::exit(kExitValidation);
    }
    if (s != SR_OK) fail(s);
    return ds;
}

int cmd_fit(const DatasetArgs& dargs, const std::string& method, double delta1, double delta2,
            bool as_json) {
    sr_dataset* ds = open_dataset(dargs);
    sr_fit_options opts;
    sr_fit_options_init(&opts);
    opts.delta1 = delta1;
    opts.delta2 = delta2;

    sr_fit_result* f = nullptr;
    sr_status s = sr_fit(ds, method.c_str(), &opts, &f);
    if (s != SR_OK) {
        sr_dataset_free(ds);
        fail(s);
    }

    char* report = nullptr;
    s = sr_fit_report_json(f, &report);
    if (s != SR_OK) fail(s);

    if (as_json) {
        std::cout << report;
    } else {
        json j = json::parse(report);
        std::printf("method      %s\n", j["method"].get<std::string>().c_str());
        std::printf("intercept   %.6f\n", j["coefficients"]["intercept"].get<double>());
        for (const auto& slope : j["coefficients"]["slopes"])
            std::printf("%-11s %.6f\n", slope["name"].get<std::string>().c_str(),
                        slope["value"].get<double>());
        std::printf("sigma2      %.6f\n", j["sigma2"].get<double>());
        std::printf("r2          %.4f\n", j["r2"].get<double>());
        std::printf("adj_r2      %.4f\n", j["adjusted_r2"].get<double>());
        std::printf("outliers    ");
        if (j["outlier_indices"].empty()) {
            std::printf("none\n");
        } else {
            bool first = true;
            for (const auto& idx : j["outlier_indices"]) {
                std::printf(first ? "%d" : " %d", idx.get<int>());
                first = false;
            }
            std::printf("\n");
        }
        std::printf("dataset     n=%d hash=%s\n", j["provenance"]["n"].get<int>(),
                    j["provenance"]["dataset_hash"].get<std::string>().c_str());
    }

    sr_string_free(report);
    sr_fit_free(f);
    sr_dataset_free(ds);
    return 0;
}

int run_sim_command(const sr_sim_config& cfg, const char* transform, const std::string& out_dir) {
    sr_sim_result* r = nullptr;
    sr_status s = transform ? sr_equivariance(&cfg, transform, &r) : sr_simulate(&cfg, &r);
    if (s != SR_OK) fail(s);

    char* csv = nullptr;
    char* summary = nullptr;
    if (sr_sim_result_csv(r, &csv) != SR_OK || sr_sim_result_summary_json(r, &summary) != SR_OK)
        fail(SR_ERROR_IO);

    fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    atomic_write(dir / "metrics.csv", csv);
    atomic_write(dir / "summary.json", summary);

    std::printf("seed=%" PRIu64 "\n", cfg.seed);
    std::printf("wrote %s\n", (dir / "metrics.csv").string().c_str());
    std::printf("wrote %s\n", (dir / "summary.json").string().c_str());

    sr_string_free(csv);
    sr_string_free(summary);
    sr_sim_result_free(r);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shrinkage-reweighted robust regression"};
    app.require_subcommand(1);
    app.fallthrough();

    uint64_t seed = 42;
    double delta1 = 0.025, delta2 = 0.01;
    int threads = 0;
    std::string out_dir;
    app.add_option("--seed", seed, "random seed");
    app.add_option("--delta1", delta1, "first-stage tail probability");
    app.add_option("--delta2", delta2, "residual-stage tail probability");
    app.add_option("--threads", threads, "worker threads (0: all cores)");
    app.add_option("--out", out_dir, "output directory for experiment artifacts");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a regression model");
    DatasetArgs dargs;
    std::string method = "sr";
    bool as_json = false;
    fit_cmd->add_option("--dataset", dargs.builtin, "embedded dataset name");
    fit_cmd->add_option("--csv", dargs.csv, "CSV file with carriers and response");
    fit_cmd->add_flag("--header", dargs.header, "CSV has a header row");
    fit_cmd->add_option("--response", dargs.response, "response column name (default: last)");
    fit_cmd->add_option("--method", method, "sr or ols");
    fit_cmd->add_flag("--json", as_json, "print the machine-readable report");

    // shared simulation options
    std::string scenario = "ne";
    int p = 5, n = 100, m = 200;
    double delta = 0.0;
    std::string lambda_grid = "paper", k_grid = "paper";
    bool fixed_count = false, timing = false;
    std::string transform = "regression_y";

    auto add_sim_options = [&](CLI::App* cmd, bool with_scenario) {
        if (with_scenario) cmd->add_option("--scenario", scenario, "ne, te or neo");
        cmd->add_option("--p", p, "carrier dimension");
        cmd->add_option("--n", n, "sample size");
        cmd->add_option("--m", m, "replications");
        cmd->add_option("--delta", delta, "contamination fraction in [0, 0.5)");
        cmd->add_option("--lambda-grid", lambda_grid, "comma list, 'paper' or 'integers'");
        cmd->add_option("--k-grid", k_grid, "comma list, 'paper' or 'integers'");
        cmd->add_flag("--fixed-count", fixed_count, "contaminate exactly round(delta*n) rows");
        cmd->add_flag("--timing", timing, "report wall-clock seconds per fit");
    };

    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo efficiency and robustness table");
    add_sim_options(sim_cmd, true);

    auto* equi_cmd = app.add_subcommand("equivariance", "transformation-law deviation table");
    add_sim_options(equi_cmd, false);
    equi_cmd->add_option("--transform", transform, "regression_y or x");

    auto* bdp_cmd = app.add_subcommand("breakdown", "high-contamination robustness table");
    add_sim_options(bdp_cmd, false);

    auto* data_cmd = app.add_subcommand("datasets", "list embedded datasets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    sr_sim_config cfg;
    sr_sim_config_init(&cfg);
    cfg.p = p;
    cfg.n = n;
    cfg.m = m;
    cfg.delta = delta;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.delta1 = delta1;
    cfg.delta2 = delta2;
    cfg.fixed_count = fixed_count ? 1 : 0;
    cfg.timing = timing ? 1 : 0;
    std::vector<double> lg = parse_grid(lambda_grid);
    std::vector<double> kg = parse_grid(k_grid);
    cfg.lambda_grid = lg.data();
    cfg.lambda_count = static_cast<int32_t>(lg.size());
    cfg.k_grid = kg.data();
    cfg.k_count = static_cast<int32_t>(kg.size());

    if (fit_cmd->parsed()) return cmd_fit(dargs, method, delta1, delta2, as_json);

    if (sim_cmd->parsed()) {
        cfg.scenario = scenario.c_str();
        return run_sim_command(cfg, nullptr, out_dir);
    }

    if (equi_cmd->parsed()) {
        cfg.scenario = delta > 0.0 ? "neo" : "ne";
        if (lambda_grid == "paper" && k_grid == "paper") {
            static std::vector<double> ig = parse_grid("integers");
            cfg.lambda_grid = ig.data();
            cfg.lambda_count = static_cast<int32_t>(ig.size());
            cfg.k_grid = ig.data();
            cfg.k_count = static_cast<int32_t>(ig.size());
        }
        return run_sim_command(cfg, transform.c_str(), out_dir);
    }

    if (bdp_cmd->parsed()) {
        if (delta <= 0.0) {
            std::cerr << "error: breakdown requires --delta in (0, 0.5)\n";
            return kExitValidation;
        }
        cfg.scenario = "neo";
        return run_sim_command(cfg, nullptr, out_dir);
    }

    if (data_cmd->parsed()) {
        std::string names = sr_builtin_dataset_names();
        size_t pos = 0;
        while (pos <= names.size()) {
            size_t comma = names.find(',', pos);
            std::string name =
                names.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!name.empty()) {
                sr_dataset* ds = nullptr;
                if (sr_dataset_builtin(name.c_str(), &ds) == SR_OK) {
                    std::printf("%-8s n=%d p=%d\n", name.c_str(), sr_dataset_n(ds),
                                sr_dataset_p(ds));
                    sr_dataset_free(ds);
                }
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return 0;
    }

    return 0;
}
