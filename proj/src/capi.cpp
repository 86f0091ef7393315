#include "srreg.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "srreg/dataset.hpp"
#include "srreg/errors.hpp"
#include "srreg/regression.hpp"
#include "srreg/simulate.hpp"

using nlohmann::json;

struct sr_dataset {
    srreg::Dataset ds;
};

struct sr_fit_result {
    srreg::RegressionFit fit;
    srreg::FitOptions opts;
    uint64_t dataset_hash = 0;
    int n = 0;
    std::vector<std::string> names;  // p carrier names + response name
};

struct sr_sim_result {
    srreg::SimResult result;
};

namespace {

thread_local std::string g_last_error;

sr_status set_error(sr_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
sr_status guard(Fn&& fn) {
    try {
        return fn();
    } catch (const srreg::ValidationError& e) {
        return set_error(SR_ERROR_VALIDATION, e.what());
    } catch (const srreg::NumericalError& e) {
        return set_error(SR_ERROR_NUMERICAL, e.what());
    } catch (const std::bad_alloc&) {
        return set_error(SR_ERROR_IO, "out of memory");
    } catch (const std::exception& e) {
        return set_error(SR_ERROR_INVALID_ARGUMENT, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* sr_version(void) { return "1.0.0"; }

const char* sr_last_error(void) { return g_last_error.c_str(); }

void sr_string_free(char* s) { delete[] s; }

sr_status sr_dataset_create(const double* carriers, const double* response, int32_t n,
                            int32_t p, sr_dataset** out) {
    if (!carriers || !response || !out)
        return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        auto handle = std::make_unique<sr_dataset>();
        handle->ds.x = srreg::Matrix(n, p);
        handle->ds.y.assign(response, response + n);
        for (int32_t i = 0; i < n; ++i)
            for (int32_t j = 0; j < p; ++j) handle->ds.x(i, j) = carriers[i * p + j];
        handle->ds.validate_for_fit();
        *out = handle.release();
        return SR_OK;
    });
}

sr_status sr_dataset_load_csv(const char* path, int32_t has_header,
                              const char* response_column, sr_dataset** out) {
    if (!path || !out) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        srreg::CsvOptions opts;
        opts.header = has_header != 0;
        if (response_column) opts.response_column = response_column;
        auto handle = std::make_unique<sr_dataset>();
        handle->ds = srreg::load_csv(path, opts);
        *out = handle.release();
        return SR_OK;
    });
}

sr_status sr_dataset_builtin(const char* name, sr_dataset** out) {
    if (!name || !out) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        auto handle = std::make_unique<sr_dataset>();
        handle->ds = srreg::builtin_dataset(name);
        *out = handle.release();
        return SR_OK;
    });
}

const char* sr_builtin_dataset_names(void) { return "star,hbk"; }

int32_t sr_dataset_n(const sr_dataset* ds) { return ds ? ds->ds.n() : 0; }
int32_t sr_dataset_p(const sr_dataset* ds) { return ds ? ds->ds.p() : 0; }
uint64_t sr_dataset_hash(const sr_dataset* ds) { return ds ? ds->ds.hash() : 0; }

sr_status sr_dataset_write_csv(const sr_dataset* ds, const char* path) {
    if (!ds || !path) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        srreg::write_csv(ds->ds, path);
        return SR_OK;
    });
}

void sr_dataset_free(sr_dataset* ds) { delete ds; }

void sr_fit_options_init(sr_fit_options* opts) {
    if (!opts) return;
    opts->delta1 = 0.025;
    opts->delta2 = 0.01;
}

sr_status sr_fit(const sr_dataset* ds, const char* method, const sr_fit_options* opts,
                 sr_fit_result** out) {
    if (!ds || !method || !out) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        srreg::Method m = srreg::method_from_name(method);
        srreg::FitOptions fo;
        if (opts) {
            fo.delta1 = opts->delta1;
            fo.delta2 = opts->delta2;
        }
        auto handle = std::make_unique<sr_fit_result>();
        handle->fit = srreg::fit(ds->ds, m, fo);
        handle->opts = fo;
        handle->dataset_hash = ds->ds.hash();
        handle->n = ds->ds.n();
        handle->names = ds->ds.names;
        *out = handle.release();
        return SR_OK;
    });
}

int32_t sr_fit_p(const sr_fit_result* f) {
    return f ? static_cast<int32_t>(f->fit.beta.size()) : 0;
}
double sr_fit_intercept(const sr_fit_result* f) { return f ? f->fit.alpha : 0.0; }

sr_status sr_fit_slopes(const sr_fit_result* f, double* out) {
    if (!f || !out) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    for (size_t j = 0; j < f->fit.beta.size(); ++j) out[j] = f->fit.beta[j];
    return SR_OK;
}

double sr_fit_sigma2(const sr_fit_result* f) { return f ? f->fit.sigma2 : 0.0; }
double sr_fit_r2(const sr_fit_result* f) { return f ? f->fit.r2 : 0.0; }
double sr_fit_adjusted_r2(const sr_fit_result* f) { return f ? f->fit.adj_r2 : 0.0; }

int32_t sr_fit_outlier_count(const sr_fit_result* f) {
    return f ? static_cast<int32_t>(f->fit.outliers.size()) : 0;
}

sr_status sr_fit_outliers(const sr_fit_result* f, int32_t* out) {
    if (!f || !out) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    for (size_t i = 0; i < f->fit.outliers.size(); ++i) out[i] = f->fit.outliers[i];
    return SR_OK;
}

sr_status sr_fit_weights(const sr_fit_result* f, double* w, double* wr) {
    if (!f) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    if (w)
        for (size_t i = 0; i < f->fit.w.size(); ++i) w[i] = f->fit.w[i];
    if (wr)
        for (size_t i = 0; i < f->fit.wr.size(); ++i) wr[i] = f->fit.wr[i];
    return SR_OK;
}

sr_status sr_fit_report_json(const sr_fit_result* f, char** out) {
    if (!f || !out) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        json j;
        j["method"] = srreg::method_name(f->fit.method);
        json coeffs;
        coeffs["intercept"] = f->fit.alpha;
        json slopes = json::array();
        for (size_t b = 0; b < f->fit.beta.size(); ++b) {
            std::string name = b < f->names.size() && f->names.size() > f->fit.beta.size()
                                   ? f->names[b]
                                   : "x" + std::to_string(b + 1);
            slopes.push_back({{"name", name}, {"value", f->fit.beta[b]}});
        }
        coeffs["slopes"] = slopes;
        j["coefficients"] = coeffs;
        j["sigma2"] = f->fit.sigma2;
        j["r2"] = f->fit.r2;
        j["adjusted_r2"] = f->fit.adj_r2;
        j["outlier_indices"] = f->fit.outliers;
        j["weights"] = {{"w", f->fit.w}, {"wr", f->fit.wr}};
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx",
                      static_cast<unsigned long long>(f->dataset_hash));
        j["provenance"] = {{"delta1", f->opts.delta1},
                           {"delta2", f->opts.delta2},
                           {"dataset_hash", hash},
                           {"n", f->n}};
        *out = dup_string(j.dump(2) + "\n");
        return SR_OK;
    });
}

void sr_fit_free(sr_fit_result* f) { delete f; }

void sr_sim_config_init(sr_sim_config* cfg) {
    if (!cfg) return;
    cfg->scenario = "ne";
    cfg->p = 5;
    cfg->n = 100;
    cfg->m = 200;
    cfg->delta = 0.0;
    cfg->lambda_grid = nullptr;
    cfg->lambda_count = 0;
    cfg->k_grid = nullptr;
    cfg->k_count = 0;
    cfg->seed = 42;
    cfg->threads = 0;
    cfg->delta1 = 0.025;
    cfg->delta2 = 0.01;
    cfg->fixed_count = 0;
    cfg->timing = 0;
}

namespace {

srreg::ScenarioConfig convert_config(const sr_sim_config* cfg) {
    srreg::ScenarioConfig c;
    c.scenario = srreg::scenario_from_name(cfg->scenario ? cfg->scenario : "ne");
    c.p = cfg->p;
    c.n = cfg->n;
    c.m = cfg->m;
    c.delta = cfg->delta;
    if (cfg->lambda_grid && cfg->lambda_count > 0)
        c.lambda_grid.assign(cfg->lambda_grid, cfg->lambda_grid + cfg->lambda_count);
    if (cfg->k_grid && cfg->k_count > 0)
        c.k_grid.assign(cfg->k_grid, cfg->k_grid + cfg->k_count);
    c.seed = cfg->seed;
    c.threads = cfg->threads;
    c.delta1 = cfg->delta1;
    c.delta2 = cfg->delta2;
    c.mode = cfg->fixed_count ? srreg::ContaminationMode::FixedCount
                              : srreg::ContaminationMode::Bernoulli;
    c.timing = cfg->timing != 0;
    return c;
}

}  // namespace

sr_status sr_simulate(const sr_sim_config* cfg, sr_sim_result** out) {
    if (!cfg || !out) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        auto handle = std::make_unique<sr_sim_result>();
        handle->result = srreg::run_simulation(convert_config(cfg));
        *out = handle.release();
        return SR_OK;
    });
}

sr_status sr_equivariance(const sr_sim_config* cfg, const char* transform,
                          sr_sim_result** out) {
    if (!cfg || !transform || !out)
        return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        auto handle = std::make_unique<sr_sim_result>();
        handle->result =
            srreg::run_equivariance(convert_config(cfg), srreg::transform_from_name(transform));
        *out = handle.release();
        return SR_OK;
    });
}

sr_status sr_sim_result_csv(const sr_sim_result* r, char** out) {
    if (!r || !out) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        *out = dup_string(r->result.to_csv());
        return SR_OK;
    });
}

sr_status sr_sim_result_summary_json(const sr_sim_result* r, char** out) {
    if (!r || !out) return set_error(SR_ERROR_INVALID_ARGUMENT, "null argument");
    return guard([&] {
        *out = dup_string(r->result.summary_json());
        return SR_OK;
    });
}

void sr_sim_result_free(sr_sim_result* r) { delete r; }

}  // extern "C"
