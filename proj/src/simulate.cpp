#include "srreg/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include <json.hpp>

#include "srreg/errors.hpp"
#include "srreg/numerics.hpp"

namespace srreg {

using nlohmann::json;

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::NE: return "ne";
        case Scenario::TE: return "te";
        case Scenario::NEO: return "neo";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "ne") return Scenario::NE;
    if (name == "te") return Scenario::TE;
    if (name == "neo") return Scenario::NEO;
    throw ValidationError("unknown scenario '" + name + "' (expected ne, te or neo)");
}

std::string transform_name(EquivarianceTransform t) {
    return t == EquivarianceTransform::RegressionY ? "regression_y" : "x";
}

EquivarianceTransform transform_from_name(const std::string& name) {
    if (name == "regression_y") return EquivarianceTransform::RegressionY;
    if (name == "x") return EquivarianceTransform::X;
    throw ValidationError("unknown transform '" + name + "' (expected regression_y or x)");
}

Vec paper_magnitude_grid() { return {0, 0.5, 1, 1.5, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }
Vec integer_magnitude_grid() { return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

void ScenarioConfig::validate() const {
    if (p < 1) throw ValidationError("p must be >= 1");
    if (n < p + 2) throw ValidationError("n must be >= p + 2");
    if (m < 1) throw ValidationError("m must be >= 1");
    if (delta < 0.0 || delta >= 0.5)
        throw ValidationError("delta must lie in [0, 0.5): the breakdown ceiling is 50%");
    if (scenario == Scenario::NEO && delta > 0.0 && (lambda_grid.empty() || k_grid.empty()))
        throw ValidationError("neo scenario needs nonempty lambda and k grids");
    if (!(delta1 > 0.0 && delta1 < 1.0) || !(delta2 > 0.0 && delta2 < 1.0))
        throw ValidationError("delta1 and delta2 must lie in (0, 1)");
}

GeneratedDataset generate(const ScenarioConfig& cfg, double lambda, double k, int replicate) {
    int n = cfg.n, p = cfg.p;
    RandomStream base(substream_seed(cfg.seed, replicate, 0));

    GeneratedDataset out;
    out.data.x = Matrix(n, p);
    out.data.y.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) out.data.x(i, j) = base.normal();
    if (cfg.scenario == Scenario::TE) {
        for (int i = 0; i < n; ++i) out.data.y[i] = base.student_t3();
    } else {
        for (int i = 0; i < n; ++i) out.data.y[i] = base.normal();
    }

    if (cfg.scenario == Scenario::NEO && cfg.delta > 0.0) {
        RandomStream cont(substream_seed(cfg.seed, replicate, 1));
        double mx = lambda * std::sqrt(chisq_quantile(p, 0.99));
        double my = k * std::sqrt(chisq_quantile(1, 0.99));
        double sd = std::sqrt(1.5);
        auto replace = [&](int i) {
            for (int j = 0; j < p; ++j) out.data.x(i, j) = mx + sd * cont.normal();
            out.data.y[i] = my + sd * cont.normal();
            ++out.contaminated;
        };
        if (cfg.mode == ContaminationMode::Bernoulli) {
            for (int i = 0; i < n; ++i)
                if (cont.uniform() < cfg.delta) replace(i);
        } else {
            int count = static_cast<int>(std::llround(cfg.delta * n));
            std::vector<int> idx(n);
            for (int i = 0; i < n; ++i) idx[i] = i;
            for (int i = 0; i < count; ++i) {
                int j = i + static_cast<int>(cont.next_u64() % (n - i));
                std::swap(idx[i], idx[j]);
            }
            std::sort(idx.begin(), idx.begin() + count);
            for (int i = 0; i < count; ++i) replace(idx[i]);
        }
    }
    return out;
}

YTransform draw_y_transform(RandomStream& rng, int p) {
    YTransform t;
    do {
        t.c = rng.normal();
    } while (std::fabs(t.c) < 0.05);
    t.g.resize(p);
    for (int j = 0; j < p; ++j) t.g[j] = rng.normal();
    t.v = rng.normal();
    return t;
}

XTransform draw_x_transform(RandomStream& rng, int p) {
    // Random orthogonal factor: Gram-Schmidt on a standard normal matrix
    // (column norms positive, so the R diagonal is positive).
    Matrix q(p, p);
    while (true) {
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) q(i, j) = rng.normal();
        bool ok = true;
        for (int j = 0; j < p && ok; ++j) {
            for (int t = 0; t < j; ++t) {
                double dp = 0.0;
                for (int i = 0; i < p; ++i) dp += q(i, t) * q(i, j);
                for (int i = 0; i < p; ++i) q(i, j) -= dp * q(i, t);
            }
            double norm = 0.0;
            for (int i = 0; i < p; ++i) norm += q(i, j) * q(i, j);
            norm = std::sqrt(norm);
            if (norm < 1e-10) {
                ok = false;
                break;
            }
            for (int i = 0; i < p; ++i) q(i, j) /= norm;
        }
        if (ok) break;
    }

    Vec d(p);
    for (int j = 0; j < p; ++j) {
        do {
            d[j] = rng.uniform();
        } while (d[j] < 0.05);
    }

    XTransform t;
    t.a = Matrix(p, p);
    t.a_inv = Matrix(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            t.a(i, j) = q(i, j) * d[j];
            t.a_inv(i, j) = q(j, i) / d[i];
        }
    return t;
}

Dataset apply_y_transform(const Dataset& ds, const YTransform& t) {
    Dataset out = ds;
    for (int i = 0; i < ds.n(); ++i) {
        double xg = 0.0;
        for (int j = 0; j < ds.p(); ++j) xg += ds.x(i, j) * t.g[j];
        out.y[i] = ds.y[i] * t.c + xg + t.v;
    }
    return out;
}

Dataset apply_x_transform(const Dataset& ds, const XTransform& t) {
    Dataset out = ds;
    out.x = matmul(ds.x, t.a);
    return out;
}

Vec predict_y_transform(const Vec& beta, double alpha, const YTransform& t) {
    Vec phi(beta.size() + 1);
    for (size_t j = 0; j < beta.size(); ++j) phi[j] = t.c * beta[j] + t.g[j];
    phi[beta.size()] = t.c * alpha + t.v;
    return phi;
}

Vec predict_x_transform(const Vec& beta, double alpha, const XTransform& t) {
    Vec phi(beta.size() + 1);
    Vec nb = matvec(t.a_inv, beta);
    for (size_t j = 0; j < beta.size(); ++j) phi[j] = nb[j];
    phi[beta.size()] = alpha;
    return phi;
}

namespace {

constexpr int kMethodCount = 2;
const char* kMethodNames[kMethodCount] = {"sr", "ols"};

struct Slot {
    // Per-method parameter estimates (beta..., alpha) or deviations.
    Vec value[kMethodCount];
    bool failed[kMethodCount] = {false, false};
    double fit_seconds[kMethodCount] = {0.0, 0.0};
    int fit_count[kMethodCount] = {0, 0};
};

template <typename JobFn>
void run_jobs(int threads, size_t total, JobFn&& fn) {
    if (total == 0) return;
    if (threads <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        threads = hw > 0 ? static_cast<int>(hw) : 1;
    }
    if (static_cast<size_t>(threads) > total) threads = static_cast<int>(total);

    if (threads == 1) {
        for (size_t j = 0; j < total; ++j) fn(j);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            while (true) {
                size_t j = next.fetch_add(1);
                if (j >= total) break;
                fn(j);
            }
        });
    for (auto& th : pool) th.join();
}

Vec fit_phi(const Dataset& ds, Method m, const FitOptions& opts) {
    RegressionFit f = fit(ds, m, opts);
    Vec phi = f.beta;
    phi.push_back(f.alpha);
    return phi;
}

struct CellAccum {
    double sum_sq_beta = 0.0;
    double sum_sq_alpha = 0.0;
    double sum_sq_phi = 0.0;
    Vec sum_phi;
    int ok = 0;
    int failures = 0;

    void add(const Vec& phi, int p) {
        if (sum_phi.empty()) sum_phi.assign(phi.size(), 0.0);
        double sb = 0.0;
        for (int j = 0; j < p; ++j) sb += phi[j] * phi[j];
        double sa = phi[p] * phi[p];
        sum_sq_beta += sb / p;
        sum_sq_alpha += sa;
        sum_sq_phi += (sb + sa) / (p + 1);
        for (size_t j = 0; j < phi.size(); ++j) sum_phi[j] += phi[j];
        ++ok;
    }

    MetricsCell cell(const std::string& method, double lambda, double k, int p) const {
        MetricsCell c;
        c.method = method;
        c.lambda = lambda;
        c.k = k;
        c.failures = failures;
        if (ok > 0) {
            c.mse_beta = sum_sq_beta / ok;
            c.mse_alpha = sum_sq_alpha / ok;
            c.mse_phi = sum_sq_phi / ok;
            double bb = 0.0;
            for (int j = 0; j < p; ++j) {
                double mj = sum_phi[j] / ok;
                bb += mj * mj;
            }
            c.bias2_beta = bb / p;
            double ma = sum_phi[p] / ok;
            c.bias2_alpha = ma * ma;
        }
        return c;
    }
};

void build_rollups(SimResult& res) {
    for (const char* method : kMethodNames) {
        Rollup& r = res.rollups[method];
        for (const MetricsCell& c : res.cells) {
            if (c.method != method) continue;
            auto maxto = [](std::map<double, double>& m, double key, double v) {
                auto it = m.find(key);
                if (it == m.end() || v > it->second) m[key] = v;
            };
            maxto(r.mmse_lambda_beta, c.lambda, c.mse_beta);
            maxto(r.mmse_lambda_alpha, c.lambda, c.mse_alpha);
            maxto(r.mmse_lambda_phi, c.lambda, c.mse_phi);
            maxto(r.mmbias_lambda_beta, c.lambda, c.bias2_beta);
            r.mmmse_beta = std::max(r.mmmse_beta, c.mse_beta);
            r.mmmse_alpha = std::max(r.mmmse_alpha, c.mse_alpha);
            r.mmmse_phi = std::max(r.mmmse_phi, c.mse_phi);
            r.mmbias_beta = std::max(r.mmbias_beta, c.bias2_beta);
            r.mmbias_alpha = std::max(r.mmbias_alpha, c.bias2_alpha);
        }
    }
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

SimResult run_simulation(const ScenarioConfig& cfg, const std::string& command) {
    cfg.validate();

    Vec lambdas = cfg.lambda_grid;
    Vec ks = cfg.k_grid;
    if (cfg.scenario != Scenario::NEO || cfg.delta == 0.0) {
        lambdas = {0.0};
        ks = {0.0};
    }

    FitOptions fit_opts{cfg.delta1, cfg.delta2};
    size_t n_cells = lambdas.size() * ks.size();
    size_t total = n_cells * static_cast<size_t>(cfg.m);
    std::vector<Slot> slots(total);

    run_jobs(cfg.threads, total, [&](size_t job) {
        size_t cell = job / cfg.m;
        int rep = static_cast<int>(job % cfg.m);
        double lambda = lambdas[cell / ks.size()];
        double k = ks[cell % ks.size()];
        GeneratedDataset g = generate(cfg, lambda, k, rep);
        Slot& slot = slots[job];
        for (int mi = 0; mi < kMethodCount; ++mi) {
            Method method = mi == 0 ? Method::SR : Method::OLS;
            auto t0 = std::chrono::steady_clock::now();
            try {
                slot.value[mi] = fit_phi(g.data, method, fit_opts);
            } catch (const std::exception&) {
                slot.failed[mi] = true;
            }
            auto t1 = std::chrono::steady_clock::now();
            slot.fit_seconds[mi] += std::chrono::duration<double>(t1 - t0).count();
            slot.fit_count[mi] += 1;
        }
    });

    SimResult res;
    res.config = cfg;
    res.command = command;

    double eff_num = 0.0, eff_den = 0.0;
    double total_seconds[kMethodCount] = {0.0, 0.0};
    long total_fits[kMethodCount] = {0, 0};
    int total_failures[kMethodCount] = {0, 0};

    for (size_t cell = 0; cell < n_cells; ++cell) {
        double lambda = lambdas[cell / ks.size()];
        double k = ks[cell % ks.size()];
        CellAccum acc[kMethodCount];
        for (int rep = 0; rep < cfg.m; ++rep) {
            const Slot& slot = slots[cell * cfg.m + rep];
            for (int mi = 0; mi < kMethodCount; ++mi) {
                if (slot.failed[mi]) {
                    ++acc[mi].failures;
                    ++total_failures[mi];
                } else {
                    acc[mi].add(slot.value[mi], cfg.p);
                }
                total_seconds[mi] += slot.fit_seconds[mi];
                total_fits[mi] += slot.fit_count[mi];
            }
            if (cfg.scenario == Scenario::NE && !slot.failed[0] && !slot.failed[1]) {
                double no = 0.0, ns = 0.0;
                for (double v : slot.value[1]) no += v * v;
                for (double v : slot.value[0]) ns += v * v;
                eff_num += no;
                eff_den += ns;
            }
        }
        for (int mi = 0; mi < kMethodCount; ++mi)
            res.cells.push_back(acc[mi].cell(kMethodNames[mi], lambda, k, cfg.p));
    }

    build_rollups(res);
    for (int mi = 0; mi < kMethodCount; ++mi) {
        res.failures[kMethodNames[mi]] = total_failures[mi];
        if (total_failures[mi] * 100 > static_cast<long>(total)) res.valid = false;
        if (cfg.timing && total_fits[mi] > 0)
            res.seconds_per_fit[kMethodNames[mi]] = total_seconds[mi] / total_fits[mi];
    }
    if (cfg.scenario == Scenario::NE && eff_den > 0.0) res.efficiency["sr"] = eff_num / eff_den;
    return res;
}

SimResult run_equivariance(const ScenarioConfig& cfg, EquivarianceTransform transform) {
    cfg.validate();

    Vec lambdas = cfg.lambda_grid.empty() ? integer_magnitude_grid() : cfg.lambda_grid;
    Vec ks = cfg.k_grid.empty() ? integer_magnitude_grid() : cfg.k_grid;
    ScenarioConfig gen_cfg = cfg;
    if (cfg.delta == 0.0) gen_cfg.scenario = Scenario::NE;

    FitOptions fit_opts{cfg.delta1, cfg.delta2};
    size_t n_cells = lambdas.size() * ks.size();
    size_t total = n_cells * static_cast<size_t>(cfg.m);
    std::vector<Slot> slots(total);

    run_jobs(cfg.threads, total, [&](size_t job) {
        size_t cell = job / cfg.m;
        int rep = static_cast<int>(job % cfg.m);
        double lambda = lambdas[cell / ks.size()];
        double k = ks[cell % ks.size()];
        GeneratedDataset g = generate(gen_cfg, lambda, k, rep);
        RandomStream trng(substream_seed(cfg.seed, rep, 2));

        YTransform yt;
        XTransform xt;
        Dataset transformed;
        if (transform == EquivarianceTransform::RegressionY) {
            yt = draw_y_transform(trng, cfg.p);
            transformed = apply_y_transform(g.data, yt);
        } else {
            xt = draw_x_transform(trng, cfg.p);
            transformed = apply_x_transform(g.data, xt);
        }

        Slot& slot = slots[job];
        for (int mi = 0; mi < kMethodCount; ++mi) {
            Method method = mi == 0 ? Method::SR : Method::OLS;
            auto t0 = std::chrono::steady_clock::now();
            try {
                RegressionFit base = fit(g.data, method, fit_opts);
                Vec predicted = transform == EquivarianceTransform::RegressionY
                                    ? predict_y_transform(base.beta, base.alpha, yt)
                                    : predict_x_transform(base.beta, base.alpha, xt);
                Vec refit = fit_phi(transformed, method, fit_opts);
                Vec dev(refit.size());
                for (size_t j = 0; j < refit.size(); ++j) dev[j] = refit[j] - predicted[j];
                slot.value[mi] = dev;
            } catch (const std::exception&) {
                slot.failed[mi] = true;
            }
            auto t1 = std::chrono::steady_clock::now();
            slot.fit_seconds[mi] += std::chrono::duration<double>(t1 - t0).count();
            slot.fit_count[mi] += 2;
        }
    });

    SimResult res;
    res.config = cfg;
    res.command = "equivariance";
    res.transform = transform_name(transform);

    double total_seconds[kMethodCount] = {0.0, 0.0};
    long total_fits[kMethodCount] = {0, 0};
    int total_failures[kMethodCount] = {0, 0};

    for (size_t cell = 0; cell < n_cells; ++cell) {
        double lambda = lambdas[cell / ks.size()];
        double k = ks[cell % ks.size()];
        CellAccum acc[kMethodCount];
        for (int rep = 0; rep < cfg.m; ++rep) {
            const Slot& slot = slots[cell * cfg.m + rep];
            for (int mi = 0; mi < kMethodCount; ++mi) {
                if (slot.failed[mi]) {
                    ++acc[mi].failures;
                    ++total_failures[mi];
                } else {
                    acc[mi].add(slot.value[mi], cfg.p);
                }
                total_seconds[mi] += slot.fit_seconds[mi];
                total_fits[mi] += slot.fit_count[mi];
            }
        }
        for (int mi = 0; mi < kMethodCount; ++mi)
            res.cells.push_back(acc[mi].cell(kMethodNames[mi], lambda, k, cfg.p));
    }

    build_rollups(res);
    for (int mi = 0; mi < kMethodCount; ++mi) {
        res.failures[kMethodNames[mi]] = total_failures[mi];
        if (total_failures[mi] * 100 > static_cast<long>(total)) res.valid = false;
        if (cfg.timing && total_fits[mi] > 0)
            res.seconds_per_fit[kMethodNames[mi]] = total_seconds[mi] / total_fits[mi];
    }
    return res;
}

std::string SimResult::to_csv() const {
    std::string out = "method,scenario,p,n,delta,lambda,k,mse_beta,mse_alpha,bias2_beta,bias2_alpha\n";
    for (const MetricsCell& c : cells) {
        out += c.method;
        out += ',';
        out += scenario_name(config.scenario);
        out += ',';
        out += std::to_string(config.p);
        out += ',';
        out += std::to_string(config.n);
        out += ',';
        out += fmt_double(config.delta);
        out += ',';
        out += fmt_double(c.lambda);
        out += ',';
        out += fmt_double(c.k);
        out += ',';
        out += fmt_double(c.mse_beta);
        out += ',';
        out += fmt_double(c.mse_alpha);
        out += ',';
        out += fmt_double(c.bias2_beta);
        out += ',';
        out += fmt_double(c.bias2_alpha);
        out += '\n';
    }
    return out;
}

std::string SimResult::summary_json() const {
    json j;
    j["command"] = command;
    if (!transform.empty()) j["transform"] = transform;
    json cfg;
    cfg["scenario"] = scenario_name(config.scenario);
    cfg["p"] = config.p;
    cfg["n"] = config.n;
    cfg["m"] = config.m;
    cfg["delta"] = config.delta;
    cfg["delta1"] = config.delta1;
    cfg["delta2"] = config.delta2;
    cfg["lambda_grid"] = config.lambda_grid;
    cfg["k_grid"] = config.k_grid;
    cfg["seed"] = config.seed;
    cfg["contamination_mode"] =
        config.mode == ContaminationMode::Bernoulli ? "bernoulli" : "fixed_count";
    j["config"] = cfg;

    json rolls;
    for (const auto& [method, r] : rollups) {
        json jr;
        json per_lambda;
        for (const auto& [lambda, v] : r.mmse_lambda_beta) {
            json cell;
            cell["beta"] = v;
            cell["alpha"] = r.mmse_lambda_alpha.at(lambda);
            cell["phi"] = r.mmse_lambda_phi.at(lambda);
            per_lambda[fmt_double(lambda)] = cell;
        }
        jr["mmse_lambda"] = per_lambda;
        jr["mmmse"] = {{"beta", r.mmmse_beta}, {"alpha", r.mmmse_alpha}, {"phi", r.mmmse_phi}};
        jr["mmbias"] = {{"beta", r.mmbias_beta}, {"alpha", r.mmbias_alpha}};
        rolls[method] = jr;
    }
    j["rollups"] = rolls;
    if (!efficiency.empty()) j["efficiency"] = efficiency;
    j["failures"] = failures;
    j["valid"] = valid;
    if (!seconds_per_fit.empty()) j["timing_seconds_per_fit"] = seconds_per_fit;
    return j.dump(2) + "\n";
}

}  // namespace srreg
