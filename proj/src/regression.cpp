#include "srreg/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "srreg/errors.hpp"
#include "srreg/numerics.hpp"

namespace srreg {

std::string method_name(Method m) {
    switch (m) {
        case Method::OLS: return "ols";
        case Method::SW: return "sw";
        case Method::SR: return "sr";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "ols") return Method::OLS;
    if (name == "sw") return Method::SW;
    if (name == "sr") return Method::SR;
    throw ValidationError("unknown method '" + name + "' (expected ols or sr)");
}

namespace {

struct Moments {
    Vec mean;        // d
    SymMatrix cov;   // d x d, 1/m normalization
    int count = 0;
};

// Weighted joint mean and covariance, normalizing by the weight sum.
Moments weighted_moments(const Matrix& z, const Vec& w) {
    int n = z.rows(), d = z.cols();
    Moments m;
    m.mean.assign(d, 0.0);
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (w[i] == 0.0) continue;
        wsum += w[i];
        for (int j = 0; j < d; ++j) m.mean[j] += w[i] * z(i, j);
    }
    m.count = static_cast<int>(wsum);
    for (int j = 0; j < d; ++j) m.mean[j] /= wsum;
    m.cov = SymMatrix(d);
    for (int j = 0; j < d; ++j)
        for (int t = j; t < d; ++t) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                if (w[i] == 0.0) continue;
                s += w[i] * (z(i, j) - m.mean[j]) * (z(i, t) - m.mean[t]);
            }
            m.cov.set(j, t, s / wsum);
        }
    return m;
}

// Slope, intercept and residual variance from partitioned joint moments.
struct MomentFit {
    Vec beta;
    double alpha;
    double sigma2;
};

MomentFit fit_from_moments(const Moments& m, int p, const char* singular_msg) {
    SymMatrix sxx(p);
    for (int j = 0; j < p; ++j)
        for (int t = j; t < p; ++t) sxx.set(j, t, m.cov.at(j, t));
    Vec sxy(p);
    for (int j = 0; j < p; ++j) sxy[j] = m.cov.at(j, p);

    MomentFit f;
    try {
        f.beta = spd_solve(sxx, sxy);
    } catch (const NumericalError&) {
        throw NumericalError(singular_msg);
    }
    f.alpha = m.mean[p];
    for (int j = 0; j < p; ++j) f.alpha -= f.beta[j] * m.mean[j];
    double explained = 0.0;
    for (int j = 0; j < p; ++j) explained += f.beta[j] * sxy[j];
    f.sigma2 = m.cov.at(p, p) - explained;
    return f;
}

double residual(const Dataset& ds, const Vec& beta, double alpha, int i) {
    double r = ds.y[i] - alpha;
    for (int j = 0; j < ds.p(); ++j) r -= beta[j] * ds.x(i, j);
    return r;
}

void finalize_r2(const Dataset& ds, RegressionFit& f) {
    f.r2 = r_squared(ds, f);
    f.adj_r2 = adjusted_r_squared(ds, f);
}

}  // namespace

RegressionFit ols_fit(const Dataset& data) {
    data.validate_for_fit();
    int n = data.n(), p = data.p();
    Matrix z = data.joint();
    Vec ones(n, 1.0);
    Moments m = weighted_moments(z, ones);

    MomentFit mf = fit_from_moments(m, p, "collinear carriers");
    RegressionFit f;
    f.method = Method::OLS;
    f.beta = mf.beta;
    f.alpha = mf.alpha;
    f.sigma2 = std::max(mf.sigma2, 0.0);
    f.w.assign(n, 1.0);
    f.wr.assign(n, 1.0);
    finalize_r2(data, f);
    return f;
}

namespace {

struct Stage1 {
    ShrinkageLocation location;
    ShrinkageScatter scatter;
    Vec d2;       // shrinkage-metric distances (the reported ones)
    Vec w;        // joint rejection weights
};

Stage1 stage1(const Dataset& data, const FitOptions& opts) {
    data.validate_for_fit();
    int n = data.n(), d = data.p() + 1;
    Matrix z = data.joint();

    Stage1 s;
    s.location = shrinkage_mean(z);
    Vec med = coordinatewise_median(z);
    s.scatter = shrinkage_scatter(z, med);

    Cholesky factor(s.scatter.matrix);
    s.d2.resize(n);
    Vec dev(d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) dev[j] = z(i, j) - s.location.center[j];
        s.d2[i] = factor.inv_quad_form(dev);
    }

    // Auxiliary per-coordinate screen about the comedian center; catches
    // directional contamination that inflates the full metric.
    Vec diag(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            double sj = s.scatter.comedian.at(j, j);
            double dv = z(i, j) - med[j];
            if (sj > 0.0)
                diag[i] += dv * dv / sj;
            else if (dv != 0.0)
                diag[i] = std::numeric_limits<double>::infinity();
        }
    }

    double q1 = chisq_quantile(d, 1.0 - opts.delta1);
    s.w.assign(n, 1.0);
    for (int i = 0; i < n; ++i)
        if (s.d2[i] > q1 || diag[i] > q1) s.w[i] = 0.0;
    return s;
}

}  // namespace

Vec initial_distances(const Dataset& data, const FitOptions& opts) {
    return stage1(data, opts).d2;
}

SwEstimates sw_estimates(const Dataset& data, const FitOptions& opts) {
    Stage1 s1 = stage1(data, opts);
    int n = data.n(), p = data.p();

    double wsum = 0.0;
    for (double w : s1.w) wsum += w;
    if (wsum < p + 2)
        throw ValidationError("over-trimming: only " + std::to_string(static_cast<int>(wsum)) +
                              " of " + std::to_string(n) + " observations retained");

    Moments m = weighted_moments(data.joint(), s1.w);
    SwEstimates sw;
    sw.location = m.mean;
    sw.scatter = m.cov;
    sw.w = s1.w;
    sw.d2 = s1.d2;
    return sw;
}

RegressionFit sw_fit(const Dataset& data, const FitOptions& opts) {
    SwEstimates sw = sw_estimates(data, opts);
    int n = data.n(), p = data.p();

    Moments m;
    m.mean = sw.location;
    m.cov = sw.scatter;
    MomentFit mf = fit_from_moments(m, p, "collinear carriers after trimming");

    RegressionFit f;
    f.method = Method::SW;
    f.beta = mf.beta;
    f.alpha = mf.alpha;
    f.sigma2 = std::max(mf.sigma2, 1e-12);
    f.w = sw.w;
    f.wr = sw.w;
    for (int i = 0; i < n; ++i)
        if (f.wr[i] == 0.0) f.outliers.push_back(i + 1);
    finalize_r2(data, f);
    return f;
}

RegressionFit sr_fit(const Dataset& data, const FitOptions& opts) {
    SwEstimates sw = sw_estimates(data, opts);
    int n = data.n(), p = data.p();

    Moments m;
    m.mean = sw.location;
    m.cov = sw.scatter;
    MomentFit interim = fit_from_moments(m, p, "collinear carriers after trimming");
    double sigma_sw = std::max(interim.sigma2, 1e-12);

    // Gram matrix of u_i = (x_i, 1) over the first-stage retained design;
    // h_i = u_i' G^{-1} u_i standardizes each residual by its prediction
    // variance so that points far outside the retained design are judged
    // against their extrapolation uncertainty.
    SymMatrix gram(p + 1);
    for (int i = 0; i < n; ++i) {
        if (sw.w[i] == 0.0) continue;
        for (int j = 0; j <= p; ++j) {
            double uj = (j < p) ? data.x(i, j) : 1.0;
            for (int t = j; t <= p; ++t) {
                double ut = (t < p) ? data.x(i, t) : 1.0;
                gram.set(j, t, gram.at(j, t) + uj * ut);
            }
        }
    }
    std::unique_ptr<Cholesky> gram_factor;
    try {
        gram_factor = std::make_unique<Cholesky>(gram);
    } catch (const NumericalError&) {
        throw NumericalError("collinear carriers after trimming");
    }

    double q2 = chisq_quantile(1, 1.0 - opts.delta2);
    RegressionFit f;
    f.method = Method::SR;
    f.w = sw.w;
    f.wr.assign(n, 1.0);
    Vec u(p + 1);
    for (int i = 0; i < n; ++i) {
        double r = residual(data, interim.beta, interim.alpha, i);
        for (int j = 0; j < p; ++j) u[j] = data.x(i, j);
        u[p] = 1.0;
        double h = gram_factor->inv_quad_form(u);
        if (r * r / (sigma_sw * (1.0 + h)) > q2) f.wr[i] = 0.0;
    }

    double kept = 0.0;
    for (double w : f.wr) kept += w;
    if (kept < p + 2)
        throw ValidationError("over-trimming: only " + std::to_string(static_cast<int>(kept)) +
                              " of " + std::to_string(n) + " observations retained after reweighting");

    // Final weighted least squares over u_i.
    SymMatrix g(p + 1);
    Vec rhs(p + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        if (f.wr[i] == 0.0) continue;
        for (int j = 0; j <= p; ++j) {
            double uj = (j < p) ? data.x(i, j) : 1.0;
            rhs[j] += uj * data.y[i];
            for (int t = j; t <= p; ++t) {
                double ut = (t < p) ? data.x(i, t) : 1.0;
                g.set(j, t, g.at(j, t) + uj * ut);
            }
        }
    }
    Vec phi;
    try {
        phi = spd_solve(g, rhs);
    } catch (const NumericalError&) {
        throw NumericalError("collinear carriers after reweighting");
    }
    f.beta.assign(phi.begin(), phi.begin() + p);
    f.alpha = phi[p];

    double ssr = 0.0;
    for (int i = 0; i < n; ++i) {
        if (f.wr[i] == 0.0) continue;
        double r = residual(data, f.beta, f.alpha, i);
        ssr += r * r;
    }
    f.sigma2 = ssr / kept;
    for (int i = 0; i < n; ++i)
        if (f.wr[i] == 0.0) f.outliers.push_back(i + 1);
    finalize_r2(data, f);
    return f;
}

RegressionFit fit(const Dataset& data, Method m, const FitOptions& opts) {
    switch (m) {
        case Method::OLS: return ols_fit(data);
        case Method::SW: return sw_fit(data, opts);
        case Method::SR: return sr_fit(data, opts);
    }
    throw ValidationError("unknown method");
}

double r_squared(const Dataset& data, const RegressionFit& f) {
    int n = data.n();
    double kept = 0.0, ymean = 0.0;
    for (int i = 0; i < n; ++i) {
        if (f.wr[i] == 0.0) continue;
        kept += 1.0;
        ymean += data.y[i];
    }
    if (kept == 0.0) return 0.0;
    ymean /= kept;

    double ssr = 0.0, sst = 0.0;
    for (int i = 0; i < n; ++i) {
        double dy = data.y[i] - ymean;
        sst += dy * dy;
        if (f.wr[i] == 0.0) continue;
        double r = residual(data, f.beta, f.alpha, i);
        ssr += r * r;
    }
    if (sst <= 0.0) return 0.0;
    return 1.0 - ssr / sst;
}

double adjusted_r_squared(const Dataset& data, const RegressionFit& f) {
    double r2 = r_squared(data, f);
    int n = data.n(), p = data.p();
    if (n - p - 1 <= 0) return r2;
    return 1.0 - (1.0 - r2) * (n - 1) / static_cast<double>(n - p - 1);
}

}  // namespace srreg
