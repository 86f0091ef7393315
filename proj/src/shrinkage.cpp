#include "srreg/shrinkage.hpp"

#include <cmath>
#include <numbers>

#include "srreg/errors.hpp"
#include "srreg/numerics.hpp"

namespace srreg {

namespace {

void check_finite(const Matrix& data) {
    for (int i = 0; i < data.rows(); ++i)
        for (int j = 0; j < data.cols(); ++j)
            if (!std::isfinite(data(i, j))) throw ValidationError("non-finite input");
}

double l1_objective(const Matrix& data, const Vec& mu) {
    double obj = 0.0;
    for (int i = 0; i < data.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < data.cols(); ++j) {
            double d = data(i, j) - mu[j];
            s += d * d;
        }
        obj += std::sqrt(s);
    }
    return obj;
}

}  // namespace

Vec coordinatewise_median(const Matrix& data) {
    int n = data.rows(), d = data.cols();
    Vec med(d), col(n);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) col[i] = data(i, j);
        med[j] = median(col);
    }
    return med;
}

Vec coordinatewise_mad(const Matrix& data) {
    int n = data.rows(), d = data.cols();
    Vec med = coordinatewise_median(data);
    Vec out(d), col(n);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) col[i] = data(i, j);
        out[j] = mad(col, med[j]);
    }
    return out;
}

L1MedianResult l1_median(const Matrix& data, const L1MedianOptions& opts) {
    int n = data.rows(), d = data.cols();
    if (n < 1) throw ValidationError("empty sample");
    check_finite(data);

    L1MedianResult res;
    if (n == 1) {
        res.point.assign(data.row(0), data.row(0) + d);
        return res;
    }

    Vec mu = coordinatewise_median(data);
    if (opts.record_objective) res.objective_trace.push_back(l1_objective(data, mu));

    Vec next(d), dist(n);
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        int at_point = -1;
        int coincident = 0;
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) {
                double dv = data(i, j) - mu[j];
                s += dv * dv;
            }
            dist[i] = std::sqrt(s);
            if (dist[i] < 1e-12) {
                at_point = i;
                ++coincident;
            }
        }

        if (at_point < 0) {
            double wsum = 0.0;
            std::fill(next.begin(), next.end(), 0.0);
            for (int i = 0; i < n; ++i) {
                double w = 1.0 / dist[i];
                wsum += w;
                for (int j = 0; j < d; ++j) next[j] += w * data(i, j);
            }
            for (int j = 0; j < d; ++j) next[j] /= wsum;
        } else {
            // Vardi-Zhang step: pull the plain update toward the coincident
            // point by the ratio of its multiplicity to the gradient norm.
            double wsum = 0.0;
            Vec t(d, 0.0), r(d, 0.0);
            for (int i = 0; i < n; ++i) {
                if (dist[i] < 1e-12) continue;
                double w = 1.0 / dist[i];
                wsum += w;
                for (int j = 0; j < d; ++j) {
                    t[j] += w * data(i, j);
                    r[j] += w * (data(i, j) - mu[j]);
                }
            }
            if (wsum == 0.0) {  // all points coincide with the iterate
                res.point = mu;
                res.iterations = iter;
                return res;
            }
            double rnorm = 0.0;
            for (int j = 0; j < d; ++j) rnorm += r[j] * r[j];
            rnorm = std::sqrt(rnorm);
            double k = static_cast<double>(coincident);
            if (rnorm <= k) {  // the data point is the median
                res.point = mu;
                res.iterations = iter;
                return res;
            }
            double pull = k / rnorm;
            for (int j = 0; j < d; ++j) next[j] = (1.0 - pull) * (t[j] / wsum) + pull * mu[j];
        }

        double change = 0.0;
        for (int j = 0; j < d; ++j) change = std::max(change, std::fabs(next[j] - mu[j]));
        mu = next;
        if (opts.record_objective) res.objective_trace.push_back(l1_objective(data, mu));
        if (change < opts.tol) {
            res.point = mu;
            res.iterations = iter + 1;
            return res;
        }
    }

    res.point = mu;
    res.converged = false;
    res.iterations = opts.max_iterations;
    return res;
}

ShrinkageLocation shrinkage_mean(const Matrix& data) {
    int n = data.rows(), d = data.cols();
    if (n < 2) throw ValidationError("insufficient sample");
    check_finite(data);

    ShrinkageLocation loc;
    loc.l1_median = l1_median(data).point;

    double nu = 0.0;
    for (int j = 0; j < d; ++j) nu += loc.l1_median[j];
    nu /= d;
    loc.nu = nu;

    Vec mads = coordinatewise_mad(data);
    double ehat = 0.0;
    for (double m : mads) ehat += m * m;
    ehat *= std::numbers::pi / 2.0 / n;

    double gap = 0.0;
    for (int j = 0; j < d; ++j) {
        double dv = loc.l1_median[j] - nu;
        gap += dv * dv;
    }

    double eta = (ehat + gap > 0.0) ? ehat / (ehat + gap) : 1.0;
    eta = std::min(1.0, std::max(0.0, eta));
    loc.eta = eta;

    loc.center.resize(d);
    for (int j = 0; j < d; ++j) loc.center[j] = (1.0 - eta) * loc.l1_median[j] + eta * nu;
    return loc;
}

SymMatrix comedian_matrix(const Matrix& data, const Vec& center) {
    int n = data.rows(), d = data.cols();
    if (n < 2) throw ValidationError("insufficient sample");
    if (static_cast<int>(center.size()) != d) throw ValidationError("center size mismatch");
    check_finite(data);

    SymMatrix s(d);
    Vec prod(n);
    for (int j = 0; j < d; ++j) {
        for (int t = j; t < d; ++t) {
            for (int i = 0; i < n; ++i)
                prod[i] = (data(i, j) - center[j]) * (data(i, t) - center[t]);
            s.set(j, t, kComedianFactor * median(prod));
        }
    }
    return s;
}

ShrinkageScatter shrinkage_scatter(const Matrix& data, const Vec& center,
                                   std::optional<double> eta_override) {
    int n = data.rows(), d = data.cols();
    ShrinkageScatter out;
    out.comedian = comedian_matrix(data, center);

    double nu = out.comedian.trace() / d;
    if (nu <= 0.0) throw ValidationError("degenerate scatter");
    out.nu = nu;

    double eta;
    if (eta_override) {
        eta = std::min(1.0, std::max(0.0, *eta_override));
    } else {
        // Positive-definiteness floor.
        const double eps = 0.05;
        double lmin = min_eigenvalue(out.comedian);
        double eta_cond = 0.0;
        if (lmin < eps * nu) eta_cond = (eps * nu - lmin) / (nu - lmin);

        // Squared robust Ledoit-Wolf ratio: entrywise variance of the
        // comedian (var of a median ~ (pi/2) sigma^2 / n, sigma from the
        // MAD of the deviation products) against the distance to nu*I.
        double dhat = 0.0;
        for (int j = 0; j < d; ++j)
            for (int t = 0; t < d; ++t) {
                double target = (j == t) ? nu : 0.0;
                double dv = out.comedian.at(j, t) - target;
                dhat += dv * dv;
            }
        double bhat = 0.0;
        {
            Vec prod(n);
            const double c2 = kComedianFactor * kComedianFactor;
            for (int j = 0; j < d; ++j)
                for (int t = j; t < d; ++t) {
                    for (int i = 0; i < n; ++i)
                        prod[i] = (data(i, j) - center[j]) * (data(i, t) - center[t]);
                    double sw = 1.4826 * mad(prod, median(prod));
                    double v = c2 * (std::numbers::pi / 2.0) * sw * sw / n;
                    bhat += (j == t) ? v : 2.0 * v;
                }
        }
        double ratio = (dhat > 0.0) ? std::min(1.0, bhat / dhat) : 1.0;
        eta = std::max(eta_cond, ratio * ratio);
        eta = std::min(1.0, std::max(eta, 1e-6));
    }

    auto shrink = [&](double e) {
        SymMatrix m(d);
        for (int j = 0; j < d; ++j)
            for (int t = j; t < d; ++t) {
                double target = (j == t) ? nu : 0.0;
                m.set(j, t, (1.0 - e) * out.comedian.at(j, t) + e * target);
            }
        return m;
    };

    while (true) {
        SymMatrix m = shrink(eta);
        try {
            Cholesky check(m);
            out.matrix = m;
            out.eta = eta;
            return out;
        } catch (const NumericalError&) {
            if (eta >= 1.0) throw;
            eta = std::min(1.0, eta + 0.1);
        }
    }
}

}  // namespace srreg
