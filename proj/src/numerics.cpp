#include "srreg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "srreg/errors.hpp"

namespace srreg {

double median(std::span<const double> values) {
    if (values.empty()) throw ValidationError("empty sample");
    std::vector<double> v(values.begin(), values.end());
    size_t n = v.size();
    size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
}

double mad(std::span<const double> values, double center) {
    std::vector<double> dev(values.size());
    for (size_t i = 0; i < values.size(); ++i) dev[i] = std::fabs(values[i] - center);
    return median(dev);
}

namespace {

// Series expansion of P(a, x), for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), modified Lentz, for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double chisq_cdf(int dof, double x) {
    if (dof < 1) throw std::domain_error("chisq_cdf: dof must be >= 1");
    if (x <= 0.0) return 0.0;
    return gamma_p(0.5 * dof, 0.5 * x);
}

double chisq_quantile(int dof, double prob) {
    if (dof < 1) throw std::domain_error("chisq_quantile: dof must be >= 1");
    if (!(prob > 0.0 && prob < 1.0))
        throw std::domain_error("chisq_quantile: prob must lie in (0,1)");

    double lo = 0.0;
    double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 10.0;
    while (chisq_cdf(dof, hi) < prob) hi *= 2.0;

    // Bisection to a tight bracket, then Newton polish on the CDF.
    for (int i = 0; i < 200 && hi - lo > 1e-12 * (1.0 + hi); ++i) {
        double mid = 0.5 * (lo + hi);
        if (chisq_cdf(dof, mid) < prob)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        double f = chisq_cdf(dof, x) - prob;
        double pdf = std::exp((0.5 * dof - 1.0) * std::log(x) - 0.5 * x -
                              0.5 * dof * std::numbers::ln2 - std::lgamma(0.5 * dof));
        if (pdf <= 0.0) break;
        double step = f / pdf;
        double next = x - step;
        if (next <= lo || next >= hi) break;
        x = next;
        if (std::fabs(step) < 1e-13 * (1.0 + x)) break;
    }
    return x;
}

Cholesky::Cholesky(const SymMatrix& a) : dim_(a.dim()), lower_(a.dim() * (a.dim() + 1) / 2) {
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a.at(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0)
                    throw NumericalError("matrix not positive definite (pivot " +
                                         std::to_string(i) + ")");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
}

Vec Cholesky::solve(const Vec& b) const {
    if (static_cast<int>(b.size()) != dim_) throw std::invalid_argument("spd_solve size mismatch");
    Vec y(dim_);
    for (int i = 0; i < dim_; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    for (int i = dim_ - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < dim_; ++k) s -= l(k, i) * y[k];
        y[i] = s / l(i, i);
    }
    return y;
}

Matrix Cholesky::solve(const Matrix& b) const {
    if (b.rows() != dim_) throw std::invalid_argument("spd_solve size mismatch");
    Matrix x(b.rows(), b.cols());
    Vec col(dim_);
    for (int j = 0; j < b.cols(); ++j) {
        for (int i = 0; i < dim_; ++i) col[i] = b(i, j);
        Vec sol = solve(col);
        for (int i = 0; i < dim_; ++i) x(i, j) = sol[i];
    }
    return x;
}

double Cholesky::inv_quad_form(const Vec& x) const {
    Vec y(dim_);
    double q = 0.0;
    for (int i = 0; i < dim_; ++i) {
        double s = x[i];
        for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
        q += y[i] * y[i];
    }
    return q;
}

Vec spd_solve(const SymMatrix& a, const Vec& b) { return Cholesky(a).solve(b); }

Matrix spd_solve(const SymMatrix& a, const Matrix& b) { return Cholesky(a).solve(b); }

double min_eigenvalue(const SymMatrix& a) {
    int d = a.dim();
    // Gershgorin bounds.
    double lo = a.at(0, 0), hi = a.at(0, 0);
    for (int i = 0; i < d; ++i) {
        double r = 0.0;
        for (int j = 0; j < d; ++j)
            if (j != i) r += std::fabs(a.at(i, j));
        lo = std::min(lo, a.at(i, i) - r);
        hi = std::max(hi, a.at(i, i) + r);
    }
    auto is_pd_shifted = [&](double shift) {
        SymMatrix s = a;
        for (int i = 0; i < d; ++i) s.set(i, i, a.at(i, i) - shift);
        try {
            Cholesky f(s);
            return true;
        } catch (const NumericalError&) {
            return false;
        }
    };
    // A - shift*I is PD iff shift < lambda_min.
    double scale = std::max(1.0, std::fabs(lo) + std::fabs(hi));
    for (int i = 0; i < 200 && hi - lo > 1e-13 * scale; ++i) {
        double mid = 0.5 * (lo + hi);
        if (is_pd_shifted(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace srreg
