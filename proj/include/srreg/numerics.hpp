#pragma once

#include <span>

#include "srreg/matrix.hpp"

namespace srreg {

/// Sample median; even lengths average the two middle order statistics.
double median(std::span<const double> values);

/// Median of |values[i] - center|.
double mad(std::span<const double> values, double center);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Chi-square CDF with dof degrees of freedom.
double chisq_cdf(int dof, double x);

/// Inverse chi-square CDF: x with P(dof/2, x/2) = prob, |error| <= 1e-10.
double chisq_quantile(int dof, double prob);

/// Cholesky factor of a symmetric positive definite matrix. Solves and
/// quadratic forms reuse the factorization.
class Cholesky {
public:
    explicit Cholesky(const SymMatrix& a);

    int dim() const { return dim_; }

    Vec solve(const Vec& b) const;
    Matrix solve(const Matrix& b) const;

    /// x' A^{-1} x  via one forward substitution.
    double inv_quad_form(const Vec& x) const;

private:
    int dim_;
    std::vector<double> lower_;  // packed lower-triangular factor
    double& l(int i, int j) { return lower_[static_cast<size_t>(i) * (i + 1) / 2 + j]; }
    double l(int i, int j) const { return lower_[static_cast<size_t>(i) * (i + 1) / 2 + j]; }
};

/// Solve A x = b for symmetric positive definite A.
Vec spd_solve(const SymMatrix& a, const Vec& b);

/// Solve A X = B columnwise.
Matrix spd_solve(const SymMatrix& a, const Matrix& b);

/// Smallest eigenvalue of a symmetric matrix (bisection on the shifted
/// Cholesky test; adequate for the small dimensions used here).
double min_eigenvalue(const SymMatrix& a);

}  // namespace srreg
