#pragma once

#include <optional>

#include "srreg/matrix.hpp"

namespace srreg {

// Consistency factor for the comedian under normality, 1 / Phi^{-1}(3/4)^2.
inline constexpr double kComedianFactor = 2.198;

struct L1MedianResult {
    Vec point;
    bool converged = true;
    int iterations = 0;
    Vec objective_trace;  // filled only when requested
};

struct L1MedianOptions {
    double tol = 1e-8;       // sup-norm change between iterates
    int max_iterations = 1000;
    bool record_objective = false;
};

/// Multivariate L1-median (spatial median) by Weiszfeld iteration with the
/// Vardi-Zhang correction when an iterate lands on a data point.
/// Initialized at the coordinatewise median.
L1MedianResult l1_median(const Matrix& data, const L1MedianOptions& opts = {});

Vec coordinatewise_median(const Matrix& data);

/// Per-column MAD about the coordinatewise median.
Vec coordinatewise_mad(const Matrix& data);

struct ShrinkageLocation {
    Vec center;
    double eta = 0.0;
    double nu = 0.0;
    Vec l1_median;
};

/// Robust location shrunk toward its grand mean times the ones vector,
/// intensity from the expected-quadratic-loss trade-off.
ShrinkageLocation shrinkage_mean(const Matrix& data);

/// Adjusted comedian scatter: entry (j,t) is kComedianFactor times the
/// median over rows of the deviation products about `center`.
SymMatrix comedian_matrix(const Matrix& data, const Vec& center);

struct ShrinkageScatter {
    SymMatrix matrix;
    double eta = 0.0;
    double nu = 0.0;
    SymMatrix comedian;
};

/// Comedian shrunk toward nu*I, nu = trace/d. The intensity combines a
/// positive-definiteness floor (smallest eigenvalue at least eps*nu) with a
/// squared Ledoit-Wolf-style ratio whose numerator estimates the comedian's
/// sampling variance robustly (MAD of the deviation products). eta_override
/// forces a fixed intensity.
ShrinkageScatter shrinkage_scatter(const Matrix& data, const Vec& center,
                                   std::optional<double> eta_override = std::nullopt);

}  // namespace srreg
