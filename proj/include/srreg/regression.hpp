#pragma once

#include <string>

#include "srreg/dataset.hpp"
#include "srreg/matrix.hpp"
#include "srreg/shrinkage.hpp"

namespace srreg {

enum class Method { OLS, SW, SR };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct FitOptions {
    double delta1 = 0.025;  // first-stage tail probability
    double delta2 = 0.01;   // residual-stage tail probability
};

struct RegressionFit {
    Vec beta;
    double alpha = 0.0;
    double sigma2 = 0.0;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    Vec w;                     // first-stage weights, each 0 or 1
    Vec wr;                    // residual-stage weights, each 0 or 1
    std::vector<int> outliers; // 1-based indices where wr == 0, ascending
    Method method = Method::OLS;
};

/// Least squares through the moment identities; weights all one.
RegressionFit ols_fit(const Dataset& data);

/// Squared robust Mahalanobis distances of the joint observations under the
/// shrinkage location and scatter.
Vec initial_distances(const Dataset& data, const FitOptions& opts = {});

struct SwEstimates {
    Vec location;       // p+1
    SymMatrix scatter;  // p+1, normalized by the retained count
    Vec w;
    Vec d2;             // distances the weights were derived from
};

/// First-stage hard-rejection weights and the weighted joint moments.
SwEstimates sw_estimates(const Dataset& data, const FitOptions& opts = {});

/// Interim fit from the partitioned weighted moments.
RegressionFit sw_fit(const Dataset& data, const FitOptions& opts = {});

/// Full shrinkage-reweighted fit: weighted moments, residual reweighting,
/// final weighted least squares on u_i = (x_i, 1).
RegressionFit sr_fit(const Dataset& data, const FitOptions& opts = {});

RegressionFit fit(const Dataset& data, Method m, const FitOptions& opts = {});

/// R^2 of a fit under the reporting convention: residual sum over retained
/// observations, total variation over all observations about the retained
/// mean. For OLS (all weights one) this is the classical coefficient of
/// determination.
double r_squared(const Dataset& data, const RegressionFit& f);
double adjusted_r_squared(const Dataset& data, const RegressionFit& f);

}  // namespace srreg
