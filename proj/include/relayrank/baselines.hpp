#pragma once

#include "relayrank/simulator.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace relayrank {

/// Ordinary least-squares line place = intercept + slope * t on raw minutes.
struct LinearModel {
    double intercept = 0.0;
    double slope = 0.0;

    bool operator==(const LinearModel&) const = default;
};

/// Ridge line with clipped integer output. Coefficients are stored on raw
/// minutes; the penalty was applied to the slope of standardized time.
struct RidgeModel {
    double intercept = 0.0;
    double slope = 0.0;
    double lambda = 1.0;
    std::int64_t clip_lo = 1;
    std::int64_t clip_hi = 1;

    bool operator==(const RidgeModel&) const = default;
};

/// Zero-mean GP posterior mean with an RBF kernel.
struct GpModel {
    std::vector<double> train_inputs;
    std::vector<double> alpha;  ///< (K + noise I)^{-1} r
    double lengthscale = 1.0;
    double outputscale = 1.0;
    double noise = 1e-2;

    bool operator==(const GpModel&) const = default;
};

struct GpHyperOverrides {
    std::optional<double> lengthscale;
    std::optional<double> outputscale;
    std::optional<double> noise;
};

/// Throws DegenerateFitError for c < 2, SingularFitError when every time is equal.
LinearModel fit_ols(const ChangeoverSample& sample);
/// round(intercept + slope * t), unclamped.
std::int64_t predict_ols(const LinearModel& model, double t);

/// Minimizes sum (r - a - b z)^2 + lambda b^2 where z is time standardized
/// to zero mean and unit (population) variance.
RidgeModel fit_ordinal_ridge(const ChangeoverSample& sample, double lambda = 1.0);
/// round(a + b t) clipped to [clip_lo, clip_hi].
std::int64_t predict_ordinal_ridge(const RidgeModel& model, double t);

double rbf_kernel(double t1, double t2, double lengthscale, double outputscale);

/// Defaults: lengthscale = median pairwise distance of training times,
/// outputscale = population variance of training places, noise = 0.01 * outputscale.
/// Throws IllConditionedError if K + noise I is not numerically positive definite.
GpModel fit_gp(const ChangeoverSample& sample, const GpHyperOverrides& hyper = {});
double gp_posterior_mean(const GpModel& model, double t);
std::int64_t predict_gp(const GpModel& model, double t);

/// Median of |t_i - t_j| over all pairs i < j.
double median_pairwise_distance(std::span<const double> times);

}  // namespace relayrank
