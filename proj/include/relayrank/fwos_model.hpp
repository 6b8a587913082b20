#pragma once

#include "relayrank/core_stats.hpp"
#include "relayrank/simulator.hpp"

#include <cstdint>

namespace relayrank {

/// Fenton-Wilkinson order-statistics regressor for one changeover.
///
/// Predicts place as [Phi((log t - mu) / sigma) * scale], where (mu, sigma)
/// is the log-normal MLE of the training changeover times and
/// scale = (1 + 1/c) * r_(c) estimates n + 1 from the largest of the c
/// training places.
struct FwosModel {
    LogNormalParams params;
    double scale = 0.0;
    std::int64_t c = 0;
    int leg_index = 0;

    /// Estimated number of teams, scale - 1.
    double n_hat() const noexcept { return scale - 1.0; }

    /// Throws DomainError if the stored fields break the model invariants.
    void validate() const;

    bool operator==(const FwosModel&) const = default;
};

/// Throws TieError on duplicate places; other failures come from
/// fit_lognormal_mle and PlaceSample.
FwosModel fit_fwos(const ChangeoverSample& sample);

/// Unrounded prediction curve Phi((log t - mu) / sigma) * scale.
double fwos_curve(const FwosModel& model, double t);

/// Rounded place, clamped to [1, round(n_hat)]. Nondecreasing in t.
std::int64_t predict_place(const FwosModel& model, double t);

/// Time where the prediction curve is steepest: the log-normal mode.
double inflection_time(const FwosModel& model);

}  // namespace relayrank
