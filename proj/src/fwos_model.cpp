#include "relayrank/fwos_model.hpp"

#include "relayrank/errors.hpp"

#include <algorithm>
#include <cmath>

namespace relayrank {

void FwosModel::validate() const {
    if (c < 2) throw DomainError("FWOS model needs c >= 2");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("FWOS scale must be positive");
    // scale = (1 + 1/c) r_(c) with r_(c) >= c, hence n_hat >= c.
    if (n_hat() < static_cast<double>(c) * (1.0 - 1e-12)) {
        throw DomainError("FWOS scale implies fewer teams than training points");
    }
    if (leg_index < 1) throw DomainError("FWOS leg index must be >= 1");
    LogNormalParams check(params.mu, params.sigma);
    (void)check;
}

FwosModel fit_fwos(const ChangeoverSample& sample) {
    if (sample.times.size() != sample.places.size()) {
        throw DomainError("changeover sample has mismatched lengths");
    }
    PlaceSample places(sample.places);
    FwosModel model;
    model.params = fit_lognormal_mle(sample.times);
    model.scale = german_tank_scale(places);
    model.c = static_cast<std::int64_t>(places.count());
    model.leg_index = sample.leg_index;
    return model;
}

double fwos_curve(const FwosModel& model, double t) {
    return lognormal_cdf(t, model.params) * model.scale;
}

std::int64_t predict_place(const FwosModel& model, double t) {
    const std::int64_t raw = round_place(fwos_curve(model, t));
    return std::clamp<std::int64_t>(raw, 1, std::max<std::int64_t>(1, round_place(model.n_hat())));
}

double inflection_time(const FwosModel& model) {
    return lognormal_mode(model.params);
}

}  // namespace relayrank
