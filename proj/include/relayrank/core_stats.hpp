#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace relayrank {

/// Parameters (mu, sigma) of a log-normal law; both live on the log-minute scale.
struct LogNormalParams {
    double mu = 0.0;
    double sigma = 1.0;

    LogNormalParams() = default;
    /// Throws DomainError unless mu, sigma are finite and sigma > 0.
    LogNormalParams(double mu_, double sigma_);

    bool operator==(const LogNormalParams&) const = default;
};

/// Distinct positive ranks drawn without replacement from {1, ..., n}.
class PlaceSample {
public:
    /// Throws DomainError on an empty sample or a place < 1, TieError on duplicates.
    explicit PlaceSample(std::vector<std::int64_t> places);

    std::span<const std::int64_t> places() const noexcept { return places_; }
    std::size_t count() const noexcept { return places_.size(); }
    std::int64_t max_place() const noexcept { return max_; }

private:
    std::vector<std::int64_t> places_;
    std::int64_t max_ = 0;
};

/// Standard normal c.d.f. Absolute error below 1e-10 on [-8, 8].
double std_normal_cdf(double x);

/// Inverse of std_normal_cdf for q in (0, 1). Throws DomainError otherwise.
double std_normal_quantile(double q);

double lognormal_cdf(double t, const LogNormalParams& p);
double lognormal_quantile(double q, const LogNormalParams& p);

/// exp(mu + sigma^2 / 2).
double lognormal_mean(const LogNormalParams& p);
/// exp(mu - sigma^2); also the rising inflection point of the c.d.f. in t.
double lognormal_mode(const LogNormalParams& p);
double lognormal_median(const LogNormalParams& p);
/// (exp(sigma^2) - 1) exp(2 mu + sigma^2).
double lognormal_variance(const LogNormalParams& p);

/// Maximum-likelihood fit on log-times with the divide-by-c variance.
///
/// Throws DomainError for a nonpositive time and DegenerateFitError for
/// fewer than two points or zero spread in log-time.
LogNormalParams fit_lognormal_mle(std::span<const double> times);

/// Fenton-Wilkinson approximation of a sum of independent log-normals:
/// the returned law matches the sum's mean and variance.
LogNormalParams fenton_wilkinson_sum(std::span<const LogNormalParams> legs);

/// Unbiased minimum-variance estimate of the population size:
/// (1 + 1/c) * max - 1, unrounded.
double german_tank_estimate(const PlaceSample& s);

/// Unrounded scale factor (1 + 1/c) * max used by the FWOS predictor.
double german_tank_scale(const PlaceSample& s);

/// Rounds half away from zero to the nearest integer.
std::int64_t round_place(double x);

}  // namespace relayrank
