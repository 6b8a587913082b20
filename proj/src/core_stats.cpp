#include "relayrank/core_stats.hpp"

#include "relayrank/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>

namespace relayrank {

LogNormalParams::LogNormalParams(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
    if (!std::isfinite(mu) || !std::isfinite(sigma)) {
        throw DomainError("log-normal parameters must be finite");
    }
    if (!(sigma > 0.0)) {
        throw DomainError("log-normal sigma must be positive, got " + std::to_string(sigma));
    }
}

PlaceSample::PlaceSample(std::vector<std::int64_t> places) : places_(std::move(places)) {
    if (places_.empty()) {
        throw DomainError("place sample is empty");
    }
    std::unordered_set<std::int64_t> seen;
    seen.reserve(places_.size());
    for (auto r : places_) {
        if (r < 1) {
            throw DomainError("places must be >= 1, got " + std::to_string(r));
        }
        if (!seen.insert(r).second) {
            throw TieError("duplicate place " + std::to_string(r));
        }
        max_ = std::max(max_, r);
    }
}

double std_normal_cdf(double x) {
    // erfc keeps full relative precision in the lower tail, unlike 1 + erf.
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("quantile level must lie in (0, 1)");
    }

    // Acklam's rational approximation (relative error ~1.15e-9) ...
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (q < p_low) {
        const double s = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * s + c[1]) * s + c[2]) * s + c[3]) * s + c[4]) * s + c[5]) /
            ((((d[0] * s + d[1]) * s + d[2]) * s + d[3]) * s + 1.0);
    } else if (q <= 1.0 - p_low) {
        const double s = q - 0.5;
        const double r = s * s;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * s /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double s = std::sqrt(-2.0 * std::log1p(-q));
        x = -(((((c[0] * s + c[1]) * s + c[2]) * s + c[3]) * s + c[4]) * s + c[5]) /
            ((((d[0] * s + d[1]) * s + d[2]) * s + d[3]) * s + 1.0);
    }

    // ... polished by one Halley step against the erfc-based c.d.f.
    const double e = std_normal_cdf(x) - q;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double lognormal_cdf(double t, const LogNormalParams& p) {
    if (!(t > 0.0)) {
        throw DomainError("log-normal c.d.f. requires t > 0");
    }
    return std_normal_cdf((std::log(t) - p.mu) / p.sigma);
}

double lognormal_quantile(double q, const LogNormalParams& p) {
    return std::exp(p.mu + p.sigma * std_normal_quantile(q));
}

double lognormal_mean(const LogNormalParams& p) {
    return std::exp(p.mu + 0.5 * p.sigma * p.sigma);
}

double lognormal_mode(const LogNormalParams& p) {
    return std::exp(p.mu - p.sigma * p.sigma);
}

double lognormal_median(const LogNormalParams& p) {
    return std::exp(p.mu);
}

double lognormal_variance(const LogNormalParams& p) {
    const double s2 = p.sigma * p.sigma;
    return std::expm1(s2) * std::exp(2.0 * p.mu + s2);
}

LogNormalParams fit_lognormal_mle(std::span<const double> times) {
    if (times.size() < 2) {
        throw DegenerateFitError("log-normal fit needs at least 2 points");
    }
    std::vector<double> logs;
    logs.reserve(times.size());
    for (double t : times) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw DomainError("log-normal fit requires positive finite times");
        }
        logs.push_back(std::log(t));
    }
    const auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
    if (*lo == *hi) {
        throw DegenerateFitError("log-normal fit on zero-variance data");
    }
    const double c = static_cast<double>(logs.size());
    double mean = 0.0;
    for (double q : logs) mean += q;
    mean /= c;
    double ss = 0.0;
    for (double q : logs) ss += (q - mean) * (q - mean);
    const double sigma = std::sqrt(ss / c);
    if (!(sigma > 0.0)) {
        throw DegenerateFitError("log-normal fit on zero-variance data");
    }
    return {mean, sigma};
}

LogNormalParams fenton_wilkinson_sum(std::span<const LogNormalParams> legs) {
    if (legs.empty()) {
        throw DomainError("Fenton-Wilkinson sum of an empty list");
    }
    if (legs.size() == 1) {
        return legs.front();
    }
    double mean = 0.0;
    double var = 0.0;
    for (const auto& p : legs) {
        mean += lognormal_mean(p);
        var += lognormal_variance(p);
    }
    const double s2 = std::log1p(var / (mean * mean));
    return {std::log(mean) - 0.5 * s2, std::sqrt(s2)};
}

double german_tank_scale(const PlaceSample& s) {
    const double c = static_cast<double>(s.count());
    return (1.0 + 1.0 / c) * static_cast<double>(s.max_place());
}

double german_tank_estimate(const PlaceSample& s) {
    return german_tank_scale(s) - 1.0;
}

std::int64_t round_place(double x) {
    return static_cast<std::int64_t>(std::llround(x));
}

}  // namespace relayrank
