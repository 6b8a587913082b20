#include "relayrank/baselines.hpp"

#include "relayrank/core_stats.hpp"
#include "relayrank/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relayrank {

namespace {

void check_sample(const ChangeoverSample& s, const char* who) {
    if (s.times.size() != s.places.size()) {
        throw DomainError(std::string(who) + ": mismatched sample lengths");
    }
    if (s.times.size() < 2) {
        throw DegenerateFitError(std::string(who) + ": need at least 2 training pairs");
    }
    for (double t : s.times) {
        if (!std::isfinite(t)) throw DomainError(std::string(who) + ": non-finite time");
    }
}

double mean_of(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

std::vector<double> places_as_real(const ChangeoverSample& s) {
    return {s.places.begin(), s.places.end()};
}

struct CenteredSums {
    double t_mean;
    double r_mean;
    double stt;
    double str;
};

CenteredSums centered_sums(const ChangeoverSample& s, const char* who) {
    const auto [lo, hi] = std::minmax_element(s.times.begin(), s.times.end());
    if (*lo == *hi) {
        throw SingularFitError(std::string(who) + ": all training times are identical");
    }
    const auto r = places_as_real(s);
    CenteredSums out{mean_of(s.times), mean_of(r), 0.0, 0.0};
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double dt = s.times[i] - out.t_mean;
        out.stt += dt * dt;
        out.str += dt * (r[i] - out.r_mean);
    }
    return out;
}

}  // namespace

LinearModel fit_ols(const ChangeoverSample& sample) {
    check_sample(sample, "OLS");
    const auto s = centered_sums(sample, "OLS");
    const double slope = s.str / s.stt;
    return {s.r_mean - slope * s.t_mean, slope};
}

std::int64_t predict_ols(const LinearModel& model, double t) {
    return round_place(model.intercept + model.slope * t);
}

RidgeModel fit_ordinal_ridge(const ChangeoverSample& sample, double lambda) {
    check_sample(sample, "ridge");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("ridge: lambda must be finite and >= 0");
    }
    const auto s = centered_sums(sample, "ridge");
    const double c = static_cast<double>(sample.size());
    const double sd = std::sqrt(s.stt / c);
    // In standardized units szz = stt / sd^2 and szr = str / sd.
    const double slope_std = (s.str / sd) / (s.stt / (sd * sd) + lambda);
    RidgeModel m;
    m.slope = slope_std / sd;
    m.intercept = s.r_mean - m.slope * s.t_mean;
    m.lambda = lambda;
    m.clip_lo = 1;
    m.clip_hi = *std::max_element(sample.places.begin(), sample.places.end());
    if (m.clip_hi < m.clip_lo) {
        throw DomainError("ridge: training places must be >= 1");
    }
    return m;
}

std::int64_t predict_ordinal_ridge(const RidgeModel& model, double t) {
    return std::clamp(round_place(model.intercept + model.slope * t), model.clip_lo, model.clip_hi);
}

double rbf_kernel(double t1, double t2, double lengthscale, double outputscale) {
    const double d = (t1 - t2) / lengthscale;
    return outputscale * std::exp(-0.5 * d * d);
}

double median_pairwise_distance(std::span<const double> times) {
    if (times.size() < 2) throw DomainError("median pairwise distance needs 2 points");
    std::vector<double> d;
    d.reserve(times.size() * (times.size() - 1) / 2);
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = i + 1; j < times.size(); ++j) d.push_back(std::abs(times[i] - times[j]));
    }
    const std::size_t k = d.size() / 2;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    double med = d[k];
    if (d.size() % 2 == 0) {
        med = 0.5 * (med + *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k)));
    }
    return med;
}

GpModel fit_gp(const ChangeoverSample& sample, const GpHyperOverrides& hyper) {
    check_sample(sample, "GP");
    const auto r = places_as_real(sample);
    const std::size_t c = r.size();

    GpModel m;
    m.train_inputs = sample.times;
    if (hyper.outputscale) {
        m.outputscale = *hyper.outputscale;
    } else {
        const double rm = mean_of(r);
        double ss = 0.0;
        for (double x : r) ss += (x - rm) * (x - rm);
        m.outputscale = ss / static_cast<double>(c);
    }
    m.lengthscale = hyper.lengthscale ? *hyper.lengthscale : median_pairwise_distance(sample.times);
    m.noise = hyper.noise ? *hyper.noise : 0.01 * m.outputscale;

    if (!(m.lengthscale > 0.0) || !std::isfinite(m.lengthscale)) {
        throw DomainError("GP: lengthscale must be positive");
    }
    if (!(m.outputscale > 0.0) || !std::isfinite(m.outputscale)) {
        throw DomainError("GP: outputscale must be positive");
    }
    if (!(m.noise > 0.0) || !std::isfinite(m.noise)) {
        throw DomainError("GP: noise must be positive");
    }

    Eigen::MatrixXd k(c, c);
    for (std::size_t i = 0; i < c; ++i) {
        k(i, i) = m.outputscale + m.noise;
        for (std::size_t j = 0; j < i; ++j) {
            k(i, j) = k(j, i) = rbf_kernel(m.train_inputs[i], m.train_inputs[j], m.lengthscale,
                                           m.outputscale);
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
        const double min_ev = eig.eigenvalues().minCoeff();
        std::ostringstream msg;
        msg << "GP: kernel matrix is not positive definite (min eigenvalue " << min_ev << ")";
        throw IllConditionedError(msg.str(), min_ev);
    }
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(c));
    const Eigen::VectorXd alpha = llt.solve(rhs);
    m.alpha.assign(alpha.data(), alpha.data() + alpha.size());
    return m;
}

double gp_posterior_mean(const GpModel& model, double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < model.train_inputs.size(); ++i) {
        acc += rbf_kernel(t, model.train_inputs[i], model.lengthscale, model.outputscale) * model.alpha[i];
    }
    return acc;
}

std::int64_t predict_gp(const GpModel& model, double t) {
    return round_place(gp_posterior_mean(model, t));
}

}  // namespace relayrank
