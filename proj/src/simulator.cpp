#include "relayrank/simulator.hpp"

#include "relayrank/errors.hpp"
#include "relayrank/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relayrank {

double CounterRng::normal() {
    return std_normal_quantile(uniform());
}

void RelayConfig::validate() const {
    if (n < 2) throw DomainError("relay needs at least 2 teams");
    if (m < 1) throw DomainError("relay needs at least 1 leg");
    if (leg_params.size() != m) {
        throw DomainError("expected " + std::to_string(m) + " leg parameter sets, got " +
                          std::to_string(leg_params.size()));
    }
    if (!(team_correlation >= 0.0 && team_correlation < 1.0)) {
        throw DomainError("team correlation must lie in [0, 1)");
    }
}

std::vector<LogNormalParams> jukola_like_leg_params() {
    constexpr double sigma = 0.22;
    constexpr double means[] = {107.5, 111.9, 136.1, 96.6, 103.4, 127.3, 132.6};
    std::vector<LogNormalParams> out;
    for (double w : means) {
        out.emplace_back(std::log(w) - 0.5 * sigma * sigma, sigma);
    }
    return out;
}

RelayConfig jukola_like_config(std::size_t n, std::uint64_t seed) {
    RelayConfig c{n, 7, jukola_like_leg_params(), seed};
    c.team_correlation = kJukolaTeamCorrelation;
    return c;
}

Changeovers compute_changeovers(const TimeMatrix& leg_times) {
    const std::size_t n = leg_times.rows();
    const std::size_t m = leg_times.cols();
    Changeovers out{TimeMatrix(n, m), std::vector<std::int64_t>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double z = leg_times(i, j);
            if (!(z > 0.0) || !std::isfinite(z)) {
                throw DomainError("leg time at team " + std::to_string(i) + ", leg " +
                                  std::to_string(j + 1) + " must be positive and finite");
            }
            acc += z;
            out.changeover_times(i, j) = acc;
        }
    }
    if (m == 0) return out;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& ct = out.changeover_times;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ct(a, m - 1) < ct(b, m - 1);
    });
    for (std::size_t r = 0; r < n; ++r) {
        out.places[order[r]] = static_cast<std::int64_t>(r + 1);
    }
    return out;
}

RelayDataset make_dataset(TimeMatrix leg_times, std::vector<std::string> team_ids) {
    const std::size_t n = leg_times.rows();
    if (team_ids.empty()) {
        team_ids.reserve(n);
        for (std::size_t i = 0; i < n; ++i) team_ids.push_back(std::to_string(i + 1));
    } else if (team_ids.size() != n) {
        throw DomainError("team id count does not match leg time rows");
    }
    auto derived = compute_changeovers(leg_times);
    return RelayDataset{std::move(leg_times), std::move(derived.changeover_times),
                        std::move(derived.places), std::move(team_ids), std::nullopt};
}

RelayDataset simulate_relay(const RelayConfig& config) {
    config.validate();
    constexpr std::uint64_t kAbilityStream = ~std::uint64_t{0};
    const double shared = std::sqrt(config.team_correlation);
    const double own = std::sqrt(1.0 - config.team_correlation);
    TimeMatrix legs(config.n, config.m);
    for (std::size_t i = 0; i < config.n; ++i) {
        double ability = 0.0;
        if (config.team_correlation > 0.0) {
            CounterRng rng(substream_key(config.seed, i, kAbilityStream));
            ability = rng.normal();
        }
        for (std::size_t j = 0; j < config.m; ++j) {
            CounterRng rng(substream_key(config.seed, i, j));
            const auto& p = config.leg_params[j];
            const double z = config.team_correlation > 0.0 ? shared * ability + own * rng.normal()
                                                           : rng.normal();
            legs(i, j) = std::exp(p.mu + p.sigma * z);
        }
    }
    auto ds = make_dataset(std::move(legs));
    ds.config = config;
    return ds;
}

ChangeoverSample changeover_sample(const RelayDataset& dataset, int leg,
                                   std::span<const std::size_t> indices) {
    if (leg < 1 || static_cast<std::size_t>(leg) > dataset.legs()) {
        throw DomainError("changeover index " + std::to_string(leg) + " out of range");
    }
    if (indices.empty()) {
        throw DomainError("changeover sample needs at least one team");
    }
    std::vector<bool> used(dataset.teams(), false);
    ChangeoverSample s;
    s.leg_index = leg;
    s.times.reserve(indices.size());
    s.places.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= dataset.teams()) {
            throw DomainError("team index " + std::to_string(i) + " out of range");
        }
        if (used[i]) {
            throw DomainError("team index " + std::to_string(i) + " repeated");
        }
        used[i] = true;
        s.times.push_back(dataset.changeover_times(i, static_cast<std::size_t>(leg - 1)));
        s.places.push_back(dataset.places[i]);
    }
    return s;
}

double ks_distance(std::span<const double> sample, const LogNormalParams& p) {
    if (sample.empty()) {
        throw DomainError("KS distance of an empty sample");
    }
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = lognormal_cdf(sorted[i], p);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

namespace {

void check_common_config(std::span<const RelayDataset> datasets, std::size_t rank, int leg) {
    if (datasets.empty()) {
        throw DomainError("no datasets given");
    }
    const auto& first = datasets.front();
    for (const auto& ds : datasets) {
        if (ds.teams() != first.teams() || ds.legs() != first.legs()) {
            throw DomainError("datasets differ in shape");
        }
        if (ds.config && first.config &&
            (ds.config->leg_params != first.config->leg_params)) {
            throw DomainError("datasets come from different leg laws");
        }
    }
    if (rank < 1 || rank > first.teams()) {
        throw DomainError("rank out of range");
    }
    if (leg < 1 || static_cast<std::size_t>(leg) > first.legs()) {
        throw DomainError("changeover index out of range");
    }
}

double rank_time(const RelayDataset& ds, std::size_t rank, int leg) {
    std::vector<double> col(ds.teams());
    for (std::size_t i = 0; i < ds.teams(); ++i) {
        col[i] = ds.changeover_times(i, static_cast<std::size_t>(leg - 1));
    }
    auto nth = col.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(col.begin(), nth, col.end());
    return *nth;
}

}  // namespace

double empirical_rank_time_mean(std::span<const RelayDataset> datasets, std::size_t rank, int leg) {
    check_common_config(datasets, rank, leg);
    double acc = 0.0;
    for (const auto& ds : datasets) acc += rank_time(ds, rank, leg);
    return acc / static_cast<double>(datasets.size());
}

double empirical_rank_probability_mean(std::span<const RelayDataset> datasets, std::size_t rank,
                                       int leg, const LogNormalParams& p) {
    check_common_config(datasets, rank, leg);
    double acc = 0.0;
    for (const auto& ds : datasets) acc += lognormal_cdf(rank_time(ds, rank, leg), p);
    return acc / static_cast<double>(datasets.size());
}

}  // namespace relayrank
