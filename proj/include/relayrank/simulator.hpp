#pragma once

#include "relayrank/core_stats.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relayrank {

/// Dense row-major n x m matrix of times in minutes; row = team, column = leg.
class TimeMatrix {
public:
    TimeMatrix() = default;
    TimeMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    bool operator==(const TimeMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct RelayConfig {
    std::size_t n = 0;  ///< teams
    std::size_t m = 0;  ///< legs
    std::vector<LogNormalParams> leg_params;
    std::uint64_t seed = 0;
    /// Correlation in log space between any two legs of the same team, through
    /// a shared per-team ability draw. 0 gives independent legs. Each leg keeps
    /// its log-normal marginal for every value in [0, 1).
    double team_correlation = 0.0;

    /// Throws DomainError unless n >= 2, m >= 1, leg_params has m entries and
    /// team_correlation lies in [0, 1).
    void validate() const;

    bool operator==(const RelayConfig&) const = default;
};

struct RelayDataset {
    TimeMatrix leg_times;
    TimeMatrix changeover_times;
    std::vector<std::int64_t> places;  ///< final place of each team, a permutation of 1..n
    std::vector<std::string> team_ids;
    /// Generating configuration, when the dataset came from simulate_relay.
    std::optional<RelayConfig> config;

    std::size_t teams() const noexcept { return leg_times.rows(); }
    std::size_t legs() const noexcept { return leg_times.cols(); }

    bool operator==(const RelayDataset&) const = default;
};

/// (changeover time, final place) pairs at one changeover.
struct ChangeoverSample {
    int leg_index = 0;  ///< 1-based changeover l
    std::vector<double> times;
    std::vector<std::int64_t> places;

    std::size_t size() const noexcept { return times.size(); }
};

struct Changeovers {
    TimeMatrix changeover_times;
    std::vector<std::int64_t> places;
};

/// Leg parameters whose means are 107.5, 111.9, 136.1, 96.6, 103.4, 127.3 and
/// 132.6 minutes with sigma = 0.22 on every leg.
std::vector<LogNormalParams> jukola_like_leg_params();

/// Team correlation under which the changeover-time sigma of a simulation
/// with jukola_like_leg_params stays near 0.22 at every changeover, as in the
/// 2019 Jukola results (sigma between 0.215 and 0.230 for l = 1..7).
inline constexpr double kJukolaTeamCorrelation = 0.95;

/// Jukola-like configuration: 7 legs, jukola_like_leg_params, the correlation
/// above.
RelayConfig jukola_like_config(std::size_t n, std::uint64_t seed);

/// Row-wise prefix sums plus final places by ascending finish time; equal
/// finish times are ordered by team index. Throws DomainError on a
/// nonpositive or non-finite entry.
Changeovers compute_changeovers(const TimeMatrix& leg_times);

/// Draws leg (i, j) from its own substream of the seed and team i's ability
/// from another, so the value of a cell depends only on (seed, i, j,
/// leg_params[j], team_correlation).
RelayDataset simulate_relay(const RelayConfig& config);

/// Builds a dataset from given leg times; team ids default to 1..n.
RelayDataset make_dataset(TimeMatrix leg_times, std::vector<std::string> team_ids = {});

/// Pairs (time at changeover l, final place) for the given teams; l is 1-based.
ChangeoverSample changeover_sample(const RelayDataset& dataset, int leg,
                                   std::span<const std::size_t> indices);

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a log-normal law.
double ks_distance(std::span<const double> sample, const LogNormalParams& p);

/// Average of the r-th smallest changeover-l time (r, l 1-based) over
/// datasets generated with a common configuration.
double empirical_rank_time_mean(std::span<const RelayDataset> datasets, std::size_t rank, int leg);

/// Same as empirical_rank_time_mean but averages F(T_{r:n}), the log-normal
/// c.d.f. with parameters p applied to each rank-r time.
double empirical_rank_probability_mean(std::span<const RelayDataset> datasets, std::size_t rank,
                                       int leg, const LogNormalParams& p);

}  // namespace relayrank
