#include "oracles.hpp"

#include "relayrank/errors.hpp"
#include "relayrank/rng.hpp"
#include "relayrank/simulator.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace relayrank;

namespace {

TimeMatrix matrix(std::initializer_list<std::initializer_list<double>> rows) {
    TimeMatrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (const auto& r : rows) {
        std::size_t j = 0;
        for (double x : r) m(i, j++) = x;
        ++i;
    }
    return m;
}

bool is_permutation_of_1_to_n(std::vector<std::int64_t> p) {
    std::sort(p.begin(), p.end());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] != static_cast<std::int64_t>(i + 1)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("CounterRng draws are reproducible and roughly uniform") {
    CounterRng a(substream_key(1, 2, 3));
    CounterRng b(substream_key(1, 2, 3));
    CounterRng other(substream_key(1, 2, 4));
    double mean = 0.0;
    int same = 0;
    for (int k = 0; k < 100000; ++k) {
        const double x = a.uniform();
        CHECK_FALSE(x <= 0.0);
        CHECK_FALSE(x >= 1.0);
        CHECK(x == b.uniform());
        same += x == other.uniform();
        mean += x;
    }
    CHECK(same == 0);
    CHECK(std::abs(mean / 100000 - 0.5) < 0.005);

    CounterRng c(42);
    std::array<int, 7> hist{};
    for (int k = 0; k < 70000; ++k) ++hist[c.below(7)];
    for (int h : hist) CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("compute_changeovers") {
    const auto a = compute_changeovers(matrix({{10, 20}, {30, 5}}));
    CHECK(a.changeover_times(0, 0) == 10);
    CHECK(a.changeover_times(0, 1) == 30);
    CHECK(a.changeover_times(1, 0) == 30);
    CHECK(a.changeover_times(1, 1) == 35);
    CHECK(a.places == std::vector<std::int64_t>{1, 2});

    CHECK(compute_changeovers(matrix({{5}, {3}, {4}})).places == std::vector<std::int64_t>{3, 1, 2});
    CHECK(compute_changeovers(matrix({{10}, {10}})).places == std::vector<std::int64_t>{1, 2});

    CHECK_THROWS_AS(compute_changeovers(matrix({{10, 0}, {1, 1}})), DomainError);
    CHECK_THROWS_AS(compute_changeovers(matrix({{10, -2}, {1, 1}})), DomainError);
}

TEST_CASE("simulate_relay is deterministic") {
    const RelayConfig cfg{200, 7, jukola_like_leg_params(), 99};
    const auto a = simulate_relay(cfg);
    const auto b = simulate_relay(cfg);
    CHECK(a == b);
    CHECK(a.leg_times.rows() == 200);
    CHECK(a.config == cfg);

    auto other = cfg;
    other.seed = 100;
    CHECK_FALSE(simulate_relay(other).leg_times == a.leg_times);
}

TEST_CASE("substreams: adding teams does not reshuffle existing draws") {
    const RelayConfig small{50, 3, {{4.6, 0.2}, {4.7, 0.2}, {4.8, 0.2}}, 5};
    auto large = small;
    large.n = 80;
    const auto a = simulate_relay(small);
    const auto b = simulate_relay(large);
    for (std::size_t i = 0; i < 50; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(a.leg_times(i, j) == b.leg_times(i, j));
    }
}

TEST_CASE("simulate_relay invariants") {
    for (double rho : {0.0, 0.95}) {
        RelayConfig cfg{500, 7, jukola_like_leg_params(), 3};
        cfg.team_correlation = rho;
        const auto ds = simulate_relay(cfg);
        CHECK(is_permutation_of_1_to_n(ds.places));
        // Prefix sums reproduced bit-for-bit.
        const auto again = compute_changeovers(ds.leg_times);
        CHECK(again.changeover_times == ds.changeover_times);
        for (std::size_t i = 0; i < ds.teams(); ++i) {
            for (std::size_t j = 1; j < ds.legs(); ++j) {
                CHECK(ds.changeover_times(i, j) > ds.changeover_times(i, j - 1));
            }
        }
        const auto winner = std::find(ds.places.begin(), ds.places.end(), 1) - ds.places.begin();
        for (std::size_t i = 0; i < ds.teams(); ++i) {
            CHECK(ds.changeover_times(static_cast<std::size_t>(winner), 6) <= ds.changeover_times(i, 6));
        }
    }
}

TEST_CASE("near-deterministic legs tie and break by team index") {
    // sigma * z must stay below half an ulp of mu for exact ties.
    RelayConfig cfg{3, 2, {{std::log(10.0), 1e-18}, {std::log(20.0), 1e-18}}, 1};
    const auto ds = simulate_relay(cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(ds.changeover_times(i, 0) == doctest::Approx(10.0));
        CHECK(ds.changeover_times(i, 1) == doctest::Approx(30.0));
    }
    CHECK(ds.places == std::vector<std::int64_t>{1, 2, 3});

    cfg.leg_params = {{std::log(10.0), 1e-12}, {std::log(20.0), 1e-12}};
    const auto near = simulate_relay(cfg);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(near.changeover_times(i, 1) - 30.0) < 1e-9);
    CHECK(is_permutation_of_1_to_n(near.places));
}

TEST_CASE("single-leg sample mean matches the log-normal mean") {
    const RelayConfig cfg{100000, 1, {{0.0, 0.25}}, 17};
    const auto ds = simulate_relay(cfg);
    double mean = 0.0;
    for (std::size_t i = 0; i < ds.teams(); ++i) mean += ds.leg_times(i, 0);
    mean /= static_cast<double>(ds.teams());
    CHECK(std::abs(mean / std::exp(0.03125) - 1.0) <= 0.005);
}

TEST_CASE("team correlation keeps marginals and correlates legs") {
    RelayConfig cfg{20000, 2, {{4.6, 0.2}, {4.7, 0.3}}, 23};
    cfg.team_correlation = 0.6;
    const auto ds = simulate_relay(cfg);
    std::vector<double> l0, l1;
    for (std::size_t i = 0; i < ds.teams(); ++i) {
        l0.push_back(std::log(ds.leg_times(i, 0)));
        l1.push_back(std::log(ds.leg_times(i, 1)));
    }
    std::vector<double> second;
    for (std::size_t i = 0; i < ds.teams(); ++i) second.push_back(ds.leg_times(i, 1));
    const auto f1 = fit_lognormal_mle(second);
    CHECK(std::abs(f1.mu - 4.7) < 0.01);
    CHECK(std::abs(f1.sigma - 0.3) < 0.01);

    const double m0 = std::accumulate(l0.begin(), l0.end(), 0.0) / l0.size();
    const double m1 = std::accumulate(l1.begin(), l1.end(), 0.0) / l1.size();
    double c01 = 0, c00 = 0, c11 = 0;
    for (std::size_t i = 0; i < l0.size(); ++i) {
        c01 += (l0[i] - m0) * (l1[i] - m1);
        c00 += (l0[i] - m0) * (l0[i] - m0);
        c11 += (l1[i] - m1) * (l1[i] - m1);
    }
    CHECK(std::abs(c01 / std::sqrt(c00 * c11) - 0.6) < 0.02);

    cfg.team_correlation = 1.0;
    CHECK_THROWS_AS(simulate_relay(cfg), DomainError);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(simulate_relay({1, 1, {{0, 1}}, 0}), DomainError);
    CHECK_THROWS_AS(simulate_relay({5, 0, {}, 0}), DomainError);
    CHECK_THROWS_AS(simulate_relay({5, 2, {{0, 1}}, 0}), DomainError);
}

TEST_CASE("jukola-like leg means") {
    const auto p = jukola_like_leg_params();
    const double expected[] = {107.5, 111.9, 136.1, 96.6, 103.4, 127.3, 132.6};
    REQUIRE(p.size() == 7);
    for (std::size_t j = 0; j < 7; ++j) {
        CHECK(lognormal_mean(p[j]) == doctest::Approx(expected[j]).epsilon(1e-12));
        CHECK(p[j].sigma == 0.22);
    }
}

TEST_CASE("changeover_sample") {
    const auto ds = make_dataset(matrix({{10, 20}, {30, 5}, {12, 40}}), {"a", "b", "c"});
    std::vector<std::size_t> all{0, 1, 2};
    const auto s = changeover_sample(ds, 2, all);
    CHECK(s.leg_index == 2);
    CHECK(s.times == std::vector<double>{30, 35, 52});
    CHECK(s.places == std::vector<std::int64_t>{1, 2, 3});

    std::vector<std::size_t> some{2, 0};
    const auto t = changeover_sample(ds, 1, some);
    CHECK(t.times == std::vector<double>{12, 10});
    CHECK(t.places == std::vector<std::int64_t>{3, 1});

    CHECK_THROWS_AS(changeover_sample(ds, 1, std::vector<std::size_t>{}), DomainError);
    CHECK_THROWS_AS(changeover_sample(ds, 1, std::vector<std::size_t>{3}), DomainError);
    CHECK_THROWS_AS(changeover_sample(ds, 1, std::vector<std::size_t>{1, 1}), DomainError);
    CHECK_THROWS_AS(changeover_sample(ds, 0, all), DomainError);
    CHECK_THROWS_AS(changeover_sample(ds, 3, all), DomainError);
}

TEST_CASE("ks_distance") {
    const LogNormalParams p{4.6, 0.2};
    constexpr int kN = 1000;
    std::vector<double> perfect;
    for (int i = 1; i <= kN; ++i) perfect.push_back(lognormal_quantile((i - 0.5) / kN, p));
    CHECK(ks_distance(perfect, p) <= 0.5 / kN + 1e-9);

    CounterRng rng(substream_key(31, 4));
    std::vector<double> draws(100000);
    for (auto& x : draws) x = std::exp(p.mu + p.sigma * rng.normal());
    CHECK(ks_distance(draws, p) <= 0.006);

    std::vector<double> doubled;
    for (double x : perfect) doubled.push_back(2.0 * x);
    const double shifted = ks_distance(doubled, p);
    CHECK(shifted >= 0.3);
    CHECK(shifted == doctest::Approx(oracle::ks_brute(doubled, [&](double x) { return lognormal_cdf(x, p); })));

    std::vector<double> small(draws.begin(), draws.begin() + 300);
    CHECK(ks_distance(small, p) ==
          doctest::Approx(oracle::ks_brute(small, [&](double x) { return lognormal_cdf(x, p); })));

    CHECK_THROWS_AS(ks_distance(std::vector<double>{}, p), DomainError);
}

TEST_CASE("FW chain: changeover times are close to the FW law") {
    const auto params = jukola_like_leg_params();
    for (double sigma : {0.1, 0.3}) {
        std::vector<LogNormalParams> legs;
        for (const auto& p : params) legs.emplace_back(std::log(lognormal_mean(p)) - 0.5 * sigma * sigma, sigma);
        const auto ds = simulate_relay({100000, 7, legs, 55});
        for (int l = 1; l <= 7; ++l) {
            std::vector<double> col;
            for (std::size_t i = 0; i < ds.teams(); ++i) col.push_back(ds.changeover_times(i, l - 1));
            const auto fw = fenton_wilkinson_sum(std::span(legs).first(static_cast<std::size_t>(l)));
            CHECK_MESSAGE(ks_distance(col, fw) <= 0.02, "sigma " << sigma << " l " << l);
        }
    }
}

TEST_CASE("order statistics of the uniform transform") {
    const LogNormalParams p{4.6, 0.2};
    auto sims = [&](std::size_t n, int trials, std::uint64_t seed) {
        std::vector<RelayDataset> out;
        for (int k = 0; k < trials; ++k) out.push_back(simulate_relay({n, 1, {p}, seed + k}));
        return out;
    };

    const auto hundred = sims(100, 1000, 1000);
    CHECK(std::abs(empirical_rank_probability_mean(hundred, 25, 1, p) - 25.0 / 101.0) <= 0.005);

    const auto pairs = sims(2, 10000, 50000);
    const double lo = empirical_rank_probability_mean(pairs, 1, 1, p);
    const double hi = empirical_rank_probability_mean(pairs, 2, 1, p);
    CHECK(std::abs(lo - 1.0 / 3.0) <= 0.01);
    CHECK(std::abs(lo + hi - 1.0) <= 0.01);

    // Rank-r mean time lies near the quantile at r / (n + 1).
    const double t25 = empirical_rank_time_mean(hundred, 25, 1);
    CHECK(t25 == doctest::Approx(lognormal_quantile(25.0 / 101.0, p)).epsilon(0.01));

    CHECK_THROWS_AS(empirical_rank_time_mean(hundred, 0, 1), DomainError);
    CHECK_THROWS_AS(empirical_rank_time_mean(hundred, 101, 1), DomainError);
    std::vector<RelayDataset> mixed{hundred[0], simulate_relay({50, 1, {p}, 3})};
    CHECK_THROWS_AS(empirical_rank_time_mean(mixed, 1, 1), DomainError);
    std::vector<RelayDataset> laws{hundred[0], simulate_relay({100, 1, {{4.0, 0.2}}, 3})};
    CHECK_THROWS_AS(empirical_rank_time_mean(laws, 1, 1), DomainError);
}
