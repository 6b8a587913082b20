#include "oracles.hpp"

#include "relayrank/errors.hpp"
#include "relayrank/evaluation.hpp"
#include "relayrank/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

using namespace relayrank;

TEST_CASE("split sizes follow the train fraction") {
    const auto eighty = split_indices(1653, {0.8, 1});
    CHECK(eighty.train.size() == 1322);
    CHECK(eighty.test.size() == 331);
    const auto five = split_indices(1653, {0.05, 1});
    CHECK(five.train.size() == 82);
    CHECK(five.test.size() == 1571);
}

TEST_CASE("split is deterministic, disjoint and exhaustive") {
    const auto a = split_indices(500, {0.3, 77});
    const auto b = split_indices(500, {0.3, 77});
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    CHECK_FALSE(split_indices(500, {0.3, 78}).train == a.train);

    std::set<std::size_t> all(a.train.begin(), a.train.end());
    for (auto i : a.test) CHECK(all.insert(i).second);
    CHECK(all.size() == 500);
    CHECK(*all.rbegin() == 499);
}

TEST_CASE("split spec errors") {
    CHECK_THROWS_AS(split_indices(10, {0.0, 1}), SpecError);
    CHECK_THROWS_AS(split_indices(10, {1.0, 1}), SpecError);
    CHECK_THROWS_AS(split_indices(10, {0.15, 1}), SpecError);  // c = 1
    CHECK(split_indices(10, {0.999, 1}).test.size() == 1);
    CHECK_THROWS_AS(split_indices(10, {0.9999999999, 1}), SpecError);  // v = 0
    CHECK(split_indices(10, {0.7, 1}).train.size() == 7);
    CHECK_NOTHROW(split_indices(10, {0.2, 1}));
}

TEST_CASE("rmse") {
    const std::vector<std::int64_t> a{3, 5}, b{1, 5};
    CHECK(rmse(a, a) == 0.0);
    CHECK(std::abs(rmse(a, b) - std::sqrt(2.0)) <= 1e-9);
    CHECK(rmse(std::vector<std::int64_t>{7}, std::vector<std::int64_t>{4}) == 3.0);
    CHECK_THROWS_AS(rmse(a, std::vector<std::int64_t>{1}), DomainError);
    CHECK_THROWS_AS(rmse(std::vector<std::int64_t>{}, std::vector<std::int64_t>{}), DomainError);
}

TEST_CASE("rmse is invariant under joint permutation") {
    CounterRng rng(substream_key(4, 4));
    std::vector<std::int64_t> p(50), t(50);
    for (std::size_t i = 0; i < 50; ++i) {
        p[i] = static_cast<std::int64_t>(rng.below(100));
        t[i] = static_cast<std::int64_t>(rng.below(100));
    }
    const double base = rmse(p, t);
    for (int k = 0; k < 20; ++k) {
        for (std::size_t i = 50; i > 1; --i) {
            const auto j = rng.below(i);
            std::swap(p[i - 1], p[j]);
            std::swap(t[i - 1], t[j]);
        }
        CHECK(rmse(p, t) == doctest::Approx(base).epsilon(1e-15));
    }
}

TEST_CASE("model list parsing") {
    CHECK(parse_model_list("fwos,ols, ridge,gp") ==
          std::vector<ModelKind>{ModelKind::fwos, ModelKind::ols, ModelKind::ridge, ModelKind::gp});
    CHECK(parse_model_list("").empty());
    CHECK(parse_model_list("gp,gp") == std::vector<ModelKind>{ModelKind::gp});
    CHECK_THROWS_AS(parse_model_list("fwos,svm"), DomainError);
}

TEST_CASE("FWOS is near-exact when every changeover ranks like the finish") {
    // One log-normal time per team; every changeover is a multiple of it, so
    // the changeover ranking equals the final ranking at every l.
    const LogNormalParams p{4.6, 0.2};
    const auto base = simulate_relay({100, 1, {p}, 8});
    TimeMatrix legs(100, 4);
    for (std::size_t i = 0; i < 100; ++i) {
        for (std::size_t j = 0; j < 4; ++j) legs(i, j) = base.leg_times(i, 0);
    }
    const auto ds = make_dataset(std::move(legs));
    const std::vector<ModelKind> models{ModelKind::fwos};
    const auto report = evaluate_models(ds, {0.8, 2}, models);
    REQUIRE(report.cells.size() == 4);
    for (const auto& cell : report.cells) {
        REQUIRE(cell.ok);
        CHECK(cell.points.size() == 20);
        // Rank function oracle: the true place equals the rank of t among all
        // teams, and FWOS approximates 101 * F(t).
        CHECK(cell.rmse <= 5.0);
    }
}

TEST_CASE("evaluate_models on a simulated relay") {
    const auto ds = simulate_relay(jukola_like_config(1653, 21));
    const std::vector<ModelKind> models{ModelKind::fwos, ModelKind::ols, ModelKind::ridge, ModelKind::gp};
    const auto report = evaluate_models(ds, {0.8, 5}, models);
    CHECK(report.n == 1653);
    CHECK(report.c == 1322);
    CHECK(report.v == 331);
    REQUIRE(report.cells.size() == 28);
    for (const auto& cell : report.cells) {
        CHECK(cell.ok);
        CHECK(cell.points.size() == 331);
        CHECK(cell.rmse >= 0.0);
    }
    for (int l = 1; l <= 7; ++l) {
        CHECK(report.find(ModelKind::fwos, l)->rmse < report.find(ModelKind::ols, l)->rmse);
    }
    CHECK(report.find(ModelKind::fwos, 7)->rmse < report.find(ModelKind::fwos, 1)->rmse);

    // Same inputs, same report.
    const auto again = evaluate_models(ds, {0.8, 5}, models);
    CHECK(again.cells == report.cells);

    // Test points follow the split.
    const auto split = split_dataset(ds, {0.8, 5});
    std::vector<std::size_t> teams;
    for (const auto& p : report.cells.front().points) teams.push_back(p.team);
    CHECK(teams == split.test);
}

TEST_CASE("empty model set gives an empty report") {
    const auto ds = simulate_relay({50, 2, {{4, 0.2}, {4, 0.2}}, 1});
    const auto report = evaluate_models(ds, {0.5, 1}, std::vector<ModelKind>{});
    CHECK(report.cells.empty());
    CHECK(report.v == 25);
}

TEST_CASE("failing cells are marked, others survive") {
    // Leg 1 identical for every team: OLS/ridge are singular and the FWOS fit
    // has zero variance there. Leg 2 varies.
    TimeMatrix legs(20, 2);
    for (std::size_t i = 0; i < 20; ++i) {
        legs(i, 0) = 50.0;
        legs(i, 1) = 40.0 + static_cast<double>(i * 7 % 20);
    }
    const auto ds = make_dataset(std::move(legs));
    const std::vector<ModelKind> models{ModelKind::fwos, ModelKind::ols, ModelKind::ridge};
    const auto report = evaluate_models(ds, {0.5, 3}, models);
    for (auto kind : models) {
        const auto* bad = report.find(kind, 1);
        REQUIRE(bad);
        CHECK_FALSE(bad->ok);
        CHECK_FALSE(bad->error.empty());
        CHECK(bad->points.empty());
        CHECK(report.find(kind, 2)->ok);
    }
}

TEST_CASE("changeover_statistics from parameters") {
    const auto row1 = oracle::invert_mean_mode(107.5, 99.5);
    const auto row2 = oracle::invert_mean_mode(219.4, 203.5);
    const std::vector<LogNormalParams> params{{row1.mu, row1.sigma}, {row2.mu, row2.sigma}};
    const std::vector<double> km{10.7, 10.4};
    const auto st = changeover_statistics(params, km);
    REQUIRE(st.size() == 2);
    CHECK(std::abs(st[0].w - 107.5) <= 0.05);
    CHECK(std::abs(st[0].u - 99.5) <= 0.05);
    CHECK(st[0].delta_w == st[0].w);
    CHECK(st[0].delta_u == st[0].u);
    CHECK(st[1].delta_w == doctest::Approx(111.9));
    CHECK(st[1].delta_u == doctest::Approx(104.0));
    CHECK(*st[1].cum_s == doctest::Approx(21.1));
    CHECK(st[0].w > st[0].u);

    const std::vector<LogNormalParams> quoted{{4.6517, 0.2269}};
    const auto q = changeover_statistics(quoted);
    CHECK(std::abs(q[0].w - 107.5) <= 0.05);
    CHECK(std::abs(q[0].u - 99.5) <= 0.05);
    CHECK_FALSE(q[0].s.has_value());

    CHECK_THROWS_AS(changeover_statistics(params, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("changeover_statistics from a simulation") {
    const auto ds = simulate_relay(jukola_like_config(1653, 4));
    const auto st = changeover_statistics(ds);
    REQUIRE(st.size() == 7);
    for (std::size_t l = 1; l < 7; ++l) CHECK(st[l].w > st[l - 1].w);
    const auto best = std::max_element(st.begin(), st.end(),
                                       [](const auto& a, const auto& b) { return a.delta_w < b.delta_w; });
    CHECK(best->leg == 3);
}
