#include "relayrank/evaluation.hpp"

#include "relayrank/errors.hpp"
#include "relayrank/rng.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

namespace relayrank {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::fwos: return "fwos";
        case ModelKind::ols: return "ols";
        case ModelKind::ridge: return "ridge";
        case ModelKind::gp: return "gp";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    for (auto k : {ModelKind::fwos, ModelKind::ols, ModelKind::ridge, ModelKind::gp}) {
        if (to_string(k) == name) return k;
    }
    throw DomainError("unknown model '" + std::string(name) + "'");
}

std::vector<ModelKind> parse_model_list(std::string_view list) {
    std::vector<ModelKind> out;
    while (!list.empty()) {
        const auto comma = list.find(',');
        auto item = list.substr(0, comma);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
            const auto k = parse_model_kind(item);
            if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
        }
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    return out;
}

AnyModel fit_model(ModelKind kind, const ChangeoverSample& train, const Hyperparameters& hyper) {
    switch (kind) {
        case ModelKind::fwos: return fit_fwos(train);
        case ModelKind::ols: return fit_ols(train);
        case ModelKind::ridge: return fit_ordinal_ridge(train, hyper.ridge_lambda);
        case ModelKind::gp: return fit_gp(train, hyper.gp);
    }
    throw DomainError("unknown model kind");
}

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
}  // namespace

std::int64_t predict(const AnyModel& model, double t) {
    return std::visit(overloaded{
                          [t](const FwosModel& m) { return predict_place(m, t); },
                          [t](const LinearModel& m) { return predict_ols(m, t); },
                          [t](const RidgeModel& m) { return predict_ordinal_ridge(m, t); },
                          [t](const GpModel& m) { return predict_gp(m, t); },
                      },
                      model);
}

ModelKind kind_of(const AnyModel& model) {
    constexpr ModelKind kinds[] = {ModelKind::fwos, ModelKind::ols, ModelKind::ridge, ModelKind::gp};
    return kinds[model.index()];
}

Split split_indices(std::size_t n, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw SpecError("train fraction must lie in (0, 1)");
    }
    // Floor, so 5% of 1653 teams trains on 82 and tests on 1571. The slack
    // absorbs products such as 0.7 * 10 = 6.9999999999999991.
    const auto c = static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n) + 1e-9));
    if (c < 2) throw SpecError("split leaves fewer than 2 training teams");
    if (c >= n) throw SpecError("split leaves no test teams");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    CounterRng rng(substream_key(spec.seed, 0x5e1ec7));
    for (std::size_t i = 0; i < c; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(perm[i], perm[j]);
    }
    Split s{{perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(c)},
            {perm.begin() + static_cast<std::ptrdiff_t>(c), perm.end()}};
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

Split split_dataset(const RelayDataset& dataset, const SplitSpec& spec) {
    return split_indices(dataset.teams(), spec);
}

double rmse(std::span<const std::int64_t> predictions, std::span<const std::int64_t> truths) {
    if (predictions.size() != truths.size()) throw DomainError("RMSE: length mismatch");
    if (predictions.empty()) throw DomainError("RMSE of an empty set");
    double ss = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = static_cast<double>(predictions[i] - truths[i]);
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(predictions.size()));
}

const CellResult* EvaluationReport::find(ModelKind model, int leg) const {
    for (const auto& cell : cells) {
        if (cell.model == model && cell.leg == leg) return &cell;
    }
    return nullptr;
}

namespace {

CellResult evaluate_cell(ModelKind kind, const ChangeoverSample& train, const RelayDataset& ds,
                         std::span<const std::size_t> test, const Hyperparameters& hyper) {
    CellResult cell;
    cell.model = kind;
    cell.leg = train.leg_index;
    try {
        const auto model = fit_model(kind, train, hyper);
        const auto col = static_cast<std::size_t>(train.leg_index - 1);
        std::vector<std::int64_t> pred;
        std::vector<std::int64_t> truth;
        pred.reserve(test.size());
        truth.reserve(test.size());
        cell.points.reserve(test.size());
        for (std::size_t i : test) {
            const double t = ds.changeover_times(i, col);
            const auto p = predict(model, t);
            cell.points.push_back({i, t, ds.places[i], p});
            pred.push_back(p);
            truth.push_back(ds.places[i]);
        }
        cell.rmse = rmse(pred, truth);
        cell.fitted = model;
        cell.ok = true;
    } catch (const Error& e) {
        cell.ok = false;
        cell.error = e.what();
        cell.points.clear();
    }
    return cell;
}

}  // namespace

EvaluationReport evaluate_models(const RelayDataset& dataset, const SplitSpec& spec,
                                 std::span<const ModelKind> models, const Hyperparameters& hyper) {
    const auto split = split_dataset(dataset, spec);
    EvaluationReport report;
    report.split = spec;
    report.n = dataset.teams();
    report.c = split.train.size();
    report.v = split.test.size();
    report.hyper = hyper;
    report.models.assign(models.begin(), models.end());
    if (models.empty()) return report;

    std::vector<std::future<std::vector<CellResult>>> per_leg;
    for (std::size_t l = 1; l <= dataset.legs(); ++l) {
        per_leg.push_back(std::async(std::launch::async, [&, l] {
            const auto train = changeover_sample(dataset, static_cast<int>(l), split.train);
            std::vector<CellResult> cells;
            for (auto kind : models) cells.push_back(evaluate_cell(kind, train, dataset, split.test, hyper));
            return cells;
        }));
    }
    for (auto& f : per_leg) {
        auto cells = f.get();
        std::move(cells.begin(), cells.end(), std::back_inserter(report.cells));
    }
    return report;
}

ChangeoverStats changeover_statistics(std::span<const LogNormalParams> params,
                                      std::span<const double> leg_km) {
    if (params.empty()) throw DomainError("changeover statistics of an empty list");
    if (!leg_km.empty() && leg_km.size() != params.size()) {
        throw DomainError("expected " + std::to_string(params.size()) + " leg distances, got " +
                          std::to_string(leg_km.size()));
    }
    ChangeoverStats out;
    double cum = 0.0;
    for (std::size_t l = 0; l < params.size(); ++l) {
        ChangeoverStatsRow row;
        row.leg = static_cast<int>(l + 1);
        row.mu = params[l].mu;
        row.sigma = params[l].sigma;
        row.w = lognormal_mean(params[l]);
        row.u = lognormal_mode(params[l]);
        row.delta_w = l == 0 ? row.w : row.w - out.back().w;
        row.delta_u = l == 0 ? row.u : row.u - out.back().u;
        if (!leg_km.empty()) {
            cum += leg_km[l];
            row.s = leg_km[l];
            row.cum_s = cum;
        }
        out.push_back(row);
    }
    return out;
}

ChangeoverStats changeover_statistics(const RelayDataset& dataset, std::span<const double> leg_km) {
    if (dataset.teams() == 0 || dataset.legs() == 0) throw DomainError("empty dataset");
    std::vector<LogNormalParams> fits;
    std::vector<double> col(dataset.teams());
    for (std::size_t l = 0; l < dataset.legs(); ++l) {
        for (std::size_t i = 0; i < dataset.teams(); ++i) col[i] = dataset.changeover_times(i, l);
        fits.push_back(fit_lognormal_mle(col));
    }
    return changeover_statistics(fits, leg_km);
}

}  // namespace relayrank
