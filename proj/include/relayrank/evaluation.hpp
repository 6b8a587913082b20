#pragma once

#include "relayrank/baselines.hpp"
#include "relayrank/fwos_model.hpp"
#include "relayrank/simulator.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace relayrank {

enum class ModelKind { fwos, ols, ridge, gp };

std::string_view to_string(ModelKind kind);
/// Throws DomainError on an unknown name.
ModelKind parse_model_kind(std::string_view name);
/// Comma-separated list, e.g. "fwos,ols". Empty string gives an empty list.
std::vector<ModelKind> parse_model_list(std::string_view list);

using AnyModel = std::variant<FwosModel, LinearModel, RidgeModel, GpModel>;

struct Hyperparameters {
    double ridge_lambda = 1.0;
    GpHyperOverrides gp;
};

AnyModel fit_model(ModelKind kind, const ChangeoverSample& train, const Hyperparameters& hyper = {});
std::int64_t predict(const AnyModel& model, double t);
ModelKind kind_of(const AnyModel& model);

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

struct Split {
    std::vector<std::size_t> train;  ///< ascending team indices
    std::vector<std::size_t> test;   ///< ascending team indices
};

/// Uniform random subset of c = floor(train_fraction * n) teams; the rest
/// are test teams. Throws SpecError unless c >= 2 and n - c >= 1.
Split split_dataset(const RelayDataset& dataset, const SplitSpec& spec);
Split split_indices(std::size_t n, const SplitSpec& spec);

/// sqrt(mean((pred - truth)^2)). Throws DomainError on empty or mismatched input.
double rmse(std::span<const std::int64_t> predictions, std::span<const std::int64_t> truths);

struct PointRecord {
    std::size_t team = 0;
    double time = 0.0;
    std::int64_t true_place = 0;
    std::int64_t pred_place = 0;

    bool operator==(const PointRecord&) const = default;
};

struct CellResult {
    ModelKind model = ModelKind::fwos;
    int leg = 0;
    bool ok = false;
    std::string error;  ///< set when !ok
    double rmse = 0.0;
    std::vector<PointRecord> points;
    /// Fitted model, kept for inspection (e.g. the FWOS parameters, GP hyperparameters).
    std::optional<AnyModel> fitted;

    bool operator==(const CellResult&) const = default;
};

struct EvaluationReport {
    SplitSpec split;
    std::size_t n = 0;
    std::size_t c = 0;
    std::size_t v = 0;
    Hyperparameters hyper;
    std::vector<ModelKind> models;
    std::vector<CellResult> cells;  ///< leg-major, then in `models` order

    const CellResult* find(ModelKind model, int leg) const;
};

/// Fits every model at every changeover on the same train split and scores
/// the test teams. A cell whose fit throws is marked failed; the run goes on.
/// Legs are evaluated concurrently; the result does not depend on scheduling.
EvaluationReport evaluate_models(const RelayDataset& dataset, const SplitSpec& spec,
                                 std::span<const ModelKind> models, const Hyperparameters& hyper = {});

struct ChangeoverStatsRow {
    int leg = 0;
    std::optional<double> s;
    std::optional<double> cum_s;
    double w = 0.0;
    double delta_w = 0.0;
    double u = 0.0;
    double delta_u = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
};

using ChangeoverStats = std::vector<ChangeoverStatsRow>;

/// Mean w and mode u per changeover with first differences; row l = 1 has
/// delta equal to the value itself. leg_km, when nonempty, must have one
/// entry per changeover.
ChangeoverStats changeover_statistics(std::span<const LogNormalParams> params,
                                      std::span<const double> leg_km = {});
/// MLE over all teams at each changeover, then as above.
ChangeoverStats changeover_statistics(const RelayDataset& dataset,
                                      std::span<const double> leg_km = {});

}  // namespace relayrank
