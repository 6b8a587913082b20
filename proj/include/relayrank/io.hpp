#pragma once

#include "relayrank/evaluation.hpp"
#include "relayrank/simulator.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace relayrank::io {

inline constexpr int kFormatVersion = 1;

// Results file: optional "# format_version: 1" line, then the header
// team_id,leg_1,...,leg_m and one row of decimal minutes per team.

RelayDataset read_results(std::istream& in);
RelayDataset read_results(const std::filesystem::path& path);
void write_results(std::ostream& out, const RelayDataset& dataset);
void write_results(const std::filesystem::path& path, const RelayDataset& dataset);

/// JSON array of {"mu": .., "sigma": ..}.
std::vector<LogNormalParams> read_leg_params(const std::filesystem::path& path);
std::string leg_params_to_json(std::span<const LogNormalParams> params);

/// CSV with header leg,km.
std::vector<double> read_leg_distances(const std::filesystem::path& path);

/// Flat JSON with a model_type tag; numbers printed with 17 significant
/// digits so parsing restores the exact doubles.
std::string model_to_json(const AnyModel& model);
AnyModel model_from_json(const std::string& text);
void write_model(const std::filesystem::path& path, const AnyModel& model);
AnyModel read_model(const std::filesystem::path& path);

/// Report JSON for one or more runs that share dataset, split fraction,
/// models and hyperparameters but differ in seed. Cell rmse is the mean
/// over runs; rmse_per_seed lists each run.
std::string report_to_json(std::span<const EvaluationReport> runs);

/// Per-point CSV: model,leg,team_id,time_min,true_place,pred_place.
void write_points(std::ostream& out, const EvaluationReport& report, const RelayDataset& dataset);

/// Table-style CSV: leg,s,cum_s,w,delta_w,u,delta_u,mu,sigma.
void write_stats(std::ostream& out, const ChangeoverStats& stats);

}  // namespace relayrank::io
