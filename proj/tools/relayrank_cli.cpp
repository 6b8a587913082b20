// relayrank: simulate relay results, fit place regressors and evaluate them.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.

#include "relayrank/errors.hpp"
#include "relayrank/evaluation.hpp"
#include "relayrank/io.hpp"
#include "relayrank/simulator.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rr = relayrank;

namespace {

constexpr int kUsage = 2;
constexpr int kData = 3;
constexpr int kNumerical = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check_fraction(double f) {
    if (!(f > 0.0 && f < 1.0)) throw UsageError("--train-frac must lie in (0, 1)");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw rr::ParseError("cannot write " + path);
    out << text;
}

struct SimulateArgs {
    std::size_t teams = 0;
    std::size_t legs = 0;
    std::string leg_params;
    std::uint64_t seed = 0;
    double team_correlation = 0.0;
    std::string out;
};

void run_simulate(const SimulateArgs& a) {
    auto params = a.leg_params.empty() ? rr::jukola_like_leg_params() : rr::io::read_leg_params(a.leg_params);
    std::size_t legs = a.legs ? a.legs : params.size();
    if (legs != params.size()) {
        throw UsageError("--legs " + std::to_string(legs) + " does not match " +
                         std::to_string(params.size()) + " leg parameter sets");
    }
    rr::RelayConfig config{a.teams, legs, std::move(params), a.seed};
    config.team_correlation = a.team_correlation;
    const auto ds = rr::simulate_relay(config);
    rr::io::write_results(a.out, ds);
}

struct StatsArgs {
    std::string data;
    std::string distances;
    std::string out;
};

void run_stats(const StatsArgs& a) {
    const auto ds = rr::io::read_results(a.data);
    std::vector<double> km;
    if (!a.distances.empty()) km = rr::io::read_leg_distances(a.distances);
    const auto stats = rr::changeover_statistics(ds, km);
    std::ostringstream s;
    rr::io::write_stats(s, stats);
    write_text(a.out, s.str());
}

struct FitArgs {
    std::string data;
    int leg = 0;
    std::string model;
    double train_frac = 0.8;
    std::uint64_t seed = 0;
    std::string out;
    double lambda = 1.0;
    std::optional<double> gp_lengthscale;
    std::optional<double> gp_outputscale;
    std::optional<double> gp_noise;
};

rr::Hyperparameters hyper_from(double lambda, const std::optional<double>& ls,
                               const std::optional<double>& os, const std::optional<double>& noise) {
    rr::Hyperparameters h;
    h.ridge_lambda = lambda;
    h.gp = {ls, os, noise};
    return h;
}

void run_fit(const FitArgs& a) {
    check_fraction(a.train_frac);
    const auto kind = rr::parse_model_kind(a.model);
    const auto ds = rr::io::read_results(a.data);
    if (a.leg < 1 || static_cast<std::size_t>(a.leg) > ds.legs()) {
        throw UsageError("--leg must lie in 1.." + std::to_string(ds.legs()));
    }
    const auto split = rr::split_dataset(ds, {a.train_frac, a.seed});
    const auto train = rr::changeover_sample(ds, a.leg, split.train);
    const auto model = rr::fit_model(kind, train, hyper_from(a.lambda, a.gp_lengthscale, a.gp_outputscale, a.gp_noise));
    rr::io::write_model(a.out, model);
}

struct PredictArgs {
    std::string model;
    double time = 0.0;
};

void run_predict(const PredictArgs& a) {
    const auto model = rr::io::read_model(a.model);
    std::cout << rr::predict(model, a.time) << '\n';
}

struct EvaluateArgs {
    std::string data;
    double train_frac = 0.8;
    std::uint64_t seed = 0;
    std::size_t seeds = 1;
    std::string models = "fwos,ols,ridge,gp";
    std::string out_report;
    std::string out_points;
    double lambda = 1.0;
    std::optional<double> gp_lengthscale;
    std::optional<double> gp_outputscale;
    std::optional<double> gp_noise;
};

void run_evaluate(const EvaluateArgs& a) {
    check_fraction(a.train_frac);
    if (a.seeds < 1) throw UsageError("--seeds must be >= 1");
    const auto models = rr::parse_model_list(a.models);
    const auto ds = rr::io::read_results(a.data);
    const auto hyper = hyper_from(a.lambda, a.gp_lengthscale, a.gp_outputscale, a.gp_noise);

    std::vector<rr::EvaluationReport> runs;
    for (std::size_t k = 0; k < a.seeds; ++k) {
        runs.push_back(rr::evaluate_models(ds, {a.train_frac, a.seed + k}, models, hyper));
    }
    const auto report = rr::io::report_to_json(runs);
    std::ostringstream points;
    rr::io::write_points(points, runs.front(), ds);
    write_text(a.out_report, report);
    write_text(a.out_points, points.str());
}

void add_hyper_flags(CLI::App* cmd, double& lambda, std::optional<double>& ls, std::optional<double>& os,
                     std::optional<double>& noise) {
    cmd->add_option("--lambda", lambda, "Ridge penalty on standardized time")->capture_default_str();
    cmd->add_option("--gp-lengthscale", ls, "GP RBF lengthscale in minutes (default: median pairwise distance)");
    cmd->add_option("--gp-outputscale", os, "GP output variance (default: variance of training places)");
    cmd->add_option("--gp-noise", noise, "GP noise variance (default: 0.01 * outputscale)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relay place prediction from changeover times"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Write a simulated results file");
    simulate->add_option("--teams", sim.teams, "Number of teams")->required()->check(CLI::Range(std::size_t{2}, std::size_t{10000000}));
    simulate->add_option("--legs", sim.legs, "Number of legs (default: from leg params)");
    simulate->add_option("--leg-params", sim.leg_params, "JSON array of {mu, sigma} (default: built-in Jukola-like legs)")
        ->check(CLI::ExistingFile);
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_option("--team-correlation", sim.team_correlation,
                         "Log-space correlation between legs of one team, in [0, 1)")
        ->capture_default_str();
    simulate->add_option("--out", sim.out, "Output results CSV")->required();

    StatsArgs st;
    auto* stats = app.add_subcommand("stats", "Per-changeover log-normal statistics");
    stats->add_option("--data", st.data, "Results CSV")->required();
    stats->add_option("--distances", st.distances, "CSV leg,km");
    stats->add_option("--out", st.out, "Output CSV")->required();

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "Fit one model at one changeover");
    fit->add_option("--data", fa.data, "Results CSV")->required();
    fit->add_option("--leg", fa.leg, "Changeover index (1-based)")->required();
    fit->add_option("--model", fa.model, "fwos | ols | ridge | gp")->required()
        ->check(CLI::IsMember({"fwos", "ols", "ridge", "gp"}));
    fit->add_option("--train-frac", fa.train_frac, "Training fraction")->capture_default_str();
    fit->add_option("--seed", fa.seed, "Split seed")->capture_default_str();
    fit->add_option("--out", fa.out, "Output model JSON")->required();
    add_hyper_flags(fit, fa.lambda, fa.gp_lengthscale, fa.gp_outputscale, fa.gp_noise);

    PredictArgs pa;
    auto* pred = app.add_subcommand("predict", "Print the predicted place for a changeover time");
    pred->add_option("--model", pa.model, "Model JSON")->required();
    pred->add_option("--time", pa.time, "Changeover time in minutes")->required();

    EvaluateArgs ea;
    auto* eval = app.add_subcommand("evaluate", "Train/test evaluation of all models at every changeover");
    eval->add_option("--data", ea.data, "Results CSV")->required();
    eval->add_option("--train-frac", ea.train_frac, "Training fraction")->capture_default_str();
    eval->add_option("--seed", ea.seed, "First split seed")->capture_default_str();
    eval->add_option("--seeds", ea.seeds, "Number of consecutive seeds to average")->capture_default_str();
    eval->add_option("--models", ea.models, "Comma-separated model list")->capture_default_str();
    eval->add_option("--out-report", ea.out_report, "Output report JSON")->required();
    eval->add_option("--out-points", ea.out_points, "Output per-point CSV")->required();
    add_hyper_flags(eval, ea.lambda, ea.gp_lengthscale, ea.gp_outputscale, ea.gp_noise);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*simulate) run_simulate(sim);
        else if (*stats) run_stats(st);
        else if (*fit) run_fit(fa);
        else if (*pred) run_predict(pa);
        else if (*eval) run_evaluate(ea);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const rr::SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const rr::DegenerateFitError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const rr::SingularFitError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const rr::IllConditionedError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const rr::Error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    }
    return 0;
}
