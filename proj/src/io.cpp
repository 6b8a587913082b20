#include "relayrank/io.hpp"

#include "relayrank/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace relayrank::io {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        out.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

bool is_comment_or_blank(std::string_view line) {
    line = trim(line);
    return line.empty() || line.front() == '#';
}

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string num17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    return out;
}

}  // namespace

RelayDataset read_results(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t m = 0;
    bool have_header = false;
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    std::vector<double> cells;

    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        const auto fields = split_csv(line);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "team_id") {
                throw ParseError("header must be team_id,leg_1,...,leg_m", line_no);
            }
            for (std::size_t j = 1; j < fields.size(); ++j) {
                if (fields[j] != "leg_" + std::to_string(j)) {
                    throw ParseError("header column " + std::to_string(j + 1) + " must be leg_" +
                                         std::to_string(j),
                                     line_no);
                }
            }
            m = fields.size() - 1;
            have_header = true;
            continue;
        }
        if (fields.size() != m + 1) {
            throw ParseError("expected " + std::to_string(m + 1) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        std::string id(fields[0]);
        if (id.empty()) throw ParseError("empty team_id", line_no);
        if (!seen.insert(id).second) throw ParseError("duplicate team_id '" + id + "'", line_no);
        for (std::size_t j = 1; j <= m; ++j) {
            double t = 0.0;
            if (!parse_double(fields[j], t)) {
                throw ParseError("column leg_" + std::to_string(j) + ": not a number '" +
                                     std::string(fields[j]) + "'",
                                 line_no);
            }
            if (!(t > 0.0) || !std::isfinite(t)) {
                throw ParseError("column leg_" + std::to_string(j) + ": leg time must be positive",
                                 line_no);
            }
            cells.push_back(t);
        }
        ids.push_back(std::move(id));
    }
    if (!have_header) throw ParseError("results file is empty");
    if (ids.empty()) throw ParseError("results file has no teams");

    TimeMatrix legs(ids.size(), m);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) legs(i, j) = cells[i * m + j];
    }
    return make_dataset(std::move(legs), std::move(ids));
}

RelayDataset read_results(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_results(in);
}

void write_results(std::ostream& out, const RelayDataset& dataset) {
    out << "# format_version: " << kFormatVersion << '\n';
    out << "team_id";
    for (std::size_t j = 1; j <= dataset.legs(); ++j) out << ",leg_" << j;
    out << '\n';
    for (std::size_t i = 0; i < dataset.teams(); ++i) {
        out << dataset.team_ids[i];
        for (std::size_t j = 0; j < dataset.legs(); ++j) out << ',' << fixed6(dataset.leg_times(i, j));
        out << '\n';
    }
}

void write_results(const std::filesystem::path& path, const RelayDataset& dataset) {
    auto out = open_out(path);
    write_results(out, dataset);
}

std::vector<LogNormalParams> read_leg_params(const std::filesystem::path& path) {
    auto in = open_in(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!doc.is_array() || doc.empty()) throw ParseError(path.string() + ": expected a nonempty JSON array");
    std::vector<LogNormalParams> out;
    for (const auto& item : doc) {
        if (!item.contains("mu") || !item.contains("sigma") || !item["mu"].is_number() ||
            !item["sigma"].is_number()) {
            throw ParseError(path.string() + ": each entry needs numeric mu and sigma");
        }
        out.emplace_back(item["mu"].get<double>(), item["sigma"].get<double>());
    }
    return out;
}

std::string leg_params_to_json(std::span<const LogNormalParams> params) {
    std::string s = "[\n";
    for (std::size_t i = 0; i < params.size(); ++i) {
        s += "  {\"mu\": " + num17(params[i].mu) + ", \"sigma\": " + num17(params[i].sigma) + "}";
        s += i + 1 < params.size() ? ",\n" : "\n";
    }
    return s + "]\n";
}

std::vector<double> read_leg_distances(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<double> km;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        const auto f = split_csv(line);
        if (!header) {
            if (f.size() != 2 || f[0] != "leg" || f[1] != "km") throw ParseError("header must be leg,km", line_no);
            header = true;
            continue;
        }
        double leg = 0.0;
        double d = 0.0;
        if (f.size() != 2 || !parse_double(f[0], leg) || !parse_double(f[1], d)) {
            throw ParseError("expected leg,km", line_no);
        }
        if (leg != static_cast<double>(km.size() + 1)) throw ParseError("legs must be listed 1,2,...", line_no);
        if (!(d > 0.0)) throw ParseError("leg distance must be positive", line_no);
        km.push_back(d);
    }
    if (km.empty()) throw ParseError(path.string() + ": no leg distances");
    return km;
}

namespace {

std::string join17(std::span<const double> v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += num17(v[i]);
    }
    return s + "]";
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double need_number(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
        throw ParseError(std::string("model JSON: missing numeric field '") + key + "'");
    }
    return doc[key].get<double>();
}

std::int64_t need_integer(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_integer()) {
        throw ParseError(std::string("model JSON: missing integer field '") + key + "'");
    }
    return doc[key].get<std::int64_t>();
}

std::vector<double> need_array(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) {
        throw ParseError(std::string("model JSON: missing array field '") + key + "'");
    }
    std::vector<double> out;
    for (const auto& x : doc[key]) {
        if (!x.is_number()) throw ParseError(std::string("model JSON: non-numeric entry in '") + key + "'");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

std::string model_to_json(const AnyModel& model) {
    std::string head = "{\"format_version\":" + std::to_string(kFormatVersion) + ",\"model_type\":\"" +
                       std::string(to_string(kind_of(model))) + "\",";
    const std::string body = std::visit(
        overloaded{
            [](const FwosModel& m) {
                return "\"mu\":" + num17(m.params.mu) + ",\"sigma\":" + num17(m.params.sigma) +
                       ",\"scale\":" + num17(m.scale) + ",\"c\":" + std::to_string(m.c) +
                       ",\"leg_index\":" + std::to_string(m.leg_index);
            },
            [](const LinearModel& m) {
                return "\"intercept\":" + num17(m.intercept) + ",\"slope\":" + num17(m.slope);
            },
            [](const RidgeModel& m) {
                return "\"intercept\":" + num17(m.intercept) + ",\"slope\":" + num17(m.slope) +
                       ",\"lambda\":" + num17(m.lambda) + ",\"clip_lo\":" + std::to_string(m.clip_lo) +
                       ",\"clip_hi\":" + std::to_string(m.clip_hi);
            },
            [](const GpModel& m) {
                return "\"lengthscale\":" + num17(m.lengthscale) + ",\"outputscale\":" +
                       num17(m.outputscale) + ",\"noise\":" + num17(m.noise) +
                       ",\"train_inputs\":" + join17(m.train_inputs) + ",\"alpha\":" + join17(m.alpha);
            },
        },
        model);
    return head + body + "}\n";
}

AnyModel model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("model JSON: expected an object");
    if (doc.contains("format_version") && doc["format_version"] != kFormatVersion) {
        throw ParseError("model JSON: unsupported format_version");
    }
    if (!doc.contains("model_type") || !doc["model_type"].is_string()) {
        throw ParseError("model JSON: missing model_type");
    }
    ModelKind kind;
    try {
        kind = parse_model_kind(doc["model_type"].get<std::string>());
    } catch (const DomainError& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
    switch (kind) {
        case ModelKind::fwos: {
            FwosModel m;
            m.params = LogNormalParams(need_number(doc, "mu"), need_number(doc, "sigma"));
            m.scale = need_number(doc, "scale");
            m.c = need_integer(doc, "c");
            m.leg_index = static_cast<int>(need_integer(doc, "leg_index"));
            m.validate();
            return m;
        }
        case ModelKind::ols:
            return LinearModel{need_number(doc, "intercept"), need_number(doc, "slope")};
        case ModelKind::ridge: {
            RidgeModel m;
            m.intercept = need_number(doc, "intercept");
            m.slope = need_number(doc, "slope");
            m.lambda = need_number(doc, "lambda");
            m.clip_lo = need_integer(doc, "clip_lo");
            m.clip_hi = need_integer(doc, "clip_hi");
            if (m.lambda < 0.0 || m.clip_lo > m.clip_hi) throw ParseError("model JSON: invalid ridge fields");
            return m;
        }
        case ModelKind::gp: {
            GpModel m;
            m.lengthscale = need_number(doc, "lengthscale");
            m.outputscale = need_number(doc, "outputscale");
            m.noise = need_number(doc, "noise");
            m.train_inputs = need_array(doc, "train_inputs");
            m.alpha = need_array(doc, "alpha");
            if (m.alpha.size() != m.train_inputs.size()) {
                throw ParseError("model JSON: alpha and train_inputs differ in length");
            }
            if (!(m.lengthscale > 0.0) || !(m.noise > 0.0)) {
                throw ParseError("model JSON: GP lengthscale and noise must be positive");
            }
            return m;
        }
    }
    throw ParseError("model JSON: unknown model_type");
}

void write_model(const std::filesystem::path& path, const AnyModel& model) {
    auto out = open_out(path);
    out << model_to_json(model);
}

AnyModel read_model(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

namespace {

json model_summary(const AnyModel& model) {
    return std::visit(overloaded{
                          [](const FwosModel& m) -> json {
                              return {{"mu", m.params.mu},
                                      {"sigma", m.params.sigma},
                                      {"scale", m.scale},
                                      {"n_hat", m.n_hat()},
                                      {"c", m.c},
                                      {"inflection_time", inflection_time(m)}};
                          },
                          [](const LinearModel& m) -> json {
                              return {{"intercept", m.intercept}, {"slope", m.slope}};
                          },
                          [](const RidgeModel& m) -> json {
                              return {{"intercept", m.intercept}, {"slope", m.slope},
                                      {"lambda", m.lambda},       {"clip_lo", m.clip_lo},
                                      {"clip_hi", m.clip_hi}};
                          },
                          [](const GpModel& m) -> json {
                              return {{"lengthscale", m.lengthscale},
                                      {"outputscale", m.outputscale},
                                      {"noise", m.noise}};
                          },
                      },
                      model);
}

json optional_number(const std::optional<double>& x, const char* fallback) {
    return x ? json(*x) : json(fallback);
}

}  // namespace

std::string report_to_json(std::span<const EvaluationReport> runs) {
    if (runs.empty()) throw DomainError("no evaluation runs to report");
    const auto& first = runs.front();

    json doc;
    doc["format_version"] = kFormatVersion;
    doc["n"] = first.n;
    doc["c"] = first.c;
    doc["v"] = first.v;
    doc["train_fraction"] = first.split.train_fraction;
    doc["seeds"] = json::array();
    for (const auto& r : runs) doc["seeds"].push_back(r.split.seed);
    doc["models"] = json::array();
    for (auto k : first.models) doc["models"].push_back(to_string(k));
    doc["hyperparameters"] = {
        {"ridge_lambda", first.hyper.ridge_lambda},
        {"ridge_input", "standardized time (zero mean, unit population variance)"},
        {"gp_lengthscale", optional_number(first.hyper.gp.lengthscale, "median pairwise training-time distance")},
        {"gp_outputscale", optional_number(first.hyper.gp.outputscale, "population variance of training places")},
        {"gp_noise", optional_number(first.hyper.gp.noise, "0.01 * outputscale")},
        {"gp_optimization", "none (fixed heuristic)"},
    };

    doc["cells"] = json::array();
    for (const auto& cell : first.cells) {
        json out;
        out["model"] = to_string(cell.model);
        out["leg"] = cell.leg;
        json per_seed = json::array();
        double acc = 0.0;
        std::size_t ok = 0;
        std::string error;
        for (const auto& run : runs) {
            const auto* c = run.find(cell.model, cell.leg);
            if (c && c->ok) {
                per_seed.push_back(c->rmse);
                acc += c->rmse;
                ++ok;
            } else {
                per_seed.push_back(nullptr);
                if (error.empty()) error = c ? c->error : "cell missing";
            }
        }
        out["status"] = ok == runs.size() ? "ok" : "failed";
        out["rmse"] = ok ? json(acc / static_cast<double>(ok)) : json(nullptr);
        out["rmse_per_seed"] = per_seed;
        out["points"] = cell.points.size();
        if (!error.empty()) out["error"] = error;
        if (cell.fitted) out["fitted"] = model_summary(*cell.fitted);
        doc["cells"].push_back(out);
    }
    return doc.dump(2) + "\n";
}

void write_points(std::ostream& out, const EvaluationReport& report, const RelayDataset& dataset) {
    out << "# format_version: " << kFormatVersion << '\n';
    out << "model,leg,team_id,time_min,true_place,pred_place\n";
    for (const auto& cell : report.cells) {
        if (!cell.ok) continue;
        for (const auto& p : cell.points) {
            out << to_string(cell.model) << ',' << cell.leg << ',' << dataset.team_ids[p.team] << ','
                << fixed6(p.time) << ',' << p.true_place << ',' << p.pred_place << '\n';
        }
    }
}

void write_stats(std::ostream& out, const ChangeoverStats& stats) {
    auto opt = [](const std::optional<double>& x) { return x ? fixed6(*x) : std::string(); };
    out << "# format_version: " << kFormatVersion << '\n';
    out << "leg,s,cum_s,w,delta_w,u,delta_u,mu,sigma\n";
    for (const auto& r : stats) {
        out << r.leg << ',' << opt(r.s) << ',' << opt(r.cum_s) << ',' << fixed6(r.w) << ','
            << fixed6(r.delta_w) << ',' << fixed6(r.u) << ',' << fixed6(r.delta_u) << ','
            << num17(r.mu) << ',' << num17(r.sigma) << '\n';
    }
}

}  // namespace relayrank::io
