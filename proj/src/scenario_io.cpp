#include "mfg/scenario_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mfg {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& message) { throw Error(ErrorCode::SchemaError, message); }

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!keys.contains(key)) schema_error("unknown key \"" + key + "\" in " + where);
    }
}

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) schema_error("missing key \"" + key + "\" in " + where);
    return obj.at(key);
}

const json& require_object(const json& obj, const std::string& key, const std::string& where) {
    const json& v = require_key(obj, key, where);
    if (!v.is_object()) schema_error("\"" + key + "\" must be an object");
    return v;
}

double number(const json& v, const std::string& key) {
    if (!v.is_number()) schema_error("\"" + key + "\" must be a number");
    return v.get<double>();
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    return number(require_key(obj, key, where), key);
}

template <std::size_t N>
std::array<double, N> number_array(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != N) schema_error("\"" + key + "\" must be an array of " + std::to_string(N));
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = number(v[i], key);
    return out;
}

std::size_t count(const json& v, const std::string& key) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) schema_error("\"" + key + "\" must be an integer");
    const auto n = v.get<long long>();
    if (n < 0) throw Error(ErrorCode::ValidationError, "rule violated: " + key + " >= 0");
    return static_cast<std::size_t>(n);
}

ThroughputSpec parse_throughput(const json& obj) {
    const std::string where = "throughput";
    const json& kind = require_key(obj, "kind", where);
    if (!kind.is_string()) schema_error("\"kind\" must be a string");
    const auto name = kind.get<std::string>();
    if (name == "constant") {
        reject_unknown(obj, where, {"kind", "level"});
        return ConstantThroughput{require_number(obj, "level", where)};
    }
    if (name == "bump") {
        reject_unknown(obj, where, {"kind", "peak", "start", "end"});
        return BumpThroughput{require_number(obj, "peak", where), require_number(obj, "start", where),
                              require_number(obj, "end", where)};
    }
    if (name == "trapezoid_smooth") {
        reject_unknown(obj, where, {"kind", "level", "ramp"});
        return SmoothTrapezoidThroughput{require_number(obj, "level", where), require_number(obj, "ramp", where)};
    }
    schema_error("unknown throughput kind \"" + name + "\"");
}

SolverConfig parse_solver(const json& obj) {
    reject_unknown(obj, "solver", {"tol", "max_iter", "damping", "epsilon", "tie_tolerance", "split_fraction"});
    SolverConfig cfg;
    if (obj.contains("tol")) cfg.tol = number(obj["tol"], "tol");
    if (obj.contains("max_iter")) cfg.max_iter = count(obj["max_iter"], "max_iter");
    if (obj.contains("damping")) cfg.damping = number(obj["damping"], "damping");
    if (obj.contains("epsilon")) cfg.epsilon = number(obj["epsilon"], "epsilon");
    if (obj.contains("tie_tolerance")) cfg.tie_tolerance = number(obj["tie_tolerance"], "tie_tolerance");
    if (obj.contains("split_fraction")) cfg.split_fraction = number(obj["split_fraction"], "split_fraction");
    return cfg;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& err) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + err.what());
    }
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) schema_error("scenario must be a JSON object");
    const std::string where = "scenario";
    reject_unknown(doc, where,
                   {"network", "horizon", "grid_points", "throughput", "beta", "eta", "alpha", "alpha_prime",
                    "alpha_second", "rho_max", "z0", "solver"});

    ScenarioInputs in;
    const json& net = require_object(doc, "network", where);
    reject_unknown(net, "network", {"lengths", "capacities"});
    in.lengths = number_array<kLinkCount>(require_key(net, "lengths", "network"), "lengths");
    in.capacities = number_array<kLinkCount>(require_key(net, "capacities", "network"), "capacities");
    in.horizon = require_number(doc, "horizon", where);
    in.cells = count(require_key(doc, "grid_points", where), "grid_points");
    in.throughput = parse_throughput(require_object(doc, "throughput", where));
    in.beta = require_number(doc, "beta", where);
    in.eta = require_number(doc, "eta", where);
    in.alpha = require_number(doc, "alpha", where);
    in.congestion.slope = number_array<kLinkCount>(require_key(doc, "alpha_prime", where), "alpha_prime");
    in.congestion.offset = number_array<kLinkCount>(require_key(doc, "alpha_second", where), "alpha_second");
    in.rho_max = require_number(doc, "rho_max", where);
    if (doc.contains("z0")) in.z0 = number_array<kPathCount>(doc["z0"], "z0");
    if (doc.contains("solver")) {
        if (!doc["solver"].is_object()) schema_error("\"solver\" must be an object");
        in.solver = parse_solver(doc["solver"]);
    }

    try {
        return make_scenario(in);
    } catch (const Error& err) {
        if (err.code() == ErrorCode::ValidationError) throw;
        throw Error(ErrorCode::ValidationError, err.what());
    }
}

Scenario parse_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json(path)); }

ParamBox param_box_from_json(const json& doc) {
    if (!doc.is_object()) schema_error("parameter box must be a JSON object");
    reject_unknown(doc, "param_box", {"alpha_prime", "alpha_second"});
    ParamBox box;
    for (const char* key : {"alpha_prime", "alpha_second"}) {
        const json& range = require_object(doc, key, "param_box");
        reject_unknown(range, key, {"lower", "upper"});
        auto lower = number_array<kLinkCount>(require_key(range, "lower", key), "lower");
        auto upper = number_array<kLinkCount>(require_key(range, "upper", key), "upper");
        if (std::string(key) == "alpha_prime") {
            box.lower.slope = lower;
            box.upper.slope = upper;
        } else {
            box.lower.offset = lower;
            box.upper.offset = upper;
        }
    }
    box.validate();
    return box;
}

ParamBox parse_param_box(const std::filesystem::path& path) { return param_box_from_json(read_json(path)); }

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string equilibrium_csv(const EquilibriumResult& result, const Scenario& scenario) {
    std::string out = "t,rho_e1,rho_e2,rho_e3,rho_e4,rho_e5,z_p1,z_p2,z_p3,lambda,V0\n";
    const TimeGrid& grid = scenario.grid;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out += format_number(grid.node(k));
        for (double v : result.rho.rho[k]) out += ',' + format_number(v);
        for (double v : result.preferences.z[k]) out += ',' + format_number(v);
        out += ',' + format_number(scenario.lambda.rate[k]);
        out += ',' + format_number(result.field.origin_value[k]);
        out += '\n';
    }
    return out;
}

void write_equilibrium_csv(const std::filesystem::path& path, const EquilibriumResult& result,
                           const Scenario& scenario) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << equilibrium_csv(result, scenario);
}

MassTrajectory read_reference_csv(const std::filesystem::path& path, const TimeGrid& grid) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path.string() + " is empty");

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    std::array<std::size_t, kLinkCount> columns{};
    std::size_t time_column = header.size();
    for (std::size_t e = 0; e < kLinkCount; ++e) {
        const std::string name = "rho_" + std::string(link_name(kAllLinks[e]));
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw Error(ErrorCode::SchemaError, "reference is missing column " + name);
        columns[e] = static_cast<std::size_t>(it - header.begin());
    }
    if (const auto it = std::find(header.begin(), header.end(), "t"); it != header.end()) {
        time_column = static_cast<std::size_t>(it - header.begin());
    }

    MassTrajectory out(grid);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= grid.size()) throw Error(ErrorCode::SchemaError, "reference has more rows than grid nodes");
        std::vector<double> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw Error(ErrorCode::ParseError, "bad number '" + cell + "' in " + path.string());
            }
            cells.push_back(v);
        }
        if (cells.size() != header.size()) throw Error(ErrorCode::ParseError, "ragged row in " + path.string());
        if (time_column < cells.size() &&
            std::abs(cells[time_column] - grid.node(row)) > 1e-9 * std::max(1.0, grid.horizon())) {
            throw Error(ErrorCode::SchemaError, "reference times do not match the scenario grid");
        }
        for (std::size_t e = 0; e < kLinkCount; ++e) out.rho[row][e] = cells[columns[e]];
        ++row;
    }
    if (row != grid.size()) {
        throw Error(ErrorCode::SchemaError, "reference has " + std::to_string(row) + " rows, expected " +
                                                std::to_string(grid.size()));
    }
    return out;
}

json summary_json(const EquilibriumResult& result, const Scenario& scenario) {
    json ties = json::array();
    for (const TieRecord& tie : result.ties) {
        ties.push_back({{"link", link_name(tie.link)}, {"node", tie.node}, {"t", scenario.grid.node(tie.node)}});
    }
    return json{
        {"converged", result.converged},
        {"iterations", result.iterations()},
        {"residual", result.residual_history.empty() ? 0.0 : result.residual_history.back()},
        {"residual_history", result.residual_history},
        {"damping_history", result.damping_history},
        {"ties", ties},
        {"origin_ties", result.origin_ties},
        {"degenerate_simplex_nodes", result.preferences.degenerate_nodes},
        {"grid_points", scenario.grid.cells()},
        {"horizon", scenario.grid.horizon()},
        {"beta", scenario.beta},
    };
}

json bilevel_json(const BilevelResult& result, SearchMethod method) {
    auto params_json = [](const CongestionParams& p) {
        return json{{"alpha_prime", p.slope}, {"alpha_second", p.offset}};
    };
    json log = json::array();
    for (const Candidate& c : result.log) {
        json entry = params_json(c.params);
        entry["objective"] = std::isfinite(c.objective) ? json(c.objective) : json(nullptr);
        entry["converged"] = c.converged;
        log.push_back(std::move(entry));
    }
    return json{
        {"method", method == SearchMethod::grid ? "grid" : "pattern"},
        {"best", params_json(result.best)},
        {"objective", result.objective},
        {"evaluations", result.evaluations()},
        {"candidates", log},
        // The inner solver returns one deterministic equilibrium per candidate; possible
        // multiplicity is visible only through the tie report of that equilibrium.
        {"equilibrium_selection", "single deterministic equilibrium per candidate"},
        {"best_ties", result.best_equilibrium ? result.best_equilibrium->ties.size() : 0},
    };
}

}  // namespace mfg
