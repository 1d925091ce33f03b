#include "mfg/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>

#include "mfg/scenario_io.hpp"

namespace mfg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string scenario;
    std::string output = "out";
    std::string reference;
    std::string param_box;
    std::string betas;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    std::optional<double> damping;
    std::size_t budget = 200;
    std::string method = "pattern";
    std::optional<long long> seed_unused;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << text;
}

Scenario load(const Options& opt) {
    Scenario scenario = parse_scenario(opt.scenario);
    if (opt.tol) scenario.solver.tol = *opt.tol;
    if (opt.max_iter) scenario.solver.max_iter = *opt.max_iter;
    if (opt.damping) scenario.solver.damping = *opt.damping;
    const auto& s = scenario.solver;
    if (!(s.tol > 0.0) || s.max_iter < 1 || !(s.damping > 0.0 && s.damping <= 1.0)) {
        throw Error(ErrorCode::ValidationError, "rule violated: tol > 0, max-iter >= 1, damping in (0, 1]");
    }
    fs::create_directories(opt.output);
    return scenario;
}

int solve(const Options& opt) {
    const Scenario scenario = load(opt);
    const EquilibriumResult result = find_equilibrium(scenario);
    const fs::path dir(opt.output);
    write_equilibrium_csv(dir / "equilibrium.csv", result, scenario);
    write_text(dir / "summary.json", summary_json(result, scenario).dump(2) + "\n");
    std::cout << (result.converged ? "converged" : "not converged") << " after " << result.iterations()
              << " iterations, residual " << format_number(result.residual_history.back()) << "\n";
    return result.converged ? kExitOk : kExitNotConverged;
}

std::vector<double> parse_betas(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad beta value '" + item + "'");
        }
    }
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "--betas needs at least one value");
    return out;
}

int sweep(const Options& opt) {
    const Scenario base = load(opt);
    const std::vector<double> betas = parse_betas(opt.betas);
    std::vector<Scenario> scenarios;
    for (double beta : betas) {
        if (!(beta >= 0.0)) throw Error(ErrorCode::ValidationError, "rule violated: beta >= 0");
        Scenario s = base;
        s.beta = beta;
        scenarios.push_back(std::move(s));
    }
    std::vector<std::future<EquilibriumResult>> jobs;
    for (const Scenario& s : scenarios) {
        jobs.push_back(std::async(std::launch::async, [&s] { return find_equilibrium(s); }));
    }

    const fs::path dir(opt.output);
    json index = json::array();
    bool all_converged = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const EquilibriumResult result = jobs[i].get();
        const std::string file = "equilibrium_beta_" + std::to_string(i) + ".csv";
        write_equilibrium_csv(dir / file, result, scenarios[i]);
        index.push_back({{"beta", betas[i]},
                         {"file", file},
                         {"converged", result.converged},
                         {"iterations", result.iterations()},
                         {"residual", result.residual_history.back()}});
        all_converged = all_converged && result.converged;
    }
    write_text(dir / "sweep.json", index.dump(2) + "\n");
    return all_converged ? kExitOk : kExitNotConverged;
}

int bilevel(const Options& opt) {
    if (opt.reference.empty() || opt.param_box.empty()) {
        throw Error(ErrorCode::InvalidArgument, "bilevel needs --reference and --param-box");
    }
    const Scenario scenario = load(opt);
    const MassTrajectory reference = read_reference_csv(opt.reference, scenario.grid);
    const ParamBox box = parse_param_box(opt.param_box);
    const SearchConfig cfg{opt.budget, parse_search_method(opt.method)};
    const BilevelResult result = optimize_params(box, reference, scenario, cfg);

    const fs::path dir(opt.output);
    write_text(dir / "bilevel.json", bilevel_json(result, cfg.method).dump(2) + "\n");
    write_equilibrium_csv(dir / "best_equilibrium.csv", *result.best_equilibrium,
                          with_congestion(scenario, result.best));
    std::cout << "best objective " << format_number(result.objective) << " after " << result.evaluations()
              << " evaluations\n";
    return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"Mean-field equilibrium solver for the five-link congestion game"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opt.scenario, "Scenario JSON file")->required();
        sub->add_option("--output", opt.output, "Output directory")->capture_default_str();
        sub->add_option("--tol", opt.tol, "Override solver.tol");
        sub->add_option("--max-iter", opt.max_iter, "Override solver.max_iter");
        sub->add_option("--damping", opt.damping, "Override solver.damping");
        sub->add_option("--seed-unused", opt.seed_unused, "Reserved; the solver has no stochastic parts");
    };
    CLI::App* solve_cmd = app.add_subcommand("solve", "Compute one equilibrium");
    add_common(solve_cmd);
    CLI::App* bilevel_cmd = app.add_subcommand("bilevel", "Search congestion parameters matching a reference");
    add_common(bilevel_cmd);
    bilevel_cmd->add_option("--reference", opt.reference, "Reference equilibrium CSV")->required();
    bilevel_cmd->add_option("--param-box", opt.param_box, "Parameter box JSON")->required();
    bilevel_cmd->add_option("--budget", opt.budget, "Maximum inner solves")->capture_default_str();
    bilevel_cmd->add_option("--method", opt.method, "grid or pattern")->capture_default_str();
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Solve for several beta values");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--betas", opt.betas, "Comma-separated beta values")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (solve_cmd->parsed()) return solve(opt);
        if (bilevel_cmd->parsed()) return bilevel(opt);
        return sweep(opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitError;
}

int run_command(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(args);
}

}  // namespace mfg::cli
