// Scenario-driven front end: assumption checks, bound evaluation,
// simulation, verification verdicts, refinement sweeps and plot-ready CSV.

#include "blowuplab/scenario.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace blowuplab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::string resolve_out_dir(const std::string& cli_out, const Scenario& sc) {
    if (const char* env = std::getenv("BLOWUPLAB_OUT"); env && *env)
        return env;
    if (!cli_out.empty()) return cli_out;
    if (!sc.out_dir.empty()) return sc.out_dir;
    return ".";
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string status_str(CheckStatus s) {
    switch (s) {
        case CheckStatus::Holds: return "holds";
        case CheckStatus::Fails: return "fails";
        default: return "undetermined";
    }
}

int cmd_check(const std::string& path, bool exploratory) {
    const Scenario sc = load_scenario(path);
    RunContext ctx = prepare_run(sc, /*exploratory=*/true);
    bool failed = false;
    for (const auto& c : ctx.assumptions.checks) {
        std::cout << "(" << c.name << ") " << status_str(c.status);
        if (c.witness) std::cout << "  witness: " << *c.witness;
        if (!c.note.empty()) std::cout << "  [" << c.note << "]";
        std::cout << '\n';
        if (c.status == CheckStatus::Fails) failed = true;
    }
    if (failed && !exploratory) return kExitFailed;
    return kExitOk;
}

int cmd_bounds(const std::string& path, const std::string& out_cli,
               bool exploratory) {
    const Scenario sc = load_scenario(path);
    RunContext ctx = prepare_run(sc, exploratory);
    const auto bounds = evaluate_bounds(ctx);
    nlohmann::json j = nlohmann::json::array();
    bool any_inapplicable = false;
    for (const auto& b : bounds) {
        j.push_back(b.to_json());
        if (!b.applicable) any_inapplicable = true;
    }
    std::cout << j.dump(2) << '\n';
    const std::string dir = resolve_out_dir(out_cli, sc);
    ensure_dir(dir);
    std::ofstream(fs::path(dir) / "bounds.json") << j.dump(2) << '\n';
    return any_inapplicable && sc.regime != Regime::Exploratory ? kExitFailed
                                                               : kExitOk;
}

int cmd_eigen(const std::string& path, const std::string& out_cli) {
    const Scenario sc = load_scenario(path);
    const Grid grid = build_grid(sc.kind, sc.bounds, sc.n);
    const EigenPair ep = principal_eigenpair(grid, 1e-10);
    const std::string dir = resolve_out_dir(out_cli, sc);
    ensure_dir(dir);
    write_field_csv((fs::path(dir) / "phi1.csv").string(), ep.phi1, grid);
    nlohmann::json j = {{"lambda1", ep.lambda1},
                        {"n", sc.kind == GridKind::Interval
                                  ? nlohmann::json(sc.n[0])
                                  : nlohmann::json({sc.n[0], sc.n[1]})},
                        {"residual", ep.residual}};
    std::ofstream(fs::path(dir) / "eigen.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_simulate(const std::string& path, const std::string& out_cli,
                 bool exploratory) {
    const Scenario sc = load_scenario(path);
    RunContext ctx = prepare_run(sc, exploratory);
    const std::string dir = resolve_out_dir(out_cli, sc);
    ensure_dir(dir);
    const VerifyOutcome out =
        run_verify(ctx, (fs::path(dir) / "trajectory.csv").string());
    std::ofstream(fs::path(dir) / "verdict.json")
        << out.verdict.to_json().dump(2) << '\n';
    std::cout << out.verdict.to_json().dump(2) << '\n';
    return kExitOk;
}

int cmd_verify(const std::string& path, const std::string& out_cli,
               bool exploratory, int refine) {
    Scenario sc = load_scenario(path);
    const std::string dir = resolve_out_dir(out_cli, sc);
    ensure_dir(dir);
    nlohmann::json levels = nlohmann::json::array();
    bool ok = true;
    for (int level = 0; level <= refine; ++level) {
        RunContext ctx = prepare_run(sc, exploratory);
        const std::string traj =
            (fs::path(dir) /
             ("trajectory" + (refine > 0 ? "_L" + std::to_string(level) : "") +
              ".csv")).string();
        const VerifyOutcome out = run_verify(ctx, traj);
        nlohmann::json j = out.verdict.to_json();
        j["level"] = level;
        j["n"] = sc.n[0];
        levels.push_back(j);
        const bool inconclusive_ok =
            ctx.exploratory &&
            out.verdict.status != BlowupStatus::BlewUp;
        if (!inconclusive_ok && (!out.consistent || !out.monitors_passed))
            ok = false;
        if (level < refine) sc = refine_scenario(sc);
    }
    const nlohmann::json j =
        refine > 0 ? nlohmann::json{{"levels", levels}} : levels.front();
    std::ofstream(fs::path(dir) / "verdict.json") << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return ok ? kExitOk : kExitFailed;
}

struct SweepRow {
    double value = 0.0;
    double T_obs = std::numeric_limits<double>::quiet_NaN();
    double T_star = std::numeric_limits<double>::quiet_NaN();
    double margin = std::numeric_limits<double>::quiet_NaN();
    std::string status = "error";
};

int cmd_sweep(const std::string& path, const std::string& out_cli,
              const std::string& axis, const std::vector<double>& values,
              int workers, bool exploratory) {
    if (values.empty()) {
        std::cerr << "sweep: empty value list\n";
        return kExitUsage;
    }
    if (axis != "amplitude" && axis != "n" && axis != "eps_reg") {
        std::cerr << "sweep: axis must be amplitude | n | eps_reg\n";
        return kExitUsage;
    }
    const Scenario base = load_scenario(path);
    std::vector<SweepRow> rows(values.size());
    std::atomic<size_t> next{0};

    auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < values.size();
             i = next.fetch_add(1)) {
            Scenario sc = base;
            if (axis == "amplitude") sc.init_amplitude = values[i];
            else if (axis == "n") {
                sc.n[0] = static_cast<int>(values[i]);
                if (sc.kind == GridKind::Rectangle)
                    sc.n[1] = static_cast<int>(values[i]);
            } else sc.controls.eps_reg = values[i];
            SweepRow row;
            row.value = values[i];
            try {
                RunContext ctx = prepare_run(sc, /*exploratory=*/true);
                const VerifyOutcome out = run_verify(ctx, "");
                row.status = status_name(out.verdict.status);
                row.T_obs = out.verdict.T_obs;
                for (const auto& b : out.verdict.bounds)
                    if (b.applicable) {
                        row.T_star = b.T_star;
                        break;
                    }
                if (std::isfinite(row.T_obs) && std::isfinite(row.T_star))
                    row.margin = row.T_star - row.T_obs;
            } catch (const std::exception& e) {
                row.status = std::string("error: ") + e.what();
            }
            rows[i] = row;
        }
    };
    std::vector<std::thread> pool;
    const int nw = std::max(1, workers);
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    const std::string dir = resolve_out_dir(out_cli, base);
    ensure_dir(dir);
    std::ofstream csv(fs::path(dir) / "sweep.csv");
    csv.precision(17);
    auto emit = [&](std::ostream& os) {
        os << axis << ",T_obs,T_star,margin,status\n";
        for (const auto& r : rows)
            os << r.value << ',' << r.T_obs << ',' << r.T_star << ','
               << r.margin << ',' << r.status << '\n';
    };
    emit(csv);
    emit(std::cout);
    (void)exploratory;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blow-up laboratory for the p-Laplacian heat equation"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, axis, values_csv;
    bool exploratory = false;
    int refine = 0;
    int workers = static_cast<int>(std::thread::hardware_concurrency());

    auto add_common = [&](CLI::App* sub, bool with_out = true) {
        sub->add_option("--scenario", scenario_path, "scenario JSON file")
            ->required();
        if (with_out) sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--exploratory", exploratory,
                      "run even when hypotheses fail; bounds marked "
                      "non-applicable");
    };

    auto* check = app.add_subcommand("check", "verify regime hypotheses");
    add_common(check, false);
    auto* bounds = app.add_subcommand("bounds", "evaluate blow-up time bounds");
    add_common(bounds);
    auto* eigen = app.add_subcommand("eigen", "principal Dirichlet eigenpair");
    add_common(eigen);
    auto* simulate = app.add_subcommand("simulate", "integrate the PDE");
    add_common(simulate);
    auto* verify =
        app.add_subcommand("verify", "simulate and check bound consistency");
    add_common(verify);
    verify->add_option("--refine", refine, "extra grid refinement levels");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep");
    add_common(sweep);
    sweep->add_option("--axis", axis, "amplitude | n | eps_reg")->required();
    sweep->add_option("--values", values_csv, "comma-separated values")
        ->required();
    sweep->add_option("--workers", workers, "parallel workers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(scenario_path, exploratory);
        if (bounds->parsed())
            return cmd_bounds(scenario_path, out_dir, exploratory);
        if (eigen->parsed()) return cmd_eigen(scenario_path, out_dir);
        if (simulate->parsed())
            return cmd_simulate(scenario_path, out_dir, exploratory);
        if (verify->parsed())
            return cmd_verify(scenario_path, out_dir, exploratory, refine);
        if (sweep->parsed()) {
            std::vector<double> values;
            std::stringstream ss(values_csv);
            std::string cell;
            while (std::getline(ss, cell, ','))
                if (!cell.empty()) values.push_back(std::stod(cell));
            return cmd_sweep(scenario_path, out_dir, axis, values, workers,
                             exploratory);
        }
    } catch (const ScenarioError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitUsage;
}
