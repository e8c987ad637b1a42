#pragma once

#include "blowuplab/initial_data.hpp"
#include "blowuplab/solver.hpp"

#include <optional>
#include <string>

namespace blowuplab {

// thrown on malformed scenario files; carries the offending JSON location
struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& where, const std::string& what)
        : std::runtime_error("scenario error at " + where + ": " + what) {}
};

struct Scenario {
    std::string name = "scenario";

    GridKind kind = GridKind::Interval;
    std::array<std::array<double, 2>, 2> bounds{{{0.0, 1.0}, {0.0, 1.0}}};
    std::array<int, 2> n{101, 1};

    std::string f_key = "power:3";
    std::string zeta_key = "one";
    double p = 2.0;
    std::optional<double> alpha, epsilon, C0, kappa, lambda_pos;

    Regime regime = Regime::Exploratory;

    // initial data constructor
    std::string init_key = "eigen_scaled";  // | proposition_cutoff | table
    double init_amplitude = 1.0;
    std::array<std::array<double, 2>, 2> cutoff_K{{{0.4, 0.6}, {0.4, 0.6}}};
    int cutoff_order = 5;
    std::string table_path;

    SolverControls controls;
    SamplingRange check_range;
    std::string out_dir;
};

Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);  // ScenarioError on bad input

// everything assembled for one run of a scenario
struct RunContext {
    Scenario sc;
    Grid grid;
    ModelProfile profile;
    EigenPair eig;
    Field u0;
    double mass0 = 0.0;                // \int u0 phi1
    std::optional<PoincareConstant> poincare;
    AssumptionReport assumptions;
    MonitorConfig monitor_cfg;
    bool exploratory = false;
};

// Builds grid, model, eigenpair and initial data; checks the regime's
// hypotheses. Refuses (throws) on hard assumption failures unless
// exploratory is set.
RunContext prepare_run(const Scenario& sc, bool exploratory = false);

// every bound applicable to the context's regime (all of them in exploratory
// mode), computed from discrete quantities
std::vector<BoundReport> evaluate_bounds(const RunContext& ctx);

struct VerifyOutcome {
    BlowupVerdict verdict;
    bool consistent = true;      // T_obs <= T* for every applicable bound
    bool monitors_passed = true;
};

VerifyOutcome run_verify(const RunContext& ctx,
                         const std::string& trajectory_csv = "");

// n -> 2n-1 on each axis
Scenario refine_scenario(const Scenario& sc);

}  // namespace blowuplab
