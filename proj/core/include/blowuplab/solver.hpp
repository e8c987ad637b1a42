#pragma once

#include "blowuplab/bounds.hpp"
#include "blowuplab/functionals.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace blowuplab {

struct SolverControls {
    double horizon = 10.0;
    std::vector<double> ladder = {1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
    double eps_reg = 1e-8;
    double sigma_d = 0.4;   // diffusion CFL safety factor
    double sigma_r = 0.1;   // reaction step safety factor
    double dt_min = 1e-14;
    double dt_init = 0.0;   // 0 = start from the CFL limit
};

struct StepRecord {
    double t = 0.0;
    double dt = 0.0;
    bool accepted = true;
    FunctionalSnapshot snapshot;
    std::vector<MonitorResidual> residuals;
};

struct Trajectory {
    std::vector<StepRecord> records;
};

struct Crossing {
    double M = 0.0;
    double t = 0.0;
};

enum class BlowupStatus { BlewUp, GlobalUntilHorizon, Inconclusive };

std::string status_name(BlowupStatus s);

struct MonitorSummary {
    double min_residual = 0.0;
    double min_margin = 0.0;  // min of residual + tolerance; >= 0 means passed
    long steps = 0;
    bool passed = true;
};

struct BlowupVerdict {
    BlowupStatus status = BlowupStatus::Inconclusive;
    double T_obs = std::numeric_limits<double>::quiet_NaN();
    double uncertainty = 0.0;
    std::vector<Crossing> crossings;
    std::vector<BoundReport> bounds;          // attached by the run pipeline
    std::map<std::string, bool> consistency;  // regime -> (T_obs <= T*)
    std::map<std::string, MonitorSummary> monitors;
    std::string termination;  // ladder_complete | horizon | dt_collapse

    nlohmann::json to_json() const;
};

// One explicit Euler trial step with the degenerate-diffusion CFL and the
// sampled reaction Lipschitz limit. Rejected steps leave u unchanged.
struct StepResult {
    Field u_next;
    double dt_used = 0.0;
    bool accepted = false;
};

StepResult step(const Field& u, double t, double dt_try,
                const ModelProfile& profile, double p, double eps_reg,
                const Grid& grid, double sigma_d = 0.4, double sigma_r = 0.1);

struct SimulationSetup {
    ModelProfile profile;
    EigenPair eig;
    double p = 2.0;
    Field u0;
    MonitorConfig monitor_cfg;
    SolverControls controls;
    std::string trajectory_csv;  // empty = no streaming
};

struct SimulationResult {
    Trajectory trajectory;
    BlowupVerdict verdict;
};

SimulationResult simulate(const SimulationSetup& setup, const Grid& grid);

// Least-squares fit of t_M = T - c M^{-theta} with fitted theta > 0.
// Throws on fewer than 3 crossings or decreasing / all-equal times.
std::pair<double, double> extrapolate_blowup(
    const std::vector<Crossing>& crossings);

// Equality-case oracle for y' = -C1 + C2 y^q, y(0) = y0 > 0.
// Adaptive embedded Runge-Kutta in y, switching to the desingularized
// variable w = y^{1-q} near blow-up so the escape time is resolved exactly.
std::optional<double> ode_oracle(double C1, double C2, double q, double y0,
                                 double horizon);

}  // namespace blowuplab
