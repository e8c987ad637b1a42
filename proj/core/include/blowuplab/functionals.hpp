#pragma once

#include "blowuplab/grid.hpp"
#include "blowuplab/model.hpp"
#include "blowuplab/operators.hpp"

namespace blowuplab {

struct FunctionalSnapshot {
    double t = 0.0;
    double y = 0.0;        // a(t) * \int u phi1
    double a = 0.0;        // e^{lambda1 (m - Theta(t))}
    double E2 = 0.0;       // 1/2 \int |grad u|^2 - zeta \int F(u)
    double Ep = 0.0;       // 1/p \int |grad u|^p - zeta \int F(u)
    double H = 0.0;        // -Ep
    double L = 0.0;        // 1/2 ||u||_2^2
    double sup_norm = 0.0;
    double grad_p_integral = 0.0;  // \int |grad u|^p
    double zeta_t = 0.0;
    double mass_phi1 = 0.0;        // \int u phi1
    double int_F = 0.0;            // \int F(u)
};

struct MonitorResidual {
    std::string name;  // DI1 | Jensen | DI3 | DI5 | EnergyDecay | HGrowth | PoincareChain
    double t = 0.0;
    double residual = 0.0;   // LHS - RHS; >= -tol means the inequality holds
    double tolerance = 0.0;  // scheme-order tolerance used for pass/fail
    bool passed() const { return residual >= -tolerance; }
};

struct MonitorConfig {
    Regime regime = Regime::Exploratory;
    double lambda1 = 0.0;
    double E0 = 0.0;        // regime energy at t=0 (E2 for Th2, Ep for Th3)
    double A = 0.0;         // Th2 constant A
    double alpha = 0.0;
    double poincare_C = 0.0;
    double kappa = 0.0;
    double p = 2.0;
    double h2 = 0.0;        // max axis spacing squared, for tolerances
    double tol_factor = 10.0;
};

FunctionalSnapshot snapshot(const Field& u, double t,
                            const ModelProfile& profile, const EigenPair& eig,
                            double p, const Grid& grid);

// finite-difference residuals of the monitored inequalities between two
// consecutive accepted steps
std::vector<MonitorResidual> monitor_step(const FunctionalSnapshot& prev,
                                          const FunctionalSnapshot& next,
                                          const Field& u_next,
                                          const ModelProfile& profile,
                                          const EigenPair& eig,
                                          const Grid& grid,
                                          const MonitorConfig& cfg);

}  // namespace blowuplab
