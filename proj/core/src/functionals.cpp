#include "blowuplab/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace blowuplab {

FunctionalSnapshot snapshot(const Field& u, double t,
                            const ModelProfile& profile, const EigenPair& eig,
                            double p, const Grid& grid) {
    if (!all_finite(u))
        throw std::runtime_error("snapshot: non-finite field values");
    FunctionalSnapshot s;
    s.t = t;
    s.sup_norm = sup_norm(u);
    s.zeta_t = profile.zeta.zeta(t);

    Field uphi(u.size());
    Field Fu(u.size());
    for (size_t k = 0; k < u.size(); ++k) {
        uphi[k] = u[k] * eig.phi1[k];
        Fu[k] = profile.f.F(u[k]);
    }
    s.mass_phi1 = integrate(uphi, grid);
    s.int_F = integrate(Fu, grid);
    s.a = std::exp(eig.lambda1 * (profile.zeta.m - profile.zeta.Theta(t)));
    s.y = s.a * s.mass_phi1;

    const double grad2 = grad_p_energy(u, 2.0, 0.0, grid);
    s.grad_p_integral = (p == 2.0) ? grad2 : grad_p_energy(u, p, 0.0, grid);
    s.E2 = 0.5 * grad2 - s.zeta_t * s.int_F;
    s.Ep = s.grad_p_integral / p - s.zeta_t * s.int_F;
    s.H = -s.Ep;
    const double n2 = lp_norm(u, grid, 2.0);
    s.L = 0.5 * n2 * n2;
    return s;
}

namespace {

double scale_of(double a, double b) {
    return std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<MonitorResidual> monitor_step(const FunctionalSnapshot& prev,
                                          const FunctionalSnapshot& next,
                                          const Field& u_next,
                                          const ModelProfile& profile,
                                          const EigenPair& eig,
                                          const Grid& grid,
                                          const MonitorConfig& cfg) {
    const double dt = next.t - prev.t;
    if (!(dt > 0.0)) throw std::invalid_argument("monitor_step: dt <= 0");
    const double base_tol = cfg.tol_factor * (dt + cfg.h2);

    std::vector<MonitorResidual> out;
    auto add = [&](const std::string& name, double lhs, double rhs) {
        MonitorResidual r;
        r.name = name;
        r.t = next.t;
        r.residual = lhs - rhs;
        r.tolerance = base_tol * scale_of(lhs, rhs);
        out.push_back(r);
    };

    const bool th1 = cfg.regime == Regime::Th1;
    const bool th2 = cfg.regime == Regime::Th2;
    const bool th3 = cfg.regime == Regime::Th3;

    if (th1) {
        // y' >= zeta(t) (-lambda1 y + f(y)), evaluated at the previous step
        const double lhs = (next.y - prev.y) / dt;
        const double rhs = profile.zeta.zeta(prev.t) *
                           (-cfg.lambda1 * prev.y + profile.f.f(prev.y));
        add("DI1", lhs, rhs);

        // convexity step: \int f(u) phi1 >= f(\int u phi1)
        Field fu(u_next.size());
        for (size_t k = 0; k < u_next.size(); ++k)
            fu[k] = profile.f.f(u_next[k]) * eig.phi1[k];
        add("Jensen", integrate(fu, grid), profile.f.f(next.mass_phi1));
    }
    if (th2) {
        const double lhs = (next.L - prev.L) / dt;
        const double rhs =
            -2.0 * cfg.E0 + cfg.A * std::pow(prev.L, 0.5 * cfg.alpha);
        add("DI3", lhs, rhs);
        add("EnergyDecay", prev.E2, next.E2);
    }
    if (th3) {
        const double lhs = (next.L - prev.L) / dt;
        const double rhs = (cfg.kappa - cfg.p) /
                           (cfg.p * std::pow(cfg.poincare_C, 0.5 * cfg.p)) *
                           std::pow(prev.L, 0.5 * cfg.p);
        add("DI5", lhs, rhs);
        add("EnergyDecay", prev.Ep, next.Ep);
        add("HGrowth", next.H / next.zeta_t, prev.H / prev.zeta_t);
        if (cfg.poincare_C > 0.0)
            add("PoincareChain",
                cfg.poincare_C *
                    std::pow(next.grad_p_integral, 2.0 / cfg.p),
                next.L);
    }
    return out;
}

}  // namespace blowuplab
