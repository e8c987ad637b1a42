#include "blowuplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace blowuplab {

std::string status_name(BlowupStatus s) {
    switch (s) {
        case BlowupStatus::BlewUp: return "blew_up";
        case BlowupStatus::GlobalUntilHorizon: return "global_until_horizon";
        default: return "inconclusive";
    }
}

nlohmann::json BlowupVerdict::to_json() const {
    nlohmann::json j;
    j["status"] = status_name(status);
    if (std::isfinite(T_obs)) {
        j["T_obs"] = T_obs;
        j["uncertainty"] = uncertainty;
    } else {
        j["T_obs"] = nullptr;
    }
    j["termination"] = termination;
    j["crossings"] = nlohmann::json::array();
    for (const auto& c : crossings)
        j["crossings"].push_back({{"M", c.M}, {"t", c.t}});
    j["bounds"] = nlohmann::json::array();
    for (const auto& b : bounds) j["bounds"].push_back(b.to_json());
    j["consistency"] = consistency;
    j["monitors"] = nlohmann::json::object();
    for (const auto& [name, m] : monitors)
        j["monitors"][name] = {{"min_residual", m.min_residual},
                               {"min_margin", m.min_margin},
                               {"steps", m.steps},
                               {"passed", m.passed}};
    return j;
}

namespace {

constexpr double kDelta0 = 1e-300;

// max slope of f between 64 sample neighbors on [-s, s]
double lipschitz_estimate(const Nonlinearity& f, double s) {
    if (s <= 0.0) s = 1e-8;
    const int n = 64;
    double lam = 0.0;
    double prev_x = -s, prev_f = f.f(-s);
    for (int i = 1; i <= n; ++i) {
        const double x = -s + 2.0 * s * i / n;
        const double fx = f.f(x);
        lam = std::max(lam, std::abs((fx - prev_f) / (x - prev_x)));
        prev_x = x;
        prev_f = fx;
    }
    return lam;
}

double cfl_limit(const Field& u, double t, const ModelProfile& profile,
                 double p, double eps_reg, const Grid& grid, double sigma_d,
                 double sigma_r) {
    const FaceGradients fg = gradient_magnitude(u, grid);
    const double g = fg.max_abs();
    const double coef =
        std::pow(g * g + eps_reg * eps_reg, 0.5 * (p - 2.0));
    const double h2 = grid.dim == 2
                          ? std::min(grid.h[0] * grid.h[0], grid.h[1] * grid.h[1])
                          : grid.h[0] * grid.h[0];
    const double dt_d =
        sigma_d * h2 / (grid.dim * ((p - 1.0) * coef + kDelta0));
    const double zt = profile.zeta.zeta(t);
    const double lam = lipschitz_estimate(profile.f, sup_norm(u));
    const double dt_r = sigma_r / (zt * lam + kDelta0);
    return std::min(dt_d, dt_r);
}

}  // namespace

StepResult step(const Field& u, double t, double dt_try,
                const ModelProfile& profile, double p, double eps_reg,
                const Grid& grid, double sigma_d, double sigma_r) {
    if (!(dt_try > 0.0)) throw std::invalid_argument("step: dt_try <= 0");
    if (!all_finite(u)) throw std::invalid_argument("step: non-finite field");
    StepResult r;
    r.dt_used =
        std::min(dt_try, cfl_limit(u, t, profile, p, eps_reg, grid, sigma_d,
                                   sigma_r));
    const Field lap = p_laplacian_apply(u, p, eps_reg, grid);
    const double zt = profile.zeta.zeta(t);
    r.u_next.resize(u.size());
    for (size_t k = 0; k < u.size(); ++k)
        r.u_next[k] = u[k] + r.dt_used * (lap[k] + zt * profile.f.f(u[k]));
    apply_dirichlet(r.u_next, grid);
    r.accepted = all_finite(r.u_next);
    if (!r.accepted) r.u_next = u;
    return r;
}

SimulationResult simulate(const SimulationSetup& setup, const Grid& grid) {
    const SolverControls& c = setup.controls;
    std::vector<double> ladder = c.ladder;
    std::sort(ladder.begin(), ladder.end());
    if (ladder.empty()) throw std::invalid_argument("simulate: empty ladder");

    SimulationResult out;
    BlowupVerdict& v = out.verdict;

    std::ofstream csv;
    std::vector<std::string> monitor_names;
    {
        // probe monitor set once for the CSV header
        switch (setup.monitor_cfg.regime) {
            case Regime::Th1: monitor_names = {"DI1", "Jensen"}; break;
            case Regime::Th2: monitor_names = {"DI3", "EnergyDecay"}; break;
            case Regime::Th3:
                monitor_names = {"DI5", "EnergyDecay", "HGrowth"};
                if (setup.monitor_cfg.poincare_C > 0.0)
                    monitor_names.push_back("PoincareChain");
                break;
            default: break;
        }
    }
    if (!setup.trajectory_csv.empty()) {
        csv.open(setup.trajectory_csv);
        if (!csv)
            throw std::runtime_error("cannot open " + setup.trajectory_csv);
        csv.precision(17);
        csv << "t,dt,sup_norm,y,a,E2,Ep,H,L";
        for (const auto& n : monitor_names) csv << ",res_" << n;
        csv << '\n';
    }
    auto emit = [&](const StepRecord& rec) {
        if (!csv) return;
        const auto& s = rec.snapshot;
        csv << s.t << ',' << rec.dt << ',' << s.sup_norm << ',' << s.y << ','
            << s.a << ',' << s.E2 << ',' << s.Ep << ',' << s.H << ',' << s.L;
        for (const auto& name : monitor_names) {
            double r = std::numeric_limits<double>::quiet_NaN();
            for (const auto& res : rec.residuals)
                if (res.name == name) r = res.residual;
            csv << ',' << r;
        }
        csv << '\n';
    };

    Field u = setup.u0;
    double t = 0.0;
    FunctionalSnapshot prev =
        snapshot(u, t, setup.profile, setup.eig, setup.p, grid);
    {
        StepRecord rec;
        rec.t = 0.0;
        rec.dt = 0.0;
        rec.snapshot = prev;
        out.trajectory.records.push_back(rec);
        emit(rec);
    }
    size_t next_rung = 0;
    while (next_rung < ladder.size() && prev.sup_norm >= ladder[next_rung]) {
        v.crossings.push_back({ladder[next_rung], 0.0});
        ++next_rung;
    }

    double dt_try = c.dt_init > 0.0 ? c.dt_init : 1e300;
    v.termination = "horizon";
    double prev_sup = prev.sup_norm;
    bool sup_growing = false;

    while (t < c.horizon) {
        const StepResult sr = step(u, t, dt_try, setup.profile, setup.p,
                                   c.eps_reg, grid, c.sigma_d, c.sigma_r);
        if (!sr.accepted) {
            dt_try = 0.5 * sr.dt_used;
            if (dt_try < c.dt_min) {
                v.termination = "dt_collapse";
                break;
            }
            continue;
        }
        if (sr.dt_used < c.dt_min || t + sr.dt_used == t) {
            v.termination = "dt_collapse";
            break;
        }
        const double t_next = t + sr.dt_used;
        FunctionalSnapshot snap =
            snapshot(sr.u_next, t_next, setup.profile, setup.eig, setup.p, grid);
        StepRecord rec;
        rec.t = t_next;
        rec.dt = sr.dt_used;
        rec.snapshot = snap;
        rec.residuals = monitor_step(prev, snap, sr.u_next, setup.profile,
                                     setup.eig, grid, setup.monitor_cfg);
        for (const auto& res : rec.residuals) {
            auto& m = v.monitors[res.name];
            if (m.steps == 0 || res.residual < m.min_residual)
                m.min_residual = res.residual;
            const double margin = res.residual + res.tolerance;
            if (m.steps == 0 || margin < m.min_margin) m.min_margin = margin;
            if (!res.passed()) m.passed = false;
            ++m.steps;
        }
        out.trajectory.records.push_back(rec);
        emit(rec);

        sup_growing = snap.sup_norm > prev_sup;
        prev_sup = snap.sup_norm;
        u = sr.u_next;
        t = t_next;
        prev = snap;
        dt_try = 2.0 * sr.dt_used;

        while (next_rung < ladder.size() && snap.sup_norm >= ladder[next_rung]) {
            v.crossings.push_back({ladder[next_rung], t});
            ++next_rung;
        }
        if (next_rung == ladder.size()) {
            v.termination = "ladder_complete";
            break;
        }
    }
    if (csv) csv.flush();

    if (v.termination == "ladder_complete") {
        v.status = BlowupStatus::BlewUp;
    } else if (v.termination == "dt_collapse" && v.crossings.size() >= 3 &&
               sup_growing) {
        // escalating sup-norm ran out of double precision before the last
        // rungs; the crossings already recorded pin the escape time
        v.status = BlowupStatus::BlewUp;
    } else if (v.termination == "horizon" && v.crossings.empty()) {
        v.status = BlowupStatus::GlobalUntilHorizon;
    } else {
        v.status = BlowupStatus::Inconclusive;
    }
    if (v.status == BlowupStatus::BlewUp) {
        // rungs below the initial sup norm are marked crossed at t = 0 and
        // carry no information about the approach to blow-up
        std::vector<Crossing> informative;
        for (const auto& cr : v.crossings)
            if (cr.t > 0.0) informative.push_back(cr);
        size_t distinct = informative.empty() ? 0 : 1;
        for (size_t i = 1; i < informative.size(); ++i)
            if (informative[i].t != informative[i - 1].t) ++distinct;
        if (distinct >= 3) {
            const auto [T, unc] = extrapolate_blowup(informative);
            v.T_obs = T;
            v.uncertainty = unc;
        } else {
            // rungs crossed within too few steps to fit the approach law
            v.T_obs = v.crossings.empty() ? t : v.crossings.back().t;
            v.uncertainty = std::max(1e-12, t - v.T_obs);
        }
    }
    return out;
}

std::pair<double, double> extrapolate_blowup(
    const std::vector<Crossing>& crossings) {
    if (crossings.size() < 3)
        throw std::invalid_argument("extrapolate_blowup: need >= 3 crossings");
    for (size_t i = 1; i < crossings.size(); ++i)
        if (crossings[i].t < crossings[i - 1].t)
            throw std::invalid_argument(
                "extrapolate_blowup: non-monotone crossing times");
    const double t_last = crossings.back().t;
    if (crossings.front().t == t_last)
        throw std::invalid_argument(
            "extrapolate_blowup: all crossing times identical");
    const double spacing = t_last - crossings[crossings.size() - 2].t;

    // LS fit t = T - c M^{-theta}: linear in (T, c) at fixed theta,
    // golden-section over theta
    auto fit = [&](double theta, double* T_out, double* c_out) {
        double s11 = 0, s1b = 0, sbb = 0, s1t = 0, sbt = 0;
        for (const auto& cr : crossings) {
            const double b = -std::pow(cr.M, -theta);
            s11 += 1.0;
            s1b += b;
            sbb += b * b;
            s1t += cr.t;
            sbt += b * cr.t;
        }
        const double det = s11 * sbb - s1b * s1b;
        if (std::abs(det) < 1e-300) return std::numeric_limits<double>::max();
        const double T = (sbb * s1t - s1b * sbt) / det;
        const double cc = (s11 * sbt - s1b * s1t) / det;
        double sse = 0.0;
        for (const auto& cr : crossings) {
            const double r = T - cc * std::pow(cr.M, -theta) - cr.t;
            sse += r * r;
        }
        if (T_out) *T_out = T;
        if (c_out) *c_out = cc;
        return sse;
    };

    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = std::log(1e-3), hi = std::log(50.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = fit(std::exp(x1), nullptr, nullptr);
    double f2 = fit(std::exp(x2), nullptr, nullptr);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = fit(std::exp(x1), nullptr, nullptr);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = fit(std::exp(x2), nullptr, nullptr);
        }
    }
    double T = 0.0, cc = 0.0;
    const double theta = std::exp(0.5 * (lo + hi));
    const double sse = fit(theta, &T, &cc);
    T = std::max(T, t_last);
    const double rms = std::sqrt(sse / crossings.size());
    return {T, std::max(rms, spacing)};
}

namespace {

// Cash-Karp embedded RK4(5) step for a scalar autonomous-in-y ODE
template <typename F>
bool rk45_step(const F& rhs, double& t, double& y, double& h, double rtol) {
    static constexpr double b21 = 1.0 / 5.0;
    static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
    static constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0,
                            b53 = -70.0 / 27.0, b54 = 35.0 / 27.0;
    static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0,
                            b63 = 575.0 / 13824.0, b64 = 44275.0 / 110592.0,
                            b65 = 253.0 / 4096.0;
    static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0,
                            c4 = 125.0 / 594.0, c6 = 512.0 / 1771.0;
    static constexpr double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0,
                            d4 = 13525.0 / 55296.0, d5 = 277.0 / 14336.0,
                            d6 = 1.0 / 4.0;
    const double k1 = rhs(y);
    const double k2 = rhs(y + h * b21 * k1);
    const double k3 = rhs(y + h * (b31 * k1 + b32 * k2));
    const double k4 = rhs(y + h * (b41 * k1 + b42 * k2 + b43 * k3));
    const double k5 = rhs(y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
    const double k6 =
        rhs(y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
    const double y5 = y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    const double y4 =
        y + h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
    const double err = std::abs(y5 - y4);
    const double scale = rtol * std::max(std::abs(y), std::abs(y5)) + 1e-300;
    if (err > scale) {
        h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.25));
        return false;
    }
    t += h;
    y = y5;
    h *= std::min(5.0, 0.9 * std::pow(scale / (err + 1e-300), 0.2));
    return true;
}

}  // namespace

std::optional<double> ode_oracle(double C1, double C2, double q, double y0,
                                 double horizon) {
    if (!(C2 > 0.0)) throw std::invalid_argument("ode_oracle: C2 <= 0");
    if (!(q > 1.0)) throw std::invalid_argument("ode_oracle: q <= 1");
    if (!(y0 > 0.0)) throw std::invalid_argument("ode_oracle: y0 <= 0");

    if (C1 > 0.0) {
        const double y_eq = std::pow(C1 / C2, 1.0 / q);
        if (y0 <= y_eq) return std::nullopt;  // below the unstable equilibrium
    }
    auto rhs_y = [C1, C2, q](double y) { return -C1 + C2 * std::pow(y, q); };
    const double y_switch =
        std::max({1e6, 100.0 * y0,
                  C1 > 0.0 ? 100.0 * std::pow(C1 / C2, 1.0 / q) : 0.0});
    double t = 0.0, y = y0;
    double h = 1e-6 / std::max(1.0, std::abs(rhs_y(y0)));
    long guard = 0;
    while (y < y_switch) {
        if (t > horizon) return std::nullopt;
        if (++guard > 100000000L)
            throw std::runtime_error("ode_oracle: step guard exceeded");
        rk45_step(rhs_y, t, y, h, 1e-12);
    }

    // w = y^{1-q} decreases to 0 at blow-up with w' -> (1-q) C2 != 0
    const double expo = q / (q - 1.0);
    auto rhs_w = [C1, C2, q, expo](double w) {
        return (1.0 - q) * (C2 - C1 * std::pow(std::max(w, 0.0), expo));
    };
    double w = std::pow(y, 1.0 - q);
    const double w_floor = 1e-13 * w;
    double hw = 0.05 * w / std::abs(rhs_w(w));
    guard = 0;
    while (w > w_floor) {
        if (++guard > 10000000L)
            throw std::runtime_error("ode_oracle: w-phase guard exceeded");
        double w_try = w;
        double t_try = t;
        if (!rk45_step(rhs_w, t_try, w_try, hw, 1e-12)) continue;
        if (w_try <= w_floor) {
            // derivative is almost constant here; land exactly on the crossing
            t = t_try + w_try / std::abs(rhs_w(std::max(w_try, 0.0)));
            w = 0.0;
            break;
        }
        w = w_try;
        t = t_try;
        hw = std::min(hw, 0.5 * w / std::abs(rhs_w(w)));
    }
    if (w > 0.0) t += w / std::abs(rhs_w(w));
    if (t > horizon) return std::nullopt;
    return t;
}

}  // namespace blowuplab
